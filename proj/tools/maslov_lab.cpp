#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "maslov/acceptance.hpp"
#include "maslov/conic.hpp"
#include "maslov/harness.hpp"
#include "maslov/matrix_io.hpp"
#include "maslov/rng.hpp"
#include "maslov/spinor.hpp"
#include "maslov/stratification.hpp"
#include "maslov/symplectic.hpp"

namespace {

using maslov::Error;
using maslov::InputError;
using maslov::RunConfig;
using nlohmann::json;

struct CliState {
  RunConfig cfg;
  std::vector<double> eps_schedule;
  maslov::GrowthFamily family = maslov::GrowthFamily::sigma1;
  bool oracle_requested = false;
  bool tol_given = false;
  bool n_given = false;
};

std::vector<double> parse_schedule(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      const double value = std::stod(item, &used);
      if (used != item.size() || !(value > 0.0)) {
        throw std::invalid_argument(item);
      }
      out.push_back(value);
    } catch (const std::exception&) {
      throw InputError("--eps-schedule: bad entry '" + item + "'");
    }
  }
  if (out.size() < 2) {
    throw InputError("--eps-schedule: need at least two comma-separated values");
  }
  return out;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(cfg.output_path);
  if (!out) throw InputError(cfg.output_path + ": cannot open for writing");
  out << text << '\n';
}

json base_doc(const CliState& state) {
  json doc;
  doc["schema_version"] = 1;
  doc["command"] = command_name(state.cfg.command);
  doc["seed"] = state.cfg.seed;
  return doc;
}

// Key/value CSV for the scalar-result commands; arrays inline as
// semicolon-separated lists.
std::string doc_to_csv(const json& doc) {
  std::ostringstream out;
  out.precision(17);
  out << "key,value\n";
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    out << it.key() << ',';
    if (it.value().is_array()) {
      bool first = true;
      for (const auto& cell : it.value()) {
        if (!first) out << ';';
        first = false;
        out << cell.dump();
      }
    } else if (it.value().is_string()) {
      out << it.value().get<std::string>();
    } else {
      out << it.value().dump();
    }
    out << '\n';
  }
  std::string text = out.str();
  text.pop_back();
  return text;
}

void emit_doc(const CliState& state, const json& doc) {
  if (state.cfg.output_format == maslov::OutputFormat::json) {
    emit(state.cfg, doc.dump(2));
  } else {
    emit(state.cfg, doc_to_csv(doc));
  }
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

maslov::SymmetricForm form_from_input(const CliState& state) {
  const Eigen::MatrixXd m = maslov::read_matrix_file(state.cfg.input_path);
  if (m.rows() != m.cols()) {
    throw InputError(state.cfg.input_path + ": form must be square, got " +
                     std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw InputError(state.cfg.input_path + ": matrix is not symmetric");
  }
  return maslov::SymmetricForm(m);
}

maslov::LagrangianFrame frame_from_input(const CliState& state) {
  const Eigen::MatrixXd m = maslov::read_matrix_file(state.cfg.input_path);
  if (m.rows() % 2 != 0 || m.rows() != 2 * m.cols()) {
    throw InputError(state.cfg.input_path +
                     ": frame must be 2n-by-n, got " +
                     std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
  return maslov::LagrangianFrame(m, state.cfg.tol);
}

maslov::EstimatorConfig estimator_from(const CliState& state) {
  maslov::EstimatorConfig est;
  est.seed = state.cfg.seed;
  const auto& overrides = state.cfg.estimator_overrides;
  if (const auto it = overrides.find("samples"); it != overrides.end()) {
    if (it->second < 1) throw InputError("--samples must be positive");
    est.samples_n3 = static_cast<long>(it->second);
    est.samples_n4 = static_cast<long>(it->second);
  }
  if (const auto it = overrides.find("groups"); it != overrides.end()) {
    if (it->second < 2) throw InputError("--groups must be at least 2");
    est.groups = static_cast<int>(it->second);
  }
  return est;
}

int run_stratify(const CliState& state) {
  if (state.cfg.input_path.empty()) {
    throw InputError("stratify: --input frame file is required");
  }
  const maslov::LagrangianFrame frame = frame_from_input(state);
  const int n = frame.n();
  const maslov::SymplecticSpace space(n);
  if (!maslov::is_lagrangian(frame, space)) {
    throw InputError(state.cfg.input_path + ": frame is not lagrangian");
  }
  const maslov::StratumLabel label =
      maslov::stratum_of(frame, maslov::l0_frame(space), state.cfg.tol);
  json doc = base_doc(state);
  doc["n"] = n;
  doc["k"] = label.k;
  doc["codim"] = label.codim;
  emit_doc(state, doc);
  return 0;
}

int run_charts(const CliState& state) {
  if (state.cfg.input_path.empty()) {
    throw InputError("charts: --input frame file is required");
  }
  const maslov::LagrangianFrame frame = frame_from_input(state);
  const int n = frame.n();
  const maslov::SymplecticSpace space(n);
  if (!maslov::is_lagrangian(frame, space)) {
    throw InputError(state.cfg.input_path + ": frame is not lagrangian");
  }
  json doc = base_doc(state);
  doc["n"] = n;
  const auto describe = [&](const maslov::Chart& chart) {
    json entry;
    try {
      const maslov::SymmetricForm a = maslov::chart_coords(frame, chart);
      entry["transversal"] = true;
      entry["coords"] = matrix_json(a.mat());
    } catch (const maslov::NotTransversal&) {
      entry["transversal"] = false;
      entry["coords"] = nullptr;
    }
    return entry;
  };
  doc["over_q"] = describe(maslov::chart_over_q(space));
  doc["over_l0"] = describe(maslov::chart_over_l0(space));
  emit_doc(state, doc);
  return 0;
}

int run_maslov_index(const CliState& state) {
  if (state.cfg.input_path.empty()) {
    throw InputError("maslov-index: --input path file is required");
  }
  const maslov::PathFileData data =
      maslov::read_path_file(state.cfg.input_path);
  const maslov::SymplecticSpace space(data.n);
  std::vector<maslov::LagrangianFrame> frames;
  frames.reserve(data.frames.size());
  for (const Eigen::MatrixXd& f : data.frames) {
    frames.emplace_back(f, state.cfg.tol);
  }
  const maslov::GrassmannPath path(data.times, std::move(frames), data.closed);
  maslov::MaslovOptions opts;
  opts.seed = state.cfg.seed;
  const maslov::MaslovIndexResult result =
      maslov::maslov_index(path, maslov::l0_frame(space), opts);

  json doc = base_doc(state);
  doc["n"] = data.n;
  doc["closed"] = data.closed;
  doc["index"] = result.index;
  doc["crossings"] = json::array();
  for (const maslov::CrossingRecord& c : result.crossings) {
    doc["crossings"].push_back(
        {{"t", c.t}, {"k", c.k}, {"signature_jump", c.signature_jump}});
  }
  bool pass = true;
  if (data.closed) {
    const int winding = maslov::winding_oracle(path);
    doc["winding_oracle"] = winding;
    pass = winding == result.index;
    doc["oracle_agrees"] = pass;
  }
  emit_doc(state, doc);
  return pass ? 0 : 1;
}

int run_phase_check(const CliState& state) {
  json doc = base_doc(state);
  maslov::SymmetricForm a = maslov::SymmetricForm::zero(1);
  Eigen::VectorXd v(1);
  if (!state.cfg.input_path.empty()) {
    std::ifstream in(state.cfg.input_path);
    if (!in) throw InputError(state.cfg.input_path + ": cannot open file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const maslov::SPoint loaded = maslov::s_point_from_json(buffer.str());
    a = loaded.a();
    v = loaded.v();
  } else {
    const int n = state.cfg.n;
    a = maslov::random_symmetric_with_nullity(n, 1, state.cfg.seed);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
    int kernel_index = 0;
    es.eigenvalues().cwiseAbs().minCoeff(&kernel_index);
    v = es.eigenvectors().col(kernel_index);
  }
  const int n = a.n();
  doc["n"] = n;

  const bool critical = maslov::critical_set_test(a, v, state.cfg.tol);
  const maslov::NondegeneracyResult nondeg =
      maslov::nondegeneracy_check(a, v);
  doc["critical"] = critical;
  doc["nondegenerate"] = nondeg.pass;
  doc["sigma_min"] = nondeg.sigma_min;
  doc["sigma_min_bound"] = nondeg.bound;
  bool pass = critical && nondeg.pass;
  if (pass) {
    const maslov::SPoint point = maslov::s_point(a, v, state.cfg.tol);
    const maslov::SPoint mirrored = maslov::s_point(a, -v, state.cfg.tol);
    const bool two_to_one =
        (point.v() - mirrored.v()).cwiseAbs().maxCoeff() == 0.0 &&
        (point.beta().mat() - mirrored.beta().mat()).cwiseAbs().maxCoeff() ==
            0.0;
    const maslov::TangencyReport tangency =
        maslov::lagrangian_tangency_check(point);
    doc["two_to_one_exact"] = two_to_one;
    doc["tangency_max_omega"] = tangency.max_omega;
    doc["tangency_curve_count"] = tangency.curve_count;
    doc["tangent_rank"] = tangency.tangent_rank;
    doc["beta"] = matrix_json(point.beta().mat());
    pass = two_to_one && tangency.max_omega <= 1e-6 &&
           tangency.tangent_rank == n * (n + 1) / 2;
  }
  doc["pass"] = pass;
  emit_doc(state, doc);
  return pass ? 0 : 1;
}

int run_fresnel(const CliState& state) {
  maslov::SymmetricForm a = maslov::SymmetricForm::identity(state.cfg.n);
  if (!state.cfg.input_path.empty()) a = form_from_input(state);
  const maslov::FresnelResult closed = maslov::fresnel_gaussian(a);

  json doc = base_doc(state);
  doc["n"] = a.n();
  doc["value_re"] = closed.value.real();
  doc["value_im"] = closed.value.imag();
  doc["abs_det"] = closed.abs_det;
  doc["signature"] = closed.signature;

  bool pass = true;
  if (state.oracle_requested || !state.eps_schedule.empty()) {
    if (a.n() > 2) {
      throw InputError("fresnel: the quadrature oracle supports n <= 2");
    }
    const maslov::OracleResult oracle =
        state.eps_schedule.empty()
            ? maslov::fresnel_quadrature_oracle(a)
            : maslov::fresnel_quadrature_oracle(a, state.eps_schedule);
    const double rel =
        std::abs(closed.value - oracle.value) / std::abs(closed.value);
    doc["oracle_value"] = {oracle.value.real(), oracle.value.imag()};
    doc["oracle_error"] = oracle.error;
    doc["relative_difference"] = rel;
    const double gate = state.tol_given ? state.cfg.tol : 1e-4;
    pass = rel <= gate;
    doc["pass"] = pass;
  }
  emit_doc(state, doc);
  return pass ? 0 : 1;
}

int run_phi_sample(const CliState& state) {
  maslov::SymmetricForm a = maslov::SymmetricForm::zero(1);
  if (!state.cfg.input_path.empty()) {
    a = form_from_input(state);
  } else {
    a = maslov::random_symmetric_with_nullity(state.cfg.n, 0, state.cfg.seed);
  }
  const std::complex<double> value = maslov::evaluate_phi(a, {1.0, 0.0});

  json doc = base_doc(state);
  doc["n"] = a.n();
  doc["a"] = matrix_json(a.mat());
  doc["phi_re"] = value.real();
  doc["phi_im"] = value.imag();
  bool pass = true;
  if (a.n() <= 2) {
    const std::complex<double> oracle = maslov::oscillatory_phi_oracle(a, 4.0);
    const double rel = std::abs(oracle - value) / std::abs(value);
    const double gate = state.tol_given ? state.cfg.tol : 1e-3;
    doc["oracle_re"] = oracle.real();
    doc["oracle_im"] = oracle.imag();
    doc["relative_difference"] = rel;
    pass = rel <= gate;
    doc["pass"] = pass;
  }
  emit_doc(state, doc);
  return pass ? 0 : 1;
}

json estimate_json(int n, double r_in, double r_out,
                   const maslov::IntegralEstimate& e) {
  json row;
  row["n"] = n;
  row["r_in"] = r_in;
  row["r_out"] = r_out;
  row["value"] = e.value;
  row["std_error"] = e.std_error;
  row["method"] = maslov::method_name(e.method);
  row["seed"] = e.seed;
  row["samples"] = e.samples;
  return row;
}

std::string estimate_csv_row(const json& row) {
  std::ostringstream out;
  out.precision(17);
  out << row["n"].get<int>() << ',' << row["r_in"].get<double>() << ','
      << row["r_out"].get<double>() << ',' << row["value"].get<double>()
      << ',' << row["std_error"].get<double>() << ','
      << row["method"].get<std::string>() << ','
      << row["seed"].get<std::uint64_t>() << ','
      << row["samples"].get<long>();
  return out.str();
}

int run_integrability(const CliState& state) {
  const int n = state.cfg.n;
  const maslov::EstimatorConfig est = estimator_from(state);

  const maslov::IntegralEstimate inner =
      maslov::annulus_integral(n, 0.25, 0.5, est);
  const maslov::IntegralEstimate outer =
      maslov::annulus_integral(n, 0.5, 1.0, est);
  const maslov::IntegralEstimate ball = maslov::ball_integral(n, est);
  const maslov::ScalingRatioResult ratio =
      maslov::scaling_ratio_test(n, est);

  json rows = json::array();
  rows.push_back(estimate_json(n, 0.25, 0.5, inner));
  rows.push_back(estimate_json(n, 0.5, 1.0, outer));
  rows.push_back(estimate_json(n, 0.0, 1.0, ball));

  json summary;
  summary["measured_ratio"] = ratio.measured;
  summary["predicted_ratio"] = ratio.predicted;
  summary["ratio_std_error"] = ratio.std_error;
  summary["ratio_pass"] = ratio.pass;
  bool pass = ratio.pass;
  if (n == 1) {
    const double exact_annulus = 4.0 - 2.0 * std::sqrt(2.0);
    const bool annulus_pass =
        std::abs(outer.value - exact_annulus) <= 1e-12 * exact_annulus;
    const bool ball_pass = std::abs(ball.value - 4.0) <= 4e-12;
    summary["annulus_exact_pass"] = annulus_pass;
    summary["ball_exact_pass"] = ball_pass;
    pass = pass && annulus_pass && ball_pass;
  }
  summary["pass"] = pass;

  if (state.cfg.output_format == maslov::OutputFormat::json) {
    json doc = base_doc(state);
    doc["n"] = n;
    doc["rows"] = rows;
    doc["summary"] = summary;
    emit(state.cfg, doc.dump(2));
  } else {
    std::ostringstream out;
    out << "n,r_in,r_out,value,std_error,method,seed,samples\n";
    for (const json& row : rows) out << estimate_csv_row(row) << '\n';
    out << "# summary: " << summary.dump();
    emit(state.cfg, out.str());
  }
  return pass ? 0 : 1;
}

int run_growth(const CliState& state) {
  const maslov::GrowthFit fit =
      maslov::growth_exponent_fit(state.cfg.n, state.family);
  double target = -0.5;
  double gate = 0.02;
  if (state.family == maslov::GrowthFamily::sigma2) {
    target = -1.0;
    gate = 0.04;
  }
  bool pass = false;
  if (state.family == maslov::GrowthFamily::offset) {
    pass = fit.r_squared < 0.999;
  } else {
    pass = std::abs(fit.slope - target) <= gate && fit.r_squared >= 0.999;
  }

  const char* family_name = "sigma1";
  if (state.family == maslov::GrowthFamily::sigma2) family_name = "sigma2";
  if (state.family == maslov::GrowthFamily::offset) family_name = "offset";

  json summary;
  summary["family"] = family_name;
  summary["slope"] = fit.slope;
  summary["intercept"] = fit.intercept;
  summary["r_squared"] = fit.r_squared;
  summary["window_lo"] = fit.window.first;
  summary["window_hi"] = fit.window.second;
  summary["pass"] = pass;

  if (state.cfg.output_format == maslov::OutputFormat::json) {
    json doc = base_doc(state);
    doc["n"] = state.cfg.n;
    json rows = json::array();
    for (std::size_t i = 0; i < fit.t.size(); ++i) {
      rows.push_back({{"t", fit.t[i]},
                      {"phi_magnitude", fit.magnitude[i]},
                      {"distance", fit.t[i]}});
    }
    doc["rows"] = rows;
    doc["summary"] = summary;
    emit(state.cfg, doc.dump(2));
  } else {
    std::ostringstream out;
    out.precision(17);
    out << "t,phi_magnitude,distance\n";
    for (std::size_t i = 0; i < fit.t.size(); ++i) {
      out << fit.t[i] << ',' << fit.magnitude[i] << ',' << fit.t[i] << '\n';
    }
    out << "# summary: " << summary.dump();
    emit(state.cfg, out.str());
  }
  return pass ? 0 : 1;
}

int run_report(const CliState& state) {
  maslov::AcceptanceConfig acfg;
  acfg.seed = state.cfg.seed;
  acfg.n_min = 1;
  acfg.n_max = state.n_given ? state.cfg.n : 64;
  maslov::EstimatorConfig est = estimator_from(state);
  est.seed = acfg.seed;
  acfg.estimator = est;

  const std::vector<maslov::CriterionResult> results =
      maslov::run_acceptance(acfg);
  bool all_pass = !results.empty();
  json criteria = json::object();
  for (const maslov::CriterionResult& r : results) {
    criteria[std::to_string(r.id)] = {
        {"name", r.name},         {"pass", r.pass},
        {"measured", r.measured}, {"expected", r.expected},
        {"tolerance", r.tolerance}, {"runtime_seconds", r.runtime_seconds},
        {"detail", r.detail}};
    all_pass = all_pass && r.pass;
  }

  if (state.cfg.output_format == maslov::OutputFormat::json) {
    json doc = base_doc(state);
    doc["n_max"] = acfg.n_max;
    doc["criteria"] = criteria;
    doc["all_pass"] = all_pass;
    emit(state.cfg, doc.dump(2));
  } else {
    std::ostringstream out;
    out << "id,name,pass,measured,expected,tolerance,runtime_seconds\n";
    out.precision(12);
    for (const maslov::CriterionResult& r : results) {
      out << r.id << ',' << r.name << ',' << (r.pass ? 1 : 0) << ','
          << r.measured << ',' << r.expected << ',' << r.tolerance << ','
          << r.runtime_seconds << '\n';
    }
    out << "# all_pass: " << (all_pass ? "true" : "false");
    emit(state.cfg, out.str());
  }
  return all_pass ? 0 : 1;
}

int dispatch(const CliState& state) {
  switch (state.cfg.command) {
    case maslov::Command::stratify:
      return run_stratify(state);
    case maslov::Command::charts:
      return run_charts(state);
    case maslov::Command::maslov_index:
      return run_maslov_index(state);
    case maslov::Command::phase_check:
      return run_phase_check(state);
    case maslov::Command::fresnel:
      return run_fresnel(state);
    case maslov::Command::phi_sample:
      return run_phi_sample(state);
    case maslov::Command::integrability:
      return run_integrability(state);
    case maslov::Command::growth:
      return run_growth(state);
    case maslov::Command::report:
      return run_report(state);
  }
  throw InputError("unknown command");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "maslov-lab: numerical experiments on the lagrangian grassmannian, its "
      "singular cycle, and the associated oscillatory distributions"};
  app.require_subcommand(1);

  CliState state;
  std::string format_text = "json";
  std::string family_text = "sigma1";
  std::string schedule_text;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", state.cfg.n, "Dimension n of the lagrangians");
    sub->add_option("--seed", state.cfg.seed, "Seed for all derived RNG streams");
    sub->add_option("--tol", state.cfg.tol, "Numerical tolerance");
    sub->add_option("--input", state.cfg.input_path, "Input file path");
    sub->add_option("--format", format_text, "Output format: json or csv");
    sub->add_option("--out", state.cfg.output_path,
                    "Output file (default: stdout)");
    sub->add_option("--samples", "Monte Carlo samples per shell")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string& v) {
          state.cfg.estimator_overrides["samples"] = std::stod(v);
        });
    sub->add_option("--groups", "Median-of-means group count")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string& v) {
          state.cfg.estimator_overrides["groups"] = std::stod(v);
        });
    sub->add_option("--eps-schedule", schedule_text,
                    "Comma-separated damping schedule for oracles");
  };

  const std::vector<std::pair<maslov::Command, std::string>> commands = {
      {maslov::Command::stratify, "Stratum of a lagrangian frame"},
      {maslov::Command::charts, "Chart coordinates of a lagrangian frame"},
      {maslov::Command::maslov_index, "Index of a sampled path"},
      {maslov::Command::phase_check, "Phase-function checks at a conic point"},
      {maslov::Command::fresnel, "Closed-form Fresnel value, with oracle"},
      {maslov::Command::phi_sample, "Evaluation distribution vs oscillatory oracle"},
      {maslov::Command::integrability, "Shell integrals and the scaling law"},
      {maslov::Command::growth, "Growth exponent fit near the cycle"},
      {maslov::Command::report, "Full acceptance suite"},
  };
  for (const auto& [command, description] : commands) {
    CLI::App* sub = app.add_subcommand(command_name(command), description);
    add_common(sub);
    if (command == maslov::Command::fresnel) {
      sub->add_flag("--oracle", state.oracle_requested,
                    "Also run the damped-quadrature oracle");
    }
    if (command == maslov::Command::growth) {
      sub->add_option("--family", family_text,
                      "Path family: sigma1, sigma2, or offset");
    }
    sub->callback([&state, command]() { state.cfg.command = command; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    state.tol_given = sub->count("--tol") > 0;
    state.n_given = sub->count("--n") > 0;
    state.cfg.output_format = maslov::format_from_name(format_text);
    if (family_text == "sigma1") {
      state.family = maslov::GrowthFamily::sigma1;
    } else if (family_text == "sigma2") {
      state.family = maslov::GrowthFamily::sigma2;
    } else if (family_text == "offset") {
      state.family = maslov::GrowthFamily::offset;
    } else {
      throw InputError("--family must be sigma1, sigma2, or offset");
    }
    if (!schedule_text.empty()) {
      state.eps_schedule = parse_schedule(schedule_text);
      for (std::size_t i = 0; i < state.eps_schedule.size(); ++i) {
        state.cfg.estimator_overrides["eps" + std::to_string(i)] =
            state.eps_schedule[i];
      }
    }
    if (state.cfg.n < 1) throw InputError("--n must be positive");
    return dispatch(state);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
