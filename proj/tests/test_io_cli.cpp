#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "maslov/conic.hpp"
#include "maslov/errors.hpp"
#include "maslov/matrix_io.hpp"
#include "maslov/stratification.hpp"

namespace m = maslov;
using nlohmann::json;

namespace {

const std::string kFixtures = MASLOV_FIXTURE_DIR;

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd =
      std::string(MASLOV_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer;
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.out.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

json parse_cli_json(const std::string& args, int expected_exit) {
  const CliRun run = run_cli(args);
  CHECK(run.exit_code == expected_exit);
  return json::parse(run.out);
}

}  // namespace

TEST_CASE("matrix files round trip at full precision") {
  Eigen::MatrixXd original(2, 3);
  original << 1.0, -0.125, 3.0e-17, 2.0 / 3.0, -4.5e120, 0.0;
  std::stringstream stream;
  m::write_matrix_text(stream, original);
  const Eigen::MatrixXd back = m::read_matrix_text(stream, "roundtrip");
  CHECK((back - original).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix files support comments and report error positions") {
  std::stringstream good("# header\n1 2\n\n3 4\n");
  const Eigen::MatrixXd parsed = m::read_matrix_text(good, "good");
  CHECK(parsed.rows() == 2);
  CHECK(parsed(1, 1) == 4.0);

  const auto message_of = [](std::stringstream& in, const char* name) {
    try {
      m::read_matrix_text(in, name);
    } catch (const m::InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  std::stringstream ragged("1 2\n3\n");
  CHECK(message_of(ragged, "ragged").find("ragged:2:1") != std::string::npos);
  std::stringstream garbled("1 banana\n");
  CHECK(message_of(garbled, "garbled").find("garbled:1:3") !=
        std::string::npos);

  std::stringstream empty("# nothing here\n");
  CHECK_THROWS_AS(m::read_matrix_text(empty, "empty"), m::InputError);
}

TEST_CASE("path files round trip with header and closure flag") {
  m::PathFileData data;
  data.n = 1;
  data.closed = true;
  data.times = {0.0, 0.5, 1.0};
  Eigen::MatrixXd f1(2, 1), f2(2, 1);
  f1 << 1.0, 0.0;
  f2 << 0.6, 0.8;
  data.frames = {f1, f2, f1};
  std::stringstream stream;
  m::write_path_text(stream, data);
  const m::PathFileData back = m::read_path_text(stream, "roundtrip");
  CHECK(back.n == 1);
  CHECK(back.closed);
  REQUIRE(back.times.size() == 3);
  CHECK(back.times[1] == 0.5);
  CHECK((back.frames[1] - f2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("path headers are validated") {
  std::stringstream bad_n("n 0 closed 1\n");
  CHECK_THROWS_AS(m::read_path_text(bad_n, "h"), m::InputError);
  std::stringstream bad_flag("n 1 closed 2\n0 1 0\n1 0 1\n");
  CHECK_THROWS_AS(m::read_path_text(bad_flag, "h"), m::InputError);
  std::stringstream short_row("n 1 closed 0\n0 1\n1 0 1\n");
  CHECK_THROWS_AS(m::read_path_text(short_row, "h"), m::InputError);
  std::stringstream single("n 1 closed 0\n0 1 0\n");
  CHECK_THROWS_AS(m::read_path_text(single, "h"), m::InputError);
}

TEST_CASE("cone points round trip through json") {
  const m::SymmetricForm a = m::random_symmetric_with_nullity(2, 1, 5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
  int kernel_index = 0;
  es.eigenvalues().cwiseAbs().minCoeff(&kernel_index);
  const m::SPoint point = m::s_point(a, es.eigenvectors().col(kernel_index));
  const m::SPoint back = m::s_point_from_json(m::s_point_to_json(point));
  CHECK((back.a().mat() - point.a().mat()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.v() - point.v()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.beta().mat() - point.beta().mat()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(m::s_point_from_json("{\"n\": 2}"), m::InputError);
  CHECK_THROWS_AS(m::s_point_from_json("not json"), m::InputError);
}

TEST_CASE("run configurations round trip through serialization") {
  m::RunConfig cfg;
  cfg.command = m::Command::integrability;
  cfg.n = 3;
  cfg.seed = 99;
  cfg.tol = 1e-7;
  cfg.input_path = "some/file.txt";
  cfg.output_format = m::OutputFormat::csv;
  cfg.output_path = "out.csv";
  cfg.estimator_overrides["samples"] = 250000.0;
  cfg.estimator_overrides["groups"] = 16.0;
  const m::RunConfig back = m::run_config_from_json(m::run_config_to_json(cfg));
  CHECK(back.command == cfg.command);
  CHECK(back.n == cfg.n);
  CHECK(back.seed == cfg.seed);
  CHECK(back.tol == cfg.tol);
  CHECK(back.input_path == cfg.input_path);
  CHECK(back.output_format == cfg.output_format);
  CHECK(back.output_path == cfg.output_path);
  CHECK(back.estimator_overrides == cfg.estimator_overrides);
}

TEST_CASE("command and format names round trip") {
  using m::Command;
  for (Command c : {Command::stratify, Command::charts, Command::maslov_index,
                    Command::phase_check, Command::fresnel,
                    Command::phi_sample, Command::integrability,
                    Command::growth, Command::report}) {
    CHECK(m::command_from_name(m::command_name(c)) == c);
  }
  CHECK(m::command_name(Command::maslov_index) == "maslov-index");
  CHECK(m::command_name(Command::phase_check) == "phase-check");
  CHECK_THROWS_AS(m::command_from_name("bogus"), m::InputError);
  CHECK(m::format_from_name("json") == m::OutputFormat::json);
  CHECK(m::format_from_name("csv") == m::OutputFormat::csv);
  CHECK_THROWS_AS(m::format_from_name("xml"), m::InputError);
}

TEST_CASE("cli: quadratic integral of the unit form with its oracle") {
  const json doc = parse_cli_json(
      "fresnel --input " + kFixtures + "/a_unit_1x1.txt --oracle", 0);
  const double root_pi = std::sqrt(3.14159265358979323846);
  CHECK(doc["value_re"].get<double>() ==
        doctest::Approx(root_pi).epsilon(1e-12));
  CHECK(doc["value_im"].get<double>() ==
        doctest::Approx(-root_pi).epsilon(1e-12));
  CHECK(doc["abs_det"].get<double>() == 1.0);
  CHECK(doc["signature"].get<int>() == 1);
  CHECK(doc.contains("oracle_value"));
  CHECK(doc.contains("oracle_error"));
  CHECK(doc["oracle_value"].size() == 2);
  CHECK(doc["relative_difference"].get<double>() < 1e-4);
  CHECK(doc["pass"].get<bool>());
  CHECK(doc["schema_version"].get<int>() == 1);
}

TEST_CASE("cli: the vertical fixture lies in the deepest stratum") {
  const json doc =
      parse_cli_json("stratify --input " + kFixtures + "/frame_l0_n2.txt", 0);
  CHECK(doc["n"].get<int>() == 2);
  CHECK(doc["k"].get<int>() == 2);
  CHECK(doc["codim"].get<int>() == 3);
}

TEST_CASE("cli: non-lagrangian frames are an input error") {
  CHECK(run_cli("stratify --input " + kFixtures + "/frame_bad_n2.txt")
            .exit_code == 2);
  CHECK(run_cli("stratify --input " + kFixtures + "/does_not_exist.txt")
            .exit_code == 2);
  CHECK(run_cli("stratify").exit_code == 2);
  CHECK(run_cli("fresnel --bogus-flag").exit_code == 2);
  CHECK(run_cli("growth --family nope --n 1").exit_code == 2);
}

TEST_CASE("cli: chart coordinates of a graph fixture") {
  const json doc = parse_cli_json(
      "charts --input " + kFixtures + "/frame_graph_n2.txt", 0);
  CHECK(doc["over_q"]["transversal"].get<bool>());
  const json coords = doc["over_q"]["coords"];
  REQUIRE(coords.size() == 4);
  CHECK(coords[0].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(coords[3].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(doc["over_l0"]["transversal"].get<bool>());
}

TEST_CASE("cli: index of the rotating-line fixture agrees with its oracle") {
  const json doc = parse_cli_json(
      "maslov-index --input " + kFixtures + "/path_calibration_n1.txt", 0);
  CHECK(doc["index"].get<int>() == 1);
  CHECK(doc["winding_oracle"].get<int>() == 1);
  CHECK(doc["oracle_agrees"].get<bool>());
  REQUIRE(doc["crossings"].size() == 1);
  CHECK(doc["crossings"][0]["k"].get<int>() == 1);
  CHECK(doc["crossings"][0]["signature_jump"].get<int>() == 2);
}

TEST_CASE("cli: phase checks accept a stored cone point") {
  const json doc = parse_cli_json(
      "phase-check --input " + kFixtures + "/s_point_n2.json", 0);
  CHECK(doc["critical"].get<bool>());
  CHECK(doc["nondegenerate"].get<bool>());
  CHECK(doc["two_to_one_exact"].get<bool>());
  CHECK(doc["pass"].get<bool>());
}

TEST_CASE("cli: scalar integrability passes with the exact ratio") {
  const json doc = parse_cli_json("integrability --n 1", 0);
  CHECK(doc["summary"]["pass"].get<bool>());
  CHECK(doc["summary"]["measured_ratio"].get<double>() ==
        doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-12));
  REQUIRE(doc["rows"].size() == 3);
  CHECK(doc["rows"][0]["method"].get<std::string>() == "analytic");
  CHECK(doc["rows"][0]["std_error"].get<double>() == 0.0);
}

TEST_CASE("cli: integrability csv carries rows and a summary comment") {
  const CliRun run = run_cli("integrability --n 1 --format csv");
  CHECK(run.exit_code == 0);
  CHECK(run.out.find("n,r_in,r_out,value,std_error,method,seed,samples") == 0);
  CHECK(run.out.find("# summary:") != std::string::npos);
}

TEST_CASE("cli: growth emits sample rows and a passing fit") {
  const json doc = parse_cli_json("growth --n 1", 0);
  CHECK(doc["summary"]["pass"].get<bool>());
  CHECK(doc["summary"]["slope"].get<double>() ==
        doctest::Approx(-0.5).epsilon(1e-8));
  CHECK(doc["rows"].size() == 25);
  const json row = doc["rows"][0];
  CHECK(row["distance"].get<double>() == row["t"].get<double>());
}

TEST_CASE("cli: evaluation samples agree with the oscillatory oracle") {
  const json doc = parse_cli_json("phi-sample --n 1 --seed 5", 0);
  CHECK(doc["pass"].get<bool>());
  CHECK(doc["relative_difference"].get<double>() < 1e-3);
}

TEST_CASE("cli: the scalar report runs every criterion and passes") {
  const json doc = parse_cli_json("report --n 1", 0);
  CHECK(doc["all_pass"].get<bool>());
  REQUIRE(doc["criteria"].size() == 10);
  for (int id = 1; id <= 10; ++id) {
    const json& c = doc["criteria"][std::to_string(id)];
    CHECK(c["pass"].get<bool>());
    CHECK(c.contains("measured"));
    CHECK(c.contains("expected"));
    CHECK(c.contains("tolerance"));
    CHECK(c.contains("runtime_seconds"));
  }
}

TEST_CASE("cli: identical seeds give identical output") {
  const CliRun a = run_cli("integrability --n 3 --samples 64000 --seed 4");
  const CliRun b = run_cli("integrability --n 3 --samples 64000 --seed 4");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}
