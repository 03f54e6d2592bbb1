#include "maslov/matrix_io.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace maslov {

namespace {

struct Token {
  std::string text;
  int line = 0;
  int column = 0;  // 1-based
};

[[noreturn]] void fail_at(const std::string& name, int line, int column,
                          const std::string& message) {
  std::ostringstream out;
  out << name << ":" << line << ":" << column << ": " << message;
  throw InputError(out.str());
}

// Splits a physical line into tokens, dropping '#' comments.
std::vector<Token> tokenize_line(const std::string& text, int line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
           text[i] != '#') {
      ++i;
    }
    out.push_back({text.substr(start, i - start), line,
                   static_cast<int>(start) + 1});
  }
  return out;
}

double parse_number(const Token& tok, const std::string& name) {
  const char* begin = tok.text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    fail_at(name, tok.line, tok.column,
            "expected a number, got '" + tok.text + "'");
  }
  return value;
}

long parse_integer(const Token& tok, const std::string& name) {
  const char* begin = tok.text.c_str();
  char* end = nullptr;
  const long value = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0') {
    fail_at(name, tok.line, tok.column,
            "expected an integer, got '" + tok.text + "'");
  }
  return value;
}

// All nonempty token rows of the stream, with their line numbers.
std::vector<std::vector<Token>> token_rows(std::istream& in) {
  std::vector<std::vector<Token>> rows;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::vector<Token> tokens = tokenize_line(text, line);
    if (!tokens.empty()) rows.push_back(std::move(tokens));
  }
  return rows;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  return in;
}

Eigen::MatrixXd matrix_from_json_array(const nlohmann::json& array, int rows,
                                       int cols, const std::string& key) {
  if (!array.is_array() ||
      array.size() != static_cast<std::size_t>(rows) * cols) {
    throw InputError("s_point json: '" + key + "' must hold " +
                     std::to_string(rows * cols) + " numbers");
  }
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const auto& cell = array[static_cast<std::size_t>(i) * cols + j];
      if (!cell.is_number()) {
        throw InputError("s_point json: '" + key + "' must hold numbers");
      }
      m(i, j) = cell.get<double>();
    }
  }
  return m;
}

nlohmann::json matrix_to_json_array(const Eigen::MatrixXd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

}  // namespace

Eigen::MatrixXd read_matrix_text(std::istream& in, const std::string& name) {
  const std::vector<std::vector<Token>> rows = token_rows(in);
  if (rows.empty()) throw InputError(name + ":1:1: empty matrix");
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      fail_at(name, rows[i].front().line, rows[i].front().column,
              "row has " + std::to_string(rows[i].size()) +
                  " entries, expected " + std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_number(rows[i][j], name);
    }
  }
  return m;
}

Eigen::MatrixXd read_matrix_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return read_matrix_text(in, path);
}

void write_matrix_text(std::ostream& out, const Eigen::MatrixXd& m) {
  std::ostringstream line;
  line.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    line.str("");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) line << ' ';
      line << m(i, j);
    }
    out << line.str() << '\n';
  }
}

void write_matrix_file(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open file for writing");
  write_matrix_text(out, m);
}

PathFileData read_path_text(std::istream& in, const std::string& name) {
  const std::vector<std::vector<Token>> rows = token_rows(in);
  if (rows.empty()) throw InputError(name + ":1:1: empty path file");

  const std::vector<Token>& header = rows.front();
  if (header.size() != 4 || header[0].text != "n" ||
      header[2].text != "closed") {
    fail_at(name, header[0].line, header[0].column,
            "expected header 'n <int> closed <0|1>'");
  }
  PathFileData data;
  const long n = parse_integer(header[1], name);
  if (n < 1 || n > 1024) {
    fail_at(name, header[1].line, header[1].column, "n out of range");
  }
  data.n = static_cast<int>(n);
  const long closed = parse_integer(header[3], name);
  if (closed != 0 && closed != 1) {
    fail_at(name, header[3].line, header[3].column,
            "closed flag must be 0 or 1");
  }
  data.closed = closed == 1;

  const std::size_t per_line = 1 + static_cast<std::size_t>(2 * n) * n;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::vector<Token>& row = rows[r];
    if (row.size() != per_line) {
      fail_at(name, row.front().line, row.front().column,
              "sample line has " + std::to_string(row.size()) +
                  " entries, expected " + std::to_string(per_line) +
                  " (t plus the row-major 2n-by-n frame)");
    }
    data.times.push_back(parse_number(row[0], name));
    Eigen::MatrixXd frame(2 * data.n, data.n);
    std::size_t k = 1;
    for (int i = 0; i < 2 * data.n; ++i) {
      for (int j = 0; j < data.n; ++j) {
        frame(i, j) = parse_number(row[k++], name);
      }
    }
    data.frames.push_back(std::move(frame));
  }
  if (data.times.size() < 2) {
    throw InputError(name + ": path needs at least 2 samples");
  }
  return data;
}

PathFileData read_path_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return read_path_text(in, path);
}

void write_path_text(std::ostream& out, const PathFileData& data) {
  out << "n " << data.n << " closed " << (data.closed ? 1 : 0) << '\n';
  std::ostringstream line;
  line.precision(17);
  for (std::size_t s = 0; s < data.times.size(); ++s) {
    line.str("");
    line << data.times[s];
    const Eigen::MatrixXd& frame = data.frames[s];
    for (Eigen::Index i = 0; i < frame.rows(); ++i) {
      for (Eigen::Index j = 0; j < frame.cols(); ++j) {
        line << ' ' << frame(i, j);
      }
    }
    out << line.str() << '\n';
  }
}

void write_path_file(const std::string& path, const PathFileData& data) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open file for writing");
  write_path_text(out, data);
}

std::string s_point_to_json(const SPoint& point) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["n"] = point.n();
  doc["a"] = matrix_to_json_array(point.a().mat());
  doc["v"] = matrix_to_json_array(point.v());
  doc["beta"] = matrix_to_json_array(point.beta().mat());
  return doc.dump(2);
}

SPoint s_point_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("s_point json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") ||
      !doc["n"].is_number_integer()) {
    throw InputError("s_point json: missing integer field 'n'");
  }
  const int n = doc["n"].get<int>();
  if (n < 1 || n > 1024) throw InputError("s_point json: n out of range");
  for (const char* key : {"a", "v", "beta"}) {
    if (!doc.contains(key)) {
      throw InputError(std::string("s_point json: missing field '") + key +
                       "'");
    }
  }
  const Eigen::MatrixXd a = matrix_from_json_array(doc["a"], n, n, "a");
  const Eigen::MatrixXd v = matrix_from_json_array(doc["v"], n, 1, "v");
  const Eigen::MatrixXd beta =
      matrix_from_json_array(doc["beta"], n, n, "beta");
  return SPoint(SymmetricForm(a), Eigen::VectorXd(v.col(0)),
                SymmetricForm(beta));
}

std::string command_name(Command c) {
  switch (c) {
    case Command::stratify:
      return "stratify";
    case Command::charts:
      return "charts";
    case Command::maslov_index:
      return "maslov-index";
    case Command::phase_check:
      return "phase-check";
    case Command::fresnel:
      return "fresnel";
    case Command::phi_sample:
      return "phi-sample";
    case Command::integrability:
      return "integrability";
    case Command::growth:
      return "growth";
    case Command::report:
      return "report";
  }
  return "report";
}

Command command_from_name(const std::string& name) {
  for (Command c :
       {Command::stratify, Command::charts, Command::maslov_index,
        Command::phase_check, Command::fresnel, Command::phi_sample,
        Command::integrability, Command::growth, Command::report}) {
    if (command_name(c) == name) return c;
  }
  throw InputError("unknown command '" + name + "'");
}

std::string format_name(OutputFormat f) {
  return f == OutputFormat::json ? "json" : "csv";
}

OutputFormat format_from_name(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  throw InputError("unknown output format '" + name + "'");
}

std::string run_config_to_json(const RunConfig& cfg) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["command"] = command_name(cfg.command);
  doc["n"] = cfg.n;
  doc["seed"] = cfg.seed;
  doc["tol"] = cfg.tol;
  doc["input_path"] = cfg.input_path;
  doc["output_format"] = format_name(cfg.output_format);
  doc["output_path"] = cfg.output_path;
  doc["estimator_overrides"] = nlohmann::json::object();
  for (const auto& [key, value] : cfg.estimator_overrides) {
    doc["estimator_overrides"][key] = value;
  }
  return doc.dump(2);
}

RunConfig run_config_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("run config json: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("run config json: not an object");
  RunConfig cfg;
  if (doc.contains("command")) {
    cfg.command = command_from_name(doc["command"].get<std::string>());
  }
  if (doc.contains("n")) cfg.n = doc["n"].get<int>();
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("tol")) cfg.tol = doc["tol"].get<double>();
  if (doc.contains("input_path")) {
    cfg.input_path = doc["input_path"].get<std::string>();
  }
  if (doc.contains("output_format")) {
    cfg.output_format =
        format_from_name(doc["output_format"].get<std::string>());
  }
  if (doc.contains("output_path")) {
    cfg.output_path = doc["output_path"].get<std::string>();
  }
  if (doc.contains("estimator_overrides")) {
    const nlohmann::json& overrides = doc["estimator_overrides"];
    if (!overrides.is_object()) {
      throw InputError("run config json: estimator_overrides not an object");
    }
    for (auto it = overrides.begin(); it != overrides.end(); ++it) {
      if (!it.value().is_number()) {
        throw InputError("run config json: estimator override '" + it.key() +
                         "' must be numeric");
      }
      cfg.estimator_overrides[it.key()] = it.value().get<double>();
    }
  }
  return cfg;
}

}  // namespace maslov
