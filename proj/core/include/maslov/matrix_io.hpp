#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "maslov/conic.hpp"
#include "maslov/errors.hpp"

namespace maslov {

// Text formats. Matrices: one row per line, whitespace-separated decimal
// numbers, '#' starts a comment, blank lines are skipped. Frames are 2n-by-n
// matrices, forms n-by-n. Paths: a header line `n <int> closed <0|1>`
// followed by one line per sample holding t and the 2n*n row-major frame
// entries. Parse failures throw InputError tagged `name:line:column`.

Eigen::MatrixXd read_matrix_text(std::istream& in,
                                 const std::string& name = "<input>");
Eigen::MatrixXd read_matrix_file(const std::string& path);

void write_matrix_text(std::ostream& out, const Eigen::MatrixXd& m);
void write_matrix_file(const std::string& path, const Eigen::MatrixXd& m);

struct PathFileData {
  int n = 0;
  bool closed = false;
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> frames;  // each 2n-by-n
};

PathFileData read_path_text(std::istream& in,
                            const std::string& name = "<input>");
PathFileData read_path_file(const std::string& path);

void write_path_text(std::ostream& out, const PathFileData& data);
void write_path_file(const std::string& path, const PathFileData& data);

// JSON round-trips (snake_case keys, schema_version 1).
std::string s_point_to_json(const SPoint& point);
SPoint s_point_from_json(const std::string& text);

enum class Command {
  stratify,
  charts,
  maslov_index,
  phase_check,
  fresnel,
  phi_sample,
  integrability,
  growth,
  report,
};

std::string command_name(Command c);        // hyphenated, e.g. "maslov-index"
Command command_from_name(const std::string& name);

enum class OutputFormat { json, csv };

std::string format_name(OutputFormat f);
OutputFormat format_from_name(const std::string& name);

struct RunConfig {
  Command command = Command::report;
  int n = 2;
  std::uint64_t seed = 20240901;
  double tol = 1e-9;
  std::string input_path;  // empty means none
  OutputFormat output_format = OutputFormat::json;
  std::string output_path;  // empty means stdout
  std::map<std::string, double> estimator_overrides;
};

std::string run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const std::string& text);

}  // namespace maslov
