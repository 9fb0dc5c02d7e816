#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace hull_lil::io {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

/// Comma-separated reals, e.g. "1,0" or "0.5, -2".
std::vector<double> parse_list(const std::string& text);

Eigen::VectorXd parse_vector(const std::string& text);

/// "I" for the identity of size dim, otherwise a row-major comma list of dim^2 entries.
Eigen::MatrixXd parse_matrix(const std::string& text, int dim);

/// Writes text to path, replacing any existing file.
void write_file(const std::string& path, const std::string& text);

}  // namespace hull_lil::io
