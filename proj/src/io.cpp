#include "hull_lil/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hull_lil/error.hpp"

namespace hull_lil::io {

std::string format_double(double v) {
  if (v == 0.0) return "0";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error("empty entry in list '" + text + "'");
    const std::string tok = item.substr(b, e - b + 1);
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v))
      throw Error("not a finite number: '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error("empty list");
  return out;
}

Eigen::VectorXd parse_vector(const std::string& text) {
  const auto v = parse_list(text);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd parse_matrix(const std::string& text, int dim) {
  if (text == "I" || text == "i") return Eigen::MatrixXd::Identity(dim, dim);
  const auto v = parse_list(text);
  if (v.size() != static_cast<std::size_t>(dim) * dim)
    throw Error("matrix needs " + std::to_string(dim * dim) + " entries, got " + std::to_string(v.size()));
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = v[static_cast<std::size_t>(r) * dim + c];
  return m;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace hull_lil::io
