#include "arp/bench/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace arp::bench {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(Errc::parse_error, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double to_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    parse_fail(line, "expected a number, got '" + std::string(tok) + "'");
  return v;
}

Index to_index(std::string_view tok, std::size_t line) {
  long long v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    parse_fail(line, "expected an integer, got '" + std::string(tok) + "'");
  return static_cast<Index>(v);
}

}  // namespace

RealMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw Error(Errc::parse_error, "line 1: empty input");
  ++lineno;
  const auto head = tokens(line);
  if (head.size() != 5 || lower(std::string(head[0])) != "%%matrixmarket" || lower(std::string(head[1])) != "matrix")
    parse_fail(lineno, "missing '%%MatrixMarket matrix' banner");
  const std::string format = lower(std::string(head[2]));
  const std::string field = lower(std::string(head[3]));
  const std::string symmetry = lower(std::string(head[4]));
  if (format != "array" && format != "coordinate") parse_fail(lineno, "unknown format '" + format + "'");
  if (field == "complex" || field == "pattern")
    throw Error(Errc::unsupported_field, "field '" + field + "' is not supported");
  if (field != "real" && field != "integer" && field != "double")
    parse_fail(lineno, "unknown field '" + field + "'");
  if (symmetry == "hermitian") throw Error(Errc::unsupported_field, "hermitian storage is not supported");
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric")
    parse_fail(lineno, "unknown symmetry '" + symmetry + "'");
  const bool sym = symmetry == "symmetric", skew = symmetry == "skew-symmetric";

  auto next_data_line = [&](std::vector<std::string_view>& toks) -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line[0] == '%') continue;
      toks = tokens(line);
      if (!toks.empty()) return true;
    }
    return false;
  };

  std::vector<std::string_view> toks;
  if (!next_data_line(toks)) parse_fail(lineno, "missing size line");
  const bool coord = format == "coordinate";
  if (toks.size() != (coord ? 3u : 2u)) parse_fail(lineno, "malformed size line");
  const Index m = to_index(toks[0], lineno), n = to_index(toks[1], lineno);
  if (m <= 0 || n <= 0) parse_fail(lineno, "dimensions must be positive");
  if ((sym || skew) && m != n) parse_fail(lineno, "symmetric storage requires a square matrix");
  RealMatrix a = RealMatrix::Zero(m, n);

  if (coord) {
    const Index nnz = to_index(toks[2], lineno);
    if (nnz < 0) parse_fail(lineno, "negative entry count");
    for (Index e = 0; e < nnz; ++e) {
      if (!next_data_line(toks)) parse_fail(lineno, "expected " + std::to_string(nnz) + " entries");
      if (toks.size() != 3) parse_fail(lineno, "coordinate entry needs 'row col value'");
      const Index i = to_index(toks[0], lineno) - 1, j = to_index(toks[1], lineno) - 1;
      if (i < 0 || i >= m || j < 0 || j >= n) parse_fail(lineno, "index out of range");
      const double v = to_double(toks[2], lineno);
      a(i, j) += v;
      if (i != j && sym) a(j, i) += v;
      if (i != j && skew) a(j, i) -= v;
    }
  } else {
    // Column-major; symmetric storage lists the lower triangle only.
    for (Index j = 0; j < n; ++j) {
      for (Index i = (sym || skew) ? j + (skew ? 1 : 0) : 0; i < m; ++i) {
        if (!next_data_line(toks)) parse_fail(lineno, "too few array entries");
        if (toks.size() != 1) parse_fail(lineno, "array entry needs exactly one value");
        const double v = to_double(toks[0], lineno);
        a(i, j) = v;
        if (sym) a(j, i) = v;
        if (skew) a(j, i) = -v;
      }
    }
  }
  if (next_data_line(toks)) parse_fail(lineno, "trailing data after the last entry");
  return a;
}

RealMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const RealMatrix& a) {
  out << "%%MatrixMarket matrix array real general\n" << a.rows() << ' ' << a.cols() << '\n';
  char buf[40];
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g\n", a(i, j));
      out << buf;
    }
}

void write_matrix_market(const std::string& path, const RealMatrix& a) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
  write_matrix_market(out, a);
  if (!out) throw Error(Errc::io_error, "write to '" + path + "' failed");
}

}  // namespace arp::bench
