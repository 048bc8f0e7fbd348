#include "arp/bench/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace arp::bench {

namespace {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// RFC 4180 quoting for free-text fields.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out = csv_header;
  out += '\n';
  for (const auto& r : rows) {
    out += field(r.task) + ',' + field(r.matrix) + ',' + field(r.method) + ',' + std::to_string(r.rank) + ',' +
           std::to_string(r.trials) + ',' + number(r.mean_rel_err) + ',' + number(r.p10_rel_err) + ',' +
           number(r.p90_rel_err) + ',' + number(r.seconds) + '\n';
  }
  return out;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  require(!rows.empty(), Errc::invalid_argument, "no rows to write");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
  out << format_csv(rows);
  if (!out) throw Error(Errc::io_error, "write to '" + path + "' failed");
}

}  // namespace arp::bench
