#pragma once

#include <iosfwd>
#include <string>

#include "arp/core.hpp"

namespace arp::bench {

/// Reads a real or integer Matrix Market file (array or coordinate;
/// general, symmetric or skew-symmetric) into a dense matrix. Symmetric
/// storage is mirrored. Throws ParseError with the offending line number,
/// UnsupportedField for complex or pattern files, IoError if unreadable.
RealMatrix read_matrix_market(const std::string& path);
RealMatrix read_matrix_market(std::istream& in);

/// Writes `a` in array/real/general format with 17 significant digits, so
/// reading it back reproduces every entry bit for bit.
void write_matrix_market(const std::string& path, const RealMatrix& a);
void write_matrix_market(std::ostream& out, const RealMatrix& a);

}  // namespace arp::bench
