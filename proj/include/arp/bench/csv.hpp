#pragma once

#include <string>
#include <vector>

#include "arp/bench/experiment.hpp"

namespace arp::bench {

inline constexpr const char* csv_header =
    "task,matrix,method,rank,trials,mean_rel_err,p10_rel_err,p90_rel_err,seconds";

/// Header plus one line per row, numbers with 17 significant digits.
std::string format_csv(const std::vector<ResultRow>& rows);

/// Writes format_csv(rows) to `path`. Throws InvalidArgument on empty rows
/// and IoError if the file cannot be written.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace arp::bench
