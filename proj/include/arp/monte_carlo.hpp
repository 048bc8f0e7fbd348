#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

#include "arp/random.hpp"

namespace arp {

/// Sum in a fixed binary-tree order, so the result depends only on the
/// values and their order, never on how they were produced.
inline double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;     // sample standard deviation (n − 1)
  double std_error = 0.0;  // stddev / √n
  std::size_t count = 0;
};

inline SampleStats summarize(std::span<const double> values) {
  SampleStats s;
  s.count = values.size();
  if (s.count == 0) return s;
  s.mean = pairwise_sum(values) / static_cast<double>(s.count);
  if (s.count > 1) {
    std::vector<double> dev(values.size());
    std::transform(values.begin(), values.end(), dev.begin(),
                   [m = s.mean](double v) { return (v - m) * (v - m); });
    s.stddev = std::sqrt(pairwise_sum(dev) / static_cast<double>(s.count - 1));
    s.std_error = s.stddev / std::sqrt(static_cast<double>(s.count));
  }
  return s;
}

/// Runs `trial(stream)` for `trials` independent streams split from `root`
/// and returns the results in trial order. With threads > 1, trials are
/// distributed over worker threads by stride; the output is identical for
/// any thread count. The first exception (in trial order) is rethrown.
template <typename Trial, typename Result = std::invoke_result_t<Trial&, RandomStream&>>
std::vector<Result> run_trials(RandomStream& root, std::size_t trials, Trial&& trial, unsigned threads = 1) {
  std::vector<RandomStream> streams = root.split(trials);
  std::vector<Result> out(trials);
  std::vector<std::exception_ptr> errors(trials);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t t = first; t < trials; t += stride) {
      try {
        out[t] = trial(streams[t]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace arp
