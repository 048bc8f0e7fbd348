#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arp/bench/generators.hpp"
#include "arp/core.hpp"
#include "arp/random.hpp"

namespace arp::bench {

enum class Task { cssp, deim, cross, nystrom };

std::string_view to_string(Task task) noexcept;
/// Throws InvalidParams on an unknown name.
Task parse_task(std::string_view name);

/// Where the test matrix comes from: a Matrix Market file or `gen:<spec>`.
struct MatrixSource {
  enum class Kind { file, generator };
  Kind kind = Kind::generator;
  std::string path;
  GeneratorSpec generator;

  static MatrixSource parse(std::string_view text);
  std::string label() const;
};

struct ExperimentConfig {
  MatrixSource matrix;
  Task task = Task::cssp;
  std::vector<std::string> methods;
  std::vector<Index> ranks;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string output_path;
  unsigned threads = 1;
  bool timing = false;

  /// Throws InvalidParams: methods nonempty and known for the task, ranks
  /// positive and strictly increasing, trials ≥ 1, threads ≥ 1.
  void validate() const;
};

/// Reads a JSON config with keys matrix, task, methods, ranks, trials, seed,
/// out, threads. Missing keys keep their defaults. Throws InvalidParams.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::string_view json_text);

/// Methods runnable for a task, in a stable order.
const std::vector<std::string>& methods_for(Task task);
/// Comparison series that are recognized but not implemented; they are
/// reported as absent (NaN rows) instead of failing the sweep.
bool is_absent_series(Task task, std::string_view method);
/// True for methods whose output does not depend on the random stream.
bool is_deterministic(std::string_view method);

/// A loaded test problem with its dominant singular basis precomputed.
struct Problem {
  Task task = Task::cssp;
  std::string label;
  RealMatrix a;
  /// Held-out snapshots for DEIM (the train columns themselves unless the
  /// parametric generator supplies a test grid).
  RealMatrix test;
  /// Dominant right singular vectors (left for DEIM), max rank columns.
  RealMatrix basis;
  double norm = 0.0;  // ‖A‖_F, or trace(A) for Nyström
};

/// Loads the matrix and the basis up to `max_rank`. The generator stream is
/// derived from `seed` alone. Throws InvalidParams if a rank exceeds the
/// matrix dimensions.
Problem load_problem(const MatrixSource& source, Task task, Index max_rank, std::uint64_t seed);

/// Index sets chosen by one method. `rows` is used only by cross approximation.
struct Selection {
  IndexList cols;
  std::optional<IndexList> rows;
};

Selection select_indices(const Problem& p, const std::string& method, Index rank, RandomStream& rng);

/// Relative error of one trial, per task:
///   cssp ‖A − Π_J A‖_F/‖A‖_F, cross ‖A − A(:,J)A(I,J)^{-1}A(I,:)‖_F/‖A‖_F,
///   nystrom ‖A − Â‖_*/‖A‖_*, deim mean relative 2-norm error over the test set.
double trial_error(const Problem& p, const std::string& method, Index rank, RandomStream& rng);

struct ResultRow {
  std::string task;
  std::string matrix;
  std::string method;
  Index rank = 0;
  std::size_t trials = 0;
  double mean_rel_err = 0.0;
  double p10_rel_err = 0.0;
  double p90_rel_err = 0.0;
  double seconds = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  /// One message per failed cell (absent series included).
  std::vector<std::string> failures;
};

/// Mean, and the extremes left after sorting and dropping ⌊0.1·n⌋ values
/// from each end.
struct TrimmedBand {
  double mean, low, high;
};
TrimmedBand trimmed_band(std::vector<double> errors);

/// Runs every (method, rank) cell. Each cell draws its trials from its own
/// stream split from `seed`, so results do not depend on `threads`. A cell
/// with any failing trial is reported with NaN statistics.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace arp::bench
