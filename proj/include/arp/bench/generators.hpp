#pragma once

#include <map>
#include <string>
#include <string_view>

#include "arp/core.hpp"
#include "arp/random.hpp"

namespace arp::bench {

/// A named generator with numeric parameters, written `name:key=value,...`.
struct GeneratorSpec {
  std::string name;
  std::map<std::string, double> params;

  double get(const std::string& key, double fallback) const;
  Index get_index(const std::string& key, Index fallback) const;
  std::string label() const;
};

/// Parses `name` or `name:k=v,k=v`. Throws InvalidParams on malformed text.
GeneratorSpec parse_generator(std::string_view text);

/// Builds the matrix for `spec`. Randomized generators draw from `rng`.
/// Throws InvalidParams for unknown names or non-positive sizes.
RealMatrix generate(const GeneratorSpec& spec, RandomStream& rng);

/// 2×n matrix diag(1, 1e-4)·[a; b] with orthonormal rows
///   a = (2, −1, …, −1)/√(n+3),  b = (√(n−1), 2/√(n−1), …, 2/√(n−1))/√(n+3).
/// Its dominant right singular vector is aᵀ; the largest leverage sits on
/// column 0 yet choosing it leaves the whole second row as error.
RealMatrix greedy_counterexample(Index n);

/// Snapshots of the four-term symmetrized parametric function on a
/// grid_x × grid_x spatial grid in [0,1]², one column per parameter pair.
struct ParametricSnapshots {
  RealMatrix train;  // grid_x² × grid_mu²
  RealMatrix test;   // grid_x² × grid_test²
};
ParametricSnapshots deim_parametric(Index grid_x, Index grid_mu, Index grid_test = 11);

/// The parametric function itself, for spot checks.
double parametric_function(double x1, double x2, double mu1, double mu2);

/// K(α,β) = exp(−15√(α²+β²)) + exp(−75√((α−1)²+(β−1)²)) with α on an
/// equispaced grid of [0,1] (rows) and β uniform random in [0,1] (columns).
RealMatrix bump_kernel(Index n, RandomStream& rng);
double bump_function(double alpha, double beta);

/// Gaussian kernel exp(−‖x_i − x_j‖²/(2h²)) for points stored as rows.
RealMatrix gaussian_kernel(const RealMatrix& points, double bandwidth);

/// n points in [−10,10]² tracing a face: a mouth arc (60% of the points) and
/// two filled eyes (20% each). Deterministic.
RealMatrix smile_points(Index n);
RealMatrix smile_kernel(Index n, double bandwidth);

/// n points (e^{0.2t}cos t, e^{0.2t}sin t) with t = 64·u, u sorted uniform.
RealMatrix spiral_points(Index n, RandomStream& rng);
RealMatrix spiral_kernel(Index n, double bandwidth, RandomStream& rng);

/// G₁G₂ᵀ/√r + noise·G₃ with Gaussian factors (m×r, n×r) and G₃ (m×n).
RealMatrix random_lowrank_plus_noise(Index m, Index n, Index r, double noise, RandomStream& rng);

/// U·diag(k^{−decay})·Vᵀ with Haar-like random orthonormal U, V.
RealMatrix power_law(Index m, Index n, double decay, RandomStream& rng);

/// Sparse-like test matrix: each entry nonzero with probability `density`,
/// nonzeros standard normal, scaled by a per-column power law so that the
/// spectrum is not flat. Desk stand-in for large sparse CSSP inputs.
RealMatrix sparse_random(Index m, Index n, double density, RandomStream& rng);

}  // namespace arp::bench
