#include "arp/bench/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "arp/rowspace.hpp"

namespace arp::bench {

namespace {

void require_positive(Index value, const char* what) {
  require(value > 0, Errc::invalid_params, std::string(what) + " must be positive");
}

RealMatrix random_orthonormal(Index rows, Index cols, RandomStream& rng) {
  return thin_qr(gaussian_matrix<double>(rows, cols, rng)).q;
}

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

double GeneratorSpec::get(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

Index GeneratorSpec::get_index(const std::string& key, Index fallback) const {
  const double v = get(key, static_cast<double>(fallback));
  require(std::isfinite(v) && v == std::floor(v), Errc::invalid_params, "parameter '" + key + "' must be an integer");
  return static_cast<Index>(v);
}

std::string GeneratorSpec::label() const {
  std::string out = name;
  char sep = ':';
  for (const auto& [k, v] : params) {
    out += sep;
    out += k + "=" + format_number(v);
    sep = ';';
  }
  return out;
}

GeneratorSpec parse_generator(std::string_view text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  spec.name = std::string(text.substr(0, colon));
  require(!spec.name.empty(), Errc::invalid_params, "empty generator name");
  if (colon == std::string_view::npos) return spec;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    require(eq != std::string_view::npos && eq > 0, Errc::invalid_params,
            "generator parameter '" + std::string(item) + "' is not key=value");
    const std::string key(item.substr(0, eq));
    const std::string_view value = item.substr(eq + 1);
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    require(res.ec == std::errc() && res.ptr == value.data() + value.size(), Errc::invalid_params,
            "generator parameter '" + key + "' is not a number");
    spec.params[key] = v;
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return spec;
}

RealMatrix generate(const GeneratorSpec& spec, RandomStream& rng) {
  // An explicit `seed` parameter pins the matrix independently of the caller's stream.
  RandomStream pinned(static_cast<std::uint64_t>(spec.get_index("seed", 0)), 1);
  RandomStream& own = spec.params.count("seed") ? pinned : rng;
  const auto& n = spec.name;
  if (n == "greedy_counterexample") return greedy_counterexample(spec.get_index("n", 1000));
  if (n == "deim_parametric")
    return deim_parametric(spec.get_index("grid_x", 50), spec.get_index("grid_mu", 12),
                           spec.get_index("grid_test", 11))
        .train;
  if (n == "bump_kernel") return bump_kernel(spec.get_index("n", 400), own);
  if (n == "smile_kernel") return smile_kernel(spec.get_index("n", 300), spec.get("bandwidth", 2.0));
  if (n == "spiral_kernel") return spiral_kernel(spec.get_index("n", 300), spec.get("bandwidth", 5.0), own);
  if (n == "random_lowrank_plus_noise")
    return random_lowrank_plus_noise(spec.get_index("m", 100), spec.get_index("n", 80), spec.get_index("r", 10),
                                     spec.get("noise", 1e-3), own);
  if (n == "power_law")
    return power_law(spec.get_index("m", 100), spec.get_index("n", 80), spec.get("decay", 1.0), own);
  if (n == "sparse_random")
    return sparse_random(spec.get_index("m", 400), spec.get_index("n", 800), spec.get("density", 0.02), own);
  throw Error(Errc::invalid_params, "unknown generator '" + n + "'");
}

RealMatrix greedy_counterexample(Index n) {
  require(n >= 2, Errc::invalid_params, "greedy_counterexample needs n >= 2");
  const double nd = static_cast<double>(n);
  const double scale = 1.0 / std::sqrt(nd + 3.0);
  RealMatrix a(2, n);
  a.row(0).setConstant(-scale);
  a(0, 0) = 2.0 * scale;
  a.row(1).setConstant(2.0 / std::sqrt((nd - 1.0) * (nd + 3.0)));
  a(1, 0) = std::sqrt((nd - 1.0) / (nd + 3.0));
  a.row(1) *= 1e-4;
  return a;
}

double parametric_function(double x1, double x2, double mu1, double mu2) {
  const auto g = [](double y1, double y2, double m1, double m2) {
    const double d1 = (1.0 - y1) - (0.99 * m1 - 1.0);
    const double d2 = (1.0 - y2) - (0.99 * m2 - 1.0);
    return 1.0 / std::sqrt(d1 * d1 + d2 * d2 + 0.01);
  };
  return g(x1, x2, mu1, mu2) + g(1 - x1, 1 - x2, 1 - mu1, 1 - mu2) + g(1 - x1, x2, 1 - mu1, mu2) +
         g(x1, 1 - x2, mu1, 1 - mu2);
}

ParametricSnapshots deim_parametric(Index grid_x, Index grid_mu, Index grid_test) {
  require(grid_x >= 2 && grid_mu >= 2 && grid_test >= 2, Errc::invalid_params, "grids need at least 2 points");
  const RealVector x = RealVector::LinSpaced(grid_x, 0.0, 1.0);
  auto build = [&](Index grid_p) {
    const RealVector mu = RealVector::LinSpaced(grid_p, 0.0, 1.0);
    RealMatrix out(grid_x * grid_x, grid_p * grid_p);
    for (Index p2 = 0; p2 < grid_p; ++p2)
      for (Index p1 = 0; p1 < grid_p; ++p1)
        for (Index i2 = 0; i2 < grid_x; ++i2)
          for (Index i1 = 0; i1 < grid_x; ++i1)
            out(i1 + grid_x * i2, p1 + grid_p * p2) = parametric_function(x(i1), x(i2), mu(p1), mu(p2));
    return out;
  };
  return {build(grid_mu), build(grid_test)};
}

double bump_function(double alpha, double beta) {
  return std::exp(-15.0 * std::sqrt(alpha * alpha + beta * beta)) +
         std::exp(-75.0 * std::sqrt((alpha - 1.0) * (alpha - 1.0) + (beta - 1.0) * (beta - 1.0)));
}

RealMatrix bump_kernel(Index n, RandomStream& rng) {
  require(n >= 2, Errc::invalid_params, "bump_kernel needs n >= 2");
  const RealVector alpha = RealVector::LinSpaced(n, 0.0, 1.0);
  RealVector beta(n);
  for (Index j = 0; j < n; ++j) beta(j) = rng.uniform();
  RealMatrix a(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) a(i, j) = bump_function(alpha(i), beta(j));
  return a;
}

RealMatrix gaussian_kernel(const RealMatrix& points, double bandwidth) {
  require(bandwidth > 0.0 && std::isfinite(bandwidth), Errc::invalid_params, "bandwidth must be positive");
  const Index n = points.rows();
  RealMatrix k(n, n);
  const double denom = 2.0 * bandwidth * bandwidth;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) k(i, j) = std::exp(-(points.row(i) - points.row(j)).squaredNorm() / denom);
  return k;
}

RealMatrix smile_points(Index n) {
  require_positive(n, "n");
  const Index eye = n / 5;
  const Index mouth = n - 2 * eye;
  RealMatrix p(n, 2);
  const double lo = std::numbers::pi + 0.5, hi = 2.0 * std::numbers::pi - 0.5;
  for (Index i = 0; i < mouth; ++i) {
    const double t = mouth == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(mouth - 1);
    const double theta = lo + t * (hi - lo);
    p(i, 0) = 7.0 * std::cos(theta);
    p(i, 1) = 1.0 + 7.0 * std::sin(theta);
  }
  // Sunflower layout fills each eye disk evenly.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int side = 0; side < 2; ++side) {
    const double cx = side == 0 ? -4.0 : 4.0, cy = 4.5;
    for (Index i = 0; i < eye; ++i) {
      const double rad = 1.5 * std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(eye));
      const double phi = static_cast<double>(i) * golden;
      p(mouth + side * eye + i, 0) = cx + rad * std::cos(phi);
      p(mouth + side * eye + i, 1) = cy + rad * std::sin(phi);
    }
  }
  return p;
}

RealMatrix smile_kernel(Index n, double bandwidth) { return gaussian_kernel(smile_points(n), bandwidth); }

RealMatrix spiral_points(Index n, RandomStream& rng) {
  require_positive(n, "n");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (auto& v : t) v = 64.0 * rng.uniform();
  std::sort(t.begin(), t.end());
  RealMatrix p(n, 2);
  for (Index i = 0; i < n; ++i) {
    const double ti = t[static_cast<std::size_t>(i)];
    p(i, 0) = std::exp(0.2 * ti) * std::cos(ti);
    p(i, 1) = std::exp(0.2 * ti) * std::sin(ti);
  }
  return p;
}

RealMatrix spiral_kernel(Index n, double bandwidth, RandomStream& rng) {
  return gaussian_kernel(spiral_points(n, rng), bandwidth);
}

RealMatrix random_lowrank_plus_noise(Index m, Index n, Index r, double noise, RandomStream& rng) {
  require_positive(m, "m");
  require_positive(n, "n");
  require_positive(r, "r");
  require(noise >= 0.0 && std::isfinite(noise), Errc::invalid_params, "noise must be nonnegative");
  const RealMatrix g1 = gaussian_matrix<double>(m, r, rng);
  const RealMatrix g2 = gaussian_matrix<double>(n, r, rng);
  RealMatrix a = g1 * g2.transpose() / std::sqrt(static_cast<double>(r));
  if (noise > 0.0) a += noise * gaussian_matrix<double>(m, n, rng);
  return a;
}

RealMatrix power_law(Index m, Index n, double decay, RandomStream& rng) {
  require_positive(m, "m");
  require_positive(n, "n");
  require(std::isfinite(decay), Errc::invalid_params, "decay must be finite");
  const Index k = std::min(m, n);
  const RealMatrix u = random_orthonormal(m, k, rng);
  const RealMatrix v = random_orthonormal(n, k, rng);
  RealVector s(k);
  for (Index i = 0; i < k; ++i) s(i) = std::pow(static_cast<double>(i + 1), -decay);
  return u * s.asDiagonal() * v.transpose();
}

RealMatrix sparse_random(Index m, Index n, double density, RandomStream& rng) {
  require_positive(m, "m");
  require_positive(n, "n");
  require(density > 0.0 && density <= 1.0, Errc::invalid_params, "density must lie in (0, 1]");
  RealMatrix a = RealMatrix::Zero(m, n);
  for (Index j = 0; j < n; ++j) {
    const double col_scale = std::pow(static_cast<double>(j % 97 + 1), -0.75);
    for (Index i = 0; i < m; ++i)
      if (rng.uniform() < density) a(i, j) = col_scale * rng.normal();
  }
  return a;
}

}  // namespace arp::bench
