#include "arp/bench/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "arp/apps.hpp"
#include "arp/arp.hpp"
#include "arp/baselines.hpp"
#include "arp/bench/matrix_market.hpp"
#include "arp/monte_carlo.hpp"
#include "arp/nystrom_det.hpp"
#include "arp/osinsky.hpp"

namespace arp::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream id reserved for matrix generation; trial streams come from split().
constexpr std::uint64_t kGeneratorStream = 1;

bool contains(const std::vector<std::string>& list, std::string_view item) {
  return std::find(list.begin(), list.end(), item) != list.end();
}

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::invalid_params, what); }

OrthonormalBasis<double> leading_basis(const Problem& p, Index rank) {
  return OrthonormalBasis<double>(p.basis.leftCols(rank));
}

}  // namespace

std::string_view to_string(Task task) noexcept {
  switch (task) {
    case Task::cssp: return "cssp";
    case Task::deim: return "deim";
    case Task::cross: return "cross";
    case Task::nystrom: return "nystrom";
  }
  return "unknown";
}

Task parse_task(std::string_view name) {
  for (Task t : {Task::cssp, Task::deim, Task::cross, Task::nystrom})
    if (to_string(t) == name) return t;
  config_error("unknown task '" + std::string(name) + "'");
}

MatrixSource MatrixSource::parse(std::string_view text) {
  require(!text.empty(), Errc::invalid_params, "empty matrix source");
  MatrixSource src;
  if (text.rfind("gen:", 0) == 0) {
    src.kind = Kind::generator;
    src.generator = parse_generator(text.substr(4));
  } else {
    src.kind = Kind::file;
    src.path = std::string(text);
  }
  return src;
}

std::string MatrixSource::label() const { return kind == Kind::file ? path : generator.label(); }

const std::vector<std::string>& methods_for(Task task) {
  static const std::vector<std::string> cssp{"arp",      "arp_prototype", "osinsky", "greedy_leverage",
                                             "leverage", "column_norm",   "uniform", "cpqr"};
  static const std::vector<std::string> deim{"arp", "uniform", "leverage", "greedy_leverage"};
  static const std::vector<std::string> cross{"arp", "aca_full", "aca_partial"};
  static const std::vector<std::string> nystrom{"arp", "det", "rp_cholesky", "leverage", "uniform", "aca_full"};
  switch (task) {
    case Task::cssp: return cssp;
    case Task::deim: return deim;
    case Task::cross: return cross;
    case Task::nystrom: return nystrom;
  }
  return cssp;
}

bool is_absent_series(Task task, std::string_view method) {
  switch (task) {
    case Task::deim: return method == "qdeim" || method == "rdeim";
    case Task::nystrom: return method == "greedy_nuclear";
    default: return false;
  }
}

bool is_deterministic(std::string_view method) {
  return method == "osinsky" || method == "greedy_leverage" || method == "cpqr" || method == "det" ||
         method == "aca_full";
}

void ExperimentConfig::validate() const {
  if (methods.empty()) config_error("methods must not be empty");
  for (const auto& m : methods)
    if (!contains(methods_for(task), m) && !is_absent_series(task, m))
      config_error("method '" + m + "' is not available for task '" + std::string(to_string(task)) + "'");
  for (std::size_t i = 0; i < methods.size(); ++i)
    for (std::size_t j = i + 1; j < methods.size(); ++j)
      if (methods[i] == methods[j]) config_error("method '" + methods[i] + "' listed twice");
  if (ranks.empty()) config_error("ranks must not be empty");
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] < 1) config_error("ranks must be positive");
    if (i > 0 && ranks[i] <= ranks[i - 1]) config_error("ranks must be strictly increasing");
  }
  if (trials < 1) config_error("trials must be >= 1");
  if (threads < 1) config_error("threads must be >= 1");
  if (matrix.kind == MatrixSource::Kind::file && matrix.path.empty()) config_error("matrix path is empty");
  if (matrix.kind == MatrixSource::Kind::generator && matrix.generator.name.empty())
    config_error("no matrix given");
}

ExperimentConfig parse_config(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "matrix") c.matrix = MatrixSource::parse(value.get<std::string>());
      else if (key == "task") c.task = parse_task(value.get<std::string>());
      else if (key == "methods") c.methods = value.get<std::vector<std::string>>();
      else if (key == "ranks") c.ranks = value.get<std::vector<Index>>();
      else if (key == "trials") c.trials = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "out") c.output_path = value.get<std::string>();
      else if (key == "threads") c.threads = value.get<unsigned>();
      else if (key == "comment") continue;
      else config_error("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("config has a value of the wrong type: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

Problem load_problem(const MatrixSource& source, Task task, Index max_rank, std::uint64_t seed) {
  Problem p;
  p.task = task;
  p.label = source.label();
  if (source.kind == MatrixSource::Kind::file) {
    p.a = read_matrix_market(source.path);
  } else if (source.generator.name == "deim_parametric") {
    const auto& g = source.generator;
    auto snaps = deim_parametric(g.get_index("grid_x", 50), g.get_index("grid_mu", 12), g.get_index("grid_test", 11));
    p.a = std::move(snaps.train);
    p.test = std::move(snaps.test);
  } else {
    RandomStream rng(seed, kGeneratorStream);
    p.a = generate(source.generator, rng);
  }
  require_finite(p.a, "matrix");
  const Index limit = std::min(p.a.rows(), p.a.cols());
  if (max_rank > limit)
    config_error("rank " + std::to_string(max_rank) + " exceeds min(rows, cols) = " + std::to_string(limit));
  switch (task) {
    case Task::deim:
      if (p.test.size() == 0) p.test = p.a;
      p.basis = top_left_singular_basis(p.a, max_rank).matrix();
      p.norm = p.a.norm();
      break;
    case Task::nystrom:
      require_spsd(p.a);
      p.basis = top_right_singular_basis(p.a, max_rank).matrix();
      p.norm = p.a.trace();
      break;
    default:
      p.basis = top_right_singular_basis(p.a, max_rank).matrix();
      p.norm = p.a.norm();
      break;
  }
  require(p.norm > 0.0, Errc::invalid_params, "matrix is zero");
  return p;
}

Selection select_indices(const Problem& p, const std::string& method, Index rank, RandomStream& rng) {
  require(rank >= 1 && rank <= p.basis.cols(), Errc::invalid_argument, "rank out of range");
  const auto v = leading_basis(p, rank);
  switch (p.task) {
    case Task::cssp:
      if (method == "arp") return {arp_select(v, rng).indices, {}};
      if (method == "arp_prototype") return {arp_select_prototype(v, rng).indices, {}};
      if (method == "osinsky") return {osinsky_select(p.a, v).indices, {}};
      if (method == "greedy_leverage") return {greedy_leverage_select(v).indices, {}};
      if (method == "leverage") return {leverage_select(v, rng), {}};
      if (method == "column_norm") return {column_norm_select(p.a, rank, rng), {}};
      if (method == "uniform") return {uniform_select(p.a.cols(), rank, rng), {}};
      if (method == "cpqr") return {cpqr_select(p.a, rank), {}};
      break;
    case Task::deim:
      if (method == "arp") return {arp_select(v, rng).indices, {}};
      if (method == "uniform") return {uniform_select(v.rows(), rank, rng), {}};
      if (method == "leverage") return {leverage_select(v, rng), {}};
      if (method == "greedy_leverage") return {greedy_leverage_select(v).indices, {}};
      break;
    case Task::cross:
      if (method == "arp") {
        const auto model = cross_build(p.a, v, rng);
        return {model.cols(), model.rows()};
      }
      if (method == "aca_full" || method == "aca_partial") {
        auto res = aca_select(p.a, rank, method == "aca_full" ? AcaMode::full : AcaMode::partial, rng);
        return {std::move(res.cols), std::move(res.rows)};
      }
      break;
    case Task::nystrom:
      if (method == "arp") return {arp_select(v, rng).indices, {}};
      if (method == "det") return {det_nystrom_select(p.a, v).indices, {}};
      if (method == "rp_cholesky") return {rp_cholesky_select(p.a, rank, rng).indices, {}};
      if (method == "leverage") return {leverage_select(v, rng), {}};
      if (method == "uniform") return {uniform_select(p.a.cols(), rank, rng), {}};
      if (method == "aca_full") return {aca_select(p.a, rank, AcaMode::full, rng).cols, {}};
      break;
  }
  throw Error(Errc::invalid_params,
              "method '" + method + "' is not available for task '" + std::string(to_string(p.task)) + "'");
}

double trial_error(const Problem& p, const std::string& method, Index rank, RandomStream& rng) {
  const Selection s = select_indices(p, method, rank, rng);
  switch (p.task) {
    case Task::cssp:
      return orthogonal_cssp_error(p.a, s.cols) / p.norm;
    case Task::cross: {
      // One formula for every method: A(:,J)·A(I,J)^{-1}·A(I,:) through Q_J.
      const auto model = cross_from_indices(p.a, *s.rows, s.cols);
      return (p.a - model.approximation()).norm() / p.norm;
    }
    case Task::nystrom: {
      const auto model = nystrom_from_indices(p.a, s.cols);
      return std::max(0.0, model.residual_trace_diag(p.a)) / p.norm;
    }
    case Task::deim: {
      const auto v = leading_basis(p, rank);
      const DeimModel<double> model(v, arp_replay(v, s.cols));
      const RealMatrix recon = model.reconstruct_columns(p.test);
      std::vector<double> rel(static_cast<std::size_t>(p.test.cols()));
      for (Index j = 0; j < p.test.cols(); ++j)
        rel[static_cast<std::size_t>(j)] = (p.test.col(j) - recon.col(j)).norm() / p.test.col(j).norm();
      return pairwise_sum(rel) / static_cast<double>(rel.size());
    }
  }
  return kNaN;
}

TrimmedBand trimmed_band(std::vector<double> errors) {
  require(!errors.empty(), Errc::invalid_argument, "no trial errors");
  std::sort(errors.begin(), errors.end());
  // A constant sample reports its value exactly rather than a rounded mean.
  const double mean = errors.front() == errors.back() ? errors.front()
                                                      : pairwise_sum(errors) / static_cast<double>(errors.size());
  const std::size_t drop = errors.size() / 10;
  return {mean, errors[drop], errors[errors.size() - 1 - drop]};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Problem p = load_problem(config.matrix, config.task, config.ranks.back(), config.seed);
  ExperimentResult out;
  RandomStream root(config.seed, 0);
  auto cell_streams = root.split(config.methods.size() * config.ranks.size());
  std::size_t cell = 0;
  for (const auto& method : config.methods) {
    for (Index rank : config.ranks) {
      RandomStream& stream = cell_streams[cell++];
      ResultRow row{std::string(to_string(config.task)), p.label, method, rank, config.trials, kNaN, kNaN, kNaN, 0.0};
      const auto start = std::chrono::steady_clock::now();
      if (is_absent_series(config.task, method)) {
        out.failures.push_back(method + " rank " + std::to_string(rank) + ": series not implemented (absent)");
      } else {
        try {
          std::vector<double> errors;
          if (is_deterministic(method)) {
            errors.assign(config.trials, trial_error(p, method, rank, stream));
          } else {
            errors = run_trials(
                stream, config.trials, [&](RandomStream& s) { return trial_error(p, method, rank, s); },
                config.threads);
          }
          const auto band = trimmed_band(std::move(errors));
          row.mean_rel_err = band.mean;
          row.p10_rel_err = band.low;
          row.p90_rel_err = band.high;
        } catch (const Error& e) {
          out.failures.push_back(method + " rank " + std::to_string(rank) + ": " + e.what());
        }
      }
      if (config.timing)
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace arp::bench
