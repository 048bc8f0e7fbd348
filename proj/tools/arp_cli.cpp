// Command-line front end: index selection, benchmark sweeps and the
// verification suite.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "arp/bench/csv.hpp"
#include "arp/bench/experiment.hpp"
#include "arp/bench/verify.hpp"

namespace {

using namespace arp;
using namespace arp::bench;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;

struct SweepFlags {
  std::string config_path;
  std::string matrix;
  std::string task;
  std::vector<std::string> methods;
  std::vector<Index> ranks;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string out;
  unsigned threads = 0;
  bool timing = false;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON experiment config; flags below override its entries");
  cmd->add_option("--matrix", f.matrix, "Matrix Market path, or gen:<name>[:key=value,...]");
  cmd->add_option("--task", f.task, "cssp | deim | cross | nystrom");
  cmd->add_option("--methods", f.methods, "selection methods")->delimiter(',');
  cmd->add_option("--ranks", f.ranks, "target ranks, strictly increasing")->delimiter(',');
  cmd->add_option("--seed", f.seed, "64-bit seed");
}

bool given(const CLI::App& cmd, const std::string& name) {
  const CLI::Option* opt = cmd.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

ExperimentConfig build_config(const CLI::App& cmd, const SweepFlags& f) {
  ExperimentConfig c = f.config_path.empty() ? ExperimentConfig{} : load_config(f.config_path);
  if (!f.matrix.empty()) c.matrix = MatrixSource::parse(f.matrix);
  if (!f.task.empty()) c.task = parse_task(f.task);
  if (!f.methods.empty()) c.methods = f.methods;
  if (!f.ranks.empty()) c.ranks = f.ranks;
  if (given(cmd, "--trials")) c.trials = f.trials;
  if (given(cmd, "--seed")) c.seed = f.seed;
  if (!f.out.empty()) c.output_path = f.out;
  if (given(cmd, "--threads")) c.threads = f.threads;
  if (f.timing) c.timing = true;
  c.validate();
  return c;
}

int run_select(const CLI::App& cmd, const SweepFlags& f) {
  ExperimentConfig c = build_config(cmd, f);
  const Problem p = load_problem(c.matrix, c.task, c.ranks.back(), c.seed);
  RandomStream root(c.seed, 0);
  for (const auto& method : c.methods) {
    for (Index rank : c.ranks) {
      if (is_absent_series(c.task, method)) {
        std::cerr << method << " rank " << rank << ": series not implemented (absent)\n";
        continue;
      }
      RandomStream rng = root.split_one();
      const Selection s = select_indices(p, method, rank, rng);
      std::cout << method << " r=" << rank << " cols:";
      for (Index j : s.cols) std::cout << ' ' << j;
      if (s.rows) {
        std::cout << " rows:";
        for (Index i : *s.rows) std::cout << ' ' << i;
      }
      std::cout << '\n';
    }
  }
  return kExitOk;
}

int run_bench(const CLI::App& cmd, const SweepFlags& f) {
  const ExperimentConfig c = build_config(cmd, f);
  const ExperimentResult res = run_experiment(c);
  for (const auto& msg : res.failures) std::cerr << "failed cell: " << msg << '\n';
  if (c.output_path.empty() || c.output_path == "-") {
    std::cout << format_csv(res.rows);
  } else {
    emit_csv(res.rows, c.output_path);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive randomized pivoting: selection, benchmarks and verification"};
  app.require_subcommand(1);

  SweepFlags select_flags;
  auto* select = app.add_subcommand("select", "print the indices chosen by each method and rank");
  add_sweep_flags(select, select_flags);

  SweepFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "run a Monte Carlo sweep and write the error table as CSV");
  add_sweep_flags(bench, bench_flags);
  bench->add_option("--trials", bench_flags.trials, "trials per (method, rank) cell");
  bench->add_option("--out", bench_flags.out, "CSV output path (default: stdout)");
  bench->add_option("--threads", bench_flags.threads, "worker threads per cell; output does not depend on it");
  bench->add_flag("--timing", bench_flags.timing, "fill the seconds column with wall time (breaks byte-identity)");

  VerifyOptions verify_opts;
  bool quick = false, strict = false;
  auto* verify = app.add_subcommand("verify", "run the bound/equality suite; exit 2 if any check fails");
  verify->add_option("--seed", verify_opts.seed, "64-bit seed");
  verify->add_option("--threads", verify_opts.threads, "worker threads for Monte Carlo trials");
  verify->add_option("--only", verify_opts.only, "run only these check ids")->delimiter(',');
  verify->add_flag("--quick", quick, "a fifth of the trials; noisier");
  verify->add_flag("--strict", strict, "treat known gaps as failures too");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*select) return run_select(*select, select_flags);
    if (*bench) return run_bench(*bench, bench_flags);
    if (*verify) {
      if (quick) verify_opts.scale = 0.2;
      if (verify_opts.threads < 1) verify_opts.threads = 1;
      const auto results =
          run_verification(verify_opts, [](const CriterionResult& r) { std::cout << format_result(r) << std::endl; });
      const bool all_pass = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
      return (strict ? all_pass : verification_ok(results)) ? kExitOk : kExitVerify;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
