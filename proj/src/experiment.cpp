#include "mgmc/experiment.hpp"

#include "mgmc/rng.hpp"
#include "mgmc/version.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

namespace mgmc {

namespace {

constexpr double kLn2 = 0.6931471805599453;

std::string fmt(double v) {
  char buf[32];
  snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Runs fn(0..count-1) on up to `threads` workers; the caller stores results
// by index so the outcome is order-independent. First exception wins.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min(threads, count);
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

SolveTrace solve_one(const ExperimentSpec& spec, const ScenarioConfig& sc, int realization) {
  try {
    const ChannelSet ch =
        generate_channels(sc.geometry, sc.budget, sc.num_tx_antennas, sc.num_tiles,
                          sc.group_sizes, spec.seed, static_cast<std::uint64_t>(realization));
    SolverOptions opts = spec.config.solver;
    opts.seed = solver_seed_for(spec.seed, realization);
    return apg_solve(ch, sc.pt_watts(), opts);
  } catch (const std::exception& e) {
    throw std::runtime_error("realization " + std::to_string(realization) +
                             " failed: " + e.what());
  }
}

std::string header(const ExperimentSpec& spec) {
  std::string out;
  out += std::string("# ") + kToolName + " " + kVersion + "\n";
  out += "# experiment=" + to_string(spec.kind) + " seed=" + std::to_string(spec.seed) +
         " realizations=" + std::to_string(spec.num_realizations) + "\n";
  out += "# " + spec.config.echo() + "\n";
  return out;
}

void maybe_write(const ExperimentSpec& spec, const std::string& csv) {
  if (spec.output_path.empty()) return;
  std::ofstream out(spec.output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + spec.output_path);
  out << csv;
  if (!out) throw std::runtime_error("failed writing output file: " + spec.output_path);
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "convergence") return ExperimentKind::convergence;
  if (name == "sweep-pt") return ExperimentKind::sweep_pt;
  if (name == "sweep-m") return ExperimentKind::sweep_m;
  if (name == "runtime") return ExperimentKind::runtime;
  throw std::invalid_argument(
      "unknown experiment '" + name + "'; expected convergence|sweep-pt|sweep-m|runtime");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::convergence: return "convergence";
    case ExperimentKind::sweep_pt: return "sweep-pt";
    case ExperimentKind::sweep_m: return "sweep-m";
    case ExperimentKind::runtime: return "runtime";
  }
  return "unknown";
}

void ExperimentSpec::validate() const {
  if (num_realizations < 1) throw std::invalid_argument("realizations must be >= 1");
  if (parallel < 1) throw std::invalid_argument("parallel must be >= 1");
  config.scenario.validate();
  config.solver.validate();
  if (kind == ExperimentKind::sweep_pt && config.sweep_pt_dbm.empty()) {
    throw std::invalid_argument("sweep_pt_dbm must be nonempty");
  }
  if ((kind == ExperimentKind::sweep_m || kind == ExperimentKind::runtime) &&
      config.sweep_m.empty()) {
    throw std::invalid_argument("sweep_m must be nonempty");
  }
}

std::uint64_t solver_seed_for(std::uint64_t seed, int realization) {
  return rng::derive(seed, 0x696E6974ULL + static_cast<std::uint64_t>(realization));
}

std::string run_convergence(const ExperimentSpec& spec) {
  spec.validate();
  const int reals = spec.num_realizations;
  std::vector<std::optional<SolveTrace>> traces(reals);
  parallel_for(reals, spec.parallel,
               [&](int r) { traces[r] = solve_one(spec, spec.config.scenario, r); });

  std::size_t rows = 0;
  for (const auto& t : traces) rows = std::max(rows, t->iterations.size());

  std::string csv = header(spec) + "iter,mean_smoothed_bps_hz,mean_true_bps_hz\n";
  for (std::size_t i = 0; i < rows; ++i) {
    double smoothed = 0.0;
    double true_rate = 0.0;
    for (const auto& t : traces) {
      const auto& rec = (i < t->iterations.size()) ? t->iterations[i] : t->iterations.back();
      smoothed += rec.smoothed;
      true_rate += rec.true_sum_rate;
    }
    smoothed /= reals * kLn2;
    true_rate /= reals * kLn2;
    csv += std::to_string(i) + "," + fmt(smoothed) + "," + fmt(true_rate) + "\n";
  }
  maybe_write(spec, csv);
  return csv;
}

std::string run_sweep_pt(const ExperimentSpec& spec) {
  spec.validate();
  const auto& grid = spec.config.sweep_pt_dbm;
  const int reals = spec.num_realizations;
  const int points = static_cast<int>(grid.size());
  std::vector<double> mean_rate(points, 0.0);

  std::vector<double> final_rate(static_cast<std::size_t>(points) * reals, 0.0);
  parallel_for(points * reals, spec.parallel, [&](int job) {
    const int p = job / reals;
    const int r = job % reals;
    ScenarioConfig sc = spec.config.scenario;
    sc.pt_dbm = grid[p];
    const SolveTrace trace = solve_one(spec, sc, r);
    final_rate[job] = trace.iterations.back().true_sum_rate;
  });
  for (int p = 0; p < points; ++p) {
    double acc = 0.0;
    for (int r = 0; r < reals; ++r) acc += final_rate[static_cast<std::size_t>(p) * reals + r];
    mean_rate[p] = acc / (reals * kLn2);
  }

  std::string csv = header(spec) + "pt_dbm,mean_rate_bps_hz\n";
  for (int p = 0; p < points; ++p) {
    csv += fmt(grid[p]) + "," + fmt(mean_rate[p]) + "\n";
  }
  maybe_write(spec, csv);
  return csv;
}

std::string run_sweep_m(const ExperimentSpec& spec) {
  spec.validate();
  const auto& grid = spec.config.sweep_m;
  const int reals = spec.num_realizations;
  const int points = static_cast<int>(grid.size());

  std::vector<double> final_rate(static_cast<std::size_t>(points) * reals, 0.0);
  parallel_for(points * reals, spec.parallel, [&](int job) {
    const int p = job / reals;
    const int r = job % reals;
    ScenarioConfig sc = spec.config.scenario;
    sc.num_tiles = grid[p];
    const SolveTrace trace = solve_one(spec, sc, r);
    final_rate[job] = trace.iterations.back().true_sum_rate;
  });

  std::string csv = header(spec) + "m,mean_rate_bps_hz\n";
  for (int p = 0; p < points; ++p) {
    double acc = 0.0;
    for (int r = 0; r < reals; ++r) acc += final_rate[static_cast<std::size_t>(p) * reals + r];
    csv += std::to_string(grid[p]) + "," + fmt(acc / (reals * kLn2)) + "\n";
  }
  maybe_write(spec, csv);
  return csv;
}

std::string run_runtime(const ExperimentSpec& spec) {
  spec.validate();
  const auto& grid = spec.config.sweep_m;
  const int reals = spec.num_realizations;

  std::string csv = header(spec) + "m,mean_seconds_per_iteration,mean_total_seconds\n";
  for (int m : grid) {
    ScenarioConfig sc = spec.config.scenario;
    sc.num_tiles = m;
    solve_one(spec, sc, 0);  // warm-up, excluded from the averages
    double per_iter = 0.0;
    double total = 0.0;
    for (int r = 0; r < reals; ++r) {
      const SolveTrace trace = solve_one(spec, sc, r);
      const double seconds = trace.iterations.back().wall_seconds;
      total += seconds;
      per_iter += seconds / std::max(1, trace.iteration_count);
    }
    csv += std::to_string(m) + "," + fmt(per_iter / reals) + "," + fmt(total / reals) + "\n";
  }
  maybe_write(spec, csv);
  return csv;
}

std::string run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::convergence: return run_convergence(spec);
    case ExperimentKind::sweep_pt: return run_sweep_pt(spec);
    case ExperimentKind::sweep_m: return run_sweep_m(spec);
    case ExperimentKind::runtime: return run_runtime(spec);
  }
  throw std::logic_error("unhandled experiment kind");
}

}  // namespace mgmc
