#pragma once

#include "mgmc/config.hpp"

#include <string>

namespace mgmc {

enum class ExperimentKind { convergence, sweep_pt, sweep_m, runtime };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

/// One batch experiment: which curve to produce, the shared configuration,
/// and the Monte-Carlo extent. Realization r always consumes the substream
/// keyed by (seed, r), so results do not depend on the thread count.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::convergence;
  ExperimentConfig config;
  int num_realizations = 20;
  std::uint64_t seed = 1;
  int parallel = 1;
  std::string output_path;

  void validate() const;
};

/// Per-iteration mean of the smoothed and true sum rate across realizations
/// (bps/Hz). Traces that terminated early are padded with their final value.
/// Columns: iter, mean_smoothed_bps_hz, mean_true_bps_hz.
std::string run_convergence(const ExperimentSpec& spec);

/// Mean achieved sum rate per transmit power grid point (bps/Hz).
/// Columns: pt_dbm, mean_rate_bps_hz.
std::string run_sweep_pt(const ExperimentSpec& spec);

/// Mean achieved sum rate per tile-count grid point; m = 0 degenerates to
/// the no-IRS baseline. Columns: m, mean_rate_bps_hz.
std::string run_sweep_m(const ExperimentSpec& spec);

/// Wall-clock cost per tile-count grid point, measured with the steady
/// monotonic clock (nanosecond tick) after one excluded warm-up solve.
/// Columns: m, mean_seconds_per_iteration, mean_total_seconds.
std::string run_runtime(const ExperimentSpec& spec);

/// Dispatch on spec.kind; writes the CSV to spec.output_path when set and
/// returns it. Any solve failure aborts with the realization index attached.
std::string run_experiment(const ExperimentSpec& spec);

/// Solver seed used for realization r of an experiment seeded with `seed`.
std::uint64_t solver_seed_for(std::uint64_t seed, int realization);

}  // namespace mgmc
