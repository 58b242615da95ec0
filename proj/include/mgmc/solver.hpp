#pragma once

#include "mgmc/smoothing.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace mgmc {

struct SolverOptions {
  double tau = 50.0;
  double tol = 1e-5;          // relative change of the smoothed objective
  int max_iters = 2000;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double alpha_init_f = 1.0;   // per-iteration cap on the warm-started step
  double alpha_init_theta = 1.0;
  double alpha_min = 1e-12;
  std::uint64_t seed = 1;

  void validate() const;
};

enum class TerminationReason { converged, max_iterations, stalled };

std::string to_string(TerminationReason reason);

struct IterationRecord {
  int iter = 0;                 // 0 is the initial point
  double smoothed = 0.0;        // nats/s/Hz
  double true_sum_rate = 0.0;   // nats/s/Hz
  double alpha_f = 0.0;
  double alpha_theta = 0.0;
  double wall_seconds = 0.0;    // cumulative since solve start
  double f_norm = 0.0;          // feasibility diagnostics
  double theta_modulus_error = 0.0;
};

struct SolveTrace {
  std::vector<IterationRecord> iterations;  // [0] = initial point
  BeamformerStack beamformer;               // final feasible point
  PhaseVector phases;
  int iteration_count = 0;                  // excludes the initial record
  TerminationReason reason = TerminationReason::converged;
};

/// Scale into the ball ||f|| <= sqrt(p_t); interior points are untouched.
CVector project_power_ball(const CVector& f_hat, double p_t);

/// Entrywise radial projection onto unit modulus; zero entries map to 1+0j.
CVector project_unit_modulus(const CVector& theta_hat);

struct LineSearchResult {
  double alpha = 0.0;   // 0 signals a stall (x returned unchanged)
  CVector x_next;
  double obj_next = 0.0;
};

/// Backtracking search over alpha in {alpha_init * shrink^i}: accepts the
/// first (largest) alpha whose projected step x+ = project(x + alpha*grad)
/// satisfies obj(x+) >= obj(x) + (c/alpha)*||x+ - x||^2. Returns alpha = 0
/// and x unchanged if nothing above alpha_min qualifies. Throws
/// NumericalError on a non-finite probe value.
LineSearchResult armijo_search(const std::function<double(const CVector&)>& objective,
                               const CVector& x, double obj_x, const CVector& grad,
                               const std::function<CVector(const CVector&)>& project,
                               double alpha_init, double c, double shrink,
                               double alpha_min = 1e-12);

/// Seeded starting point: uniform random phases, per-group matched filters to
/// the mean effective channel, stack scaled onto the power boundary.
std::pair<BeamformerStack, PhaseVector> initialize(const ChannelSet& ch, double p_t,
                                                   std::uint64_t seed);

/// Alternating projected gradient ascent on the smoothed sum rate: a
/// beamformer step against the power ball, then a phase step against the
/// unit-modulus set evaluated at the fresh beamformer. Both step sizes are
/// found by warm-started Armijo backtracking.
SolveTrace apg_solve(const ChannelSet& ch, double p_t, const SolverOptions& opts);

/// Same, from an explicit feasible starting point.
SolveTrace apg_solve(const ChannelSet& ch, double p_t, const SolverOptions& opts,
                     const BeamformerStack& f0, const PhaseVector& theta0);

}  // namespace mgmc
