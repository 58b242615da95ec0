#include "mgmc/solver.hpp"

#include "mgmc/rng.hpp"

#include <chrono>
#include <cmath>

namespace mgmc {

void SolverOptions::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw std::invalid_argument("armijo_c must be in (0,1)");
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("shrink must be in (0,1)");
  if (!(alpha_init_f > 0.0) || !(alpha_init_theta > 0.0)) {
    throw std::invalid_argument("initial step sizes must be > 0");
  }
  if (!(alpha_min > 0.0)) throw std::invalid_argument("alpha_min must be > 0");
}

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::converged: return "converged";
    case TerminationReason::max_iterations: return "max_iterations";
    case TerminationReason::stalled: return "stalled";
  }
  return "unknown";
}

CVector project_power_ball(const CVector& f_hat, double p_t) {
  if (!(p_t > 0.0)) throw std::invalid_argument("transmit power must be > 0");
  const double budget = std::sqrt(p_t);
  const double norm = f_hat.norm();
  if (norm <= budget) return f_hat;
  return f_hat * (budget / norm);
}

CVector project_unit_modulus(const CVector& theta_hat) {
  CVector out(theta_hat.size());
  for (Eigen::Index m = 0; m < theta_hat.size(); ++m) {
    const double mag = std::abs(theta_hat[m]);
    out[m] = (mag == 0.0) ? Complex(1.0, 0.0) : theta_hat[m] / mag;
  }
  return out;
}

LineSearchResult armijo_search(const std::function<double(const CVector&)>& objective,
                               const CVector& x, double obj_x, const CVector& grad,
                               const std::function<CVector(const CVector&)>& project,
                               double alpha_init, double c, double shrink,
                               double alpha_min) {
  if (!(alpha_init > 0.0)) throw std::invalid_argument("alpha_init must be > 0");
  CVector step(x.size());
  for (double alpha = alpha_init; alpha >= alpha_min; alpha *= shrink) {
    step = x;
    step.noalias() += alpha * grad;
    CVector candidate = project(step);
    const double obj_next = objective(candidate);
    if (!std::isfinite(obj_next)) {
      throw NumericalError("line search probe produced a non-finite objective");
    }
    const double step_sq = (candidate - x).squaredNorm();
    if (obj_next >= obj_x + (c / alpha) * step_sq) {
      return {alpha, std::move(candidate), obj_next};
    }
  }
  return {0.0, x, obj_x};
}

std::pair<BeamformerStack, PhaseVector> initialize(const ChannelSet& ch, double p_t,
                                                   std::uint64_t seed) {
  if (!(p_t > 0.0)) throw std::invalid_argument("transmit power must be > 0");
  const int n = ch.num_tx_antennas();
  const int m = ch.num_tiles();
  const int groups = ch.num_groups();

  rng::Stream stream(seed, /*stream_id=*/0x1417);
  CVector theta(m);
  for (int i = 0; i < m; ++i) {
    const double phi = stream.uniform(0.0, 2.0 * M_PI);
    theta[i] = std::polar(1.0, phi);
  }
  PhaseVector theta0(std::move(theta));

  const EffectiveChannels z(ch, theta0);
  CVector f(static_cast<Eigen::Index>(n) * groups);
  int u = 0;
  for (int g = 0; g < groups; ++g) {
    CRowVector mean = CRowVector::Zero(n);
    for (int k = 0; k < ch.group_size(g); ++k, ++u) mean += z.of(u);
    mean /= static_cast<double>(ch.group_size(g));
    auto block = f.segment(static_cast<Eigen::Index>(g) * n, n);
    if (mean.norm() == 0.0) {
      for (int i = 0; i < n; ++i) block[i] = stream.cnormal();
    } else {
      block = mean.adjoint();  // matched filter to the group mean channel
    }
  }
  f *= std::sqrt(p_t) / f.norm();
  return {BeamformerStack(std::move(f), n, groups), std::move(theta0)};
}

SolveTrace apg_solve(const ChannelSet& ch, double p_t, const SolverOptions& opts) {
  auto [f0, theta0] = initialize(ch, p_t, opts.seed);
  return apg_solve(ch, p_t, opts, f0, theta0);
}

SolveTrace apg_solve(const ChannelSet& ch, double p_t, const SolverOptions& opts,
                     const BeamformerStack& f0, const PhaseVector& theta0) {
  opts.validate();
  detail::check_dimensions(ch, f0);
  detail::check_dimensions(ch, theta0);
  if (!(p_t > 0.0)) throw std::invalid_argument("transmit power must be > 0");
  const SmoothingParam tau(opts.tau);
  const int n = ch.num_tx_antennas();
  const int groups = ch.num_groups();

  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&t_start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  BeamformerStack f = f0;
  PhaseVector theta = theta0;
  EffectiveChannels z(ch, theta);
  EffectiveChannels z_probe = z;  // scratch for phase line-search probes
  LinkGains gains = link_gains(ch, z, f);
  LinkGains gains_probe = gains;  // scratch for both line searches
  double obj = smoothed_from(ch, gains, tau);

  std::vector<IterationRecord> records;
  records.reserve(static_cast<std::size_t>(opts.max_iters) + 1);
  records.push_back({0, obj, sum_rate_from(ch, gains), 0.0, 0.0, elapsed(), f.norm(),
                     theta.max_modulus_error()});

  const auto project_f = [p_t](const CVector& x) { return project_power_ball(x, p_t); };
  const auto project_th = [](const CVector& x) { return project_unit_modulus(x); };

  double warm_f = opts.alpha_init_f;
  double warm_theta = opts.alpha_init_theta;
  TerminationReason reason = TerminationReason::max_iterations;
  int iter = 0;

  for (iter = 1; iter <= opts.max_iters; ++iter) {
    const double obj_prev = obj;

    // Beamformer step at (f, theta); the phase cache z stays valid.
    const CVector gf = grad_f_cached(ch, z, gains, tau);
    const auto f_obj = [&](const CVector& x) {
      update_link_gains(ch, z, x, gains_probe);
      return smoothed_from(ch, gains_probe, tau);
    };
    auto ls_f = armijo_search(f_obj, f.stacked(), obj, gf, project_f, warm_f,
                              opts.armijo_c, opts.shrink, opts.alpha_min);
    if (ls_f.alpha > 0.0) {
      f = BeamformerStack(std::move(ls_f.x_next), n, groups);
      std::swap(gains, gains_probe);  // last probe evaluated IS the accepted point
      warm_f = std::min(2.0 * ls_f.alpha, opts.alpha_init_f);
    } else {
      warm_f = opts.alpha_init_f;  // retry the full range once theta has moved
    }

    // Phase step at the fresh beamformer.
    const CVector gt = grad_theta_cached(ch, gains, f, tau);
    const auto th_obj = [&](const CVector& x) {
      z_probe.recompute(ch, x);
      update_link_gains(ch, z_probe, f.stacked(), gains_probe);
      return smoothed_from(ch, gains_probe, tau);
    };
    auto ls_th = armijo_search(th_obj, theta.entries(), ls_f.obj_next, gt, project_th,
                               warm_theta, opts.armijo_c, opts.shrink, opts.alpha_min);
    if (ls_th.alpha > 0.0) {
      theta = PhaseVector(std::move(ls_th.x_next));
      std::swap(z, z_probe);
      std::swap(gains, gains_probe);
      warm_theta = std::min(2.0 * ls_th.alpha, opts.alpha_init_theta);
    } else {
      warm_theta = opts.alpha_init_theta;
    }
    obj = ls_th.obj_next;

    records.push_back({iter, obj, sum_rate_from(ch, gains), ls_f.alpha, ls_th.alpha,
                       elapsed(), f.norm(), theta.max_modulus_error()});

    if (ls_f.alpha == 0.0 && ls_th.alpha == 0.0) {
      reason = TerminationReason::stalled;
      break;
    }
    if (std::abs(obj - obj_prev) / std::max(1.0, std::abs(obj_prev)) < opts.tol) {
      reason = TerminationReason::converged;
      break;
    }
  }
  if (iter > opts.max_iters) iter = opts.max_iters;

  return SolveTrace{std::move(records), std::move(f), std::move(theta), iter, reason};
}

}  // namespace mgmc
