#pragma once

#include "mgmc/rates.hpp"

namespace mgmc {

/// Sharpness of the log-sum-exp softmin; larger values track the true
/// per-group minimum more closely (gap at most ln(K_g)/tau per group).
struct SmoothingParam {
  explicit SmoothingParam(double t) : tau(t) {
    if (!(tau > 0.0)) throw std::invalid_argument("smoothing parameter must be > 0");
  }
  double tau;
};

/// Gradients of the smoothed sum rate with respect to the conjugate
/// variables, nabla = (d/dRe + j d/dIm)/2. Ascent steps are x + alpha*grad.
struct GradientPair {
  CVector grad_f;      // length N*G, blocked like the beamformer stack
  CVector grad_theta;  // length M
};

/// Smoothed sum rate -(1/tau) * sum_g ln sum_k exp(-tau R_{k,g}), in
/// nats/s/Hz. Evaluated with a per-group max shift so tau*R up to ~1e4
/// cannot overflow.
double smoothed_sum_rate(const ChannelSet& ch, const BeamformerStack& f,
                         const PhaseVector& theta, SmoothingParam tau);

/// Own-group rate gradient, z^H (z f_i) / (1 + sum_g |z f_g|^2) for user k of
/// group i. The denominator is the total received power, not the SINR one.
CVector grad_user_rate_own(const ChannelSet& ch, const BeamformerStack& f,
                           const PhaseVector& theta, int k, int i);

/// Gradient of victim user (k,l)'s rate with respect to block f_i, l != i.
/// The bracket factor is <= 0: raising interference lowers the rate.
CVector grad_user_rate_cross(const ChannelSet& ch, const BeamformerStack& f,
                             const PhaseVector& theta, int k, int l, int i);

/// Softmin-weighted assembly of the per-user beamformer gradients.
CVector grad_f_smoothed(const ChannelSet& ch, const BeamformerStack& f,
                        const PhaseVector& theta, SmoothingParam tau);

/// Phase gradient of the quadratic form |z_{k,g} f_j|^2. Computed as the
/// elementwise product conj(h_irs)^T .* ((z f_j) * conj(H f_j)); the M x M
/// outer product is never formed, keeping the term at O(M*N).
CVector grad_theta_quadratic(const ChannelSet& ch, const BeamformerStack& f,
                             const PhaseVector& theta, int k, int g, int j);

/// Softmin-weighted assembly of the per-user phase gradients.
CVector grad_theta_smoothed(const ChannelSet& ch, const BeamformerStack& f,
                            const PhaseVector& theta, SmoothingParam tau);

// Cached-path variants used by the solver: effective channels and link gains
// are computed once per phase update and shared between both gradients.

/// Smoothed sum rate from precomputed per-user rates.
double smoothed_from(const ChannelSet& ch, const LinkGains& gains, SmoothingParam tau);

/// Per-user softmin weights exp(-tau R)/sum within each group; nonnegative
/// and summing to 1 per group (max-shifted normalization).
Eigen::VectorXd softmin_weights(const ChannelSet& ch, const LinkGains& gains,
                                SmoothingParam tau);

CVector grad_f_cached(const ChannelSet& ch, const EffectiveChannels& z,
                      const LinkGains& gains, SmoothingParam tau);

CVector grad_theta_cached(const ChannelSet& ch, const LinkGains& gains,
                          const BeamformerStack& f, SmoothingParam tau);

}  // namespace mgmc
