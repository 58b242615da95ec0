#pragma once

#include "mgmc/types.hpp"

namespace mgmc {

/// Effective channel z_{k,g} = h_direct + (h_irs .* theta^T) * H_tx_irs seen
/// by user (k,g). The diagonal phase matrix is never materialized.
CRowVector effective_channel(const ChannelSet& ch, const PhaseVector& theta, int k, int g);

/// Effective channels of every user at one phase configuration, stacked as a
/// K x N matrix. Computing the cache costs O(K*M*N); beamformer-only updates
/// reuse it, and recompute() refreshes it in place after a phase move.
class EffectiveChannels {
 public:
  EffectiveChannels(const ChannelSet& ch, const PhaseVector& theta);

  void recompute(const ChannelSet& ch, const CVector& theta);

  auto of(int u) const { return z_.row(u); }
  const CMatrix& rows() const { return z_; }
  int num_users() const { return static_cast<int>(z_.rows()); }

 private:
  CMatrix z_;       // K x N
  CMatrix scaled_;  // K x M scratch, rows h_irs .* theta^T
};

/// Received amplitudes z_u * f_g for every (user, group) pair, plus the
/// per-user total power and rate derived from them. Rates are in nats/s/Hz;
/// the unit noise term comes from the channel normalization.
struct LinkGains {
  CMatrix zf;                 // K x G, entry (u, g) = z_u * f_g
  Eigen::VectorXd power_full; // per user, sum_g |z_u f_g|^2
  Eigen::VectorXd rate;       // per user, nats/s/Hz
};

LinkGains link_gains(const ChannelSet& ch, const EffectiveChannels& z,
                     const BeamformerStack& f);

/// In-place variant for hot loops; reuses the matrices in `gains`.
void update_link_gains(const ChannelSet& ch, const EffectiveChannels& z, const CVector& f,
                       LinkGains& gains);

/// Sum over groups of the per-group minimum rate, in nats/s/Hz.
double sum_rate_from(const ChannelSet& ch, const LinkGains& gains);

/// Rate of user (k,g) in nats/s/Hz: ln(1 + |z f_g|^2 / (1 + sum_{l != g} |z f_l|^2)).
double user_rate(const ChannelSet& ch, const BeamformerStack& f,
                 const PhaseVector& theta, int k, int g);

/// Per-user rates, per-group minima and their sum.
RateBreakdown rate_breakdown(const ChannelSet& ch, const BeamformerStack& f,
                             const PhaseVector& theta);

namespace detail {
void check_dimensions(const ChannelSet& ch, const BeamformerStack& f);
void check_dimensions(const ChannelSet& ch, const PhaseVector& theta);
}  // namespace detail

}  // namespace mgmc
