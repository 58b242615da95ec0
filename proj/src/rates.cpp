#include "mgmc/rates.hpp"

#include <cmath>

namespace mgmc {

namespace detail {

void check_dimensions(const ChannelSet& ch, const BeamformerStack& f) {
  if (f.num_antennas() != ch.num_tx_antennas() || f.num_groups() != ch.num_groups()) {
    throw std::invalid_argument("beamformer dimensions do not match channel set");
  }
}

void check_dimensions(const ChannelSet& ch, const PhaseVector& theta) {
  if (theta.size() != ch.num_tiles()) {
    throw std::invalid_argument("phase vector length does not match tile count");
  }
}

}  // namespace detail

CRowVector effective_channel(const ChannelSet& ch, const PhaseVector& theta, int k, int g) {
  detail::check_dimensions(ch, theta);
  const int u = ch.user_index(k, g);
  CRowVector z = ch.direct_flat(u);
  if (ch.num_tiles() > 0) {
    // (h_irs .* theta^T) * H, one M-vector product instead of diag(theta).
    z.noalias() +=
        (ch.irs_flat(u).array() * theta.entries().transpose().array()).matrix() * ch.tx_irs();
  }
  return z;
}

EffectiveChannels::EffectiveChannels(const ChannelSet& ch, const PhaseVector& theta)
    : z_(ch.num_users(), ch.num_tx_antennas()), scaled_(ch.num_users(), ch.num_tiles()) {
  detail::check_dimensions(ch, theta);
  recompute(ch, theta.entries());
}

void EffectiveChannels::recompute(const ChannelSet& ch, const CVector& theta) {
  if (theta.size() != ch.num_tiles()) {
    throw std::invalid_argument("phase vector length does not match tile count");
  }
  // One elementwise scaling plus one matrix product for all users at once.
  scaled_.array() = ch.irs_rows().array().rowwise() * theta.transpose().array();
  z_.noalias() = ch.direct_rows();
  z_.noalias() += scaled_ * ch.tx_irs();
}

LinkGains link_gains(const ChannelSet& ch, const EffectiveChannels& z,
                     const BeamformerStack& f) {
  detail::check_dimensions(ch, f);
  LinkGains gains;
  update_link_gains(ch, z, f.stacked(), gains);
  return gains;
}

void update_link_gains(const ChannelSet& ch, const EffectiveChannels& z, const CVector& f,
                       LinkGains& gains) {
  const int users = ch.num_users();
  const int groups = ch.num_groups();
  const int n = ch.num_tx_antennas();
  if (f.size() != static_cast<Eigen::Index>(n) * groups) {
    throw std::invalid_argument("beamformer dimensions do not match channel set");
  }
  gains.zf.resize(users, groups);
  gains.power_full.resize(users);
  gains.rate.resize(users);
  // Hand-rolled small product: this runs several times per solver iteration
  // and the operands are far too small for Eigen's blocked GEMM path.
  const Complex* zp = z.rows().data();  // column-major, users x n
  for (int g = 0; g < groups; ++g) {
    Complex* out = gains.zf.data() + static_cast<std::ptrdiff_t>(g) * users;
    for (int u = 0; u < users; ++u) out[u] = Complex(0.0, 0.0);
    const Complex* fg = f.data() + static_cast<std::ptrdiff_t>(g) * n;
    const Complex* zcol = zp;
    for (int a = 0; a < n; ++a, zcol += users) {
      const Complex c = fg[a];
      for (int u = 0; u < users; ++u) out[u] += zcol[u] * c;
    }
  }
  for (int u = 0; u < users; ++u) {
    double total = 0.0;
    for (int g = 0; g < groups; ++g) total += std::norm(gains.zf(u, g));
    gains.power_full[u] = total;
    const double own = std::norm(gains.zf(u, ch.group_of(u)));
    gains.rate[u] = std::log1p(own / (1.0 + total - own));
  }
}

double sum_rate_from(const ChannelSet& ch, const LinkGains& gains) {
  double total = 0.0;
  int u = 0;
  for (int g = 0; g < ch.num_groups(); ++g) {
    double worst = gains.rate[u];
    for (int k = 0; k < ch.group_size(g); ++k, ++u) {
      worst = std::min(worst, gains.rate[u]);
    }
    total += worst;
  }
  return total;
}

double user_rate(const ChannelSet& ch, const BeamformerStack& f,
                 const PhaseVector& theta, int k, int g) {
  detail::check_dimensions(ch, f);
  const CRowVector z = effective_channel(ch, theta, k, g);
  double own = 0.0;
  double interference = 0.0;
  for (int l = 0; l < ch.num_groups(); ++l) {
    const double p = std::norm(Complex(z * f.block(l)));
    if (l == g) {
      own = p;
    } else {
      interference += p;
    }
  }
  return std::log1p(own / (1.0 + interference));
}

RateBreakdown rate_breakdown(const ChannelSet& ch, const BeamformerStack& f,
                             const PhaseVector& theta) {
  detail::check_dimensions(ch, f);
  detail::check_dimensions(ch, theta);
  const EffectiveChannels z(ch, theta);
  const LinkGains gains = link_gains(ch, z, f);

  RateBreakdown out;
  out.per_user_rate.resize(ch.num_groups());
  out.per_group_rate.resize(ch.num_groups());
  int u = 0;
  for (int g = 0; g < ch.num_groups(); ++g) {
    out.per_user_rate[g].resize(ch.group_size(g));
    double worst = gains.rate[u];
    for (int k = 0; k < ch.group_size(g); ++k, ++u) {
      out.per_user_rate[g][k] = gains.rate[u];
      worst = std::min(worst, gains.rate[u]);
    }
    out.per_group_rate[g] = worst;
    out.sum_rate += worst;
  }
  return out;
}

}  // namespace mgmc
