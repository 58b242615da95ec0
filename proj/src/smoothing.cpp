#include "mgmc/smoothing.hpp"

#include <cmath>

namespace mgmc {

namespace {

// Interference power seen by user u: total minus the own-group term.
double interference_power(const ChannelSet& ch, const LinkGains& gains, int u) {
  return gains.power_full[u] - std::norm(gains.zf(u, ch.group_of(u)));
}

}  // namespace

double smoothed_from(const ChannelSet& ch, const LinkGains& gains, SmoothingParam tau) {
  double total = 0.0;
  int u = 0;
  for (int g = 0; g < ch.num_groups(); ++g) {
    const int kg = ch.group_size(g);
    double r_min = gains.rate[u];
    for (int k = 0; k < kg; ++k) r_min = std::min(r_min, gains.rate[u + k]);
    // Shifted LSE: the softmin equals r_min - ln(sum exp(-tau (R - r_min)))/tau,
    // with every exponent in [-tau*spread, 0].
    double acc = 0.0;
    for (int k = 0; k < kg; ++k) {
      acc += std::exp(-tau.tau * (gains.rate[u + k] - r_min));
    }
    total += r_min - std::log(acc) / tau.tau;
    u += kg;
  }
  return total;
}

Eigen::VectorXd softmin_weights(const ChannelSet& ch, const LinkGains& gains,
                                SmoothingParam tau) {
  Eigen::VectorXd w(ch.num_users());
  int u = 0;
  for (int g = 0; g < ch.num_groups(); ++g) {
    const int kg = ch.group_size(g);
    double r_min = gains.rate[u];
    for (int k = 0; k < kg; ++k) r_min = std::min(r_min, gains.rate[u + k]);
    double acc = 0.0;
    for (int k = 0; k < kg; ++k) {
      w[u + k] = std::exp(-tau.tau * (gains.rate[u + k] - r_min));
      acc += w[u + k];
    }
    for (int k = 0; k < kg; ++k) w[u + k] /= acc;
    u += kg;
  }
  return w;
}

double smoothed_sum_rate(const ChannelSet& ch, const BeamformerStack& f,
                         const PhaseVector& theta, SmoothingParam tau) {
  const EffectiveChannels z(ch, theta);
  return smoothed_from(ch, link_gains(ch, z, f), tau);
}

CVector grad_user_rate_own(const ChannelSet& ch, const BeamformerStack& f,
                           const PhaseVector& theta, int k, int i) {
  detail::check_dimensions(ch, f);
  const CRowVector z = effective_channel(ch, theta, k, i);
  double power = 0.0;
  for (int g = 0; g < ch.num_groups(); ++g) power += std::norm(Complex(z * f.block(g)));
  const Complex zf_i = z * f.block(i);
  return z.adjoint() * (zf_i / (1.0 + power));
}

CVector grad_user_rate_cross(const ChannelSet& ch, const BeamformerStack& f,
                             const PhaseVector& theta, int k, int l, int i) {
  detail::check_dimensions(ch, f);
  if (l == i) throw std::invalid_argument("cross gradient requires a victim group l != i");
  const CRowVector z = effective_channel(ch, theta, k, l);
  double power_full = 0.0;
  double power_own = 0.0;
  for (int g = 0; g < ch.num_groups(); ++g) {
    const double p = std::norm(Complex(z * f.block(g)));
    power_full += p;
    if (g == l) power_own = p;
  }
  const double bracket = 1.0 / (1.0 + power_full) - 1.0 / (1.0 + power_full - power_own);
  const Complex zf_i = z * f.block(i);
  return z.adjoint() * (bracket * zf_i);
}

CVector grad_f_cached(const ChannelSet& ch, const EffectiveChannels& z,
                      const LinkGains& gains, SmoothingParam tau) {
  const int n = ch.num_tx_antennas();
  const int groups = ch.num_groups();
  const int users = ch.num_users();
  const Eigen::VectorXd w = softmin_weights(ch, gains, tau);

  // Per user: a_u multiplies the own-group block, b_u every other block.
  Eigen::VectorXd own_coeff(users), cross_coeff(users);
  for (int u = 0; u < users; ++u) {
    const double inv_full = 1.0 / (1.0 + gains.power_full[u]);
    const double inv_intf = 1.0 / (1.0 + interference_power(ch, gains, u));
    own_coeff[u] = w[u] * inv_full;
    cross_coeff[u] = w[u] * (inv_full - inv_intf);
  }

  CVector grad = CVector::Zero(static_cast<Eigen::Index>(n) * groups);
  const Complex* zp = z.rows().data();  // column-major, users x n
  for (int i = 0; i < groups; ++i) {
    Complex* block = grad.data() + static_cast<std::ptrdiff_t>(i) * n;
    for (int u = 0; u < users; ++u) {
      const double coeff = (ch.group_of(u) == i) ? own_coeff[u] : cross_coeff[u];
      const Complex scale = coeff * gains.zf(u, i);
      const Complex* zcol = zp + u;
      for (int a = 0; a < n; ++a, zcol += users) {
        block[a] += std::conj(*zcol) * scale;
      }
    }
  }
  return grad;
}

CVector grad_f_smoothed(const ChannelSet& ch, const BeamformerStack& f,
                        const PhaseVector& theta, SmoothingParam tau) {
  const EffectiveChannels z(ch, theta);
  return grad_f_cached(ch, z, link_gains(ch, z, f), tau);
}

CVector grad_theta_quadratic(const ChannelSet& ch, const BeamformerStack& f,
                             const PhaseVector& theta, int k, int g, int j) {
  detail::check_dimensions(ch, f);
  const int u = ch.user_index(k, g);
  if (j < 0 || j >= ch.num_groups()) throw std::invalid_argument("beam index out of range");
  const CRowVector z = effective_channel(ch, theta, k, g);
  const Complex zf = z * f.block(j);
  const CVector hf = ch.tx_irs() * f.block(j);  // M x 1
  return ch.irs_flat(u).conjugate().transpose().cwiseProduct(zf * hf.conjugate());
}

CVector grad_theta_cached(const ChannelSet& ch, const LinkGains& gains,
                          const BeamformerStack& f, SmoothingParam tau) {
  const int m = ch.num_tiles();
  const int groups = ch.num_groups();
  const int users = ch.num_users();
  const Eigen::VectorXd w = softmin_weights(ch, gains, tau);

  CMatrix hf(m, groups);  // column j = H_ts f_j, shared by every user
  for (int j = 0; j < groups; ++j) hf.col(j).noalias() = ch.tx_irs() * f.block(j);

  // Single fused pass per user; per-tile work is
  //   grad_m += conj(irs_m) * w * (a * conj(s_full_m) - b * conj(s_intf_m)),
  // with s_full = sum_j conj(z f_j) (H f_j) and the own-group term removed
  // for the interference part.
  CVector grad = CVector::Zero(m);
  Complex* gp = grad.data();
  const Complex* hfp = hf.data();                 // column-major m x groups
  const Complex* irsp = ch.irs_rows().data();     // column-major users x m
  std::vector<Complex> czf(groups);
  for (int u = 0; u < users; ++u) {
    const int g = ch.group_of(u);
    const double inv_full = 1.0 / (1.0 + gains.power_full[u]);
    const double inv_intf = 1.0 / (1.0 + interference_power(ch, gains, u));
    for (int j = 0; j < groups; ++j) czf[j] = std::conj(gains.zf(u, j));
    for (int t = 0; t < m; ++t) {
      Complex s_full(0.0, 0.0);
      for (int j = 0; j < groups; ++j) {
        s_full += czf[j] * hfp[static_cast<std::ptrdiff_t>(j) * m + t];
      }
      const Complex s_intf = s_full - czf[g] * hfp[static_cast<std::ptrdiff_t>(g) * m + t];
      const Complex combo =
          w[u] * (inv_full * std::conj(s_full) - inv_intf * std::conj(s_intf));
      gp[t] += std::conj(irsp[static_cast<std::ptrdiff_t>(t) * users + u]) * combo;
    }
  }
  return grad;
}

CVector grad_theta_smoothed(const ChannelSet& ch, const BeamformerStack& f,
                            const PhaseVector& theta, SmoothingParam tau) {
  const EffectiveChannels z(ch, theta);
  return grad_theta_cached(ch, link_gains(ch, z, f), f, tau);
}

}  // namespace mgmc
