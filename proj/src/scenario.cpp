#include "mgmc/scenario.hpp"

#include "mgmc/rng.hpp"

#include <cmath>
#include <numeric>

namespace mgmc {

namespace {

constexpr std::uint64_t kPlacementStream = 0x706C6163;  // node placement
constexpr std::uint64_t kFadingStream = 0x66616465;     // small-scale fading

std::uint64_t realization_key(std::uint64_t purpose, std::uint64_t realization) {
  return rng::mix(purpose ^ rng::mix(realization + 1));
}

double distance(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Point3 unit_direction(const Point3& from, const Point3& to) {
  const double d = distance(from, to);
  return {(to[0] - from[0]) / d, (to[1] - from[1]) / d, (to[2] - from[2]) / d};
}

// Tx array: N elements on a line along x, centered on tx_center.
Point3 tx_element_offset(int n, int num_antennas, double spacing) {
  return {(n - 0.5 * (num_antennas - 1)) * spacing, 0.0, 0.0};
}

// IRS panel: sqrt(M) x sqrt(M) grid in the x-z plane when M is a perfect
// square, else a single line of M tiles along x.
Point3 irs_element_offset(int m, int num_tiles, double spacing) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_tiles))));
  if (side * side == num_tiles && side > 0) {
    const int row = m / side;
    const int col = m % side;
    return {(col - 0.5 * (side - 1)) * spacing, 0.0, (row - 0.5 * (side - 1)) * spacing};
  }
  return {(m - 0.5 * (num_tiles - 1)) * spacing, 0.0, 0.0};
}

Complex steer(const Point3& dir, const Point3& offset, double wavelength) {
  const double phase =
      2.0 * M_PI / wavelength * (dir[0] * offset[0] + dir[1] * offset[1] + dir[2] * offset[2]);
  return std::polar(1.0, phase);
}

double rician_k_linear(double k_db) {
  if (std::isinf(k_db) && k_db < 0.0) return 0.0;
  return std::pow(10.0, k_db / 10.0);
}

// fade = sqrt(k/(1+k)) * los + sqrt(1/(1+k)) * CN(0,1); unit mean power when
// |los| = 1.
Complex rician_fade(Complex los, double k_linear, rng::Stream& stream) {
  const Complex scatter = stream.cnormal();
  return std::sqrt(k_linear / (1.0 + k_linear)) * los +
         std::sqrt(1.0 / (1.0 + k_linear)) * scatter;
}

}  // namespace

void GeometryConfig::validate() const {
  if (!(user_area_radius > 0.0)) throw std::invalid_argument("user area radius must be > 0");
  if (!(carrier_hz > 0.0)) throw std::invalid_argument("carrier frequency must be > 0");
  if (!(element_spacing > 0.0)) throw std::invalid_argument("element spacing must be > 0");
  if (!(min_user_separation >= 0.0)) throw std::invalid_argument("negative user separation");
  for (const auto* p : {&tx_center, &irs_center, &user_area_center}) {
    for (double c : *p) {
      if (!std::isfinite(c)) throw std::invalid_argument("non-finite node coordinate");
    }
  }
}

void LinkBudget::validate() const {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
}

double noise_power_dbm(const LinkBudget& budget) {
  budget.validate();
  return budget.noise_psd_dbm_hz + 10.0 * std::log10(budget.bandwidth_hz);
}

NodePositions place_nodes(const GeometryConfig& geom, const std::vector<int>& group_sizes,
                          std::uint64_t seed, std::uint64_t realization) {
  geom.validate();
  const int total = std::accumulate(group_sizes.begin(), group_sizes.end(), 0);
  rng::Stream stream(seed, realization_key(kPlacementStream, realization));

  NodePositions out;
  out.tx = geom.tx_center;
  out.irs = geom.irs_center;
  out.users.reserve(total);

  constexpr int kMaxAttempts = 10000;
  int attempts = 0;
  while (static_cast<int>(out.users.size()) < total) {
    if (++attempts > kMaxAttempts) {
      throw std::invalid_argument(
          "user placement failed: separation constraint cannot be met in the disk");
    }
    const double radius = geom.user_area_radius * std::sqrt(stream.uniform01());
    const double angle = stream.uniform(0.0, 2.0 * M_PI);
    const Point3 candidate{geom.user_area_center[0] + radius * std::cos(angle),
                           geom.user_area_center[1] + radius * std::sin(angle),
                           geom.user_area_center[2]};
    bool accepted = true;
    for (const auto& other : out.users) {
      if (distance(candidate, other) < geom.min_user_separation) {
        accepted = false;
        break;
      }
    }
    if (accepted) out.users.push_back(candidate);
  }
  return out;
}

std::pair<ChannelSet, double> generate_channels_raw(const GeometryConfig& geom,
                                                    const LinkBudget& budget,
                                                    int num_tx_antennas, int num_tiles,
                                                    const std::vector<int>& group_sizes,
                                                    std::uint64_t seed,
                                                    std::uint64_t realization) {
  geom.validate();
  budget.validate();
  if (num_tx_antennas < 1) throw std::invalid_argument("at least one Tx antenna required");
  if (num_tiles < 0) throw std::invalid_argument("negative tile count");

  const NodePositions nodes = place_nodes(geom, group_sizes, seed, realization);
  rng::Stream stream(seed, realization_key(kFadingStream, realization));
  const double lambda = geom.wavelength();
  const double spacing = geom.element_spacing;

  // Tx -> IRS matrix: rank-one steering outer product as the LoS component.
  CMatrix tx_irs(num_tiles, num_tx_antennas);
  if (num_tiles > 0) {
    const double d_ti = distance(nodes.tx, nodes.irs);
    const double gain = budget.tx_irs.amplitude(d_ti);
    const double k_lin = rician_k_linear(budget.rician_k_tx_irs_db);
    const Point3 dir_from_tx = unit_direction(nodes.tx, nodes.irs);
    const Point3 dir_from_irs = unit_direction(nodes.irs, nodes.tx);
    CVector a_irs(num_tiles);
    for (int m = 0; m < num_tiles; ++m) {
      a_irs[m] = steer(dir_from_irs, irs_element_offset(m, num_tiles, spacing), lambda);
    }
    CRowVector a_tx(num_tx_antennas);
    for (int n = 0; n < num_tx_antennas; ++n) {
      a_tx[n] = steer(dir_from_tx, tx_element_offset(n, num_tx_antennas, spacing), lambda);
    }
    for (int m = 0; m < num_tiles; ++m) {
      for (int n = 0; n < num_tx_antennas; ++n) {
        tx_irs(m, n) = gain * rician_fade(a_irs[m] * a_tx[n], k_lin, stream);
      }
    }
  }

  const double k_direct = rician_k_linear(budget.rician_k_tx_user_db);
  const double k_irs_user = rician_k_linear(budget.rician_k_irs_user_db);

  std::vector<CRowVector> direct;
  std::vector<CRowVector> irs;
  for (const auto& user : nodes.users) {
    const double d_tu = distance(nodes.tx, user);
    const double gain_tu = budget.tx_user.amplitude(d_tu);
    const Point3 dir_tu = unit_direction(nodes.tx, user);
    CRowVector h(num_tx_antennas);
    for (int n = 0; n < num_tx_antennas; ++n) {
      const Complex los = steer(dir_tu, tx_element_offset(n, num_tx_antennas, spacing), lambda);
      h[n] = gain_tu * rician_fade(los, k_direct, stream);
    }
    direct.push_back(std::move(h));

    CRowVector hr(num_tiles);
    if (num_tiles > 0) {
      const double d_iu = distance(nodes.irs, user);
      const double gain_iu = budget.irs_user.amplitude(d_iu);
      const Point3 dir_iu = unit_direction(nodes.irs, user);
      for (int m = 0; m < num_tiles; ++m) {
        const Complex los = steer(dir_iu, irs_element_offset(m, num_tiles, spacing), lambda);
        hr[m] = gain_iu * rician_fade(los, k_irs_user, stream);
      }
    }
    irs.push_back(std::move(hr));
  }

  const double noise_watts = std::pow(10.0, (noise_power_dbm(budget) - 30.0) / 10.0);
  const double sigma = std::sqrt(noise_watts);
  return {ChannelSet(std::move(tx_irs), std::move(direct), std::move(irs), group_sizes), sigma};
}

ChannelSet generate_channels(const GeometryConfig& geom, const LinkBudget& budget,
                             int num_tx_antennas, int num_tiles,
                             const std::vector<int>& group_sizes, std::uint64_t seed,
                             std::uint64_t realization) {
  auto [raw, sigma] = generate_channels_raw(geom, budget, num_tx_antennas, num_tiles,
                                            group_sizes, seed, realization);
  // Only the user-side links carry the 1/sigma: the cascade through the IRS
  // picks it up from the IRS->user row, so the Tx->IRS matrix stays as-is.
  std::vector<CRowVector> direct;
  std::vector<CRowVector> irs;
  direct.reserve(raw.num_users());
  irs.reserve(raw.num_users());
  for (int u = 0; u < raw.num_users(); ++u) {
    direct.push_back(raw.direct_flat(u) / sigma);
    irs.push_back(raw.irs_flat(u) / sigma);
  }
  return ChannelSet(raw.tx_irs(), std::move(direct), std::move(irs), group_sizes);
}

}  // namespace mgmc
