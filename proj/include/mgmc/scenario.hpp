#pragma once

#include "mgmc/types.hpp"

#include <array>
#include <cstdint>

namespace mgmc {

using Point3 = std::array<double, 3>;  // meters

/// Node geometry and array layout. Defaults: transmitter ULA centered at
/// (0, 20, 10) m, IRS panel centered at (30, 0, 5) m, users uniform on a
/// 20 m disk at (350, 50, 2) m, 2 GHz carrier, half-wavelength element
/// spacing, 0.3 m minimum user separation.
struct GeometryConfig {
  Point3 tx_center{0.0, 20.0, 10.0};
  Point3 irs_center{30.0, 0.0, 5.0};
  Point3 user_area_center{350.0, 50.0, 2.0};
  double user_area_radius = 20.0;
  double carrier_hz = 2.0e9;
  double element_spacing = 0.5 * 299792458.0 / 2.0e9;
  double min_user_separation = 0.3;

  double wavelength() const { return 299792458.0 / carrier_hz; }
  void validate() const;
};

/// PL(d) [dB] = intercept + 10 * exponent * log10(d / 1 m).
struct PathLossModel {
  double intercept_db;
  double exponent;

  double loss_db(double distance_m) const {
    return intercept_db + 10.0 * exponent * std::log10(distance_m);
  }
  double amplitude(double distance_m) const {
    return std::pow(10.0, -loss_db(distance_m) / 20.0);
  }
};

/// Noise and per-link propagation constants. Rician factors are in dB
/// (-inf selects Rayleigh fading).
struct LinkBudget {
  double noise_psd_dbm_hz = -174.0;
  double bandwidth_hz = 10.0e6;
  PathLossModel tx_irs{35.6, 2.2};
  PathLossModel irs_user{35.6, 2.2};
  PathLossModel tx_user{32.6, 3.67};
  double rician_k_tx_irs_db = 10.0;
  double rician_k_irs_user_db = 10.0;
  double rician_k_tx_user_db = -std::numeric_limits<double>::infinity();

  void validate() const;
};

struct NodePositions {
  Point3 tx;
  Point3 irs;
  std::vector<Point3> users;  // group-major, matching ChannelSet order
};

/// Total noise power over the configured bandwidth.
double noise_power_dbm(const LinkBudget& budget);

/// Users drawn i.i.d. uniform on the disk, rejection-resampled until every
/// pair is at least min_user_separation apart (error after 1e4 attempts).
/// Deterministic per (seed, realization).
NodePositions place_nodes(const GeometryConfig& geom, const std::vector<int>& group_sizes,
                          std::uint64_t seed, std::uint64_t realization = 0);

/// One seeded channel realization: per-link path loss times Rician
/// small-scale fading whose line-of-sight component follows the array
/// steering vectors (ULA at the transmitter, square UPA at the IRS when the
/// tile count is a perfect square, else a 1 x M line). User-side channels
/// come back divided by the noise standard deviation, so rate formulas use a
/// unit noise term. Realization r consumes an independent substream keyed by
/// (seed, r).
ChannelSet generate_channels(const GeometryConfig& geom, const LinkBudget& budget,
                             int num_tx_antennas, int num_tiles,
                             const std::vector<int>& group_sizes, std::uint64_t seed,
                             std::uint64_t realization = 0);

/// Same draw without the noise normalization, plus the noise standard
/// deviation that generate_channels divides by. Raw and normalized outputs
/// of one (seed, realization) share identical fading draws.
std::pair<ChannelSet, double> generate_channels_raw(const GeometryConfig& geom,
                                                    const LinkBudget& budget,
                                                    int num_tx_antennas, int num_tiles,
                                                    const std::vector<int>& group_sizes,
                                                    std::uint64_t seed,
                                                    std::uint64_t realization = 0);

}  // namespace mgmc
