#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace mgmc {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Thrown when a numerical procedure produces non-finite values.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All channels of one realization, noise-normalized so the effective
/// receiver noise variance is 1. Users are stored group-major: user (k,g)
/// lives at flat index user_index(k,g).
class ChannelSet {
 public:
  ChannelSet(CMatrix tx_irs, std::vector<CRowVector> direct,
             std::vector<CRowVector> irs, std::vector<int> group_sizes);

  int num_tx_antennas() const { return static_cast<int>(tx_irs_.cols()); }
  int num_tiles() const { return static_cast<int>(tx_irs_.rows()); }
  int num_groups() const { return static_cast<int>(group_sizes_.size()); }
  int num_users() const { return num_users_; }
  int group_size(int g) const { return group_sizes_.at(g); }
  const std::vector<int>& group_sizes() const { return group_sizes_; }

  /// Flat index of user k in group g.
  int user_index(int k, int g) const;
  /// Group of the user at flat index u.
  int group_of(int u) const { return group_of_.at(u); }

  const CMatrix& tx_irs() const { return tx_irs_; }
  const CMatrix& direct_rows() const { return direct_rows_; }  // K x N
  const CMatrix& irs_rows() const { return irs_rows_; }        // K x M
  auto direct(int k, int g) const { return direct_rows_.row(user_index(k, g)); }
  auto irs(int k, int g) const { return irs_rows_.row(user_index(k, g)); }
  auto direct_flat(int u) const { return direct_rows_.row(u); }
  auto irs_flat(int u) const { return irs_rows_.row(u); }

 private:
  CMatrix tx_irs_;       // M x N
  CMatrix direct_rows_;  // per-user Tx->user rows, stacked K x N
  CMatrix irs_rows_;     // per-user IRS->user rows, stacked K x M
  std::vector<int> group_sizes_;
  std::vector<int> group_offsets_;    // flat index of user (0, g)
  std::vector<int> group_of_;         // flat user index -> group
  int num_users_ = 0;
};

/// Stacked per-group transmit beamformers, f = [f_1; ...; f_G], each block
/// of length N. Feasible when ||f|| <= sqrt(P_t).
class BeamformerStack {
 public:
  BeamformerStack(CVector stacked, int num_antennas, int num_groups);
  static BeamformerStack zero(int num_antennas, int num_groups);

  int num_antennas() const { return num_antennas_; }
  int num_groups() const { return num_groups_; }
  const CVector& stacked() const { return f_; }
  auto block(int g) const { return f_.segment(static_cast<Eigen::Index>(g) * num_antennas_, num_antennas_); }
  double norm() const { return f_.norm(); }
  bool within_power(double p_t, double tol = 1e-12) const;

 private:
  CVector f_;
  int num_antennas_;
  int num_groups_;
};

/// IRS phase-shift vector; feasible when every entry has unit modulus.
class PhaseVector {
 public:
  explicit PhaseVector(CVector theta);
  static PhaseVector ones(int m) { return PhaseVector(CVector::Ones(m)); }

  int size() const { return static_cast<int>(theta_.size()); }
  const CVector& entries() const { return theta_; }
  /// Largest deviation of |theta_m| from 1 (0 for an empty vector).
  double max_modulus_error() const;
  bool unit_modulus(double tol = 1e-12) const { return max_modulus_error() <= tol; }

 private:
  CVector theta_;
};

/// Per-user, per-group and total rates in nats/s/Hz.
struct RateBreakdown {
  std::vector<std::vector<double>> per_user_rate;  // [g][k]
  std::vector<double> per_group_rate;              // min over the group
  double sum_rate = 0.0;
};

}  // namespace mgmc
