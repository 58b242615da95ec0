#include "mgmc/types.hpp"

#include <numeric>

namespace mgmc {

namespace {

bool all_finite(const CRowVector& v) {
  return v.allFinite();
}

}  // namespace

ChannelSet::ChannelSet(CMatrix tx_irs, std::vector<CRowVector> direct,
                       std::vector<CRowVector> irs, std::vector<int> group_sizes)
    : tx_irs_(std::move(tx_irs)), group_sizes_(std::move(group_sizes)) {
  if (group_sizes_.empty()) {
    throw std::invalid_argument("ChannelSet: at least one group required");
  }
  for (int kg : group_sizes_) {
    if (kg < 1) throw std::invalid_argument("ChannelSet: group sizes must be >= 1");
  }
  num_users_ = std::accumulate(group_sizes_.begin(), group_sizes_.end(), 0);
  if (static_cast<int>(direct.size()) != num_users_ ||
      static_cast<int>(irs.size()) != num_users_) {
    throw std::invalid_argument("ChannelSet: one direct and one IRS row required per user");
  }
  const auto n = tx_irs_.cols();
  const auto m = tx_irs_.rows();
  direct_rows_.resize(num_users_, n);
  irs_rows_.resize(num_users_, m);
  for (int u = 0; u < num_users_; ++u) {
    if (direct[u].size() != n) throw std::invalid_argument("ChannelSet: direct row length != N");
    if (!all_finite(direct[u])) throw std::invalid_argument("ChannelSet: non-finite direct entry");
    if (irs[u].size() != m) throw std::invalid_argument("ChannelSet: IRS row length != M");
    if (!all_finite(irs[u])) throw std::invalid_argument("ChannelSet: non-finite IRS entry");
    direct_rows_.row(u) = direct[u];
    irs_rows_.row(u) = irs[u];
  }
  if (!tx_irs_.allFinite()) {
    throw std::invalid_argument("ChannelSet: non-finite Tx-IRS entry");
  }
  group_offsets_.resize(group_sizes_.size());
  int off = 0;
  for (std::size_t g = 0; g < group_sizes_.size(); ++g) {
    group_offsets_[g] = off;
    off += group_sizes_[g];
  }
  group_of_.resize(num_users_);
  for (int g = 0; g < num_groups(); ++g) {
    for (int k = 0; k < group_sizes_[g]; ++k) group_of_[group_offsets_[g] + k] = g;
  }
}

int ChannelSet::user_index(int k, int g) const {
  if (g < 0 || g >= num_groups() || k < 0 || k >= group_sizes_[g]) {
    throw std::invalid_argument("ChannelSet: user index out of range");
  }
  return group_offsets_[g] + k;
}

BeamformerStack::BeamformerStack(CVector stacked, int num_antennas, int num_groups)
    : f_(std::move(stacked)), num_antennas_(num_antennas), num_groups_(num_groups) {
  if (num_antennas_ < 1 || num_groups_ < 1) {
    throw std::invalid_argument("BeamformerStack: N and G must be >= 1");
  }
  if (f_.size() != static_cast<Eigen::Index>(num_antennas_) * num_groups_) {
    throw std::invalid_argument("BeamformerStack: stacked length != N*G");
  }
}

BeamformerStack BeamformerStack::zero(int num_antennas, int num_groups) {
  return BeamformerStack(CVector::Zero(static_cast<Eigen::Index>(num_antennas) * num_groups),
                         num_antennas, num_groups);
}

bool BeamformerStack::within_power(double p_t, double tol) const {
  return norm() <= std::sqrt(p_t) + tol;
}

PhaseVector::PhaseVector(CVector theta) : theta_(std::move(theta)) {}

double PhaseVector::max_modulus_error() const {
  double worst = 0.0;
  for (Eigen::Index m = 0; m < theta_.size(); ++m) {
    worst = std::max(worst, std::abs(std::abs(theta_[m]) - 1.0));
  }
  return worst;
}

}  // namespace mgmc
