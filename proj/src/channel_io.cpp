#include "mgmc/channel_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace mgmc {

namespace {

constexpr char kMagic[8] = {'M', 'G', 'M', 'C', 'C', 'H', 'V', '1'};

static_assert(std::endian::native == std::endian::little,
              "channel dump writer assumes a little-endian host");

void put_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw std::runtime_error("channel dump truncated");
  return v;
}

void put_row(std::ostream& out, const CRowVector& row) {
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    const double re = row[i].real();
    const double im = row[i].imag();
    out.write(reinterpret_cast<const char*>(&re), sizeof(re));
    out.write(reinterpret_cast<const char*>(&im), sizeof(im));
  }
}

CRowVector get_row(std::istream& in, Eigen::Index size) {
  CRowVector row(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    double re = 0.0;
    double im = 0.0;
    in.read(reinterpret_cast<char*>(&re), sizeof(re));
    in.read(reinterpret_cast<char*>(&im), sizeof(im));
    if (!in) throw std::runtime_error("channel dump truncated");
    row[i] = {re, im};
  }
  return row;
}

}  // namespace

void write_channel_dump(std::ostream& out, const ChannelSet& ch, std::uint64_t seed,
                        std::uint64_t realization) {
  out.write(kMagic, sizeof(kMagic));
  put_u64(out, static_cast<std::uint64_t>(ch.num_tiles()));
  put_u64(out, static_cast<std::uint64_t>(ch.num_tx_antennas()));
  put_u64(out, static_cast<std::uint64_t>(ch.num_groups()));
  for (int g = 0; g < ch.num_groups(); ++g) {
    put_u64(out, static_cast<std::uint64_t>(ch.group_size(g)));
  }
  put_u64(out, seed);
  put_u64(out, realization);
  for (int m = 0; m < ch.num_tiles(); ++m) {
    put_row(out, ch.tx_irs().row(m));
  }
  for (int u = 0; u < ch.num_users(); ++u) {
    put_row(out, ch.direct_flat(u));
    put_row(out, ch.irs_flat(u));
  }
  if (!out) throw std::runtime_error("channel dump write failed");
}

void write_channel_dump(const std::string& path, const ChannelSet& ch, std::uint64_t seed,
                        std::uint64_t realization) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open channel dump for writing: " + path);
  write_channel_dump(out, ch, seed, realization);
}

ChannelDump read_channel_dump(std::istream& in) {
  char magic[8] = {};
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a channel dump file");
  }
  const auto tiles = static_cast<Eigen::Index>(get_u64(in));
  const auto antennas = static_cast<Eigen::Index>(get_u64(in));
  const auto groups = static_cast<int>(get_u64(in));
  std::vector<int> group_sizes(groups);
  for (int g = 0; g < groups; ++g) group_sizes[g] = static_cast<int>(get_u64(in));
  const std::uint64_t seed = get_u64(in);
  const std::uint64_t realization = get_u64(in);

  CMatrix tx_irs(tiles, antennas);
  for (Eigen::Index m = 0; m < tiles; ++m) tx_irs.row(m) = get_row(in, antennas);
  int users = 0;
  for (int kg : group_sizes) users += kg;
  std::vector<CRowVector> direct;
  std::vector<CRowVector> irs;
  direct.reserve(users);
  irs.reserve(users);
  for (int u = 0; u < users; ++u) {
    direct.push_back(get_row(in, antennas));
    irs.push_back(get_row(in, tiles));
  }
  return {ChannelSet(std::move(tx_irs), std::move(direct), std::move(irs), group_sizes),
          seed, realization};
}

ChannelDump read_channel_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open channel dump: " + path);
  return read_channel_dump(in);
}

}  // namespace mgmc
