#pragma once

#include "mgmc/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace mgmc {

/// Channel dump: a self-describing little-endian binary container with the
/// dimensions, the (seed, realization) pair it was drawn from, and every
/// complex entry as a float64 re/im pair. Loading reproduces the ChannelSet
/// bit-exactly, so a solve can be replayed from the file alone.
struct ChannelDump {
  ChannelSet channels;
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;
};

void write_channel_dump(std::ostream& out, const ChannelSet& ch, std::uint64_t seed,
                        std::uint64_t realization);
void write_channel_dump(const std::string& path, const ChannelSet& ch, std::uint64_t seed,
                        std::uint64_t realization);

ChannelDump read_channel_dump(std::istream& in);
ChannelDump read_channel_dump(const std::string& path);

}  // namespace mgmc
