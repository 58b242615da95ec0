#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mgmc/channel_io.hpp"
#include "mgmc/rates.hpp"
#include "mgmc/scenario.hpp"
#include "support/instances.hpp"

#include <sstream>

using namespace mgmc;

namespace {

double dist(const Point3& a, const Point3& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                   (a[2] - b[2]) * (a[2] - b[2]));
}

}  // namespace

TEST_CASE("noise power over the band: -174 dBm/Hz over 10 MHz is -104 dBm") {
  LinkBudget budget;
  CHECK(noise_power_dbm(budget) == doctest::Approx(-104.0).epsilon(1e-12));
  budget.bandwidth_hz = 1.0;
  CHECK(noise_power_dbm(budget) == doctest::Approx(-174.0).epsilon(1e-12));
  budget.noise_psd_dbm_hz = -170.0;
  budget.bandwidth_hz = 100.0;
  CHECK(noise_power_dbm(budget) == doctest::Approx(-150.0).epsilon(1e-12));
  budget.bandwidth_hz = 0.0;
  CHECK_THROWS_AS(noise_power_dbm(budget), std::invalid_argument);
}

TEST_CASE("default geometry places the transmitter 36.40 m from the IRS") {
  GeometryConfig geom;
  const NodePositions nodes = place_nodes(geom, {1}, 5);
  CHECK(dist(nodes.tx, nodes.irs) == doctest::Approx(std::sqrt(1325.0)).epsilon(1e-12));
  CHECK(nodes.users.size() == 1);
  CHECK(dist(nodes.users[0], geom.user_area_center) <= geom.user_area_radius);
  CHECK(nodes.users[0][2] == doctest::Approx(2.0));
}

TEST_CASE("user placement keeps the minimum separation over many seeds") {
  GeometryConfig geom;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const NodePositions nodes = place_nodes(geom, {4, 4}, seed);
    REQUIRE(nodes.users.size() == 8);
    for (std::size_t a = 0; a < 8; ++a) {
      CHECK(dist(nodes.users[a], geom.user_area_center) <= geom.user_area_radius);
      for (std::size_t b = a + 1; b < 8; ++b) {
        CHECK(dist(nodes.users[a], nodes.users[b]) >= 0.3);
      }
    }
  }
}

TEST_CASE("impossible separation constraint is reported as a configuration error") {
  GeometryConfig geom;
  geom.min_user_separation = 50.0;  // larger than the disk diameter
  CHECK_THROWS_AS(place_nodes(geom, {4, 4}, 1), std::invalid_argument);
}

TEST_CASE("pure line-of-sight channels have steering-vector structure") {
  GeometryConfig geom;
  LinkBudget budget;
  budget.rician_k_tx_irs_db = 300.0;  // k -> infinity
  const ChannelSet ch = generate_channels(geom, budget, 4, 16, {1}, 3);
  const double mag = std::abs(ch.tx_irs()(0, 0));
  for (int m = 0; m < 16; ++m) {
    for (int n = 0; n < 4; ++n) {
      CHECK(std::abs(ch.tx_irs()(m, n)) == doctest::Approx(mag).epsilon(1e-9));
    }
  }
}

TEST_CASE("mean small-scale fade power is unity within 3 percent") {
  GeometryConfig geom;
  LinkBudget budget;
  budget.tx_irs = {0.0, 0.0};  // unit path loss isolates the fading
  double acc = 0.0;
  int count = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const auto [raw, sigma] = generate_channels_raw(geom, budget, 10, 10, {1}, 11, r);
    acc += raw.tx_irs().squaredNorm();
    count += 100;
  }
  CHECK(acc / count == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("doubling the Tx-IRS distance drops mean power by 2^2.2") {
  GeometryConfig near;
  near.irs_center = {30.0, 0.0, 10.0};  // 30 m in front of the transmitter
  near.tx_center = {0.0, 0.0, 10.0};
  GeometryConfig far = near;
  far.irs_center = {60.0, 0.0, 10.0};
  LinkBudget budget;

  double p_near = 0.0;
  double p_far = 0.0;
  int count = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const auto [ch_near, s1] = generate_channels_raw(near, budget, 10, 10, {1}, 17, r);
    const auto [ch_far, s2] = generate_channels_raw(far, budget, 10, 10, {1}, 17, r);
    p_near += ch_near.tx_irs().squaredNorm();
    p_far += ch_far.tx_irs().squaredNorm();
    count += 100;
  }
  CHECK(p_near / p_far == doctest::Approx(std::pow(2.0, 2.2)).epsilon(0.05));
}

TEST_CASE("identical (seed, realization) reproduces the channel set bit for bit") {
  GeometryConfig geom;
  LinkBudget budget;
  const ChannelSet a = generate_channels(geom, budget, 4, 25, {2, 2}, 123, 7);
  const ChannelSet b = generate_channels(geom, budget, 4, 25, {2, 2}, 123, 7);
  CHECK((a.tx_irs() - b.tx_irs()).norm() == 0.0);
  for (int u = 0; u < a.num_users(); ++u) {
    CHECK((a.direct_flat(u) - b.direct_flat(u)).norm() == 0.0);
    CHECK((a.irs_flat(u) - b.irs_flat(u)).norm() == 0.0);
  }
  const ChannelSet c = generate_channels(geom, budget, 4, 25, {2, 2}, 123, 8);
  CHECK((a.tx_irs() - c.tx_irs()).norm() > 0.0);
}

TEST_CASE("noise normalization reproduces rates computed with explicit noise power") {
  GeometryConfig geom;
  LinkBudget budget;
  const std::vector<int> sizes{2, 1};
  const auto [raw, sigma] = generate_channels_raw(geom, budget, 3, 9, sizes, 31, 2);
  const ChannelSet normalized = generate_channels(geom, budget, 3, 9, sizes, 31, 2);

  rng::Stream s(32, 9);
  const auto f = testing::random_beamformer(s, 3, 2, 1.0);
  const auto theta = testing::random_phases(s, 9);

  for (int g = 0; g < 2; ++g) {
    for (int k = 0; k < normalized.group_size(g); ++k) {
      // Unnormalized assembly: SINR with explicit noise variance sigma^2.
      const CRowVector z_raw = effective_channel(raw, theta, k, g);
      double own = 0.0;
      double interference = 0.0;
      for (int l = 0; l < 2; ++l) {
        const double p = std::norm(Complex(z_raw * f.block(l)));
        if (l == g) {
          own = p;
        } else {
          interference += p;
        }
      }
      const double rate_raw = std::log1p(own / (sigma * sigma + interference));
      const double rate_norm = user_rate(normalized, f, theta, k, g);
      CHECK(rate_norm == doctest::Approx(rate_raw).epsilon(1e-10));
    }
  }
}

TEST_CASE("channel dump round-trips bit-exactly") {
  GeometryConfig geom;
  LinkBudget budget;
  const ChannelSet ch = generate_channels(geom, budget, 4, 9, {2, 2}, 77, 3);
  std::stringstream buffer;
  write_channel_dump(buffer, ch, 77, 3);
  const ChannelDump dump = read_channel_dump(buffer);
  CHECK(dump.seed == 77);
  CHECK(dump.realization == 3);
  CHECK(dump.channels.num_tiles() == 9);
  CHECK(dump.channels.num_tx_antennas() == 4);
  CHECK((dump.channels.tx_irs() - ch.tx_irs()).norm() == 0.0);
  for (int u = 0; u < ch.num_users(); ++u) {
    CHECK((dump.channels.direct_flat(u) - ch.direct_flat(u)).norm() == 0.0);
    CHECK((dump.channels.irs_flat(u) - ch.irs_flat(u)).norm() == 0.0);
  }
}

TEST_CASE("reading garbage as a channel dump fails cleanly") {
  std::stringstream buffer("definitely not a dump");
  CHECK_THROWS_AS(read_channel_dump(buffer), std::runtime_error);
}

TEST_CASE("zero-tile generation yields a usable no-IRS channel set") {
  GeometryConfig geom;
  LinkBudget budget;
  const ChannelSet ch = generate_channels(geom, budget, 4, 0, {2}, 13);
  CHECK(ch.num_tiles() == 0);
  rng::Stream s(14, 1);
  const auto f = testing::random_beamformer(s, 4, 1, 1.0);
  const double r = user_rate(ch, f, PhaseVector(CVector(0)), 0, 0);
  CHECK(std::isfinite(r));
  CHECK(r >= 0.0);
}
