#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "softran/netmodel.hpp"

using namespace softran;

namespace {

TopologyParams full_params() {
  TopologyParams p;
  p.rrs_count = 4;
  p.area_radius = 500.0;
  p.cell_radius = 100.0;
  p.p_max_watts = 10.0;
  p.subcarrier_count = 32;
  return p;
}

PathLossModel model() { return calibrated_path_loss(3.0, 10.0, 100.0, 10.0, 1e-13); }

}  // namespace

TEST(Topology, FullSizedNetwork) {
  const Topology t = generate_topology(full_params(), 7);
  EXPECT_EQ(t.rrs_count(), 4u);
  EXPECT_EQ(t.subcarrier_count, 32u);
  for (const auto& r : t.rrs) {
    EXPECT_LE(std::hypot(r.position.x, r.position.y), t.area_radius);
    EXPECT_GT(r.p_max, 0.0);
  }
}

TEST(Topology, DeterministicPerSeed) {
  auto p = full_params();
  p.rrs_count = 1;
  const Topology a = generate_topology(p, 3);
  const Topology b = generate_topology(p, 3);
  ASSERT_EQ(a.rrs_count(), 1u);
  EXPECT_EQ(a.rrs[0].position.x, b.rrs[0].position.x);
  EXPECT_EQ(a.rrs[0].position.y, b.rrs[0].position.y);
}

TEST(Topology, RejectsNoSubcarriers) {
  auto p = full_params();
  p.subcarrier_count = 0;
  EXPECT_THROW(generate_topology(p, 1), std::invalid_argument);
}

TEST(PathGain, HandValues) {
  const PathLossModel m{3.0, 1.0};
  EXPECT_DOUBLE_EQ(path_gain(1.0, m), 1.0);
  EXPECT_NEAR(path_gain(10.0, m), 1e-3, 1e-18);
  for (double d = 1.0; d < 500.0; d *= 1.7) EXPECT_GT(path_gain(d, m), path_gain(d * 1.01, m));
}

TEST(PathGain, CalibratedEdgeSnr) {
  const double noise = 1.5e-13;
  const PathLossModel m = calibrated_path_loss(3.0, 10.0, 100.0, 10.0, noise);
  EXPECT_NEAR(10.0 * std::log10(10.0 * path_gain(100.0, m) / noise), 10.0, 1e-9);
}

TEST(Users, EmptyPopulation) {
  const Topology t = generate_topology(full_params(), 1);
  const UserSet u = spawn_users(t, model(), 0, 1);
  EXPECT_EQ(u.size(), 0u);
  ASSERT_EQ(u.per_rrs.size(), 4u);
  for (const auto& part : u.per_rrs) EXPECT_TRUE(part.empty());
}

TEST(Users, PartitionAndAssociation) {
  const Topology t = generate_topology(full_params(), 1);
  const UserSet u = spawn_users(t, model(), 8, 5);
  EXPECT_EQ(u.size(), 8u);
  const auto counts = u.counts();
  EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}), 8u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto& user = u.users[i];
    EXPECT_LE(std::hypot(user.position.x, user.position.y), t.area_radius + 1e-9);
    // Serving RRS has the strongest large-scale gain.
    for (const auto& r : t.rrs) {
      EXPECT_GE(large_scale_gain(t.rrs[user.serving_rrs], user.position, model()),
                large_scale_gain(r, user.position, model()));
    }
  }
  const UserSet again = spawn_users(t, model(), 8, 5);
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_EQ(u.users[i].position.x, again.users[i].position.x);
    EXPECT_EQ(u.users[i].serving_rrs, again.users[i].serving_rrs);
  }
}

TEST(Users, LargerPopulationsNest) {
  const Topology t = generate_topology(full_params(), 2);
  const UserSet small = spawn_users(t, model(), 4, 9);
  const UserSet large = spawn_users(t, model(), 12, 9);
  for (std::size_t i = 0; i < small.size(); ++i) {
    EXPECT_EQ(small.users[i].position.x, large.users[i].position.x);
    EXPECT_EQ(small.users[i].position.y, large.users[i].position.y);
  }
}

TEST(Channels, DefinitionAndDeterminism) {
  const Topology t = generate_topology(full_params(), 1);
  const UserSet u = spawn_users(t, model(), 6, 1);
  const ChannelTensor h = sample_channels(t, model(), u, 1, 4);
  const ChannelTensor h2 = sample_channels(t, model(), u, 1, 4);
  for (std::size_t b = 0; b < 4; ++b) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      EXPECT_DOUBLE_EQ(h.large(b, i), large_scale_gain(t.rrs[b], u.users[i].position, model()));
      for (std::size_t k = 0; k < 32; ++k) {
        EXPECT_GT(h.gain(b, i, k), 0.0);
        EXPECT_TRUE(std::isfinite(h.gain(b, i, k)));
        EXPECT_EQ(h.gain(b, i, k), h.large(b, i) * h.small(b, i, k));
        EXPECT_EQ(h.small(b, i, k), h2.small(b, i, k));
      }
    }
  }
}

TEST(Channels, SmallScaleUnitMean) {
  auto p = full_params();
  p.rrs_count = 1;
  p.subcarrier_count = 10;
  const Topology t = generate_topology(p, 1);
  const UserSet u = spawn_users(t, model(), 10, 1);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::uint64_t slot = 0; slot < 1000; ++slot) {
    const ChannelTensor h = sample_channels(t, model(), u, 1, slot);
    for (double v : h.small_values()) {
      sum += v;
      ++n;
    }
  }
  ASSERT_EQ(n, 100000u);
  EXPECT_NEAR(sum / static_cast<double>(n), 1.0, 0.02);
}

TEST(Channels, FadingIndependentOfOtherUsers) {
  const Topology t = generate_topology(full_params(), 1);
  const UserSet few = spawn_users(t, model(), 3, 1);
  const UserSet many = spawn_users(t, model(), 9, 1);
  const ChannelTensor a = sample_channels(t, model(), few, 1, 2);
  const ChannelTensor b = sample_channels(t, model(), many, 1, 2);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.small(2, i, 5), b.small(2, i, 5));
}

TEST(Traffic, IdentityAndForcedDeparture) {
  const Topology t = generate_topology(full_params(), 1);
  const UserSet u = spawn_users(t, model(), 8, 1);
  const UserSet same = step_traffic(u, t, model(), {0.0, 0.0}, 1, 1);
  ASSERT_EQ(same.size(), u.size());
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(same.users[i].id, u.users[i].id);
  EXPECT_EQ(step_traffic(u, t, model(), {0.0, 1.0}, 1, 1).size(), 0u);
}

TEST(Traffic, BirthDeathStationaryMean) {
  // Stationary population of Poisson(lambda) arrivals and Bernoulli(q)
  // departures applied before arrivals: E[N] = lambda / q.
  const Topology t = generate_topology(full_params(), 1);
  const TrafficParams traffic{2.0, 0.1};
  UserSet u = spawn_users(t, model(), 20, 3);
  double sum = 0.0;
  const int burn = 200, slots = 10000;
  for (int s = 1; s <= burn + slots; ++s) {
    u = step_traffic(u, t, model(), traffic, 3, static_cast<std::uint64_t>(s));
    if (s > burn) sum += static_cast<double>(u.size());
  }
  EXPECT_NEAR(sum / slots, traffic.arrival_rate / traffic.departure_prob, 0.05 * 20.0);
}
