#pragma once

// Reference computations written directly from the model definitions. They
// share no code with the library beyond its plain data types, so tests can
// compare the two.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "softran/netmodel.hpp"
#include "softran/phy_metrics.hpp"

namespace oracle {

std::uint64_t overhead_bits(std::uint64_t power, std::uint64_t csi, std::uint64_t subcarriers,
                            std::size_t users_b, std::size_t subcarriers_b);

// Multiply count of one forward pass times E * M.
std::uint64_t mlp_ops(std::uint64_t episodes, std::uint64_t batch, std::size_t in,
                      const std::vector<std::size_t>& hidden, std::size_t out);

// Sum of log2(1 + SINR) with the actual co-channel interference.
double rate_centralized(const softran::ChannelTensor& h, const softran::Allocation& alloc,
                        double noise);

// Sum of log2(1 + SINR) with interference from every other occupied cell at
// its equal-split power on large-scale gains.
double rate_distributed(const softran::ChannelTensor& h, const softran::Allocation& alloc,
                        const softran::Topology& topology, const softran::UserSet& users,
                        double noise);

// Two-state, two-action chain: taking action a moves to state a.
struct ToyMdp {
  std::array<std::array<double, 2>, 2> reward{{{0.5, 0.0}, {0.5, 2.0}}};
  double discount = 0.5;
};

// Optimal Q by value iteration.
std::array<std::array<double, 2>, 2> value_iteration(const ToyMdp& mdp);

// First user count at which `dst_minus_cnt` turns positive, linearly
// interpolated between grid points. Returns the last grid point plus one
// step when it never does.
double crossover(const std::vector<double>& user_counts, const std::vector<double>& dst_minus_cnt);

}  // namespace oracle
