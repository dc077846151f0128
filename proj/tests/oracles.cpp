#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

std::uint64_t overhead_bits(std::uint64_t power, std::uint64_t csi, std::uint64_t subcarriers,
                            std::size_t users_b, std::size_t subcarriers_b) {
  return (power + csi + subcarriers) * users_b * subcarriers_b;
}

std::uint64_t mlp_ops(std::uint64_t episodes, std::uint64_t batch, std::size_t in,
                      const std::vector<std::size_t>& hidden, std::size_t out) {
  std::uint64_t per_pass = in * hidden.front();
  for (std::size_t i = 0; i + 1 < hidden.size(); ++i) per_pass += hidden[i] * hidden[i + 1];
  per_pass += hidden.back() * out;
  return episodes * batch * per_pass;
}

double rate_centralized(const softran::ChannelTensor& h, const softran::Allocation& alloc,
                        double noise) {
  const std::size_t B = h.rrs_count(), U = h.user_count(), K = h.subcarrier_count();
  double total = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t u = 0; u < U; ++u) {
      for (std::size_t k = 0; k < K; ++k) {
        if (!alloc.assigned(b, u, k)) continue;
        double interference = 0.0;
        for (std::size_t o = 0; o < B; ++o) {
          if (o == b) continue;
          for (std::size_t v = 0; v < U; ++v) {
            if (alloc.assigned(o, v, k)) interference += h.gain(o, u, k) * alloc.power(o, v, k);
          }
        }
        total += std::log2(1.0 + h.gain(b, u, k) * alloc.power(b, u, k) / (noise + interference));
      }
    }
  }
  return total;
}

double rate_distributed(const softran::ChannelTensor& h, const softran::Allocation& alloc,
                        const softran::Topology& topology, const softran::UserSet& users,
                        double noise) {
  const std::size_t B = h.rrs_count(), U = h.user_count(), K = h.subcarrier_count();
  std::vector<std::size_t> count(B, 0);
  for (const auto& user : users.users) ++count[user.serving_rrs];
  double total = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t u = 0; u < U; ++u) {
      double interference = 0.0;
      for (std::size_t o = 0; o < B; ++o) {
        if (o == b || count[o] == 0) continue;
        const double equal = topology.rrs[o].p_max / static_cast<double>(count[o] * K);
        interference += h.large(o, u) * equal * static_cast<double>(count[o]);
      }
      for (std::size_t k = 0; k < K; ++k) {
        if (!alloc.assigned(b, u, k)) continue;
        total += std::log2(1.0 + h.gain(b, u, k) * alloc.power(b, u, k) / (noise + interference));
      }
    }
  }
  return total;
}

std::array<std::array<double, 2>, 2> value_iteration(const ToyMdp& mdp) {
  std::array<std::array<double, 2>, 2> q{};
  for (int iter = 0; iter < 10000; ++iter) {
    auto next = q;
    for (int s = 0; s < 2; ++s) {
      for (int a = 0; a < 2; ++a) {
        next[s][a] = mdp.reward[s][a] + mdp.discount * std::max(q[a][0], q[a][1]);
      }
    }
    q = next;
  }
  return q;
}

double crossover(const std::vector<double>& user_counts, const std::vector<double>& dst_minus_cnt) {
  for (std::size_t i = 0; i < user_counts.size(); ++i) {
    if (dst_minus_cnt[i] <= 0.0) continue;
    if (i == 0) return user_counts[0];
    const double x0 = user_counts[i - 1], x1 = user_counts[i];
    const double y0 = dst_minus_cnt[i - 1], y1 = dst_minus_cnt[i];
    return x0 + (x1 - x0) * (-y0) / (y1 - y0);
  }
  const double step = user_counts.size() > 1 ? user_counts[1] - user_counts[0] : 1.0;
  return user_counts.back() + step;
}

}  // namespace oracle
