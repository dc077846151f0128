#include "softran/phy_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace softran {

const char* to_string(Mode mode) {
  return mode == Mode::Centralized ? "centralized" : "distributed";
}

Allocation::Allocation(Mode mode, std::size_t rrs, std::size_t users, std::size_t subcarriers)
    : mode_(mode),
      rrs_(rrs),
      users_(users),
      subcarriers_(subcarriers),
      power_(rrs * users * subcarriers, 0.0),
      assigned_(rrs * users * subcarriers, 0) {}

double Allocation::total_power(std::size_t b) const {
  double sum = 0.0;
  for (std::size_t u = 0; u < users_; ++u) {
    for (std::size_t k = 0; k < subcarriers_; ++k) sum += power(b, u, k);
  }
  return sum;
}

std::string check_allocation(const Allocation& alloc, const Topology& topology,
                             double tolerance) {
  std::ostringstream why;
  if (alloc.rrs_count() != topology.rrs_count()) return "RRS count mismatch";
  for (std::size_t b = 0; b < alloc.rrs_count(); ++b) {
    for (std::size_t k = 0; k < alloc.subcarrier_count(); ++k) {
      std::size_t owners = 0;
      for (std::size_t u = 0; u < alloc.user_count(); ++u) {
        const double p = alloc.power(b, u, k);
        if (!(p >= 0.0) || !std::isfinite(p)) {
          why << "invalid power at (" << b << "," << u << "," << k << ")";
          return why.str();
        }
        if (p > 0.0 && !alloc.assigned(b, u, k)) {
          why << "power without assignment at (" << b << "," << u << "," << k << ")";
          return why.str();
        }
        owners += alloc.assigned(b, u, k) ? 1 : 0;
      }
      if (owners > 1) {
        why << "subcarrier " << k << " of RRS " << b << " has " << owners << " users";
        return why.str();
      }
    }
    const double budget = topology.rrs[b].p_max;
    if (alloc.total_power(b) > budget * (1.0 + tolerance)) {
      why << "RRS " << b << " exceeds its power budget";
      return why.str();
    }
  }
  return {};
}

std::uint64_t overhead_distributed(const BitBudget& budget, std::size_t n_users_b,
                                   std::size_t n_subcarriers_b) {
  return budget.per_pair() * n_users_b * n_subcarriers_b;
}

std::uint64_t overhead_centralized(std::span<const std::uint64_t> per_rrs) {
  return std::accumulate(per_rrs.begin(), per_rrs.end(), std::uint64_t{0});
}

double intercell_interference_centralized(const ChannelTensor& h, const Allocation& alloc,
                                          std::size_t b, std::size_t u, std::size_t k) {
  double interference = 0.0;
  for (std::size_t other = 0; other < alloc.rrs_count(); ++other) {
    if (other == b) continue;
    const double gain = h.gain(other, u, k);
    for (std::size_t v = 0; v < alloc.user_count(); ++v) {
      if (v == u || !alloc.assigned(other, v, k)) continue;
      interference += gain * alloc.power(other, v, k);
    }
  }
  return interference;
}

std::vector<double> rate_grid_centralized(const ChannelTensor& h, const Allocation& alloc,
                                          double noise_power) {
  const std::size_t K = alloc.subcarrier_count();
  std::vector<double> grid(alloc.rrs_count() * K, 0.0);
  for (std::size_t b = 0; b < alloc.rrs_count(); ++b) {
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t u = 0; u < alloc.user_count(); ++u) {
        const double p = alloc.power(b, u, k);
        if (!alloc.assigned(b, u, k) || p <= 0.0) continue;
        const double interference = intercell_interference_centralized(h, alloc, b, u, k);
        grid[b * K + k] += std::log2(1.0 + h.gain(b, u, k) * p / (noise_power + interference));
      }
    }
  }
  return grid;
}

namespace {

std::vector<double> row_sums(const std::vector<double>& grid, std::size_t rows) {
  std::vector<double> out(rows, 0.0);
  if (rows == 0) return out;
  const std::size_t cols = grid.size() / rows;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[r] += grid[r * cols + c];
  }
  return out;
}

}  // namespace

std::vector<double> rate_per_rrs_centralized(const ChannelTensor& h, const Allocation& alloc,
                                             double noise_power) {
  return row_sums(rate_grid_centralized(h, alloc, noise_power), alloc.rrs_count());
}

double rate_total_centralized(const ChannelTensor& h, const Allocation& alloc,
                              double noise_power) {
  const auto per_rrs = rate_per_rrs_centralized(h, alloc, noise_power);
  return std::accumulate(per_rrs.begin(), per_rrs.end(), 0.0);
}

double intercell_interference_distributed(const ChannelTensor& h, const Topology& topology,
                                          std::span<const std::size_t> user_counts,
                                          std::size_t b, std::size_t u) {
  double interference = 0.0;
  for (std::size_t other = 0; other < topology.rrs_count(); ++other) {
    if (other == b || user_counts[other] == 0) continue;
    const double n_users = static_cast<double>(user_counts[other]);
    const double equal_share =
        topology.rrs[other].p_max / (n_users * static_cast<double>(topology.subcarrier_count));
    // The victim is served by b, so every user of `other` is an interferer.
    interference += h.large(other, u) * equal_share * n_users;
  }
  return interference;
}

std::vector<double> rate_grid_distributed(const ChannelTensor& h, const Allocation& alloc,
                                          const Topology& topology, const UserSet& users,
                                          double noise_power) {
  const auto counts = users.counts();
  const std::size_t K = topology.subcarrier_count;
  std::vector<double> grid(topology.rrs_count() * K, 0.0);
  for (std::size_t b = 0; b < topology.rrs_count(); ++b) {
    for (std::size_t u : users.per_rrs[b]) {
      const double interference = intercell_interference_distributed(h, topology, counts, b, u);
      for (std::size_t k = 0; k < K; ++k) {
        const double p = alloc.power(b, u, k);
        if (!alloc.assigned(b, u, k) || p <= 0.0) continue;
        grid[b * K + k] += std::log2(1.0 + h.gain(b, u, k) * p / (noise_power + interference));
      }
    }
  }
  return grid;
}

std::vector<double> rate_per_rrs_distributed(const ChannelTensor& h, const Allocation& alloc,
                                             const Topology& topology, const UserSet& users,
                                             double noise_power) {
  return row_sums(rate_grid_distributed(h, alloc, topology, users, noise_power),
                  topology.rrs_count());
}

double rate_total_distributed(const ChannelTensor& h, const Allocation& alloc,
                              const Topology& topology, const UserSet& users,
                              double noise_power) {
  const auto per_rrs = rate_per_rrs_distributed(h, alloc, topology, users, noise_power);
  return std::accumulate(per_rrs.begin(), per_rrs.end(), 0.0);
}

namespace {

std::uint64_t layer_chain_products(const ComplexityShape& shape) {
  if (shape.hidden.empty()) return shape.input * shape.output;
  std::uint64_t sum = shape.input * shape.hidden.front();
  for (std::size_t n = 0; n + 1 < shape.hidden.size(); ++n) {
    sum += shape.hidden[n] * shape.hidden[n + 1];
  }
  sum += shape.hidden.back() * shape.output;
  return sum;
}

}  // namespace

std::uint64_t complexity_centralized(const ComplexityShape& shape) {
  return shape.episodes * shape.batch * layer_chain_products(shape);
}

std::uint64_t complexity_distributed(ComplexityShape shape) {
  shape.input = std::max<std::uint64_t>(shape.input, 1);
  return shape.episodes * shape.batch * layer_chain_products(shape);
}

ComplexityShape centralized_shape(std::uint64_t episodes, std::uint64_t batch,
                                  std::span<const std::uint64_t> hidden, std::size_t users,
                                  std::size_t subcarriers, std::size_t rrs) {
  ComplexityShape shape;
  shape.episodes = episodes;
  shape.batch = batch;
  shape.hidden.assign(hidden.begin(), hidden.end());
  shape.input = users * subcarriers * rrs;
  // One power and one assignment output per serving (user, subcarrier) pair.
  shape.output = 2 * users * subcarriers;
  return shape;
}

ComplexityShape distributed_shape(std::uint64_t episodes, std::uint64_t batch,
                                  std::span<const std::uint64_t> hidden, std::size_t users_b,
                                  std::size_t subcarriers_b) {
  ComplexityShape shape;
  shape.episodes = episodes;
  shape.batch = batch;
  shape.hidden.assign(hidden.begin(), hidden.end());
  shape.input = users_b * subcarriers_b;
  shape.output = 2 * users_b * subcarriers_b;
  return shape;
}

double toc_centralized(double rate, double overhead, double complexity, const TocWeights& w) {
  return rate - w.beta * overhead - w.alpha * complexity;
}

double toc_distributed(double rate, std::span<const double> overhead_per_rrs,
                       std::span<const double> complexity_per_rrs, const TocWeights& w) {
  if (overhead_per_rrs.empty() || complexity_per_rrs.empty()) {
    throw std::invalid_argument("toc_distributed needs at least one RRS");
  }
  const double tau = *std::max_element(overhead_per_rrs.begin(), overhead_per_rrs.end());
  const double gamma = *std::max_element(complexity_per_rrs.begin(), complexity_per_rrs.end());
  return rate - w.beta * tau - w.alpha * gamma;
}

}  // namespace softran
