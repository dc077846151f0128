#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "softran/netmodel.hpp"

namespace softran {

enum class Mode { Centralized, Distributed };

const char* to_string(Mode mode);

// Feedback bits per (user, subcarrier) pair.
struct BitBudget {
  std::uint64_t power = 4;
  std::uint64_t csi = 16;
  std::uint64_t subcarriers = 4;

  std::uint64_t per_pair() const { return power + csi + subcarriers; }
};

// Power and subcarrier assignment for one slot, indexed [b][u][k] over the
// global user list.
class Allocation {
 public:
  Allocation() = default;
  Allocation(Mode mode, std::size_t rrs, std::size_t users, std::size_t subcarriers);

  Mode mode() const { return mode_; }
  std::size_t rrs_count() const { return rrs_; }
  std::size_t user_count() const { return users_; }
  std::size_t subcarrier_count() const { return subcarriers_; }

  double power(std::size_t b, std::size_t u, std::size_t k) const { return power_[index(b, u, k)]; }
  bool assigned(std::size_t b, std::size_t u, std::size_t k) const {
    return assigned_[index(b, u, k)] != 0;
  }
  void set(std::size_t b, std::size_t u, std::size_t k, double power, bool assigned) {
    power_[index(b, u, k)] = power;
    assigned_[index(b, u, k)] = assigned ? 1 : 0;
  }

  double total_power(std::size_t b) const;

 private:
  std::size_t index(std::size_t b, std::size_t u, std::size_t k) const {
    return (b * users_ + u) * subcarriers_ + k;
  }

  Mode mode_ = Mode::Centralized;
  std::size_t rrs_ = 0;
  std::size_t users_ = 0;
  std::size_t subcarriers_ = 0;
  std::vector<double> power_;
  std::vector<std::uint8_t> assigned_;
};

// Returns an empty string when the allocation is feasible, otherwise a
// description of the first violated constraint.
std::string check_allocation(const Allocation& alloc, const Topology& topology,
                             double tolerance = 1e-9);

std::uint64_t overhead_distributed(const BitBudget& budget, std::size_t n_users_b,
                                   std::size_t n_subcarriers_b);
std::uint64_t overhead_centralized(std::span<const std::uint64_t> per_rrs);

double intercell_interference_centralized(const ChannelTensor& h, const Allocation& alloc,
                                          std::size_t b, std::size_t u, std::size_t k);

// Sum spectral efficiency (bit/s/Hz) of the centralized scheme.
double rate_total_centralized(const ChannelTensor& h, const Allocation& alloc, double noise_power);
// Spectral efficiency per (b, k), laid out b * K + k.
std::vector<double> rate_grid_centralized(const ChannelTensor& h, const Allocation& alloc,
                                          double noise_power);
std::vector<double> rate_per_rrs_centralized(const ChannelTensor& h, const Allocation& alloc,
                                             double noise_power);

// Worst-case interference seen by user u of RRS b when every other RRS
// splits its budget equally. Uses large-scale gains only, so the value is the
// same on every subcarrier. Cells without users do not interfere.
double intercell_interference_distributed(const ChannelTensor& h, const Topology& topology,
                                          std::span<const std::size_t> user_counts,
                                          std::size_t b, std::size_t u);

double rate_total_distributed(const ChannelTensor& h, const Allocation& alloc,
                              const Topology& topology, const UserSet& users, double noise_power);
std::vector<double> rate_grid_distributed(const ChannelTensor& h, const Allocation& alloc,
                                          const Topology& topology, const UserSet& users,
                                          double noise_power);
std::vector<double> rate_per_rrs_distributed(const ChannelTensor& h, const Allocation& alloc,
                                             const Topology& topology, const UserSet& users,
                                             double noise_power);

struct ComplexityShape {
  std::uint64_t episodes = 1;
  std::uint64_t batch = 1;
  std::vector<std::uint64_t> hidden;  // l_1 .. l_{N-1}
  std::uint64_t input = 1;
  std::uint64_t output = 1;
};

// E * M * (multiply count of one forward pass through the layer chain).
std::uint64_t complexity_centralized(const ComplexityShape& shape);
// Same count; an empty cell is given a unit input so the network is defined.
std::uint64_t complexity_distributed(ComplexityShape shape);

ComplexityShape centralized_shape(std::uint64_t episodes, std::uint64_t batch,
                                  std::span<const std::uint64_t> hidden, std::size_t users,
                                  std::size_t subcarriers, std::size_t rrs);
ComplexityShape distributed_shape(std::uint64_t episodes, std::uint64_t batch,
                                  std::span<const std::uint64_t> hidden, std::size_t users_b,
                                  std::size_t subcarriers_b);

struct TocWeights {
  double alpha = 0.0;  // per operation
  double beta = 0.0;   // per bit
};

double toc_centralized(double rate, double overhead, double complexity, const TocWeights& w);
double toc_distributed(double rate, std::span<const double> overhead_per_rrs,
                       std::span<const double> complexity_per_rrs, const TocWeights& w);

}  // namespace softran
