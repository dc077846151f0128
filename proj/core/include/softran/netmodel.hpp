#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace softran {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(Position a, Position b);

// One re-configurable radio system (base station).
struct Rrs {
  Position position;
  double cell_radius = 0.0;  // m
  double p_max = 0.0;        // W
};

struct Topology {
  double area_radius = 0.0;  // m
  std::vector<Rrs> rrs;
  std::size_t subcarrier_count = 0;
  double bandwidth_per_subcarrier = 0.0;  // Hz

  std::size_t rrs_count() const { return rrs.size(); }
};

struct TopologyParams {
  std::size_t rrs_count = 4;
  double area_radius = 500.0;
  double cell_radius = 100.0;
  double p_max_watts = 10.0;
  std::size_t subcarrier_count = 32;
  double bandwidth_per_subcarrier = 15e3;
};

// Log-distance path gain: reference_gain * d^-exponent.
struct PathLossModel {
  double exponent = 3.0;
  double reference_gain = 1.0;
};

// Reference gain that puts the cell-edge SNR at `edge_snr_db` when an RRS
// transmits `p_max` over a link with noise power `noise_power`.
PathLossModel calibrated_path_loss(double exponent, double edge_snr_db, double cell_radius,
                                   double p_max, double noise_power);

double path_gain(double distance, const PathLossModel& model);

// Users closer than this to an RRS are evaluated at this distance.
inline constexpr double kMinLinkDistance = 1.0;

// Places the RRS sites deterministically from `seed`. Sites keep their whole
// cell inside the coverage area and are spread out by rejection sampling.
Topology generate_topology(const TopologyParams& params, std::uint64_t seed);

struct User {
  std::uint64_t id = 0;
  Position position;
  std::size_t serving_rrs = 0;
};

struct UserSet {
  std::vector<User> users;
  // per_rrs[b] holds indices into `users`, ascending.
  std::vector<std::vector<std::size_t>> per_rrs;
  std::uint64_t next_id = 0;

  std::size_t size() const { return users.size(); }
  std::vector<std::size_t> counts() const;
  // Rebuilds per_rrs from the users' serving_rrs fields.
  void rebuild_partition(std::size_t rrs_count);
};

double large_scale_gain(const Rrs& rrs, Position user, const PathLossModel& model);

// Strongest large-scale gain; ties go to the lowest RRS index.
std::size_t associate(const Topology& topology, Position user, const PathLossModel& model);

// The position of user `id` is a pure function of (seed, id), so a larger
// population always contains the smaller one.
Position user_position(const Topology& topology, std::uint64_t seed, std::uint64_t id);

UserSet spawn_users(const Topology& topology, const PathLossModel& model, std::size_t n_users,
                    std::uint64_t seed);

struct TrafficParams {
  double arrival_rate = 0.0;    // mean arrivals per slot
  double departure_prob = 0.0;  // per-user, per-slot
};

// Bernoulli departures followed by Poisson arrivals. New users are associated
// on arrival; existing users keep their serving RRS.
UserSet step_traffic(const UserSet& users, const Topology& topology, const PathLossModel& model,
                     const TrafficParams& traffic, std::uint64_t seed, std::uint64_t slot);

// h[b][u][k] = large[b][u] * small[b][u][k]; u indexes UserSet::users.
class ChannelTensor {
 public:
  ChannelTensor() = default;
  ChannelTensor(std::size_t rrs, std::size_t users, std::size_t subcarriers);

  std::size_t rrs_count() const { return rrs_; }
  std::size_t user_count() const { return users_; }
  std::size_t subcarrier_count() const { return subcarriers_; }

  double large(std::size_t b, std::size_t u) const { return large_[b * users_ + u]; }
  double small(std::size_t b, std::size_t u, std::size_t k) const {
    return small_[(b * users_ + u) * subcarriers_ + k];
  }
  double gain(std::size_t b, std::size_t u, std::size_t k) const {
    return large(b, u) * small(b, u, k);
  }

  double& large(std::size_t b, std::size_t u) { return large_[b * users_ + u]; }
  double& small(std::size_t b, std::size_t u, std::size_t k) {
    return small_[(b * users_ + u) * subcarriers_ + k];
  }

  std::span<const double> small_values() const { return small_; }

 private:
  std::size_t rrs_ = 0;
  std::size_t users_ = 0;
  std::size_t subcarriers_ = 0;
  std::vector<double> large_;
  std::vector<double> small_;
};

// Small-scale fading is keyed by (seed, slot, user id), so it does not depend
// on which other users are present.
ChannelTensor sample_channels(const Topology& topology, const PathLossModel& model,
                              const UserSet& users, std::uint64_t seed, std::uint64_t slot);

}  // namespace softran
