#include "softran/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "softran/rng.hpp"

namespace softran {

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

PathLossModel calibrated_path_loss(double exponent, double edge_snr_db, double cell_radius,
                                   double p_max, double noise_power) {
  if (!(cell_radius > 0.0) || !(p_max > 0.0) || !(noise_power > 0.0)) {
    throw std::invalid_argument("path loss calibration needs positive radius, power and noise");
  }
  const double snr = std::pow(10.0, edge_snr_db / 10.0);
  return PathLossModel{exponent, snr * noise_power / (p_max * std::pow(cell_radius, -exponent))};
}

double path_gain(double distance, const PathLossModel& model) {
  if (!(distance > 0.0)) {
    throw std::invalid_argument("path_gain: distance must be positive");
  }
  return model.reference_gain * std::pow(distance, -model.exponent);
}

namespace {

Position uniform_in_disc(Rng& rng, double radius) {
  const double r = radius * std::sqrt(rng.uniform());
  const double theta = 2.0 * std::numbers::pi * rng.uniform();
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

Topology generate_topology(const TopologyParams& params, std::uint64_t seed) {
  if (!(params.area_radius > 0.0) || !(params.cell_radius > 0.0)) {
    throw std::invalid_argument("topology radii must be positive");
  }
  if (params.rrs_count == 0) throw std::invalid_argument("topology needs at least one RRS");
  if (params.subcarrier_count == 0) throw std::invalid_argument("topology needs subcarriers");
  if (!(params.p_max_watts > 0.0)) throw std::invalid_argument("p_max must be positive");
  if (!(params.bandwidth_per_subcarrier > 0.0)) {
    throw std::invalid_argument("subcarrier bandwidth must be positive");
  }

  Topology topology;
  topology.area_radius = params.area_radius;
  topology.subcarrier_count = params.subcarrier_count;
  topology.bandwidth_per_subcarrier = params.bandwidth_per_subcarrier;

  Rng rng(seed, Stream::Topology);
  const double site_radius = std::max(0.0, params.area_radius - params.cell_radius);
  const double min_spacing = 2.0 * params.cell_radius;
  constexpr int kAttempts = 200;
  for (std::size_t b = 0; b < params.rrs_count; ++b) {
    Position best{};
    double best_spacing = -1.0;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      const Position candidate = uniform_in_disc(rng, site_radius);
      double spacing = std::numeric_limits<double>::infinity();
      for (const auto& other : topology.rrs) {
        spacing = std::min(spacing, distance(candidate, other.position));
      }
      if (spacing > best_spacing) {
        best = candidate;
        best_spacing = spacing;
      }
      if (spacing >= min_spacing) break;
    }
    topology.rrs.push_back(Rrs{best, params.cell_radius, params.p_max_watts});
  }
  return topology;
}

std::vector<std::size_t> UserSet::counts() const {
  std::vector<std::size_t> out(per_rrs.size());
  for (std::size_t b = 0; b < per_rrs.size(); ++b) out[b] = per_rrs[b].size();
  return out;
}

void UserSet::rebuild_partition(std::size_t rrs_count) {
  per_rrs.assign(rrs_count, {});
  for (std::size_t i = 0; i < users.size(); ++i) {
    per_rrs.at(users[i].serving_rrs).push_back(i);
  }
}

double large_scale_gain(const Rrs& rrs, Position user, const PathLossModel& model) {
  return path_gain(std::max(distance(rrs.position, user), kMinLinkDistance), model);
}

std::size_t associate(const Topology& topology, Position user, const PathLossModel& model) {
  std::size_t best = 0;
  double best_gain = -1.0;
  for (std::size_t b = 0; b < topology.rrs_count(); ++b) {
    const double g = large_scale_gain(topology.rrs[b], user, model);
    if (g > best_gain) {
      best_gain = g;
      best = b;
    }
  }
  return best;
}

Position user_position(const Topology& topology, std::uint64_t seed, std::uint64_t id) {
  Rng rng(seed, Stream::Users, {id});
  return uniform_in_disc(rng, topology.area_radius);
}

UserSet spawn_users(const Topology& topology, const PathLossModel& model, std::size_t n_users,
                    std::uint64_t seed) {
  UserSet set;
  set.users.reserve(n_users);
  for (std::uint64_t id = 0; id < n_users; ++id) {
    const Position pos = user_position(topology, seed, id);
    set.users.push_back(User{id, pos, associate(topology, pos, model)});
  }
  set.next_id = n_users;
  set.rebuild_partition(topology.rrs_count());
  return set;
}

UserSet step_traffic(const UserSet& users, const Topology& topology, const PathLossModel& model,
                     const TrafficParams& traffic, std::uint64_t seed, std::uint64_t slot) {
  if (!(traffic.arrival_rate >= 0.0) || !std::isfinite(traffic.arrival_rate)) {
    throw std::invalid_argument("arrival rate must be finite and non-negative");
  }
  if (!(traffic.departure_prob >= 0.0 && traffic.departure_prob <= 1.0)) {
    throw std::invalid_argument("departure probability must lie in [0, 1]");
  }
  UserSet next;
  next.next_id = users.next_id;
  next.users.reserve(users.users.size());
  for (const auto& user : users.users) {
    Rng rng(seed, Stream::Traffic, {slot, user.id});
    if (!rng.bernoulli(traffic.departure_prob)) next.users.push_back(user);
  }
  Rng arrivals(seed, Stream::Traffic, {slot, ~std::uint64_t{0}});
  const std::uint64_t n_new = arrivals.poisson(traffic.arrival_rate);
  for (std::uint64_t i = 0; i < n_new; ++i) {
    const std::uint64_t id = next.next_id++;
    const Position pos = user_position(topology, seed, id);
    next.users.push_back(User{id, pos, associate(topology, pos, model)});
  }
  next.rebuild_partition(topology.rrs_count());
  return next;
}

ChannelTensor::ChannelTensor(std::size_t rrs, std::size_t users, std::size_t subcarriers)
    : rrs_(rrs),
      users_(users),
      subcarriers_(subcarriers),
      large_(rrs * users, 0.0),
      small_(rrs * users * subcarriers, 0.0) {}

ChannelTensor sample_channels(const Topology& topology, const PathLossModel& model,
                              const UserSet& users, std::uint64_t seed, std::uint64_t slot) {
  const std::size_t B = topology.rrs_count();
  const std::size_t K = topology.subcarrier_count;
  ChannelTensor h(B, users.size(), K);
  for (std::size_t u = 0; u < users.size(); ++u) {
    const User& user = users.users[u];
    Rng rng(seed, Stream::Channels, {slot, user.id});
    for (std::size_t b = 0; b < B; ++b) {
      h.large(b, u) = large_scale_gain(topology.rrs[b], user.position, model);
      for (std::size_t k = 0; k < K; ++k) h.small(b, u, k) = rng.exponential();
    }
  }
  return h;
}

}  // namespace softran
