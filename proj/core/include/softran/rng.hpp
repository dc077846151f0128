#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace softran {

// Substream tags. Every random draw in the simulator is keyed by
// (seed, tag, indices...) so that streams never overlap.
enum class Stream : std::uint64_t {
  Topology = 1,
  Users = 2,
  Channels = 3,
  Traffic = 4,
  SdnAgent = 5,
  CentralAgent = 6,
  LocalAgent = 7,
  Evaluation = 8,
};

std::uint64_t splitmix64(std::uint64_t x);

// Hashes a seed and an index path into one 64-bit key.
std::uint64_t stream_key(std::uint64_t seed, Stream tag,
                         std::initializer_list<std::uint64_t> indices = {});

// Deterministic random source. Transforms are written out by hand so that
// streams are reproducible across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : engine_(splitmix64(key)) {}
  Rng(std::uint64_t seed, Stream tag, std::initializer_list<std::uint64_t> indices = {})
      : Rng(stream_key(seed, tag, indices)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform();
  // Uniform in the open interval (0, 1).
  double uniform_open();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  // Unit-mean exponential; strictly positive.
  double exponential();
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t poisson(double mean);
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace softran
