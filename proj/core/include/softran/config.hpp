#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "softran/allocators.hpp"
#include "softran/netmodel.hpp"
#include "softran/phy_metrics.hpp"
#include "softran/sdn_controller.hpp"

namespace softran {

enum class Scheme { Smart, FixedCentralized, FixedDistributed, EqualPower };

const char* to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every knob of one simulation run. Field names match the config file keys.
struct ScenarioConfig {
  // topology
  std::size_t rrs_count = 4;
  double area_radius_m = 500.0;
  double cell_radius_m = 100.0;
  double p_max_dbm = 40.0;
  std::size_t subcarrier_count = 32;
  double subcarrier_bandwidth_hz = 15e3;
  double noise_dbm_per_hz = -174.0;
  double path_loss_exponent = 3.0;
  double edge_snr_db = 10.0;

  // population
  std::size_t users = 8;
  double arrival_rate = 0.0;
  double departure_prob = 0.0;

  // overhead and TOC
  std::uint64_t bits_power = 4;
  std::uint64_t bits_csi = 16;
  std::uint64_t bits_subcarriers = 4;
  double toc_alpha = 3e-6;
  double toc_beta = 9.3;

  // run
  std::size_t slots = 2000;
  std::size_t train_slots = 1500;
  std::size_t memory_slots = 10;
  std::uint64_t seed = 1;
  Scheme scheme = Scheme::Smart;
  LearnerKind learner = LearnerKind::Sac;

  // learners
  std::vector<std::size_t> hidden_layers{64, 64};
  std::string activation = "tanh";
  double actor_lr = 3e-4;
  double critic_lr = 3e-4;
  double temperature_lr = 3e-4;
  double discount = 0.99;
  double polyak = 0.995;
  double initial_temperature = 0.2;
  std::size_t batch_size = 64;
  std::size_t buffer_capacity = 100000;
  double dqn_lr = 1e-3;
  double dqn_epsilon = 0.1;
  double ddpg_lr = 1e-3;
  double ddpg_noise = 0.1;

  double noise_power() const;  // W per subcarrier
  double p_max_watts() const;
  TopologyParams topology_params() const;
  PathLossModel path_loss() const;
  TrafficParams traffic() const;
  BitBudget bit_budget() const;
  TocWeights toc_weights() const;
  LearnerSettings learner_settings() const;
  SdnConfig sdn_config() const;

  bool operator==(const ScenarioConfig&) const = default;
};

// Throws ConfigError describing the first invalid field.
void validate(const ScenarioConfig& config);

// Flat "key = value" text; '#' starts a comment. Unknown keys and malformed
// values are errors that carry the line number.
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
ScenarioConfig parse_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioConfig& config);

// Sets a single key from its textual value.
void set_config_value(ScenarioConfig& config, const std::string& key, const std::string& value);
std::vector<std::string> config_keys();

inline constexpr const char* kEnvPrefix = "SOFTRAN_";

// Applies SOFTRAN_<KEY> overrides, e.g. SOFTRAN_RRS_COUNT=2.
void apply_env_overrides(ScenarioConfig& config,
                         const std::function<std::optional<std::string>(const std::string&)>& getenv);
void apply_env_overrides(ScenarioConfig& config);

}  // namespace softran
