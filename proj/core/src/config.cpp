#include "softran/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace softran {

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Smart: return "smart";
    case Scheme::FixedCentralized: return "fixed-centralized";
    case Scheme::FixedDistributed: return "fixed-distributed";
    case Scheme::EqualPower: return "equal-power-baseline";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "smart") return Scheme::Smart;
  if (name == "fixed-centralized") return Scheme::FixedCentralized;
  if (name == "fixed-distributed") return Scheme::FixedDistributed;
  if (name == "equal-power-baseline") return Scheme::EqualPower;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

double ScenarioConfig::noise_power() const {
  return std::pow(10.0, (noise_dbm_per_hz - 30.0) / 10.0) * subcarrier_bandwidth_hz;
}

double ScenarioConfig::p_max_watts() const { return std::pow(10.0, (p_max_dbm - 30.0) / 10.0); }

TopologyParams ScenarioConfig::topology_params() const {
  return TopologyParams{rrs_count,          area_radius_m,          cell_radius_m,
                        p_max_watts(),      subcarrier_count,       subcarrier_bandwidth_hz};
}

PathLossModel ScenarioConfig::path_loss() const {
  return calibrated_path_loss(path_loss_exponent, edge_snr_db, cell_radius_m, p_max_watts(),
                              noise_power());
}

TrafficParams ScenarioConfig::traffic() const { return {arrival_rate, departure_prob}; }

BitBudget ScenarioConfig::bit_budget() const { return {bits_power, bits_csi, bits_subcarriers}; }

TocWeights ScenarioConfig::toc_weights() const { return {toc_alpha, toc_beta}; }

LearnerSettings ScenarioConfig::learner_settings() const {
  const auto act = activation == "relu" ? learn::Activation::Relu : learn::Activation::Tanh;
  LearnerSettings s;
  s.kind = learner;
  s.batch_size = batch_size;
  s.buffer_capacity = buffer_capacity;
  s.sac.hidden = hidden_layers;
  s.sac.activation = act;
  s.sac.actor_lr = actor_lr;
  s.sac.critic_lr = critic_lr;
  s.sac.temperature_lr = temperature_lr;
  s.sac.discount = discount;
  s.sac.target_rate = 1.0 - polyak;
  s.sac.initial_temperature = initial_temperature;
  s.dqn.hidden = hidden_layers;
  s.dqn.learning_rate = dqn_lr;
  s.dqn.discount = discount;
  s.dqn.target_rate = 1.0 - polyak;
  s.dqn.epsilon = dqn_epsilon;
  s.ddpg.hidden = hidden_layers;
  s.ddpg.activation = act;
  s.ddpg.actor_lr = ddpg_lr;
  s.ddpg.critic_lr = ddpg_lr;
  s.ddpg.discount = discount;
  s.ddpg.target_rate = 1.0 - polyak;
  s.ddpg.exploration_noise = ddpg_noise;
  return s;
}

SdnConfig ScenarioConfig::sdn_config() const {
  SdnConfig c;
  c.memory_slots = memory_slots;
  c.batch_size = batch_size;
  c.buffer_capacity = buffer_capacity;
  c.warmup = batch_size;
  c.sac = learner_settings().sac;
  return c;
}

void validate(const ScenarioConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid config: " + what);
  };
  require(c.rrs_count >= 1, "rrs_count must be >= 1");
  require(c.area_radius_m > 0.0, "area_radius_m must be positive");
  require(c.cell_radius_m > 0.0, "cell_radius_m must be positive");
  require(c.cell_radius_m <= c.area_radius_m, "cell_radius_m must not exceed area_radius_m");
  require(c.subcarrier_count >= 1, "subcarrier_count must be >= 1");
  require(c.subcarrier_bandwidth_hz > 0.0, "subcarrier_bandwidth_hz must be positive");
  require(std::isfinite(c.p_max_dbm), "p_max_dbm must be finite");
  require(std::isfinite(c.noise_dbm_per_hz), "noise_dbm_per_hz must be finite");
  require(c.path_loss_exponent > 0.0, "path_loss_exponent must be positive");
  require(c.arrival_rate >= 0.0 && std::isfinite(c.arrival_rate), "arrival_rate must be >= 0");
  require(c.departure_prob >= 0.0 && c.departure_prob <= 1.0, "departure_prob must be in [0,1]");
  require(c.toc_alpha >= 0.0 && c.toc_beta >= 0.0, "toc weights must be >= 0");
  require(c.train_slots <= c.slots, "train_slots must not exceed slots");
  require(c.memory_slots >= 1, "memory_slots must be >= 1");
  require(!c.hidden_layers.empty(), "hidden_layers must list at least one layer");
  require(std::all_of(c.hidden_layers.begin(), c.hidden_layers.end(),
                      [](std::size_t n) { return n > 0; }),
          "hidden layer sizes must be positive");
  require(c.activation == "tanh" || c.activation == "relu", "activation must be tanh or relu");
  require(c.batch_size >= 1, "batch_size must be >= 1");
  require(c.buffer_capacity >= c.batch_size, "buffer_capacity must be >= batch_size");
  require(c.discount >= 0.0 && c.discount <= 1.0, "discount must be in [0,1]");
  require(c.polyak >= 0.0 && c.polyak <= 1.0, "polyak must be in [0,1]");
  require(c.initial_temperature > 0.0, "initial_temperature must be positive");
  require(c.actor_lr >= 0.0 && c.critic_lr >= 0.0 && c.temperature_lr >= 0.0 && c.dqn_lr >= 0.0 &&
              c.ddpg_lr >= 0.0,
          "learning rates must be >= 0");
  require(c.dqn_epsilon >= 0.0 && c.dqn_epsilon <= 1.0, "dqn_epsilon must be in [0,1]");
  require(c.ddpg_noise >= 0.0, "ddpg_noise must be >= 0");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (v.empty() || ec != std::errc{} || ptr != end || !std::isfinite(out)) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (v.empty() || ec != std::errc{} || ptr != end) {
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct Field {
  const char* key;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&)> set;
};

template <typename T>
Field real(const char* key, T ScenarioConfig::*member) {
  return {key, [member](const ScenarioConfig& c) { return format_double(c.*member); },
          [key, member](ScenarioConfig& c, const std::string& v) { c.*member = parse_double(key, v); }};
}

template <typename T>
Field integer(const char* key, T ScenarioConfig::*member) {
  return {key, [member](const ScenarioConfig& c) { return std::to_string(c.*member); },
          [key, member](ScenarioConfig& c, const std::string& v) {
            c.*member = static_cast<T>(parse_uint(key, v));
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(integer("rrs_count", &ScenarioConfig::rrs_count));
    f.push_back(real("area_radius_m", &ScenarioConfig::area_radius_m));
    f.push_back(real("cell_radius_m", &ScenarioConfig::cell_radius_m));
    f.push_back(real("p_max_dbm", &ScenarioConfig::p_max_dbm));
    f.push_back(integer("subcarrier_count", &ScenarioConfig::subcarrier_count));
    f.push_back(real("subcarrier_bandwidth_hz", &ScenarioConfig::subcarrier_bandwidth_hz));
    f.push_back(real("noise_dbm_per_hz", &ScenarioConfig::noise_dbm_per_hz));
    f.push_back(real("path_loss_exponent", &ScenarioConfig::path_loss_exponent));
    f.push_back(real("edge_snr_db", &ScenarioConfig::edge_snr_db));
    f.push_back(integer("users", &ScenarioConfig::users));
    f.push_back(real("arrival_rate", &ScenarioConfig::arrival_rate));
    f.push_back(real("departure_prob", &ScenarioConfig::departure_prob));
    f.push_back(integer("bits_power", &ScenarioConfig::bits_power));
    f.push_back(integer("bits_csi", &ScenarioConfig::bits_csi));
    f.push_back(integer("bits_subcarriers", &ScenarioConfig::bits_subcarriers));
    f.push_back(real("toc_alpha", &ScenarioConfig::toc_alpha));
    f.push_back(real("toc_beta", &ScenarioConfig::toc_beta));
    f.push_back(integer("slots", &ScenarioConfig::slots));
    f.push_back(integer("train_slots", &ScenarioConfig::train_slots));
    f.push_back(integer("memory_slots", &ScenarioConfig::memory_slots));
    f.push_back(integer("seed", &ScenarioConfig::seed));
    f.push_back({"scheme", [](const ScenarioConfig& c) { return std::string(to_string(c.scheme)); },
                 [](ScenarioConfig& c, const std::string& v) {
                   try {
                     c.scheme = scheme_from_string(v);
                   } catch (const std::invalid_argument& e) {
                     throw ConfigError("key 'scheme': " + std::string(e.what()));
                   }
                 }});
    f.push_back({"learner", [](const ScenarioConfig& c) { return std::string(to_string(c.learner)); },
                 [](ScenarioConfig& c, const std::string& v) {
                   try {
                     c.learner = learner_from_string(v);
                   } catch (const std::invalid_argument& e) {
                     throw ConfigError("key 'learner': " + std::string(e.what()));
                   }
                 }});
    f.push_back({"hidden_layers",
                 [](const ScenarioConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.hidden_layers.size(); ++i) {
                     if (i) out += ',';
                     out += std::to_string(c.hidden_layers[i]);
                   }
                   return out;
                 },
                 [](ScenarioConfig& c, const std::string& v) {
                   std::vector<std::size_t> sizes;
                   std::stringstream ss(v);
                   std::string part;
                   while (std::getline(ss, part, ',')) {
                     sizes.push_back(static_cast<std::size_t>(parse_uint("hidden_layers", trim(part))));
                   }
                   if (sizes.empty()) throw ConfigError("key 'hidden_layers': empty list");
                   c.hidden_layers = std::move(sizes);
                 }});
    f.push_back({"activation", [](const ScenarioConfig& c) { return c.activation; },
                 [](ScenarioConfig& c, const std::string& v) {
                   if (v != "tanh" && v != "relu") {
                     throw ConfigError("key 'activation': expected tanh or relu, got '" + v + "'");
                   }
                   c.activation = v;
                 }});
    f.push_back(real("actor_lr", &ScenarioConfig::actor_lr));
    f.push_back(real("critic_lr", &ScenarioConfig::critic_lr));
    f.push_back(real("temperature_lr", &ScenarioConfig::temperature_lr));
    f.push_back(real("discount", &ScenarioConfig::discount));
    f.push_back(real("polyak", &ScenarioConfig::polyak));
    f.push_back(real("initial_temperature", &ScenarioConfig::initial_temperature));
    f.push_back(integer("batch_size", &ScenarioConfig::batch_size));
    f.push_back(integer("buffer_capacity", &ScenarioConfig::buffer_capacity));
    f.push_back(real("dqn_lr", &ScenarioConfig::dqn_lr));
    f.push_back(real("dqn_epsilon", &ScenarioConfig::dqn_epsilon));
    f.push_back(real("ddpg_lr", &ScenarioConfig::ddpg_lr));
    f.push_back(real("ddpg_noise", &ScenarioConfig::ddpg_noise));
    return f;
  }();
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& f : fields()) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.emplace_back(f.key);
  return keys;
}

void set_config_value(ScenarioConfig& config, const std::string& key, const std::string& value) {
  const Field* field = find_field(key);
  if (!field) throw ConfigError("unknown key '" + key + "'");
  field->set(config, value);
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
  ScenarioConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      set_config_value(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  try {
    validate(config);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return config;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string());
}

std::string serialize_config(const ScenarioConfig& config) {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(config);
    out += '\n';
  }
  return out;
}

void apply_env_overrides(
    ScenarioConfig& config,
    const std::function<std::optional<std::string>(const std::string&)>& getenv) {
  for (const auto& f : fields()) {
    std::string name = kEnvPrefix;
    for (const char* p = f.key; *p; ++p) {
      name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    }
    if (auto value = getenv(name)) {
      try {
        f.set(config, trim(*value));
      } catch (const ConfigError& e) {
        throw ConfigError("environment " + name + ": " + e.what());
      }
    }
  }
  validate(config);
}

void apply_env_overrides(ScenarioConfig& config) {
  apply_env_overrides(config, [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  });
}

}  // namespace softran
