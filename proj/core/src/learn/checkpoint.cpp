#include "softran/learn/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

namespace softran::learn {

nlohmann::json to_json(const Mlp& net) {
  nlohmann::json j;
  j["layer_sizes"] = net.layer_sizes();
  j["activation"] = net.activation() == Activation::Tanh ? "tanh" : "relu";
  auto& layers = j["layers"] = nlohmann::json::array();
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const auto w = net.weights(l);
    std::vector<double> row_major;
    row_major.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) row_major.push_back(w(r, c));
    }
    const auto b = net.bias(l);
    layers.push_back({{"weights", row_major}, {"bias", std::vector<double>(b.begin(), b.end())}});
  }
  return j;
}

Mlp mlp_from_json(const nlohmann::json& j) {
  const auto sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
  const auto act = j.at("activation").get<std::string>();
  if (act != "tanh" && act != "relu") throw std::invalid_argument("unknown activation " + act);
  Mlp net = Mlp::zeros(sizes, act == "tanh" ? Activation::Tanh : Activation::Relu);
  const auto& layers = j.at("layers");
  if (layers.size() != net.layer_count()) throw std::invalid_argument("checkpoint layer count");
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const auto weights = layers[l].at("weights").get<std::vector<double>>();
    const auto bias = layers[l].at("bias").get<std::vector<double>>();
    auto w = net.mutable_weights(l);
    auto b = net.mutable_bias(l);
    if (weights.size() != static_cast<std::size_t>(w.size()) ||
        bias.size() != static_cast<std::size_t>(b.size())) {
      throw std::invalid_argument("checkpoint layer shape mismatch");
    }
    std::size_t i = 0;
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = weights[i++];
    }
    for (Eigen::Index r = 0; r < b.size(); ++r) b(r) = bias[static_cast<std::size_t>(r)];
  }
  return net;
}

nlohmann::json to_json(const SacAgent& agent) {
  return {{"kind", "sac"},
          {"actor", to_json(agent.actor())},
          {"critic1", to_json(agent.critic(0))},
          {"critic2", to_json(agent.critic(1))},
          {"target_critic1", to_json(agent.target_critic(0))},
          {"target_critic2", to_json(agent.target_critic(1))},
          {"log_temperature", agent.log_temperature()}};
}

nlohmann::json to_json(const DqnAgent& agent) {
  return {{"kind", "dqn"},
          {"branch_sizes", agent.branch_sizes()},
          {"network", to_json(agent.network())},
          {"target_network", to_json(agent.target_network())}};
}

nlohmann::json to_json(const DdpgAgent& agent) {
  return {{"kind", "ddpg"},
          {"actor", to_json(agent.actor())},
          {"critic", to_json(agent.critic())},
          {"target_actor", to_json(agent.target_actor())},
          {"target_critic", to_json(agent.target_critic())}};
}

namespace {

void assign(Mlp& dst, const nlohmann::json& j) {
  Mlp src = mlp_from_json(j);
  if (src.layer_sizes() != dst.layer_sizes()) {
    throw std::invalid_argument("checkpoint does not match the agent's network shape");
  }
  dst.mutable_params() = src.params();
}

}  // namespace

void load_json(SacAgent& agent, const nlohmann::json& j) {
  if (j.at("kind") != "sac") throw std::invalid_argument("not a SAC checkpoint");
  assign(agent.actor(), j.at("actor"));
  assign(agent.critic(0), j.at("critic1"));
  assign(agent.critic(1), j.at("critic2"));
  assign(agent.target_critic(0), j.at("target_critic1"));
  assign(agent.target_critic(1), j.at("target_critic2"));
  agent.set_log_temperature(j.at("log_temperature").get<double>());
}

void write_checkpoint(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
  out << j.dump() << '\n';
}

nlohmann::json read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path.string());
  return nlohmann::json::parse(in);
}

}  // namespace softran::learn
