#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "softran/rng.hpp"

namespace softran::learn {

enum class Activation { Tanh, Relu };

// Activations of one forward pass, kept for backpropagation. A cache is tied
// to the parameter version it was computed with.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> activations;  // [0] is the input batch
  std::uint64_t version = 0;
};

struct MlpGradient {
  Eigen::VectorXd params;  // same layout as Mlp::params()
  Eigen::MatrixXd input;   // dLoss/dInput, one column per sample
};

// Fully connected network with a shared hidden activation and an identity
// output layer. All parameters live in one flat vector: for each layer the
// weight matrix (out x in, column-major) followed by the bias.
class Mlp {
 public:
  Mlp() = default;
  // Uniform Glorot initialisation; biases start at zero.
  Mlp(std::vector<std::size_t> layer_sizes, Activation hidden, Rng& rng);
  static Mlp zeros(std::vector<std::size_t> layer_sizes, Activation hidden);

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }
  std::size_t layer_count() const { return sizes_.size() - 1; }
  Activation activation() const { return activation_; }

  Eigen::Map<const Eigen::MatrixXd> weights(std::size_t layer) const;
  Eigen::Map<const Eigen::VectorXd> bias(std::size_t layer) const;
  Eigen::Map<Eigen::MatrixXd> mutable_weights(std::size_t layer);
  Eigen::Map<Eigen::VectorXd> mutable_bias(std::size_t layer);

  const Eigen::VectorXd& params() const { return params_; }
  // Any access through this handle invalidates outstanding forward caches.
  Eigen::VectorXd& mutable_params() {
    ++version_;
    return params_;
  }
  std::uint64_t version() const { return version_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
  // Batched forward pass; each column is one sample.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, ForwardCache* cache = nullptr) const;

  // Backpropagates dLoss/dOutput through the pass recorded in `cache`.
  MlpGradient backward(const ForwardCache& cache, const Eigen::MatrixXd& output_grad) const;

 private:
  void layout();

  std::vector<std::size_t> sizes_;
  Activation activation_ = Activation::Tanh;
  Eigen::VectorXd params_;
  std::vector<std::size_t> weight_offset_;
  std::vector<std::size_t> bias_offset_;
  std::uint64_t version_ = 0;
};

// out = rate * online + (1 - rate) * out
void polyak_update(Mlp& target, const Mlp& online, double rate);

}  // namespace softran::learn
