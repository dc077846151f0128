#include "softran/learn/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace softran::learn {

void Mlp::layout() {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least two layer sizes");
  std::size_t offset = 0;
  weight_offset_.clear();
  bias_offset_.clear();
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] == 0 || sizes_[l + 1] == 0) throw std::invalid_argument("Mlp layer of size 0");
    weight_offset_.push_back(offset);
    offset += sizes_[l] * sizes_[l + 1];
    bias_offset_.push_back(offset);
    offset += sizes_[l + 1];
  }
  params_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(offset));
}

Mlp::Mlp(std::vector<std::size_t> layer_sizes, Activation hidden, Rng& rng)
    : sizes_(std::move(layer_sizes)), activation_(hidden) {
  layout();
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const double limit = std::sqrt(6.0 / static_cast<double>(sizes_[l] + sizes_[l + 1]));
    auto w = mutable_weights(l);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-limit, limit);
    }
  }
}

Mlp Mlp::zeros(std::vector<std::size_t> layer_sizes, Activation hidden) {
  Mlp net;
  net.sizes_ = std::move(layer_sizes);
  net.activation_ = hidden;
  net.layout();
  return net;
}

Eigen::Map<const Eigen::MatrixXd> Mlp::weights(std::size_t layer) const {
  return {params_.data() + weight_offset_.at(layer), static_cast<Eigen::Index>(sizes_[layer + 1]),
          static_cast<Eigen::Index>(sizes_[layer])};
}

Eigen::Map<const Eigen::VectorXd> Mlp::bias(std::size_t layer) const {
  return {params_.data() + bias_offset_.at(layer), static_cast<Eigen::Index>(sizes_[layer + 1])};
}

Eigen::Map<Eigen::MatrixXd> Mlp::mutable_weights(std::size_t layer) {
  ++version_;
  return {params_.data() + weight_offset_.at(layer), static_cast<Eigen::Index>(sizes_[layer + 1]),
          static_cast<Eigen::Index>(sizes_[layer])};
}

Eigen::Map<Eigen::VectorXd> Mlp::mutable_bias(std::size_t layer) {
  ++version_;
  return {params_.data() + bias_offset_.at(layer), static_cast<Eigen::Index>(sizes_[layer + 1])};
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& input) const {
  Eigen::MatrixXd batch = input;
  return forward(batch).col(0);
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input, ForwardCache* cache) const {
  if (static_cast<std::size_t>(input.rows()) != input_size()) {
    throw std::invalid_argument("Mlp::forward: input has " + std::to_string(input.rows()) +
                                " rows, expected " + std::to_string(input_size()));
  }
  if (cache) {
    cache->activations.clear();
    cache->activations.reserve(sizes_.size());
    cache->activations.push_back(input);
    cache->version = version_;
  }
  Eigen::MatrixXd a = input;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    Eigen::MatrixXd z = weights(l) * a;
    z.colwise() += bias(l);
    if (l + 1 < layer_count()) {
      if (activation_ == Activation::Tanh) {
        z = z.array().tanh();
      } else {
        z = z.array().max(0.0);
      }
    }
    a = std::move(z);
    if (cache) cache->activations.push_back(a);
  }
  return a;
}

MlpGradient Mlp::backward(const ForwardCache& cache, const Eigen::MatrixXd& output_grad) const {
  if (cache.version != version_ || cache.activations.size() != sizes_.size()) {
    throw std::logic_error("Mlp::backward: stale forward cache");
  }
  const Eigen::Index batch = cache.activations.front().cols();
  if (output_grad.rows() != static_cast<Eigen::Index>(output_size()) ||
      output_grad.cols() != batch) {
    throw std::invalid_argument("Mlp::backward: output gradient shape mismatch");
  }
  MlpGradient grad;
  grad.params = Eigen::VectorXd::Zero(params_.size());
  Eigen::MatrixXd delta = output_grad;  // dLoss/dz for the current layer
  for (std::size_t l = layer_count(); l-- > 0;) {
    const Eigen::MatrixXd& a_prev = cache.activations[l];
    Eigen::Map<Eigen::MatrixXd> dw(grad.params.data() + weight_offset_[l],
                                   static_cast<Eigen::Index>(sizes_[l + 1]),
                                   static_cast<Eigen::Index>(sizes_[l]));
    Eigen::Map<Eigen::VectorXd> db(grad.params.data() + bias_offset_[l],
                                   static_cast<Eigen::Index>(sizes_[l + 1]));
    dw.noalias() = delta * a_prev.transpose();
    db = delta.rowwise().sum();
    Eigen::MatrixXd upstream = weights(l).transpose() * delta;
    if (l > 0) {
      if (activation_ == Activation::Tanh) {
        upstream.array() *= 1.0 - a_prev.array().square();
      } else {
        upstream.array() *= (a_prev.array() > 0.0).cast<double>();
      }
    }
    delta = std::move(upstream);
  }
  grad.input = std::move(delta);
  return grad;
}

void polyak_update(Mlp& target, const Mlp& online, double rate) {
  if (target.params().size() != online.params().size()) {
    throw std::invalid_argument("polyak_update: parameter shapes differ");
  }
  Eigen::VectorXd& out = target.mutable_params();
  out = rate * online.params() + (1.0 - rate) * out;
}

}  // namespace softran::learn
