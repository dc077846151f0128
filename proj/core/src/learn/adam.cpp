#include "softran/learn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace softran::learn {

Adam::Adam(std::size_t param_count, AdamConfig config)
    : config_(config),
      m_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(param_count))),
      v_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(param_count))) {}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("Adam::step: shape mismatch");
  }
  if (!grad.allFinite()) throw std::invalid_argument("Adam::step: non-finite gradient");
  ++steps_;
  m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * grad;
  v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * grad.cwiseAbs2();
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  params.array() -= config_.learning_rate * (m_.array() / c1) /
                    ((v_.array() / c2).sqrt() + config_.epsilon);
}

}  // namespace softran::learn
