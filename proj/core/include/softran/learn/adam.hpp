#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace softran::learn {

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam over one flat parameter vector.
class Adam {
 public:
  Adam() = default;
  Adam(std::size_t param_count, AdamConfig config);

  // Throws std::invalid_argument on a shape mismatch or a non-finite gradient.
  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

  const AdamConfig& config() const { return config_; }
  std::uint64_t steps() const { return steps_; }
  const Eigen::VectorXd& first_moment() const { return m_; }
  const Eigen::VectorXd& second_moment() const { return v_; }

 private:
  AdamConfig config_;
  std::uint64_t steps_ = 0;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
};

}  // namespace softran::learn
