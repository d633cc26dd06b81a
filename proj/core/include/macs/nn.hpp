#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>

#include "macs/views.hpp"

namespace macs {

/// Layer widths of the branching dueling network. The defaults are the
/// production sizes; tests shrink them to keep finite-difference checks cheap.
struct NetShape {
  int arms = 1;
  int trunk_hidden1 = 512;
  int trunk_hidden2 = 256;
  int head_hidden = 128;
  bool operator==(const NetShape&) const = default;
};

/// Every trainable tensor of the network (or a gradient / moment of the same
/// shape). Arm i owns rows [i*head_hidden, (i+1)*head_hidden) of the arm hidden
/// layer and rows {2i, 2i+1} of the arm output layer.
struct NetTensors {
  Eigen::MatrixXd trunk1_w;
  Eigen::VectorXd trunk1_b;
  Eigen::MatrixXd trunk2_w;
  Eigen::VectorXd trunk2_b;
  Eigen::MatrixXd value_hidden_w;
  Eigen::VectorXd value_hidden_b;
  Eigen::MatrixXd value_out_w;
  Eigen::VectorXd value_out_b;
  Eigen::MatrixXd arm_hidden_w;
  Eigen::VectorXd arm_hidden_b;
  Eigen::MatrixXd arm_out_w;
  Eigen::VectorXd arm_out_b;

  static NetTensors zeros(const NetShape& shape);
  std::size_t parameter_count() const;
  bool all_finite() const;
  bool operator==(const NetTensors& other) const;
};

/// Applies `f` to corresponding tensors of every set, in declaration order.
template <class F, class... Sets>
void for_each_tensor(F&& f, Sets&... sets) {
  f(sets.trunk1_w...);
  f(sets.trunk1_b...);
  f(sets.trunk2_w...);
  f(sets.trunk2_b...);
  f(sets.value_hidden_w...);
  f(sets.value_hidden_b...);
  f(sets.value_out_w...);
  f(sets.value_out_b...);
  f(sets.arm_hidden_w...);
  f(sets.arm_hidden_b...);
  f(sets.arm_out_w...);
  f(sets.arm_out_b...);
}

struct AdamState {
  NetTensors m;
  NetTensors v;
  std::int64_t step = 0;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

struct ForwardOutput {
  double state_value = 0.0;
  Eigen::MatrixXd advantages;  // arms x 2
  Eigen::MatrixXd q_values;    // arms x 2
};

/// Batched outputs; column b is sample b, row 2i+a is arm i sub-action a.
struct BatchOutput {
  Eigen::RowVectorXd state_value;
  Eigen::MatrixXd advantages;
  Eigen::MatrixXd q_values;
};

/// Q_i(a) = V + A_i(a) - mean_a' A_i(a').
Eigen::MatrixXd dueling_aggregate(double state_value, const Eigen::MatrixXd& advantages);

/// Branching dueling Q-network: shared two-layer trunk, a state-value head and
/// one two-output advantage arm per BIS. Rectifiers everywhere except the
/// output layers.
class BranchingNet {
 public:
  BranchingNet() = default;
  /// Fan-in scaled uniform weights, zero biases, zero Adam moments.
  BranchingNet(const NetShape& shape, double input_scale, std::uint64_t seed,
               double input_cap = std::numeric_limits<double>::infinity());

  const NetShape& shape() const { return shape_; }
  int arms() const { return shape_.arms; }
  double input_scale() const { return input_scale_; }
  double input_cap() const { return input_cap_; }

  NetTensors& weights() { return weights_; }
  const NetTensors& weights() const { return weights_; }
  AdamState& adam() { return adam_; }
  const AdamState& adam() const { return adam_; }

  /// Staleness counts scaled into network input, clipped at the input cap.
  Eigen::VectorXd encode(const StalenessVector& state) const;

  ForwardOutput forward(const Eigen::VectorXd& input) const;
  BatchOutput forward_batch(const Eigen::MatrixXd& inputs) const;

  /// Gradient of the mean over samples of (1/arms) * sum_i (y_i - Q_i(s, a_i))^2.
  /// `chosen` and `targets` are arms x batch. Returns the loss.
  double backward(const Eigen::MatrixXd& inputs, const Eigen::MatrixXi& chosen, const Eigen::MatrixXd& targets,
                  NetTensors& gradients) const;

  double loss(const Eigen::MatrixXd& inputs, const Eigen::MatrixXi& chosen, const Eigen::MatrixXd& targets) const;

  /// Bias-corrected Adam update; increments the step counter.
  void adam_step(const NetTensors& gradients, double learning_rate);

  /// Exact value copy of shape, weights and optimizer state into `dst`.
  void copy_into(BranchingNet& dst) const;

  /// Used by checkpoint loading.
  static BranchingNet from_parts(const NetShape& shape, double input_scale, double input_cap, NetTensors weights,
                                 AdamState adam);

 private:
  struct Activations;
  void run(const Eigen::MatrixXd& inputs, Activations& act) const;

  NetShape shape_;
  double input_scale_ = 1.0;
  double input_cap_ = std::numeric_limits<double>::infinity();
  NetTensors weights_;
  AdamState adam_;
};

}  // namespace macs
