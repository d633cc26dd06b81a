#include "macs/nn.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "macs/errors.hpp"
#include "macs/rng.hpp"

namespace macs {

NetTensors NetTensors::zeros(const NetShape& s) {
  NetTensors t;
  t.trunk1_w = Eigen::MatrixXd::Zero(s.trunk_hidden1, s.arms);
  t.trunk1_b = Eigen::VectorXd::Zero(s.trunk_hidden1);
  t.trunk2_w = Eigen::MatrixXd::Zero(s.trunk_hidden2, s.trunk_hidden1);
  t.trunk2_b = Eigen::VectorXd::Zero(s.trunk_hidden2);
  t.value_hidden_w = Eigen::MatrixXd::Zero(s.head_hidden, s.trunk_hidden2);
  t.value_hidden_b = Eigen::VectorXd::Zero(s.head_hidden);
  t.value_out_w = Eigen::MatrixXd::Zero(1, s.head_hidden);
  t.value_out_b = Eigen::VectorXd::Zero(1);
  t.arm_hidden_w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.arms) * s.head_hidden, s.trunk_hidden2);
  t.arm_hidden_b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.arms) * s.head_hidden);
  t.arm_out_w = Eigen::MatrixXd::Zero(2 * s.arms, s.head_hidden);
  t.arm_out_b = Eigen::VectorXd::Zero(2 * s.arms);
  return t;
}

std::size_t NetTensors::parameter_count() const {
  std::size_t total = 0;
  for_each_tensor([&](const auto& t) { total += static_cast<std::size_t>(t.size()); }, *this);
  return total;
}

bool NetTensors::all_finite() const {
  bool ok = true;
  for_each_tensor([&](const auto& t) { ok = ok && t.allFinite(); }, *this);
  return ok;
}

bool NetTensors::operator==(const NetTensors& other) const {
  bool same = true;
  for_each_tensor(
      [&](const auto& a, const auto& b) {
        same = same && a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
      },
      *this, other);
  return same;
}

Eigen::MatrixXd dueling_aggregate(double state_value, const Eigen::MatrixXd& advantages) {
  Eigen::MatrixXd q(advantages.rows(), 2);
  for (Eigen::Index i = 0; i < advantages.rows(); ++i) {
    const double mean = 0.5 * (advantages(i, 0) + advantages(i, 1));
    q(i, 0) = state_value + (advantages(i, 0) - mean);
    q(i, 1) = state_value + (advantages(i, 1) - mean);
  }
  return q;
}

namespace {

void init_layer(Eigen::MatrixXd& w, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(w.cols()));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = dist(rng);
  }
}

Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

void relu_backward(Eigen::MatrixXd& grad, const Eigen::MatrixXd& z) {
  grad = (z.array() > 0.0).select(grad, 0.0);
}

}  // namespace

BranchingNet::BranchingNet(const NetShape& shape, double input_scale, std::uint64_t seed, double input_cap)
    : shape_(shape), input_scale_(input_scale), input_cap_(input_cap) {
  if (shape.arms < 1) throw ShapeMismatch("network needs at least one arm");
  weights_ = NetTensors::zeros(shape);
  Rng rng = derive_rng(seed, Stream::kNetInit);
  init_layer(weights_.trunk1_w, rng);
  init_layer(weights_.trunk2_w, rng);
  init_layer(weights_.value_hidden_w, rng);
  init_layer(weights_.value_out_w, rng);
  // Each arm's hidden block has fan-in trunk_hidden2; its output rows fan-in head_hidden.
  init_layer(weights_.arm_hidden_w, rng);
  init_layer(weights_.arm_out_w, rng);
  adam_.m = NetTensors::zeros(shape);
  adam_.v = NetTensors::zeros(shape);
}

BranchingNet BranchingNet::from_parts(const NetShape& shape, double input_scale, double input_cap, NetTensors weights,
                                      AdamState adam) {
  BranchingNet net;
  net.shape_ = shape;
  net.input_scale_ = input_scale;
  net.input_cap_ = input_cap;
  net.weights_ = std::move(weights);
  net.adam_ = std::move(adam);
  return net;
}

Eigen::VectorXd BranchingNet::encode(const StalenessVector& state) const {
  if (static_cast<int>(state.counts.size()) != shape_.arms) {
    throw ShapeMismatch("state length " + std::to_string(state.counts.size()) + " != arm count " +
                        std::to_string(shape_.arms));
  }
  Eigen::VectorXd x(shape_.arms);
  for (int i = 0; i < shape_.arms; ++i) x(i) = std::min(input_cap_, static_cast<double>(state.counts[i]) * input_scale_);
  return x;
}

struct BranchingNet::Activations {
  Eigen::MatrixXd z1, h1, z2, h2, zv, hv, za, ha;
  BatchOutput out;
};

void BranchingNet::run(const Eigen::MatrixXd& x, Activations& a) const {
  if (x.rows() != shape_.arms) {
    throw ShapeMismatch("input length " + std::to_string(x.rows()) + " != arm count " +
                        std::to_string(shape_.arms));
  }
  const NetTensors& w = weights_;
  const int h = shape_.head_hidden;
  a.z1.noalias() = w.trunk1_w * x;
  a.z1.colwise() += w.trunk1_b;
  a.h1 = relu(a.z1);
  a.z2.noalias() = w.trunk2_w * a.h1;
  a.z2.colwise() += w.trunk2_b;
  a.h2 = relu(a.z2);

  a.zv.noalias() = w.value_hidden_w * a.h2;
  a.zv.colwise() += w.value_hidden_b;
  a.hv = relu(a.zv);
  a.out.state_value.noalias() = w.value_out_w * a.hv;
  a.out.state_value.array() += w.value_out_b(0);

  a.za.noalias() = w.arm_hidden_w * a.h2;
  a.za.colwise() += w.arm_hidden_b;
  a.ha = relu(a.za);
  a.out.advantages.resize(2 * shape_.arms, x.cols());
  for (int i = 0; i < shape_.arms; ++i) {
    a.out.advantages.middleRows(2 * i, 2).noalias() =
        w.arm_out_w.middleRows(2 * i, 2) * a.ha.middleRows(static_cast<Eigen::Index>(i) * h, h);
  }
  a.out.advantages.colwise() += w.arm_out_b;

  a.out.q_values.resize(2 * shape_.arms, x.cols());
  for (int i = 0; i < shape_.arms; ++i) {
    auto adv = a.out.advantages.middleRows(2 * i, 2);
    const Eigen::RowVectorXd mean = 0.5 * (adv.row(0) + adv.row(1));
    a.out.q_values.row(2 * i) = a.out.state_value + (adv.row(0) - mean);
    a.out.q_values.row(2 * i + 1) = a.out.state_value + (adv.row(1) - mean);
  }
}

BatchOutput BranchingNet::forward_batch(const Eigen::MatrixXd& inputs) const {
  Activations a;
  run(inputs, a);
  return std::move(a.out);
}

ForwardOutput BranchingNet::forward(const Eigen::VectorXd& input) const {
  BatchOutput batch = forward_batch(input);
  ForwardOutput out;
  out.state_value = batch.state_value(0);
  out.advantages = Eigen::Map<const Eigen::MatrixXd, 0, Eigen::Stride<1, 2>>(
      batch.advantages.data(), shape_.arms, 2, Eigen::Stride<1, 2>());
  out.q_values = Eigen::Map<const Eigen::MatrixXd, 0, Eigen::Stride<1, 2>>(
      batch.q_values.data(), shape_.arms, 2, Eigen::Stride<1, 2>());
  return out;
}

double BranchingNet::loss(const Eigen::MatrixXd& inputs, const Eigen::MatrixXi& chosen,
                          const Eigen::MatrixXd& targets) const {
  BatchOutput out = forward_batch(inputs);
  double total = 0.0;
  for (Eigen::Index b = 0; b < inputs.cols(); ++b) {
    for (int i = 0; i < shape_.arms; ++i) {
      const double r = targets(i, b) - out.q_values(2 * i + chosen(i, b), b);
      total += r * r;
    }
  }
  return total / (static_cast<double>(shape_.arms) * static_cast<double>(inputs.cols()));
}

double BranchingNet::backward(const Eigen::MatrixXd& inputs, const Eigen::MatrixXi& chosen,
                              const Eigen::MatrixXd& targets, NetTensors& g) const {
  const Eigen::Index batch = inputs.cols();
  if (chosen.rows() != shape_.arms || targets.rows() != shape_.arms || chosen.cols() != batch ||
      targets.cols() != batch) {
    throw ShapeMismatch("targets/chosen must be arms x batch");
  }
  Activations a;
  run(inputs, a);
  const NetTensors& w = weights_;
  const int h = shape_.head_hidden;
  const double scale = 2.0 / (static_cast<double>(shape_.arms) * static_cast<double>(batch));

  // dQ/dV = 1; dQ_i(a)/dA_i(a) = 1/2 and dQ_i(a)/dA_i(other) = -1/2.
  Eigen::MatrixXd d_adv = Eigen::MatrixXd::Zero(2 * shape_.arms, batch);
  Eigen::RowVectorXd d_value = Eigen::RowVectorXd::Zero(batch);
  double total = 0.0;
  for (Eigen::Index b = 0; b < batch; ++b) {
    for (int i = 0; i < shape_.arms; ++i) {
      const int sub = chosen(i, b);
      const double residual = targets(i, b) - a.out.q_values(2 * i + sub, b);
      total += residual * residual;
      const double dq = -scale * residual;
      d_value(b) += dq;
      d_adv(2 * i + sub, b) += 0.5 * dq;
      d_adv(2 * i + (1 - sub), b) -= 0.5 * dq;
    }
  }

  g = NetTensors::zeros(shape_);

  Eigen::MatrixXd d_ha(static_cast<Eigen::Index>(shape_.arms) * h, batch);
  for (int i = 0; i < shape_.arms; ++i) {
    auto d_out = d_adv.middleRows(2 * i, 2);
    auto hidden = a.ha.middleRows(static_cast<Eigen::Index>(i) * h, h);
    g.arm_out_w.middleRows(2 * i, 2).noalias() = d_out * hidden.transpose();
    d_ha.middleRows(static_cast<Eigen::Index>(i) * h, h).noalias() =
        w.arm_out_w.middleRows(2 * i, 2).transpose() * d_out;
  }
  g.arm_out_b = d_adv.rowwise().sum();
  relu_backward(d_ha, a.za);
  g.arm_hidden_w.noalias() = d_ha * a.h2.transpose();
  g.arm_hidden_b = d_ha.rowwise().sum();
  Eigen::MatrixXd d_h2 = w.arm_hidden_w.transpose() * d_ha;

  g.value_out_w.noalias() = d_value * a.hv.transpose();
  g.value_out_b(0) = d_value.sum();
  Eigen::MatrixXd d_hv = w.value_out_w.transpose() * d_value;
  relu_backward(d_hv, a.zv);
  g.value_hidden_w.noalias() = d_hv * a.h2.transpose();
  g.value_hidden_b = d_hv.rowwise().sum();
  d_h2.noalias() += w.value_hidden_w.transpose() * d_hv;

  relu_backward(d_h2, a.z2);
  g.trunk2_w.noalias() = d_h2 * a.h1.transpose();
  g.trunk2_b = d_h2.rowwise().sum();
  Eigen::MatrixXd d_h1 = w.trunk2_w.transpose() * d_h2;
  relu_backward(d_h1, a.z1);
  g.trunk1_w.noalias() = d_h1 * inputs.transpose();
  g.trunk1_b = d_h1.rowwise().sum();

  return total / (static_cast<double>(shape_.arms) * static_cast<double>(batch));
}

void BranchingNet::adam_step(const NetTensors& gradients, double learning_rate) {
  adam_.step += 1;
  const double t = static_cast<double>(adam_.step);
  const double correction1 = 1.0 - std::pow(kAdamBeta1, t);
  const double correction2 = 1.0 - std::pow(kAdamBeta2, t);
  for_each_tensor(
      [&](auto& param, const auto& grad, auto& m, auto& v) {
        m.array() = kAdamBeta1 * m.array() + (1.0 - kAdamBeta1) * grad.array();
        v.array() = kAdamBeta2 * v.array() + (1.0 - kAdamBeta2) * grad.array().square();
        param.array() -= learning_rate * (m.array() / correction1) /
                         ((v.array() / correction2).sqrt() + kAdamEpsilon);
      },
      weights_, gradients, adam_.m, adam_.v);
}

void BranchingNet::copy_into(BranchingNet& dst) const {
  if (!(dst.shape_ == shape_)) throw ShapeMismatch("copy_into between networks of different shapes");
  dst.input_scale_ = input_scale_;
  dst.input_cap_ = input_cap_;
  dst.weights_ = weights_;
  dst.adam_ = adam_;
}

}  // namespace macs
