#include "macs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace macs {

void validate(const DynamicsConfig& config) {
  if (const auto* g = std::get_if<GaussianValues>(&config.value_distribution)) {
    if (!(g->clamp_min > 0.0)) throw std::invalid_argument("clamp_min must be positive");
    if (!(g->std >= 0.0)) throw std::invalid_argument("value std must be nonnegative");
  } else {
    const auto& u = std::get<UniformSetValues>(config.value_distribution);
    if (u.values.empty()) throw std::invalid_argument("value set is empty");
    for (double v : u.values) {
      if (!(v > 0.0)) throw std::invalid_argument("value set entries must be positive");
    }
  }
  const auto& cp = config.change_profile;
  if (!(cp.peak_prob >= 0.0 && cp.peak_prob <= 1.0)) throw std::invalid_argument("peak_prob must be in [0,1]");
  if (!(cp.std > 0.0)) throw std::invalid_argument("change profile std must be positive");
  if (!(config.budget_mean > 0.0)) throw std::invalid_argument("budget mean must be positive");
  if (config.requests_per_domain < 1) throw std::invalid_argument("requests_per_domain must be positive");
  if (!(config.request_zipf.beta > 0.0)) throw std::invalid_argument("zipf beta must be positive");
  if (!(config.request_zipf.q > -1.0)) throw std::invalid_argument("zipf q must exceed -1");
}

std::vector<double> change_probabilities(const DynamicsConfig& config, std::size_t n) {
  const auto& cp = config.change_profile;
  // Log-densities keep the ratio exact even when individual densities underflow.
  std::vector<double> log_density(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (static_cast<double>(i) - cp.mean) / cp.std;
    log_density[i] = -0.5 * z * z;
  }
  const double peak = n == 0 ? 0.0 : *std::max_element(log_density.begin(), log_density.end());
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = cp.peak_prob * std::exp(log_density[i] - peak);
  return p;
}

double draw_bis_value(const ValueDistribution& distribution, Rng& rng) {
  if (const auto* g = std::get_if<GaussianValues>(&distribution)) {
    std::normal_distribution<double> normal(g->mean, g->std);
    return std::max(normal(rng), g->clamp_min);
  }
  const auto& set = std::get<UniformSetValues>(distribution).values;
  std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
  return set[pick(rng)];
}

TrueNetworkState initial_state(std::size_t n, const DynamicsConfig& config, Rng& rng) {
  TrueNetworkState state;
  state.values.resize(n);
  for (double& v : state.values) v = draw_bis_value(config.value_distribution, rng);
  return state;
}

TrueNetworkState advance_bis_values(const TrueNetworkState& state, std::span<const double> change_prob,
                                    const DynamicsConfig& config, Rng& rng) {
  if (change_prob.size() != state.values.size()) {
    throw std::invalid_argument("change probability vector length mismatch");
  }
  TrueNetworkState next = state;
  for (std::size_t i = 0; i < next.values.size(); ++i) {
    if (uniform01(rng) < change_prob[i]) next.values[i] = draw_bis_value(config.value_distribution, rng);
  }
  return next;
}

int sample_budget(double mean, Rng& rng) {
  std::poisson_distribution<int> poisson(mean);
  return poisson(rng);
}

std::vector<double> request_weights(int service_count, const ZipfParams& zipf) {
  std::vector<double> w(static_cast<std::size_t>(service_count));
  for (int rank = 1; rank <= service_count; ++rank) w[rank - 1] = std::pow(zipf.q + rank, -zipf.beta);
  return w;
}

RequestSampler::RequestSampler(int domain_count, int service_count, const DynamicsConfig& config)
    : domain_count_(domain_count),
      requests_per_domain_(config.requests_per_domain),
      weights_(request_weights(service_count, config.request_zipf)) {}

std::vector<ServiceRequest> RequestSampler::sample(Rng& rng) const {
  std::discrete_distribution<int> rank(weights_.begin(), weights_.end());
  std::vector<ServiceRequest> out;
  out.reserve(static_cast<std::size_t>(domain_count_) * requests_per_domain_);
  for (DomainId d = 0; d < domain_count_; ++d) {
    for (int k = 0; k < requests_per_domain_; ++k) out.push_back(ServiceRequest{d, rank(rng)});
  }
  return out;
}

std::vector<ServiceRequest> sample_requests(const DomainGraph& graph, const ServicePlacement& placement,
                                            const DynamicsConfig& config, Rng& rng) {
  return RequestSampler(graph.domain_count, placement.service_count, config).sample(rng);
}

}  // namespace macs
