#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "macs/rng.hpp"
#include "macs/topology.hpp"

namespace macs {

/// New BIS values are drawn uniformly from a fixed set.
struct UniformSetValues {
  std::vector<double> values{1, 2, 4, 6, 8, 13, 17, 20, 25, 30};
  bool operator==(const UniformSetValues&) const = default;
};

/// New BIS values are Gaussian, clamped from below so delays stay positive.
struct GaussianValues {
  double mean = 10.0;
  double std = 5.0;
  double clamp_min = 0.1;
  bool operator==(const GaussianValues&) const = default;
};

using ValueDistribution = std::variant<UniformSetValues, GaussianValues>;

/// Per-index change probability shaped like a Gaussian density over the BIS
/// index, rescaled so its largest entry is `peak_prob`.
struct ChangeProfile {
  double mean = 30.0;
  double std = 10.0;
  double peak_prob = 0.5;
  bool operator==(const ChangeProfile&) const = default;
};

struct ZipfParams {
  double q = 5.0;
  double beta = 0.8;
  bool operator==(const ZipfParams&) const = default;
};

struct DynamicsConfig {
  ValueDistribution value_distribution = UniformSetValues{};
  ChangeProfile change_profile;
  double budget_mean = 3.0;
  int requests_per_domain = 1;
  ZipfParams request_zipf;
  bool operator==(const DynamicsConfig&) const = default;
};

/// Throws std::invalid_argument on an out-of-range knob.
void validate(const DynamicsConfig& config);

struct TrueNetworkState {
  std::vector<double> values;
  std::int64_t slot = 0;
};

struct ServiceRequest {
  DomainId origin_domain = 0;
  ServiceId service_id = 0;
  bool operator==(const ServiceRequest&) const = default;
};

std::vector<double> change_probabilities(const DynamicsConfig& config, std::size_t n);

double draw_bis_value(const ValueDistribution& distribution, Rng& rng);

/// Fresh state with every value drawn from the configured distribution.
TrueNetworkState initial_state(std::size_t n, const DynamicsConfig& config, Rng& rng);

/// One uniform draw per BIS is always consumed, so the stream position after
/// a call does not depend on which values changed.
TrueNetworkState advance_bis_values(const TrueNetworkState& state, std::span<const double> change_prob,
                                    const DynamicsConfig& config, Rng& rng);

int sample_budget(double mean, Rng& rng);

/// Zipf-Mandelbrot popularity: service of rank i (1-based) has weight (q+i)^-beta.
std::vector<double> request_weights(int service_count, const ZipfParams& zipf);

/// Samples `requests_per_domain` requests from every domain. Service ids are
/// popularity ranks minus one.
class RequestSampler {
 public:
  RequestSampler(int domain_count, int service_count, const DynamicsConfig& config);
  std::vector<ServiceRequest> sample(Rng& rng) const;

 private:
  int domain_count_;
  int requests_per_domain_;
  std::vector<double> weights_;
};

std::vector<ServiceRequest> sample_requests(const DomainGraph& graph, const ServicePlacement& placement,
                                            const DynamicsConfig& config, Rng& rng);

}  // namespace macs
