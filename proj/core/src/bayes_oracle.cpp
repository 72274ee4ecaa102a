#include "rwpe/bayes_oracle.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "rwpe/errors.hpp"

namespace rwpe {

GaussianState bayes_oracle(const GaussianState& prior, Datum d, const ExperimentParams& params) {
  // Standardized experiment: the likelihood at ω = μ + σz is the likelihood
  // of z under (tσ, (ω_inv − μ)/σ).
  const ExperimentParams standardized{params.t * prior.sigma,
                                      (params.omega_inv - prior.mu) / prior.sigma};

  const int n = kBayesOracleIntervals;
  const double lo = -kBayesOracleHalfWidth;
  const double h = 2.0 * kBayesOracleHalfWidth / n;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

  std::vector<double> nodes(n + 1);
  std::vector<double> density(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double z = lo + h * i;
    nodes[i] = z;
    const double weight = (i == 0 || i == n) ? 0.5 : 1.0;
    density[i] = weight * inv_sqrt_2pi * std::exp(-0.5 * z * z) * likelihood(d, z, standardized);
  }

  double mass = 0.0;
  double first = 0.0;
  for (int i = 0; i <= n; ++i) {
    mass += density[i];
    first += density[i] * nodes[i];
  }
  mass *= h;
  first *= h;
  if (!(mass >= kBayesOracleNormalizerFloor)) {
    throw QuadratureFailure("posterior normalizer below floor");
  }
  const double mean = first / mass;

  double second = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double dz = nodes[i] - mean;
    second += density[i] * dz * dz;
  }
  const double variance = second * h / mass;

  return {prior.mu + prior.sigma * mean, prior.sigma * std::sqrt(variance)};
}

}  // namespace rwpe
