#include "rwpe/gaussian.hpp"

#include <cmath>
#include <string>

#include "rwpe/errors.hpp"

namespace rwpe {

bool GaussianState::is_valid() const noexcept {
  return std::isfinite(mu) && std::isfinite(sigma) && sigma > 0.0;
}

bool ExperimentParams::is_valid() const noexcept {
  return std::isfinite(t) && std::isfinite(omega_inv) && t > 0.0;
}

double likelihood(Datum d, double omega, const ExperimentParams& params) noexcept {
  const double half_phase = 0.5 * params.t * (omega - params.omega_inv);
  const double amplitude = d == Datum::Zero ? std::cos(half_phase) : std::sin(half_phase);
  return amplitude * amplitude;
}

GaussianState update_general(const GaussianState& prior, Datum d, const ExperimentParams& params) {
  const double t = params.t * prior.sigma;
  const double w = (params.omega_inv - prior.mu) / prior.sigma;
  const double s = parity(d);

  const double q = std::exp(-0.5 * t * t);
  const double c = std::cos(t * w);
  const double sn = std::sin(t * w);

  const double denom = 1.0 + s * q * c;
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw DegenerateUpdate("posterior normalizer vanished (t~=" + std::to_string(t) +
                           ", w~=" + std::to_string(w) + ")");
  }

  const double mean = s * t * q * sn / denom;
  const double variance = 1.0 - s * t * t * q * (c + s * q) / (denom * denom);
  if (!(variance > 0.0) || !std::isfinite(variance) || !std::isfinite(mean)) {
    throw DegenerateUpdate("non-positive posterior variance (t~=" + std::to_string(t) +
                           ", w~=" + std::to_string(w) + ")");
  }

  return {prior.mu + prior.sigma * mean, prior.sigma * std::sqrt(variance)};
}

double check_pass_probability(double tau_check) noexcept {
  return 0.5 * (1.0 + std::exp(-0.5 * tau_check * tau_check));
}

}  // namespace rwpe
