#include "rwpe/measurement_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rwpe/errors.hpp"

namespace rwpe {
namespace {

bool close_relative(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

Datum ReplayOracle::measure(const ExperimentParams& params) {
  if (cursor_ >= record_.size()) {
    throw ReplayExhausted("replay record consumed after " + std::to_string(record_.size()) +
                          " measurements");
  }
  const ReplayEntry& entry = record_[cursor_];
  if (!close_relative(params.t, entry.params.t, kReplayRelativeTolerance) ||
      !close_relative(params.omega_inv, entry.params.omega_inv, kReplayRelativeTolerance)) {
    throw ReplayMismatch("replay query " + std::to_string(cursor_) +
                         " does not match recorded experiment");
  }
  ++cursor_;
  return entry.datum;
}

double sample_true_omega(const GaussianState& prior, RandomStream& rng) {
  return prior.mu + prior.sigma * rng.normal();
}

double sample_true_omega(const GaussianState& prior, std::uint64_t rng_seed) {
  RandomStream rng(rng_seed);
  return sample_true_omega(prior, rng);
}

}  // namespace rwpe
