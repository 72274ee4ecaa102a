#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rwpe/gaussian.hpp"
#include "rwpe/random_stream.hpp"

namespace rwpe {

/// Anything that can answer a measurement request: a simulator, a recorded
/// data set, or hardware.
class MeasurementOracle {
 public:
  virtual ~MeasurementOracle() = default;
  virtual Datum measure(const ExperimentParams& params) = 0;
};

/// Samples outcomes from the ideal likelihood at a hidden true phase.
/// Each measurement consumes exactly one uniform variate.
class SimulatedOracle final : public MeasurementOracle {
 public:
  SimulatedOracle(double true_omega, std::uint64_t rng_seed)
      : true_omega_(true_omega), rng_(rng_seed) {}

  Datum measure(const ExperimentParams& params) override {
    ++draw_count_;
    return rng_.uniform() < likelihood(Datum::Zero, true_omega_, params) ? Datum::Zero : Datum::One;
  }

  [[nodiscard]] double true_omega() const noexcept { return true_omega_; }
  [[nodiscard]] std::uint64_t draw_count() const noexcept { return draw_count_; }

 private:
  double true_omega_;
  RandomStream rng_;
  std::uint64_t draw_count_ = 0;
};

struct ReplayEntry {
  ExperimentParams params;
  Datum datum = Datum::Zero;
};

/// Plays back a recorded sequence of (params, datum) pairs in order.
///
/// Every query must match the next recorded params to within
/// `kReplayRelativeTolerance` (|a − b| ≤ tol · max(|a|, |b|), per field);
/// otherwise ReplayMismatch is thrown. Running past the end throws
/// ReplayExhausted.
class ReplayOracle final : public MeasurementOracle {
 public:
  static constexpr double kReplayRelativeTolerance = 1e-9;

  explicit ReplayOracle(std::vector<ReplayEntry> record) : record_(std::move(record)) {}

  Datum measure(const ExperimentParams& params) override;

  [[nodiscard]] std::size_t consumed() const noexcept { return cursor_; }
  [[nodiscard]] std::size_t remaining() const noexcept { return record_.size() - cursor_; }

 private:
  std::vector<ReplayEntry> record_;
  std::size_t cursor_ = 0;
};

/// One draw from N(μ0, σ0²). Accepts σ0 = 0 and then returns μ0 exactly.
[[nodiscard]] double sample_true_omega(const GaussianState& prior, RandomStream& rng);
[[nodiscard]] double sample_true_omega(const GaussianState& prior, std::uint64_t rng_seed);

}  // namespace rwpe
