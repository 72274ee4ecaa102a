#pragma once

#include "rwpe/gaussian.hpp"

namespace rwpe {

/// Brute-force posterior moments by quadrature, for verification only.
///
/// Integrates likelihood × N(μ, σ²) with the composite trapezoidal rule on
/// [μ − 10σ, μ + 10σ] using `kBayesOracleIntervals` equal intervals. The
/// integration runs in standardized coordinates so that tiny σ does not lose
/// precision. Throws QuadratureFailure when the normalizer (relative to the
/// prior mass) is below `kBayesOracleNormalizerFloor`.
[[nodiscard]] GaussianState bayes_oracle(const GaussianState& prior, Datum d,
                                         const ExperimentParams& params);

inline constexpr int kBayesOracleIntervals = 200'000;
inline constexpr double kBayesOracleHalfWidth = 10.0;
inline constexpr double kBayesOracleNormalizerFloor = 1e-12;

}  // namespace rwpe
