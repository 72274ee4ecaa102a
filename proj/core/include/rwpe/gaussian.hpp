#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rwpe {

/// Gaussian approximation to the posterior over the eigenphase.
///
/// Angles are kept as unwrapped reals; no reduction modulo 2π is applied.
struct GaussianState {
  double mu = 0.0;     ///< mean (radians)
  double sigma = 1.0;  ///< standard deviation (radians), > 0

  [[nodiscard]] bool is_valid() const noexcept;

  friend bool operator==(const GaussianState&, const GaussianState&) = default;
};

/// One measurement setting: evolution time `t` and inversion phase `omega_inv`.
struct ExperimentParams {
  double t = 1.0;
  double omega_inv = 0.0;

  [[nodiscard]] bool is_valid() const noexcept;

  friend bool operator==(const ExperimentParams&, const ExperimentParams&) = default;
};

/// Single-bit measurement outcome.
enum class Datum : std::uint8_t { Zero = 0, One = 1 };

[[nodiscard]] constexpr int to_int(Datum d) noexcept { return d == Datum::Zero ? 0 : 1; }
[[nodiscard]] constexpr Datum datum_from_int(int bit) noexcept {
  return bit == 0 ? Datum::Zero : Datum::One;
}
/// s = (-1)^d.
[[nodiscard]] constexpr double parity(Datum d) noexcept { return d == Datum::Zero ? 1.0 : -1.0; }

/// 1/√e, the mean shift of an optimal update in units of σ.
inline const double kMeanStep = 1.0 / std::sqrt(std::numbers::e);

/// √((e−1)/e), the per-datum contraction of σ under an optimal update.
inline const double kContraction = std::sqrt((std::numbers::e - 1.0) / std::numbers::e);

/// Offset of the optimal inversion phase from the mean, in units of σ.
///
/// Sign convention: with ω_inv = μ + (π/2)σ and t = 1/σ, the exact posterior
/// mean after d = 0 lies at μ + σ/√e, so an outcome of 0 moves the walker
/// upward. The opposite offset (μ − πσ/2) paired with the same update would
/// walk away from the true phase.
inline constexpr double kInversionOffset = std::numbers::pi / 2.0;

/// Pr(d | ω; t, ω_inv) = cos²(t(ω − ω_inv)/2 + dπ/2).
///
/// Evaluated as cos²(x/2) for d = 0 and sin²(x/2) for d = 1 so that the two
/// outcomes sum to one up to a single rounding.
[[nodiscard]] double likelihood(Datum d, double omega, const ExperimentParams& params) noexcept;

/// Closed-form moment-matched posterior for an arbitrary experiment.
///
/// Works in standardized coordinates (t̃ = tσ, ω̃_inv = (ω_inv − μ)/σ), where
///   μ' = s t̃ q sin(t̃ω̃) / (1 + s q cos(t̃ω̃)),
///   σ'² = 1 − s t̃² q (cos(t̃ω̃) + s q) / (1 + s q cos(t̃ω̃))²,
/// with q = exp(−t̃²/2), then maps back by the location–scale transform.
/// Throws DegenerateUpdate when the normalizer vanishes or σ'² ≤ 0.
[[nodiscard]] GaussianState update_general(const GaussianState& prior, Datum d,
                                           const ExperimentParams& params);

/// Update under the optimal experiment: μ ± σ/√e, σ·√((e−1)/e).
[[nodiscard]] inline GaussianState update_optimal(const GaussianState& prior, Datum d) noexcept {
  return {prior.mu + parity(d) * prior.sigma * kMeanStep, prior.sigma * kContraction};
}

/// t = 1/σ, ω_inv = μ + πσ/2.
[[nodiscard]] inline ExperimentParams optimal_experiment(const GaussianState& prior) noexcept {
  return {1.0 / prior.sigma, prior.mu + kInversionOffset * prior.sigma};
}

/// Consistency-check setting: t = τ/σ, ω_inv = μ.
[[nodiscard]] inline ExperimentParams check_experiment(const GaussianState& prior,
                                                       double tau_check) noexcept {
  return {tau_check / prior.sigma, prior.mu};
}

/// Marginal probability that a consistency check returns 0 when the
/// Gaussian approximation is exact: (1 + exp(−τ²/2)) / 2.
[[nodiscard]] double check_pass_probability(double tau_check) noexcept;

}  // namespace rwpe
