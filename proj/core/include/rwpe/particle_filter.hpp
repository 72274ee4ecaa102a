#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rwpe/gaussian.hpp"
#include "rwpe/random_stream.hpp"
#include "rwpe/walker.hpp"

namespace rwpe {

/// Liu–West resampler settings.
///
/// New particles are a·ω_k + (1 − a)·mean + N(0, h²·var) with h = √(1 − a²),
/// which keeps the cloud's mean and variance in expectation.
struct LiuWestConfig {
  double a = 0.98;
  /// Resample when the effective sample size drops below this fraction of
  /// the particle count.
  double resample_threshold = 0.5;
  std::size_t n_particles = 8000;

  [[nodiscard]] double h() const noexcept;
  void validate() const;
};

/// Weighted set of phase hypotheses. Weights are kept normalized.
struct ParticleCloud {
  std::vector<double> locations;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return locations.size(); }
};

struct CloudMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Equal-weight cloud of `n` draws from N(μ, σ²).
[[nodiscard]] ParticleCloud gaussian_cloud(const GaussianState& prior, std::size_t n,
                                           RandomStream& rng);

[[nodiscard]] CloudMoments moments(const ParticleCloud& cloud) noexcept;

/// (Σ w²)⁻¹ for normalized weights.
[[nodiscard]] double effective_sample_size(std::span<const double> weights) noexcept;

/// Bayes reweighting by the likelihood of `d`, then renormalization.
/// Throws ZeroPosterior if every weight underflows; the cloud is then left
/// untouched.
void pf_update(ParticleCloud& cloud, Datum d, const ExperimentParams& params);

/// Draws `config.n_particles` equal-weight particles from the Liu–West
/// kernel, picking parents by multinomial sampling on the weights.
/// The caller decides when resampling is due (see `needs_resample`).
[[nodiscard]] ParticleCloud liu_west_resample(const ParticleCloud& cloud,
                                              const LiuWestConfig& config, RandomStream& rng);

[[nodiscard]] bool needs_resample(const ParticleCloud& cloud, const LiuWestConfig& config) noexcept;

struct PfResult {
  /// Posterior mean; on failure, the mean before the update that emptied the cloud.
  double estimate = 0.0;
  bool failed = false;
  std::size_t resamples = 0;
};

/// Replays every datum of a record (accepted, check and unwound alike) in
/// order through a particle filter started from N(μ0, σ0²).
[[nodiscard]] PfResult pf_run(std::span<const RecordedDatum> data, const GaussianState& prior,
                              const LiuWestConfig& config, RandomStream& rng);

}  // namespace rwpe
