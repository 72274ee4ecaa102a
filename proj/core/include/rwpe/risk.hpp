#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rwpe/gaussian.hpp"
#include "rwpe/walker.hpp"

namespace rwpe {

/// Where a trial's true phase came from.
enum class OmegaSource : std::uint8_t {
  Prior,  ///< drawn from the truth prior
  Grid,   ///< fixed by a frequentist grid
};

[[nodiscard]] std::string_view to_string(OmegaSource source) noexcept;

/// Everything logged about one trial.
struct TrialRecord {
  std::uint64_t index = 0;
  /// Per-trial seed derived from (master seed, index).
  std::uint64_t seed = 0;
  OmegaSource omega_source = OmegaSource::Prior;
  double true_omega = 0.0;
  double estimate = 0.0;
  /// (estimate − true_omega)², computed exactly so.
  double quadratic_loss = 0.0;
  double log10_loss = 0.0;
  std::int64_t accepted_count = 0;
  std::int64_t total_count = 0;
  std::int64_t checks_performed = 0;
  std::int64_t steps_unwound = 0;
  bool budget_exhausted = false;
  /// Non-empty if the trial failed for any reason other than the budget.
  std::string error;
  std::vector<RecordedDatum> data;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// log10 of a loss; an exact zero maps to log10 of the smallest subnormal.
[[nodiscard]] double log10_loss(double quadratic_loss) noexcept;

/// Sub-stream indices used inside one trial.
enum class TrialStream : std::uint64_t { TrueOmega = 1, Oracle = 2, ParticleFilter = 3 };

[[nodiscard]] std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;
[[nodiscard]] std::uint64_t stream_seed(std::uint64_t trial_seed, TrialStream purpose) noexcept;

struct EnsembleOptions {
  /// Distribution of the true phase; defaults to the walker's own prior.
  std::optional<GaussianState> truth_prior;
  unsigned threads = 0;
  /// When false, each record's `data` is dropped once the trial finishes.
  /// Budget-limited trials can log 10^5 measurements each.
  bool keep_data = true;
};

/// One trial, reproducible from (config, master_seed, index).
[[nodiscard]] TrialRecord run_trial(const WalkerConfig& config, std::uint64_t master_seed,
                                    std::uint64_t index, const EnsembleOptions& options = {});

/// One trial at a fixed true phase.
[[nodiscard]] TrialRecord run_trial_at(const WalkerConfig& config, double true_omega,
                                       std::uint64_t master_seed, std::uint64_t index,
                                       bool keep_data = true);

/// `n_trials` independent trials with true phases drawn from the prior.
/// Failing trials are recorded, never thrown.
[[nodiscard]] std::vector<TrialRecord> run_ensemble(const WalkerConfig& config, std::size_t n_trials,
                                                    std::uint64_t master_seed,
                                                    const EnsembleOptions& options = {});

/// `trials_per_point` trials at each fixed phase in `omega_grid`; trial
/// p·trials_per_point + j runs at grid point p.
[[nodiscard]] std::vector<TrialRecord> run_grid_ensemble(const WalkerConfig& config,
                                                         std::span<const double> omega_grid,
                                                         std::size_t trials_per_point,
                                                         std::uint64_t master_seed,
                                                         unsigned threads = 0, bool keep_data = true);

/// Counts per one-decade bin of log10(quadratic loss) over [-25, 5).
struct LossHistogram {
  static constexpr double kLowEdge = -25.0;
  static constexpr double kHighEdge = 5.0;
  static constexpr double kBinWidth = 1.0;

  std::vector<std::size_t> counts = std::vector<std::size_t>(30, 0);
  std::size_t underflow = 0;
  std::size_t overflow = 0;

  friend bool operator==(const LossHistogram&, const LossHistogram&) = default;
};

/// Statistics of the trials whose |true ω| falls in [abs_omega_lo, abs_omega_hi);
/// for grid ensembles lo == hi == the grid point's |ω|.
struct ProfilePoint {
  double abs_omega_lo = 0.0;
  double abs_omega_hi = 0.0;
  std::size_t n_trials = 0;
  double mean_loss = 0.0;
  double median_loss = 0.0;
  double median_steps_unwound = 0.0;

  friend bool operator==(const ProfilePoint&, const ProfilePoint&) = default;
};

struct RiskSummary {
  std::size_t n_trials = 0;
  std::size_t budget_exhausted = 0;
  std::size_t failed = 0;
  /// Mean quadratic loss.
  double bayes_risk = 0.0;
  double median_loss = 0.0;
  double median_steps_unwound = 0.0;
  LossHistogram histogram;
  std::vector<ProfilePoint> risk_profile;

  friend bool operator==(const RiskSummary&, const RiskSummary&) = default;
};

/// Width of the |ω| bins used for the risk profile of prior-drawn ensembles
/// (bins cover [0, 5); grid ensembles get one point per distinct |ω|).
inline constexpr double kProfileBinWidth = 0.25;
inline constexpr double kProfileMaxAbsOmega = 5.0;

/// Pure function of the records, in order.
[[nodiscard]] RiskSummary summarize(std::span<const TrialRecord> records);

/// Median of a list of values (mean of the two middle values for even sizes).
[[nodiscard]] double median(std::vector<double> values);

/// ((e − 1)·(e/(e − 1))^n_exp)⁻¹, the van Trees floor on the Bayes risk for
/// a standard-normal prior under the optimal experiment schedule.
[[nodiscard]] double van_trees_bound(std::int64_t n_exp);

/// Σ t_i² over the given experiments.
[[nodiscard]] double fisher_information(std::span<const ExperimentParams> experiments) noexcept;

/// Experiments of the data currently accepted (role Accepted), in order.
[[nodiscard]] std::vector<ExperimentParams> accepted_experiments(std::span<const RecordedDatum> data);

/// Frequentist risk at each fixed phase of `omega_grid`. Per-trial data are
/// not retained.
[[nodiscard]] RiskSummary frequentist_profile(const WalkerConfig& config,
                                              std::span<const double> omega_grid,
                                              std::size_t trials_per_point,
                                              std::uint64_t master_seed, unsigned threads = 0);

/// `points` values evenly spaced on [0, max_abs_omega].
[[nodiscard]] std::vector<double> uniform_grid(double max_abs_omega, std::size_t points);

}  // namespace rwpe
