#include "rwpe/risk.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "rwpe/measurement_oracle.hpp"
#include "rwpe/parallel.hpp"
#include "rwpe/random_stream.hpp"

namespace rwpe {

std::string_view to_string(OmegaSource source) noexcept {
  return source == OmegaSource::Prior ? "prior" : "grid";
}

double log10_loss(double quadratic_loss) noexcept {
  return std::log10(std::max(quadratic_loss, std::numeric_limits<double>::denorm_min()));
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return derive_seed(master_seed, index);
}

std::uint64_t stream_seed(std::uint64_t trial_seed, TrialStream purpose) noexcept {
  return derive_seed(trial_seed, static_cast<std::uint64_t>(purpose));
}

namespace {

TrialRecord simulate(const WalkerConfig& config, OmegaSource source, double true_omega,
                     std::uint64_t seed, std::uint64_t index, bool keep_data) {
  TrialRecord record;
  record.index = index;
  record.seed = seed;
  record.omega_source = source;
  record.true_omega = true_omega;
  record.estimate = config.mu0;
  try {
    SimulatedOracle oracle(true_omega, stream_seed(seed, TrialStream::Oracle));
    WalkResult walk = run(config, oracle);
    record.estimate = walk.estimate;
    record.accepted_count = walk.final_state.accepted_count();
    record.total_count = walk.final_state.total_count;
    record.checks_performed = walk.final_state.checks_performed;
    record.steps_unwound = walk.final_state.steps_unwound;
    record.budget_exhausted = walk.budget_exhausted;
    if (keep_data) record.data = std::move(walk.data);
  } catch (const std::exception& e) {
    record.error = e.what();
  }
  const double diff = record.estimate - record.true_omega;
  record.quadratic_loss = diff * diff;
  record.log10_loss = log10_loss(record.quadratic_loss);
  return record;
}

}  // namespace

TrialRecord run_trial(const WalkerConfig& config, std::uint64_t master_seed, std::uint64_t index,
                      const EnsembleOptions& options) {
  const std::uint64_t seed = trial_seed(master_seed, index);
  const GaussianState truth = options.truth_prior.value_or(config.prior());
  const double omega = sample_true_omega(truth, stream_seed(seed, TrialStream::TrueOmega));
  return simulate(config, OmegaSource::Prior, omega, seed, index, options.keep_data);
}

TrialRecord run_trial_at(const WalkerConfig& config, double true_omega, std::uint64_t master_seed,
                         std::uint64_t index, bool keep_data) {
  return simulate(config, OmegaSource::Grid, true_omega, trial_seed(master_seed, index), index, keep_data);
}

std::vector<TrialRecord> run_ensemble(const WalkerConfig& config, std::size_t n_trials,
                                      std::uint64_t master_seed, const EnsembleOptions& options) {
  if (n_trials < 1) throw std::invalid_argument("run_ensemble requires n_trials >= 1");
  config.validate();
  std::vector<TrialRecord> records(n_trials);
  parallel_for(n_trials, options.threads,
               [&](std::size_t i) { records[i] = run_trial(config, master_seed, i, options); });
  return records;
}

std::vector<TrialRecord> run_grid_ensemble(const WalkerConfig& config,
                                           std::span<const double> omega_grid,
                                           std::size_t trials_per_point, std::uint64_t master_seed,
                                           unsigned threads, bool keep_data) {
  if (omega_grid.empty()) throw std::invalid_argument("frequentist grid must be non-empty");
  if (trials_per_point < 1) throw std::invalid_argument("trials_per_point must be >= 1");
  config.validate();
  const std::size_t total = omega_grid.size() * trials_per_point;
  std::vector<TrialRecord> records(total);
  parallel_for(total, threads, [&](std::size_t i) {
    records[i] = run_trial_at(config, omega_grid[i / trials_per_point], master_seed, i, keep_data);
  });
  return records;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

namespace {

ProfilePoint profile_point(std::span<const TrialRecord> records, const std::vector<std::size_t>& members,
                           double lo, double hi) {
  ProfilePoint point;
  point.abs_omega_lo = lo;
  point.abs_omega_hi = hi;
  point.n_trials = members.size();
  std::vector<double> losses;
  std::vector<double> unwinds;
  losses.reserve(members.size());
  unwinds.reserve(members.size());
  double sum = 0.0;
  for (std::size_t i : members) {
    sum += records[i].quadratic_loss;
    losses.push_back(records[i].quadratic_loss);
    unwinds.push_back(static_cast<double>(records[i].steps_unwound));
  }
  point.mean_loss = sum / static_cast<double>(members.size());
  point.median_loss = median(std::move(losses));
  point.median_steps_unwound = median(std::move(unwinds));
  return point;
}

}  // namespace

RiskSummary summarize(std::span<const TrialRecord> records) {
  RiskSummary summary;
  summary.n_trials = records.size();
  if (records.empty()) return summary;

  std::vector<double> losses;
  std::vector<double> unwinds;
  losses.reserve(records.size());
  unwinds.reserve(records.size());
  double sum = 0.0;
  bool all_grid = true;
  for (const TrialRecord& r : records) {
    sum += r.quadratic_loss;
    losses.push_back(r.quadratic_loss);
    unwinds.push_back(static_cast<double>(r.steps_unwound));
    if (r.budget_exhausted) ++summary.budget_exhausted;
    if (!r.error.empty()) ++summary.failed;
    if (r.omega_source != OmegaSource::Grid) all_grid = false;

    const double position = (r.log10_loss - LossHistogram::kLowEdge) / LossHistogram::kBinWidth;
    if (position < 0.0) {
      ++summary.histogram.underflow;
    } else if (position >= static_cast<double>(summary.histogram.counts.size())) {
      ++summary.histogram.overflow;
    } else {
      ++summary.histogram.counts[static_cast<std::size_t>(position)];
    }
  }
  summary.bayes_risk = sum / static_cast<double>(records.size());
  summary.median_loss = median(std::move(losses));
  summary.median_steps_unwound = median(std::move(unwinds));

  if (all_grid) {
    std::map<double, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < records.size(); ++i) {
      groups[std::abs(records[i].true_omega)].push_back(i);
    }
    for (const auto& [abs_omega, members] : groups) {
      summary.risk_profile.push_back(profile_point(records, members, abs_omega, abs_omega));
    }
  } else {
    const auto n_bins = static_cast<std::size_t>(std::lround(kProfileMaxAbsOmega / kProfileBinWidth));
    std::vector<std::vector<std::size_t>> bins(n_bins);
    for (std::size_t i = 0; i < records.size(); ++i) {
      const double position = std::abs(records[i].true_omega) / kProfileBinWidth;
      if (position < static_cast<double>(n_bins)) bins[static_cast<std::size_t>(position)].push_back(i);
    }
    for (std::size_t b = 0; b < n_bins; ++b) {
      if (bins[b].empty()) continue;
      summary.risk_profile.push_back(profile_point(records, bins[b], kProfileBinWidth * static_cast<double>(b),
                                                   kProfileBinWidth * static_cast<double>(b + 1)));
    }
  }
  return summary;
}

double van_trees_bound(std::int64_t n_exp) {
  if (n_exp < 1) throw std::invalid_argument("van_trees_bound requires n_exp >= 1");
  constexpr double e = std::numbers::e;
  return 1.0 / ((e - 1.0) * std::pow(e / (e - 1.0), static_cast<double>(n_exp)));
}

double fisher_information(std::span<const ExperimentParams> experiments) noexcept {
  double total = 0.0;
  for (const ExperimentParams& p : experiments) total += p.t * p.t;
  return total;
}

std::vector<ExperimentParams> accepted_experiments(std::span<const RecordedDatum> data) {
  std::vector<ExperimentParams> out;
  for (const RecordedDatum& entry : data) {
    if (entry.role == DataRole::Accepted) out.push_back(entry.params);
  }
  return out;
}

RiskSummary frequentist_profile(const WalkerConfig& config, std::span<const double> omega_grid,
                                std::size_t trials_per_point, std::uint64_t master_seed,
                                unsigned threads) {
  const auto records =
      run_grid_ensemble(config, omega_grid, trials_per_point, master_seed, threads, /*keep_data=*/false);
  return summarize(records);
}

std::vector<double> uniform_grid(double max_abs_omega, std::size_t points) {
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = points == 1 ? 0.0 : max_abs_omega * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

}  // namespace rwpe
