#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rwpe/particle_filter.hpp"
#include "rwpe/risk.hpp"
#include "rwpe/suite_config.hpp"

namespace rwpe {

/// Library version echoed into run metadata.
[[nodiscard]] std::string code_version();

/// Runs the configured suite and writes into `config.output_dir`:
///   records_<tag>.ndjson   every TrialRecord of one ensemble, one per line
///   summary_<tag>.json     RiskSummary plus van Trees bound for that ensemble
///   metadata.json          resolved config, seed, versions, ensemble index
/// plus suite-specific files (pf_<tag>.ndjson / pf_summary_<tag>.json for
/// pf_comparison, scaling.json for heisenberg_scaling).
/// Returns 0 on success; on failure prints a diagnostic to `log` and
/// returns nonzero.
int run_suite(const SuiteConfig& config, std::ostream& log);

/// Particle-filter replay of one RWPE trial.
struct PfTrial {
  std::uint64_t index = 0;
  double true_omega = 0.0;
  double estimate = 0.0;
  double quadratic_loss = 0.0;
  bool failed = false;
  std::size_t resamples = 0;
};

/// Replays each record's full data through a Liu–West filter started from
/// `prior`. The filter's random stream comes from the record's seed.
[[nodiscard]] std::vector<PfTrial> pf_replay(std::span<const TrialRecord> records,
                                             const GaussianState& prior, const LiuWestConfig& pf,
                                             unsigned threads = 0);

/// Median per-call latencies in nanoseconds.
struct UpdateLatency {
  double update_optimal_ns = 0.0;
  /// Experiment selection, measurement from a pre-drawn bit sequence,
  /// stack push and optimal update.
  double step_ns = 0.0;
  std::size_t batches = 0;
  std::size_t calls_per_batch = 0;
};

[[nodiscard]] UpdateLatency bench_updates(std::size_t batches = 200, std::size_t calls_per_batch = 1000);

}  // namespace rwpe
