#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rwpe/particle_filter.hpp"
#include "rwpe/walker.hpp"

namespace rwpe {

enum class SuiteKind { LossHistogram, PfComparison, HeisenbergScaling, RiskProfile, SingleTrial };

[[nodiscard]] std::string_view to_string(SuiteKind suite) noexcept;
[[nodiscard]] std::optional<SuiteKind> suite_from_string(std::string_view name) noexcept;
[[nodiscard]] std::optional<UnwindMode> unwind_mode_from_string(std::string_view name) noexcept;

/// Frequentist grid for the risk_profile suite.
struct ProfileGrid {
  double max_abs_omega = 4.0;
  std::size_t points = 50;
  std::size_t trials_per_point = 200;
};

/// Fully resolved run configuration.
///
/// Defaults: single_trial suite, 1000 trials, seed 0, output directory
/// "rwpe-out", walker defaults from WalkerConfig (μ0 = 0, σ0 = 1,
/// n_exp = 100, n_unwind = 2, τ_check = 0.01, unconstrained unwinding,
/// 100 000 total measurements), Liu–West defaults from LiuWestConfig.
struct SuiteConfig {
  SuiteKind suite = SuiteKind::SingleTrial;
  WalkerConfig walker;
  /// Present exactly when suite == PfComparison.
  std::optional<LiuWestConfig> pf;
  std::size_t n_trials = 1000;
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir = "rwpe-out";
  ProfileGrid profile;
  /// Worker threads for trial execution; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Write every measurement of every trial into the record files. Turning
  /// this off keeps the per-trial scalars only; constrained-mode profiles
  /// past the walk range hit the 10^5 budget and log that many entries each.
  bool record_data = true;

  /// Throws ConfigError on the first violated invariant.
  void validate() const;
};

/// Builds a config from a JSON document, applying defaults for absent keys.
/// Unknown keys, wrong types and invariant violations raise ConfigError
/// naming the dotted key path (e.g. "walker.n_unwind").
[[nodiscard]] SuiteConfig parse_config(const nlohmann::json& document);

/// Resolved config as JSON, in the same layout `parse_config` accepts.
[[nodiscard]] nlohmann::ordered_json to_json(const SuiteConfig& config);

/// Command-line overrides, layered on top of a config document.
struct ConfigOverrides {
  std::optional<std::string> suite;
  std::optional<std::int64_t> n_trials;
  std::optional<std::int64_t> n_exp;
  std::optional<std::int64_t> n_unwind;
  std::optional<double> tau_check;
  std::optional<std::string> unwind_mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<std::int64_t> pf_particles;
  std::optional<std::int64_t> threads;
  std::optional<bool> record_data;
};

/// Merges the overrides into `document` (a JSON object). `pf_particles`
/// creates the `pf` block when it is absent.
[[nodiscard]] nlohmann::json apply_overrides(nlohmann::json document, const ConfigOverrides& overrides);

}  // namespace rwpe
