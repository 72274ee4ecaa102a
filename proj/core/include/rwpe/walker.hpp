#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "rwpe/gaussian.hpp"
#include "rwpe/measurement_oracle.hpp"

namespace rwpe {

enum class UnwindMode {
  Unconstrained,       ///< unwinding may continue past the initial prior, growing σ beyond σ0
  ConstrainedToPrior,  ///< an unwind that would pop an empty stack aborts the unwind loop
};

[[nodiscard]] std::string_view to_string(UnwindMode mode) noexcept;

struct WalkerConfig {
  double mu0 = 0.0;
  double sigma0 = 1.0;
  std::int64_t n_exp = 100;
  double tau_check = 0.01;
  /// 0 disables consistency checks entirely.
  std::int64_t n_unwind = 2;
  UnwindMode unwind_mode = UnwindMode::Unconstrained;
  /// Cap on all measurements, consistency checks included.
  std::int64_t max_total_experiments = 100'000;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  [[nodiscard]] GaussianState prior() const noexcept { return {mu0, sigma0}; }
};

/// Mutable walker state. Besides the stack of accepted bits it holds a fixed
/// handful of scalars.
struct WalkerState {
  GaussianState gaussian;
  /// Accepted data currently incorporated, most recent last.
  std::vector<bool> datum_stack;
  /// Every measurement taken: accepted, checks, and later-unwound data.
  std::int64_t total_count = 0;
  std::int64_t checks_performed = 0;
  std::int64_t steps_unwound = 0;

  [[nodiscard]] std::int64_t accepted_count() const noexcept {
    return static_cast<std::int64_t>(datum_stack.size());
  }

  [[nodiscard]] static WalkerState initial(const WalkerConfig& config);
};

struct UnwindOutcome {
  std::int64_t checks_performed = 0;
  std::int64_t steps_unwound = 0;
  bool aborted_on_empty_stack = false;
};

enum class DataRole : std::uint8_t { Accepted, Check, Unwound };

[[nodiscard]] std::string_view to_string(DataRole role) noexcept;

struct RecordedDatum {
  ExperimentParams params;
  Datum datum = Datum::Zero;
  DataRole role = DataRole::Accepted;

  friend bool operator==(const RecordedDatum&, const RecordedDatum&) = default;
};

/// Ordered log of every measurement a walker makes. Accepted entries are
/// relabelled `Unwound` when the walker later pops them.
class DataLog {
 public:
  void record_accepted(const ExperimentParams& params, Datum d);
  void record_check(const ExperimentParams& params, Datum d);
  void mark_last_accepted_unwound();

  [[nodiscard]] const std::vector<RecordedDatum>& entries() const& noexcept { return entries_; }
  [[nodiscard]] std::vector<RecordedDatum> entries() && noexcept { return std::move(entries_); }

 private:
  std::vector<RecordedDatum> entries_;
  std::vector<std::size_t> open_accepted_;
};

/// Measures once at the optimal experiment, pushes the outcome and applies
/// the optimal update. Throws BudgetExhausted before measuring if the total
/// budget is already spent.
void step(WalkerState& state, MeasurementOracle& oracle, const WalkerConfig& config,
          DataLog* log = nullptr);

/// Runs a consistency check and, while it fails, unwinds `n_unwind` steps
/// and re-checks.
///
/// Each unwind iteration first grows σ by √(e/(e−1)) and then, if the stack
/// is non-empty, pops d and shifts μ by ∓σ/√e with the grown σ, which is the
/// exact inverse of `step`. In ConstrainedToPrior mode an iteration facing an
/// empty stack ends the whole loop without re-checking.
/// Requires `config.n_unwind > 0`.
UnwindOutcome consistency_check_and_unwind(WalkerState& state, MeasurementOracle& oracle,
                                           const WalkerConfig& config, DataLog* log = nullptr);

struct WalkResult {
  double estimate = 0.0;
  WalkerState final_state;
  std::vector<RecordedDatum> data;
  bool budget_exhausted = false;
};

/// Steps (and checks, when enabled) until `n_exp` data sit on the stack or
/// the measurement budget runs out. Budget exhaustion is reported in the
/// result, with the current mean as the estimate.
[[nodiscard]] WalkResult run(const WalkerConfig& config, MeasurementOracle& oracle);

/// Largest distance the basic walk can travel from μ0, in units of σ0:
/// (1/√e) Σ_k ((e−1)/e)^{k/2} = 1/(√e − √(e−1)).
[[nodiscard]] double walk_range() noexcept;

}  // namespace rwpe
