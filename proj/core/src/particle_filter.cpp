#include "rwpe/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "rwpe/errors.hpp"

namespace rwpe {

double LiuWestConfig::h() const noexcept { return std::sqrt(std::max(0.0, 1.0 - a * a)); }

void LiuWestConfig::validate() const {
  if (!(a > 0.0 && a <= 1.0)) throw ConfigError("pf.a", "must lie in (0, 1]");
  if (!(resample_threshold > 0.0 && resample_threshold <= 1.0)) {
    throw ConfigError("pf.resample_threshold", "must lie in (0, 1]");
  }
  if (n_particles < 1) throw ConfigError("pf.n_particles", "must be >= 1");
}

ParticleCloud gaussian_cloud(const GaussianState& prior, std::size_t n, RandomStream& rng) {
  ParticleCloud cloud;
  cloud.locations.resize(n);
  for (double& x : cloud.locations) x = prior.mu + prior.sigma * rng.normal();
  cloud.weights.assign(n, 1.0 / static_cast<double>(n));
  return cloud;
}

CloudMoments moments(const ParticleCloud& cloud) noexcept {
  CloudMoments m;
  for (std::size_t j = 0; j < cloud.size(); ++j) m.mean += cloud.weights[j] * cloud.locations[j];
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const double dx = cloud.locations[j] - m.mean;
    m.variance += cloud.weights[j] * dx * dx;
  }
  return m;
}

double effective_sample_size(std::span<const double> weights) noexcept {
  double sum_sq = 0.0;
  for (double w : weights) sum_sq += w * w;
  return sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;
}

void pf_update(ParticleCloud& cloud, Datum d, const ExperimentParams& params) {
  std::vector<double> updated(cloud.size());
  double total = 0.0;
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    updated[j] = cloud.weights[j] * likelihood(d, cloud.locations[j], params);
    total += updated[j];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ZeroPosterior("all particle weights vanished");
  }
  const double inv = 1.0 / total;
  for (double& w : updated) w *= inv;
  cloud.weights = std::move(updated);
}

bool needs_resample(const ParticleCloud& cloud, const LiuWestConfig& config) noexcept {
  return effective_sample_size(cloud.weights) <
         config.resample_threshold * static_cast<double>(cloud.size());
}

ParticleCloud liu_west_resample(const ParticleCloud& cloud, const LiuWestConfig& config,
                                RandomStream& rng) {
  const CloudMoments m = moments(cloud);
  const double jitter = config.h() * std::sqrt(m.variance);
  const double a = config.a;

  std::vector<double> cumulative(cloud.size());
  std::partial_sum(cloud.weights.begin(), cloud.weights.end(), cumulative.begin());
  const double total = cumulative.empty() ? 0.0 : cumulative.back();

  ParticleCloud next;
  next.locations.resize(config.n_particles);
  for (double& x : next.locations) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const double parent = cloud.locations[static_cast<std::size_t>(it - cumulative.begin())];
    const double center = a * parent + (1.0 - a) * m.mean;
    x = jitter > 0.0 ? center + jitter * rng.normal() : center;
  }
  next.weights.assign(config.n_particles, 1.0 / static_cast<double>(config.n_particles));
  return next;
}

namespace {

// Replayed records repeat a handful of experiment times many times over while
// the particle locations stay fixed between resamples. For a repeated t the
// table keeps cos(t x_j) and sin(t x_j), so each further update costs two
// multiply-adds per particle instead of a cosine.
class PhaseTable {
 public:
  void clear() {
    tables_.clear();
    seen_.clear();
  }

  // Returns nullptr the first time t is seen since the last clear().
  const std::vector<double>* lookup(double t, const std::vector<double>& locations) {
    if (auto it = tables_.find(t); it != tables_.end()) return &it->second;
    if (seen_.insert(t).second || tables_.size() >= kMaxTables) return nullptr;
    std::vector<double> table(2 * locations.size());
    for (std::size_t j = 0; j < locations.size(); ++j) {
      table[2 * j] = std::cos(t * locations[j]);
      table[2 * j + 1] = std::sin(t * locations[j]);
    }
    return &tables_.emplace(t, std::move(table)).first->second;
  }

 private:
  static constexpr std::size_t kMaxTables = 32;
  std::unordered_map<double, std::vector<double>> tables_;
  std::unordered_set<double> seen_;
};

void tabulated_update(ParticleCloud& cloud, Datum d, const ExperimentParams& params,
                      const std::vector<double>& table) {
  const double s = d == Datum::Zero ? 0.5 : -0.5;
  const double c = s * std::cos(params.t * params.omega_inv);
  const double sn = s * std::sin(params.t * params.omega_inv);
  std::vector<double> updated(cloud.size());
  double total = 0.0;
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const double l = std::max(0.0, 0.5 + c * table[2 * j] + sn * table[2 * j + 1]);
    updated[j] = cloud.weights[j] * l;
    total += updated[j];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ZeroPosterior("all particle weights vanished");
  }
  const double inv = 1.0 / total;
  for (double& w : updated) w *= inv;
  cloud.weights = std::move(updated);
}

}  // namespace

PfResult pf_run(std::span<const RecordedDatum> data, const GaussianState& prior,
                const LiuWestConfig& config, RandomStream& rng) {
  PfResult result;
  ParticleCloud cloud = gaussian_cloud(prior, config.n_particles, rng);
  PhaseTable phases;
  for (const RecordedDatum& entry : data) {
    try {
      if (const auto* table = phases.lookup(entry.params.t, cloud.locations)) {
        tabulated_update(cloud, entry.datum, entry.params, *table);
      } else {
        pf_update(cloud, entry.datum, entry.params);
      }
    } catch (const ZeroPosterior&) {
      result.failed = true;
      break;
    }
    if (needs_resample(cloud, config)) {
      cloud = liu_west_resample(cloud, config, rng);
      phases.clear();
      ++result.resamples;
    }
  }
  result.estimate = moments(cloud).mean;
  return result;
}

}  // namespace rwpe
