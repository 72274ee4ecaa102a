#include "rwpe/suite_config.hpp"

#include <array>
#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>

#include "rwpe/errors.hpp"

namespace rwpe {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<SuiteKind, std::string_view>, 5> kSuiteNames{{
    {SuiteKind::LossHistogram, "loss_histogram"},
    {SuiteKind::PfComparison, "pf_comparison"},
    {SuiteKind::HeisenbergScaling, "heisenberg_scaling"},
    {SuiteKind::RiskProfile, "risk_profile"},
    {SuiteKind::SingleTrial, "single_trial"},
}};

std::string join(std::string_view prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : std::string(prefix) + "." + std::string(key);
}

void reject_unknown_keys(const json& object, std::string_view prefix,
                         std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) {
    throw ConfigError(std::string(prefix.empty() ? "<root>" : prefix), "expected a JSON object");
  }
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) throw ConfigError(join(prefix, key), "unknown key");
  }
}

double read_real(const json& object, std::string_view prefix, const char* key, double fallback) {
  if (!object.contains(key)) return fallback;
  const json& v = object.at(key);
  if (!v.is_number()) throw ConfigError(join(prefix, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(prefix, key), "must be finite");
  return x;
}

std::int64_t read_int(const json& object, std::string_view prefix, const char* key,
                      std::int64_t fallback) {
  if (!object.contains(key)) return fallback;
  const json& v = object.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(prefix, key), "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    throw ConfigError(join(prefix, key), "out of range");
  }
  return v.get<std::int64_t>();
}

std::size_t read_count(const json& object, std::string_view prefix, const char* key,
                       std::size_t fallback, std::int64_t minimum) {
  const std::int64_t v = read_int(object, prefix, key, static_cast<std::int64_t>(fallback));
  if (v < minimum) {
    throw ConfigError(join(prefix, key), "must be >= " + std::to_string(minimum));
  }
  return static_cast<std::size_t>(v);
}

std::string read_string(const json& object, std::string_view prefix, const char* key,
                        std::string fallback) {
  if (!object.contains(key)) return fallback;
  const json& v = object.at(key);
  if (!v.is_string()) throw ConfigError(join(prefix, key), "expected a string");
  return v.get<std::string>();
}

bool read_bool(const json& object, std::string_view prefix, const char* key, bool fallback) {
  if (!object.contains(key)) return fallback;
  const json& v = object.at(key);
  if (!v.is_boolean()) throw ConfigError(join(prefix, key), "expected true or false");
  return v.get<bool>();
}

WalkerConfig parse_walker(const json& j) {
  constexpr std::string_view p = "walker";
  reject_unknown_keys(j, p,
                      {"mu0", "sigma0", "n_exp", "tau_check", "n_unwind", "unwind_mode",
                       "max_total_experiments"});
  WalkerConfig w;
  w.mu0 = read_real(j, p, "mu0", w.mu0);
  w.sigma0 = read_real(j, p, "sigma0", w.sigma0);
  w.n_exp = read_int(j, p, "n_exp", w.n_exp);
  w.tau_check = read_real(j, p, "tau_check", w.tau_check);
  w.n_unwind = read_int(j, p, "n_unwind", w.n_unwind);
  const std::string mode = read_string(j, p, "unwind_mode", std::string(to_string(w.unwind_mode)));
  const auto parsed = unwind_mode_from_string(mode);
  if (!parsed) {
    throw ConfigError("walker.unwind_mode", "expected 'unconstrained' or 'constrained', got '" + mode + "'");
  }
  w.unwind_mode = *parsed;
  w.max_total_experiments = read_int(j, p, "max_total_experiments", w.max_total_experiments);
  try {
    w.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(join(p, e.key()), e.what());
  }
  return w;
}

LiuWestConfig parse_pf(const json& j) {
  constexpr std::string_view p = "pf";
  reject_unknown_keys(j, p, {"n_particles", "a", "resample_threshold"});
  LiuWestConfig pf;
  pf.n_particles = read_count(j, p, "n_particles", pf.n_particles, 1);
  pf.a = read_real(j, p, "a", pf.a);
  pf.resample_threshold = read_real(j, p, "resample_threshold", pf.resample_threshold);
  pf.validate();
  return pf;
}

ProfileGrid parse_profile(const json& j) {
  constexpr std::string_view p = "profile";
  reject_unknown_keys(j, p, {"max_abs_omega", "points", "trials_per_point"});
  ProfileGrid g;
  g.max_abs_omega = read_real(j, p, "max_abs_omega", g.max_abs_omega);
  if (!(g.max_abs_omega >= 0.0)) throw ConfigError("profile.max_abs_omega", "must be >= 0");
  g.points = read_count(j, p, "points", g.points, 1);
  g.trials_per_point = read_count(j, p, "trials_per_point", g.trials_per_point, 1);
  return g;
}

}  // namespace

std::string_view to_string(SuiteKind suite) noexcept {
  for (const auto& [kind, name] : kSuiteNames) {
    if (kind == suite) return name;
  }
  return "single_trial";
}

std::optional<SuiteKind> suite_from_string(std::string_view name) noexcept {
  for (const auto& [kind, n] : kSuiteNames) {
    if (n == name) return kind;
  }
  return std::nullopt;
}

std::optional<UnwindMode> unwind_mode_from_string(std::string_view name) noexcept {
  if (name == "unconstrained") return UnwindMode::Unconstrained;
  if (name == "constrained") return UnwindMode::ConstrainedToPrior;
  return std::nullopt;
}

void SuiteConfig::validate() const {
  walker.validate();
  if (n_trials < 1) throw ConfigError("n_trials", "must be >= 1");
  if (suite == SuiteKind::PfComparison && !pf) {
    throw ConfigError("pf", "the pf_comparison suite requires a pf block");
  }
  if (suite != SuiteKind::PfComparison && pf) {
    throw ConfigError("pf", "a pf block is only valid for the pf_comparison suite");
  }
  if (pf) pf->validate();
}

SuiteConfig parse_config(const json& document) {
  const json root = document.is_null() ? json::object() : document;
  reject_unknown_keys(root, "",
                      {"suite", "walker", "pf", "n_trials", "seed", "output_dir", "profile", "threads",
                       "record_data"});
  SuiteConfig config;

  const std::string suite = read_string(root, "", "suite", std::string(to_string(config.suite)));
  const auto kind = suite_from_string(suite);
  if (!kind) throw ConfigError("suite", "unknown suite '" + suite + "'");
  config.suite = *kind;

  if (root.contains("walker")) config.walker = parse_walker(root.at("walker"));
  if (root.contains("pf") && !root.at("pf").is_null()) config.pf = parse_pf(root.at("pf"));
  if (root.contains("profile")) config.profile = parse_profile(root.at("profile"));

  config.n_trials = read_count(root, "", "n_trials", config.n_trials, 1);
  if (root.contains("seed")) {
    const json& seed = root.at("seed");
    if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() &&
                                      seed.get<std::int64_t>() < 0)) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    config.master_seed = seed.get<std::uint64_t>();
  }
  config.output_dir = read_string(root, "", "output_dir", config.output_dir.string());
  if (config.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
  config.threads = static_cast<unsigned>(read_count(root, "", "threads", config.threads, 0));
  config.record_data = read_bool(root, "", "record_data", config.record_data);

  config.validate();
  return config;
}

ordered_json to_json(const SuiteConfig& c) {
  ordered_json doc = {
      {"suite", std::string(to_string(c.suite))},
      {"walker",
       {{"mu0", c.walker.mu0},
        {"sigma0", c.walker.sigma0},
        {"n_exp", c.walker.n_exp},
        {"tau_check", c.walker.tau_check},
        {"n_unwind", c.walker.n_unwind},
        {"unwind_mode", std::string(to_string(c.walker.unwind_mode))},
        {"max_total_experiments", c.walker.max_total_experiments}}},
      {"n_trials", c.n_trials},
      {"seed", c.master_seed},
      {"output_dir", c.output_dir.string()},
      {"profile",
       {{"max_abs_omega", c.profile.max_abs_omega},
        {"points", c.profile.points},
        {"trials_per_point", c.profile.trials_per_point}}},
      {"threads", c.threads},
      {"record_data", c.record_data},
  };
  if (c.pf) {
    doc["pf"] = {{"n_particles", c.pf->n_particles},
                 {"a", c.pf->a},
                 {"resample_threshold", c.pf->resample_threshold}};
  }
  return doc;
}

json apply_overrides(json document, const ConfigOverrides& o) {
  if (document.is_null()) document = json::object();
  if (!document.is_object()) throw ConfigError("<root>", "expected a JSON object");
  auto walker = [&]() -> json& {
    if (!document.contains("walker")) document["walker"] = json::object();
    return document["walker"];
  };
  if (o.suite) document["suite"] = *o.suite;
  if (o.n_trials) document["n_trials"] = *o.n_trials;
  if (o.seed) document["seed"] = *o.seed;
  if (o.output_dir) document["output_dir"] = *o.output_dir;
  if (o.threads) document["threads"] = *o.threads;
  if (o.record_data) document["record_data"] = *o.record_data;
  if (o.n_exp) walker()["n_exp"] = *o.n_exp;
  if (o.n_unwind) walker()["n_unwind"] = *o.n_unwind;
  if (o.tau_check) walker()["tau_check"] = *o.tau_check;
  if (o.unwind_mode) walker()["unwind_mode"] = *o.unwind_mode;
  if (o.pf_particles) {
    if (!document.contains("pf") || document["pf"].is_null()) document["pf"] = json::object();
    document["pf"]["n_particles"] = *o.pf_particles;
  }
  return document;
}

}  // namespace rwpe
