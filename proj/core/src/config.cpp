#include "adv2e/config.hpp"

#include <cmath>
#include <limits>
#include <type_traits>

#include "adv2e/errors.hpp"

namespace adv2e {

std::string_view to_string(FilterMode mode) noexcept {
  switch (mode) {
    case FilterMode::kNone: return "none";
    case FilterMode::kFixed: return "fixed";
    case FilterMode::kAdv2e: return "adv2e";
  }
  return "?";
}

std::optional<FilterMode> parse_filter_mode(std::string_view text) noexcept {
  if (text == "none") return FilterMode::kNone;
  if (text == "fixed") return FilterMode::kFixed;
  if (text == "adv2e") return FilterMode::kAdv2e;
  return std::nullopt;
}

std::string_view to_string(ContinuityBridge bridge) noexcept {
  return bridge == ContinuityBridge::kPrinted ? "printed" : "interpolate";
}

std::optional<ContinuityBridge> parse_continuity_bridge(std::string_view text) noexcept {
  if (text == "interpolate") return ContinuityBridge::kInterpolate;
  if (text == "printed") return ContinuityBridge::kPrinted;
  return std::nullopt;
}

std::vector<std::string> config_violations(const SimConfig& cfg) {
  std::vector<std::string> out;
  auto require = [&](bool ok, const char* what) {
    if (!ok) out.emplace_back(what);
  };
  // Written so NaN fails every check.
  require(cfg.pos_threshold > 0.0 && std::isfinite(cfg.pos_threshold), "C_pos > 0");
  require(cfg.neg_threshold > 0.0 && std::isfinite(cfg.neg_threshold), "C_neg > 0");
  require(cfg.interp_factor >= 1, "L >= 1");
  require(cfg.oversample_factor >= 1, "K >= 1");
  require(cfg.cutoff_max > 0.0 && std::isfinite(cfg.cutoff_max), "f_max > 0");
  require(cfg.cutoff_floor_ratio > 0.0 && cfg.cutoff_floor_ratio <= 1.0,
          "0 < cutoff_floor_ratio <= 1");
  require(cfg.leak_rate >= 0.0 && std::isfinite(cfg.leak_rate), "leak_rate >= 0");
  require(cfg.shot_noise_rate >= 0.0 && std::isfinite(cfg.shot_noise_rate),
          "shot_noise_rate >= 0");
  require(cfg.log_eps > 0.0 && std::isfinite(cfg.log_eps), "log_eps > 0");
  return out;
}

ValidatedConfig validate_config(const SimConfig& cfg) {
  auto violations = config_violations(cfg);
  if (!violations.empty()) throw InvalidConfig(std::move(violations));
  return ValidatedConfig(cfg);
}

namespace {

template <class T>
void read_number(const nlohmann::json& j, const char* key, T& field,
                 std::vector<std::string>& errors) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) {
      errors.push_back(std::string(key) + " must be an integer");
      return;
    }
    if constexpr (std::is_unsigned_v<T>) {
      if (it->is_number_unsigned()) {
        field = it->template get<T>();
      } else if (it->template get<std::int64_t>() >= 0) {
        field = static_cast<T>(it->template get<std::int64_t>());
      } else {
        errors.push_back(std::string(key) + " must be non-negative");
      }
    } else {
      const auto v = it->template get<std::int64_t>();
      if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max()) {
        errors.push_back(std::string(key) + " out of range");
        return;
      }
      field = static_cast<T>(v);
    }
  } else {
    if (!it->is_number()) {
      errors.push_back(std::string(key) + " must be a number");
      return;
    }
    field = it->template get<T>();
  }
}

}  // namespace

SimConfig config_from_json(const nlohmann::json& j, SimConfig cfg) {
  if (!j.is_object()) throw InvalidConfig({"config must be a JSON object"});
  static const char* const kKeys[] = {
      "pos_threshold", "neg_threshold",      "interp_factor", "oversample_factor",
      "cutoff_max",    "cutoff_floor_ratio", "filter_mode",   "leak_rate",
      "shot_noise_rate", "rng_seed",         "log_eps",       "continuity_bridge"};
  std::vector<std::string> errors;
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) errors.push_back("unknown key '" + key + "'");
  }
  read_number(j, "pos_threshold", cfg.pos_threshold, errors);
  read_number(j, "neg_threshold", cfg.neg_threshold, errors);
  read_number(j, "interp_factor", cfg.interp_factor, errors);
  read_number(j, "oversample_factor", cfg.oversample_factor, errors);
  read_number(j, "cutoff_max", cfg.cutoff_max, errors);
  read_number(j, "cutoff_floor_ratio", cfg.cutoff_floor_ratio, errors);
  read_number(j, "leak_rate", cfg.leak_rate, errors);
  read_number(j, "shot_noise_rate", cfg.shot_noise_rate, errors);
  read_number(j, "rng_seed", cfg.rng_seed, errors);
  read_number(j, "log_eps", cfg.log_eps, errors);
  if (auto it = j.find("filter_mode"); it != j.end()) {
    auto mode = it->is_string() ? parse_filter_mode(it->get<std::string>()) : std::nullopt;
    if (mode) {
      cfg.filter_mode = *mode;
    } else {
      errors.emplace_back("filter_mode must be one of none|fixed|adv2e");
    }
  }
  if (auto it = j.find("continuity_bridge"); it != j.end()) {
    auto bridge =
        it->is_string() ? parse_continuity_bridge(it->get<std::string>()) : std::nullopt;
    if (bridge) {
      cfg.continuity_bridge = *bridge;
    } else {
      errors.emplace_back("continuity_bridge must be interpolate|printed");
    }
  }
  if (!errors.empty()) throw InvalidConfig(std::move(errors));
  return cfg;
}

nlohmann::json config_to_json(const SimConfig& cfg) {
  return {
      {"pos_threshold", cfg.pos_threshold},
      {"neg_threshold", cfg.neg_threshold},
      {"interp_factor", cfg.interp_factor},
      {"oversample_factor", cfg.oversample_factor},
      {"cutoff_max", cfg.cutoff_max},
      {"cutoff_floor_ratio", cfg.cutoff_floor_ratio},
      {"filter_mode", std::string(to_string(cfg.filter_mode))},
      {"leak_rate", cfg.leak_rate},
      {"shot_noise_rate", cfg.shot_noise_rate},
      {"rng_seed", cfg.rng_seed},
      {"log_eps", cfg.log_eps},
      {"continuity_bridge", std::string(to_string(cfg.continuity_bridge))},
  };
}

}  // namespace adv2e
