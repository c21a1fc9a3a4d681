#include "revosim/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace revosim {

namespace {

using nlohmann::json;

json load_json(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string(what) + ": cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(std::string(what) + ": top-level value must be an object");
  return j;
}

void reject_unknown(const json& j, const std::set<std::string>& known, const char* what) {
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError(std::string(what) + ": unknown field '" + key + "'");
  }
}

template <typename T>
T get_field(const json& j, const char* key, const T& fallback, const char* what) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(what) + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

SpaceSpec load_space_spec(const std::filesystem::path& path) {
  const char* what = "space config";
  const json j = load_json(path, what);
  reject_unknown(j,
                 {"num_slots", "choices_per_slot", "forbidden_prefixes", "quality_seed",
                  "quality_mean", "quality_stddev", "epoch_levels", "prefix_weights",
                  "transfer_bonus_max"},
                 what);
  SpaceSpec spec;
  spec.num_slots = get_field(j, "num_slots", spec.num_slots, what);
  if (j.contains("choices_per_slot")) {
    spec.choices_per_slot = get_field(j, "choices_per_slot", spec.choices_per_slot, what);
  } else if (j.contains("num_slots")) {
    spec.choices_per_slot.assign(spec.num_slots, 5);
  }
  spec.forbidden_prefixes = get_field(j, "forbidden_prefixes", spec.forbidden_prefixes, what);
  spec.quality_seed = get_field(j, "quality_seed", spec.quality_seed, what);
  spec.quality_mean = get_field(j, "quality_mean", spec.quality_mean, what);
  spec.quality_stddev = get_field(j, "quality_stddev", spec.quality_stddev, what);
  spec.epoch_levels = get_field(j, "epoch_levels", spec.epoch_levels, what);
  spec.prefix_weights = get_field(j, "prefix_weights", spec.prefix_weights, what);
  spec.transfer_bonus_max = get_field(j, "transfer_bonus_max", spec.transfer_bonus_max, what);
  try {
    spec.validate();
  } catch (const SpecError& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
  return spec;
}

SearchConfig load_search_config(const std::filesystem::path& path) {
  const char* what = "search config";
  const json j = load_json(path, what);
  reject_unknown(j,
                 {"total_candidates", "population_size", "sample_size", "num_workers",
                  "duration_model", "duration_mu", "duration_sigma", "duration_floor",
                  "scheduling_mode", "quanta_wait", "transfer_enabled", "population_only_donors",
                  "admission_policy", "debug_trace", "rng_seed", "epochs"},
                 what);
  SearchConfig cfg;
  cfg.total_candidates = get_field(j, "total_candidates", cfg.total_candidates, what);
  cfg.population_size = get_field(j, "population_size", cfg.population_size, what);
  cfg.sample_size = get_field(j, "sample_size", cfg.sample_size, what);
  cfg.num_workers = get_field(j, "num_workers", cfg.num_workers, what);

  const std::string dist = get_field<std::string>(j, "duration_model", "normal", what);
  if (dist == "normal") {
    cfg.duration.kind = DurationModel::Kind::normal;
  } else if (dist == "lognormal") {
    cfg.duration.kind = DurationModel::Kind::lognormal;
  } else {
    throw ConfigError(std::string(what) + ": field 'duration_model' must be normal or lognormal");
  }
  cfg.duration.mu = get_field(j, "duration_mu", cfg.duration.mu, what);
  cfg.duration.sigma = get_field(j, "duration_sigma", cfg.duration.sigma, what);
  cfg.duration.floor = get_field(j, "duration_floor", cfg.duration.floor, what);

  const std::string mode = get_field<std::string>(j, "scheduling_mode", "continuous", what);
  if (mode == "continuous") {
    cfg.mode = SchedulingMode::continuous;
  } else if (mode == "quanta") {
    cfg.mode = SchedulingMode::quanta;
  } else {
    throw ConfigError(std::string(what) + ": field 'scheduling_mode' must be continuous or quanta");
  }
  cfg.quanta_wait = get_field(j, "quanta_wait", cfg.quanta_wait, what);
  cfg.transfer_enabled = get_field(j, "transfer_enabled", cfg.transfer_enabled, what);
  cfg.population_only_donors =
      get_field(j, "population_only_donors", cfg.population_only_donors, what);
  if (j.contains("admission_policy")) {
    try {
      cfg.admission = parse_policy(get_field<std::string>(j, "admission_policy", "", what));
    } catch (const std::exception& e) {
      throw ConfigError(std::string(what) + ": field 'admission_policy': " + e.what());
    }
  }
  cfg.debug_trace = get_field(j, "debug_trace", cfg.debug_trace, what);
  cfg.rng_seed = get_field(j, "rng_seed", cfg.rng_seed, what);
  cfg.epochs = get_field(j, "epochs", cfg.epochs, what);
  cfg.validate();
  return cfg;
}

CachePolicy parse_policy(const std::string& text) {
  std::string body = text;
  std::optional<int> capacity;
  if (auto at = body.find('@'); at != std::string::npos) {
    capacity = std::stoi(body.substr(at + 1));
    body = body.substr(0, at);
  }
  CachePolicy p;
  if (body == "store-all" || body == "store_all") {
    p = CachePolicy::store_all();
  } else if (body == "skip-bottom" || body == "skip_bottom") {
    p = CachePolicy::skip_bottom();
  } else if (body.rfind("prob:", 0) == 0) {
    p = CachePolicy::probability_threshold(std::stod(body.substr(5)));
  } else if (body.rfind("tier:", 0) == 0) {
    const auto rest = body.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
      throw PolicyError("tier policy needs min_donations and window, e.g. tier:5:100");
    }
    p = CachePolicy::tier_threshold(std::stoi(rest.substr(0, colon)),
                                    std::stoi(rest.substr(colon + 1)));
  } else {
    throw PolicyError("unknown policy '" + text +
                      "' (expected store-all, skip-bottom, prob:<eps>, tier:<min>:<window>)");
  }
  p.capacity = capacity;
  p.validate();
  return p;
}

std::string policy_to_string(const CachePolicy& policy) {
  std::ostringstream out;
  switch (policy.kind) {
    case CachePolicy::Kind::store_all:
      out << "store-all";
      break;
    case CachePolicy::Kind::skip_bottom:
      out << "skip-bottom";
      break;
    case CachePolicy::Kind::probability_threshold:
      out << "prob:" << policy.epsilon;
      break;
    case CachePolicy::Kind::tier_threshold:
      out << "tier:" << policy.min_donations << ":" << policy.window;
      break;
  }
  if (policy.capacity) out << "@" << *policy.capacity;
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw ConfigError("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["space_config"] = m.space_config;
  j["search_config"] = m.search_config;
  j["trace_file"] = m.trace_file;
  j["seed"] = m.seed;
  j["policy"] = m.policy;
  j["version"] = m.version;
  write_file_atomic(dir / "manifest.json", j.dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& dir) {
  const char* what = "manifest";
  const nlohmann::json j = load_json(dir / "manifest.json", what);
  RunManifest m;
  m.command = get_field<std::string>(j, "command", "", what);
  m.space_config = get_field<std::string>(j, "space_config", "", what);
  m.search_config = get_field<std::string>(j, "search_config", "", what);
  m.trace_file = get_field<std::string>(j, "trace_file", "", what);
  m.seed = get_field<std::uint64_t>(j, "seed", 0, what);
  m.policy = get_field<std::string>(j, "policy", "", what);
  m.version = get_field<std::string>(j, "version", "", what);
  return m;
}

}  // namespace revosim
