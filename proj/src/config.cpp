#include "lifelog/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lifelog/error.hpp"
#include "lifelog/resources.hpp"
#include "lifelog/rng.hpp"

namespace lifelog {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 3> kDensityNames = {"sparse", "medium", "dense"};

// Keys generation reads; a table missing any of them is rejected up front.
constexpr std::array<std::string_view, 34> kRequiredProbabilities = {
    "persona.college",       "persona.grad_school",  "persona.married",     "persona.divorced",
    "persona.child",         "persona.pet",          "persona.sibling",     "persona.hobby",
    "breakfast",             "lunch",                "dinner",              "chat",
    "watch_tv",              "read",                 "exercise",            "social_media",
    "grocery",               "dating",               "hobbies",             "bake",
    "cook",                  "pet_care",             "travel",              "personal_medical_care",
    "child_medical_care",    "parent_medical_care",  "company.meal",        "company.grocery",
    "company.bake",          "company.cook",         "company.trip",        "trip.dining_lunch",
    "trip.dining_dinner",    "trip.second_place",
};

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T get_as(const json& j, const std::string& key, const std::string& source) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(source + ": bad value for '" + key + "'");
  }
}

void apply_probabilities(ProbabilityTable& table, const json& j, const std::string& source) {
  if (!j.is_object()) throw ConfigError(source + ": 'probabilities' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw ConfigError(source + ": probability '" + key + "' is not a number");
    table.probabilities[key] = value.get<double>();
  }
}

void apply_multipliers(ProbabilityTable& table, const json& j, const std::string& source) {
  if (!j.is_object()) throw ConfigError(source + ": 'density_multipliers' must be an object");
  for (const auto& [key, value] : j.items()) {
    const auto scale = parse_timescale(key);
    if (!scale) throw ConfigError(source + ": unknown timescale '" + key + "'");
    auto& row = table.multipliers[*scale];
    if (!value.is_object()) throw ConfigError(source + ": multipliers of '" + key + "' must be an object");
    for (const auto& [dname, m] : value.items()) {
      const auto d = parse_density(dname);
      if (!d || !m.is_number()) throw ConfigError(source + ": bad multiplier '" + key + "." + dname + "'");
      row[static_cast<std::size_t>(*d)] = m.get<double>();
    }
  }
}

ConstraintSet parse_constraints(const json& j, const std::string& source) {
  const json& list = j.is_object() && j.contains("constraints") ? j.at("constraints") : j;
  if (!list.is_array()) throw ConfigError(source + ": constraints must be an array of pairs");
  ConstraintSet set;
  for (const auto& rule : list) {
    if (!rule.is_array() || rule.size() != 2 || !rule[0].is_string() || !rule[1].is_string()) {
      throw ConfigError(source + ": a constraint must be a pair of names");
    }
    set.rules.push_back({rule[0].get<std::string>(), rule[1].get<std::string>()});
  }
  return set;
}

std::optional<std::filesystem::path> optional_path(const json& j, const std::filesystem::path& base_dir) {
  if (j.is_null()) return std::nullopt;
  std::filesystem::path p = j.get<std::string>();
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p;
}

GenConfig parse_config_impl(std::string_view text, const GenConfig& base, const std::string& source,
                            const std::filesystem::path& base_dir) {
  const json doc = parse_json(text, source);
  if (!doc.is_object()) throw ConfigError(source + ": config must be an object");
  GenConfig c = base;
  for (const auto& [key, value] : doc.items()) {
    if (key == "seed") {
      c.seed = get_as<std::uint64_t>(value, key, source);
    } else if (key == "year") {
      c.year = get_as<int>(value, key, source);
    } else if (key == "duration") {
      c.duration = get_as<int>(value, key, source);
    } else if (key == "density") {
      const auto d = parse_density(get_as<std::string>(value, key, source));
      if (!d) throw ConfigError(source + ": density must be sparse, medium or dense");
      c.density = *d;
    } else if (key == "num_lifelogs") {
      c.num_lifelogs = get_as<int>(value, key, source);
    } else if (key == "output_dir") {
      c.output_dir = get_as<std::string>(value, key, source);
    } else if (key == "atomic_cap") {
      c.atomic_cap = get_as<int>(value, key, source);
    } else if (key == "min_parental_age") {
      c.min_parental_age = get_as<int>(value, key, source);
    } else if (key == "paths") {
      if (!value.is_object()) throw ConfigError(source + ": 'paths' must be an object");
      for (const auto& [pk, pv] : value.items()) {
        if (!pv.is_null() && !pv.is_string()) throw ConfigError(source + ": path '" + pk + "' must be a string");
        auto p = optional_path(pv, base_dir);
        if (pk == "names") {
          c.paths.names = p;
        } else if (pk == "vocabulary") {
          c.paths.vocabulary = p;
        } else if (pk == "template_bank") {
          c.paths.template_bank = p;
        } else if (pk == "constraint_set") {
          c.paths.constraint_set = p;
        } else if (pk == "probability_table") {
          c.paths.probability_table = p;
        } else {
          throw ConfigError(source + ": unknown path key '" + pk + "'");
        }
      }
    } else if (key == "probabilities") {
      apply_probabilities(c.probabilities, value, source);
    } else if (key == "density_multipliers") {
      apply_multipliers(c.probabilities, value, source);
    } else if (key == "constraints") {
      c.constraints = parse_constraints(value, source);
    } else {
      throw ConfigError(source + ": unknown key '" + key + "'");
    }
  }
  if (doc.contains("paths")) {
    if (c.paths.probability_table) {
      const std::string file = c.paths.probability_table->string();
      const json table = parse_json(read_file(*c.paths.probability_table), file);
      if (table.contains("probabilities")) apply_probabilities(c.probabilities, table.at("probabilities"), file);
      if (table.contains("density_multipliers")) {
        apply_multipliers(c.probabilities, table.at("density_multipliers"), file);
      }
    }
    if (c.paths.constraint_set) {
      const std::string file = c.paths.constraint_set->string();
      c.constraints = parse_constraints(parse_json(read_file(*c.paths.constraint_set), file), file);
    }
  }
  return c;
}

}  // namespace

std::string_view density_name(Density d) { return kDensityNames[static_cast<std::size_t>(d)]; }

std::optional<Density> parse_density(std::string_view s) {
  for (std::size_t i = 0; i < kDensityNames.size(); ++i) {
    if (kDensityNames[i] == s) return static_cast<Density>(i);
  }
  return std::nullopt;
}

double ProbabilityTable::base(std::string_view key) const {
  const auto it = probabilities.find(std::string(key));
  if (it == probabilities.end()) throw ConfigError("probability table has no entry '" + std::string(key) + "'");
  return it->second;
}

double ProbabilityTable::effective(std::string_view key, Timescale scale, Density density) const {
  double m = 1.0;
  if (const auto it = multipliers.find(scale); it != multipliers.end()) {
    m = it->second[static_cast<std::size_t>(density)];
  }
  return std::min(1.0, base(key) * m);
}

void ProbabilityTable::validate() const {
  for (const auto& [key, p] : probabilities) {
    // Nothing reads other keys, so one is almost certainly a typo.
    if (std::find(kRequiredProbabilities.begin(), kRequiredProbabilities.end(), key) == kRequiredProbabilities.end()) {
      throw ConfigError("unknown probability '" + key + "'");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("probability '" + key + "' = " + std::to_string(p) + " is outside [0, 1]");
    }
  }
  for (const auto key : kRequiredProbabilities) {
    if (!probabilities.contains(std::string(key))) {
      throw ConfigError("probability table has no entry '" + std::string(key) + "'");
    }
  }
  for (const auto& [scale, row] : multipliers) {
    for (std::size_t d = 0; d < row.size(); ++d) {
      if (!(row[d] > 0.0)) {
        throw ConfigError("density multiplier " + std::string(timescale_name(scale)) + "." +
                          std::string(kDensityNames[d]) + " must be > 0");
      }
    }
  }
}

void ConstraintSet::validate() const {
  auto known = [](const std::string& token) {
    if (parse_category(token)) return true;
    return std::find(kDayConditions.begin(), kDayConditions.end(), token) != kDayConditions.end();
  };
  for (const auto& r : rules) {
    if (!parse_category(r.first) && !known(r.first)) {
      throw ConfigError("constraint references unknown category or condition '" + r.first + "'");
    }
    if (!known(r.second)) throw ConfigError("constraint references unknown category or condition '" + r.second + "'");
    if (!parse_category(r.first) && !parse_category(r.second)) {
      throw ConfigError("constraint (" + r.first + ", " + r.second + ") names no category");
    }
  }
}

GenConfig default_config() {
  static const GenConfig kDefaults = [] {
    GenConfig empty;
    for (const auto s : {Timescale::lifetime, Timescale::annual, Timescale::monthly, Timescale::weekly,
                         Timescale::daily}) {
      empty.probabilities.multipliers[s] = {1.0, 1.0, 1.0};
    }
    return parse_config_impl(embedded::default_config_json(), empty, "default_config.json", {});
  }();
  return kDefaults;
}

GenConfig parse_config(std::string_view json_text, const GenConfig& base, const std::string& source) {
  return parse_config_impl(json_text, base, source, {});
}

GenConfig load_config(const std::filesystem::path& path, const GenConfig& base) {
  return parse_config_impl(read_file(path), base, path.string(), path.parent_path());
}

void validate_config(const GenConfig& c) {
  if (c.year < 1900 || c.year > 2200) throw ConfigError("year must be in [1900, 2200]");
  if (c.duration < 1) throw ConfigError("duration must be >= 1");
  if (c.duration > 57) throw ConfigError("duration must be <= 57 (the youngest persona is 18)");
  if (c.num_lifelogs < 1) throw ConfigError("num_lifelogs must be >= 1");
  if (c.atomic_cap < 0) throw ConfigError("atomic_cap must be >= 0");
  if (c.min_parental_age < 12 || c.min_parental_age > 50) throw ConfigError("min_parental_age must be in [12, 50]");
  c.probabilities.validate();
  c.constraints.validate();
}

std::string canonical_config_json(const GenConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["year"] = c.year;
  j["duration"] = c.duration;
  j["density"] = density_name(c.density);
  j["num_lifelogs"] = c.num_lifelogs;
  j["atomic_cap"] = c.atomic_cap;
  j["min_parental_age"] = c.min_parental_age;
  auto path_json = [](const std::optional<std::filesystem::path>& p) -> nlohmann::ordered_json {
    return p ? nlohmann::ordered_json(p->generic_string()) : nlohmann::ordered_json(nullptr);
  };
  j["paths"] = {{"names", path_json(c.paths.names)},
                {"vocabulary", path_json(c.paths.vocabulary)},
                {"template_bank", path_json(c.paths.template_bank)},
                {"constraint_set", path_json(c.paths.constraint_set)},
                {"probability_table", path_json(c.paths.probability_table)}};
  auto& probs = j["probabilities"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.probabilities.probabilities) probs[k] = v;
  auto& mult = j["density_multipliers"] = nlohmann::ordered_json::object();
  for (const auto& [scale, row] : c.probabilities.multipliers) {
    mult[std::string(timescale_name(scale))] = {{"sparse", row[0]}, {"medium", row[1]}, {"dense", row[2]}};
  }
  auto& rules = j["constraints"] = nlohmann::ordered_json::array();
  for (const auto& r : c.constraints.rules) rules.push_back({r.first, r.second});
  return j.dump();
}

std::string config_hash(const GenConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_config_json(c))));
  return buf;
}

DateRange generation_window(const GenConfig& c) {
  return {Date::from_ymd(c.year - c.duration, 1, 1), Date::from_ymd(c.year - 1, 12, 31)};
}

}  // namespace lifelog
