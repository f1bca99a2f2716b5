#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lifelog/category.hpp"
#include "lifelog/date.hpp"

namespace lifelog {

enum class Density : std::uint8_t { sparse, medium, dense };

std::string_view density_name(Density d);
std::optional<Density> parse_density(std::string_view s);

// Event-kind probabilities plus per-density multipliers per timescale.
struct ProbabilityTable {
  std::map<std::string, double> probabilities;
  // Indexed by Density.
  std::map<Timescale, std::array<double, 3>> multipliers;

  // Throws ConfigError for an unknown key.
  double base(std::string_view key) const;
  // min(1, base * multiplier) for the category's timescale.
  double effective(std::string_view key, Timescale scale, Density density) const;
  // Throws ConfigError if any probability is outside [0,1] or any
  // multiplier is not positive.
  void validate() const;
};

// Mutual-exclusion rule between a category and a category or day condition.
struct ConstraintRule {
  std::string first;
  std::string second;

  friend bool operator==(const ConstraintRule&, const ConstraintRule&) = default;
};

inline constexpr std::array<std::string_view, 2> kDayConditions = {"traveling", "married"};

struct ConstraintSet {
  std::vector<ConstraintRule> rules;

  // Throws ConfigError when a rule names an unknown category or condition.
  void validate() const;
  bool empty() const { return rules.empty(); }
};

struct ResourcePaths {
  std::optional<std::filesystem::path> names;
  std::optional<std::filesystem::path> vocabulary;
  std::optional<std::filesystem::path> template_bank;
  std::optional<std::filesystem::path> constraint_set;
  std::optional<std::filesystem::path> probability_table;
};

struct GenConfig {
  std::uint64_t seed = 42;
  int year = 2023;
  int duration = 5;
  Density density = Density::medium;
  int num_lifelogs = 10;
  std::filesystem::path output_dir = "corpus";
  int atomic_cap = 5000;
  int min_parental_age = 18;
  ResourcePaths paths;
  ProbabilityTable probabilities;
  ConstraintSet constraints;
};

// Bundled defaults (data/default_config.json).
GenConfig default_config();
// Reads a JSON config (comments allowed) and overlays it on `base`.
GenConfig load_config(const std::filesystem::path& path, const GenConfig& base);
GenConfig parse_config(std::string_view json_text, const GenConfig& base, const std::string& source);
// Throws ConfigError on any invalid field.
void validate_config(const GenConfig& config);

// Canonical JSON of the effective configuration and its 64-bit hash,
// recorded in every lifelog manifest.
std::string canonical_config_json(const GenConfig& config);
std::string config_hash(const GenConfig& config);

// Non-lifetime episodes fall in [Jan 1 (year - duration), Dec 31 (year - 1)].
DateRange generation_window(const GenConfig& config);

}  // namespace lifelog
