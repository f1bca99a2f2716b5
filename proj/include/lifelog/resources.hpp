#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lifelog/config.hpp"
#include "lifelog/template.hpp"

namespace lifelog {

struct Destination {
  std::string city;
  std::vector<std::string> places;
  std::vector<std::string> restaurants;
};

// Slot-value vocabularies (data/vocabulary.json).
struct Vocabulary {
  std::vector<std::string> home_cities;
  std::vector<Destination> destinations;
  std::vector<std::string> breakfast_foods;
  std::vector<std::string> meals;
  std::vector<std::string> trip_meals;
  std::vector<std::string> shows;
  std::vector<std::string> reading;
  std::vector<std::string> exercise;
  std::vector<std::string> hobbies;
  std::vector<std::string> grocery_items;
  std::vector<std::string> grocery_stores;
  std::vector<std::string> bake;
  std::vector<std::string> cook;
  std::vector<std::string> date_venues;
  std::vector<std::string> pet_names;
  std::vector<std::string> pet_kinds;
  std::vector<std::string> pet_care;
  std::vector<std::string> pet_places;
  std::vector<std::string> medical_places;
  std::vector<std::string> personal_care;
  std::vector<std::string> child_care;
  std::vector<std::string> parent_care;
  std::map<std::string, std::string> care_providers;
  std::vector<std::string> schools;
  std::vector<std::string> degrees;
  std::vector<std::string> job_roles;

  static Vocabulary parse(std::string_view json_text, const std::string& source);
  // Throws ConfigError if a list is empty.
  void validate() const;
  // "the doctor" when a care type has no mapped provider.
  const std::string& provider_for(const std::string& care_type) const;
};

// Everything generation reads besides the numeric config.
struct Resources {
  std::vector<std::string> names;
  Vocabulary vocabulary;
  TemplateBank templates;
};

std::vector<std::string> parse_name_list(std::string_view text);

// Bundled data, or the override files named in config.paths.
Resources load_resources(const GenConfig& config);
const Resources& default_resources();

namespace embedded {
std::string_view default_config_json();
std::string_view vocabulary_json();
std::string_view templates_json();
std::string_view names_txt();
std::string_view extraction_json();
}  // namespace embedded

}  // namespace lifelog
