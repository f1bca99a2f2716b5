#include "lifelog/resources.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lifelog/error.hpp"

namespace lifelog {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> string_list(const json& doc, const char* key, const std::string& source) {
  if (!doc.contains(key)) throw ConfigError(source + ": missing list '" + key + "'");
  const json& j = doc.at(key);
  if (!j.is_array()) throw ConfigError(source + ": '" + key + "' must be a list");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ConfigError(source + ": '" + key + "' holds a non-string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

Vocabulary Vocabulary::parse(std::string_view json_text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(source + ": vocabulary must be an object");
  Vocabulary v;
  v.home_cities = string_list(doc, "home_cities", source);
  if (!doc.contains("destinations") || !doc.at("destinations").is_array()) {
    throw ConfigError(source + ": missing list 'destinations'");
  }
  for (const auto& d : doc.at("destinations")) {
    if (!d.is_object() || !d.contains("city")) throw ConfigError(source + ": destination without a city");
    v.destinations.push_back({d.at("city").get<std::string>(), string_list(d, "places", source),
                              string_list(d, "restaurants", source)});
  }
  v.breakfast_foods = string_list(doc, "breakfast_foods", source);
  v.meals = string_list(doc, "meals", source);
  v.trip_meals = string_list(doc, "trip_meals", source);
  v.shows = string_list(doc, "shows", source);
  v.reading = string_list(doc, "reading", source);
  v.exercise = string_list(doc, "exercise", source);
  v.hobbies = string_list(doc, "hobbies", source);
  v.grocery_items = string_list(doc, "grocery_items", source);
  v.grocery_stores = string_list(doc, "grocery_stores", source);
  v.bake = string_list(doc, "bake", source);
  v.cook = string_list(doc, "cook", source);
  v.date_venues = string_list(doc, "date_venues", source);
  v.pet_names = string_list(doc, "pet_names", source);
  v.pet_kinds = string_list(doc, "pet_kinds", source);
  v.pet_care = string_list(doc, "pet_care", source);
  v.pet_places = string_list(doc, "pet_places", source);
  v.medical_places = string_list(doc, "medical_places", source);
  v.personal_care = string_list(doc, "personal_care", source);
  v.child_care = string_list(doc, "child_care", source);
  v.parent_care = string_list(doc, "parent_care", source);
  if (doc.contains("care_providers")) {
    const json& cp = doc.at("care_providers");
    if (!cp.is_object()) throw ConfigError(source + ": 'care_providers' must be an object");
    for (const auto& [k, val] : cp.items()) v.care_providers[k] = val.get<std::string>();
  }
  v.schools = string_list(doc, "schools", source);
  v.degrees = string_list(doc, "degrees", source);
  v.job_roles = string_list(doc, "job_roles", source);
  v.validate();
  return v;
}

void Vocabulary::validate() const {
  const std::pair<const char*, const std::vector<std::string>*> lists[] = {
      {"home_cities", &home_cities},       {"breakfast_foods", &breakfast_foods},
      {"meals", &meals},                   {"trip_meals", &trip_meals},
      {"shows", &shows},                   {"reading", &reading},
      {"exercise", &exercise},             {"hobbies", &hobbies},
      {"grocery_items", &grocery_items},   {"grocery_stores", &grocery_stores},
      {"bake", &bake},                     {"cook", &cook},
      {"date_venues", &date_venues},       {"pet_names", &pet_names},
      {"pet_kinds", &pet_kinds},           {"pet_care", &pet_care},
      {"pet_places", &pet_places},         {"medical_places", &medical_places},
      {"personal_care", &personal_care},   {"child_care", &child_care},
      {"parent_care", &parent_care},       {"schools", &schools},
      {"degrees", &degrees},               {"job_roles", &job_roles},
  };
  for (const auto& [name, list] : lists) {
    if (list->empty()) throw ConfigError(std::string("vocabulary list '") + name + "' is empty");
    for (const auto& s : *list) {
      if (s.empty() || s.front() == ' ' || s.back() == ' ') {
        throw ConfigError(std::string("vocabulary list '") + name + "' has a blank or padded entry");
      }
    }
  }
  if (destinations.empty()) throw ConfigError("vocabulary has no destinations");
  for (const auto& d : destinations) {
    if (d.places.empty() || d.restaurants.empty()) {
      throw ConfigError("destination " + d.city + " needs places and restaurants");
    }
  }
  if (grocery_items.size() < 3) throw ConfigError("vocabulary needs at least 3 grocery items");
}

const std::string& Vocabulary::provider_for(const std::string& care_type) const {
  static const std::string kDefault = "the doctor";
  const auto it = care_providers.find(care_type);
  return it == care_providers.end() ? kDefault : it->second;
}

std::vector<std::string> parse_name_list(std::string_view text) {
  std::vector<std::string> names;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t");
    std::string name = line.substr(b, e - b + 1);
    if (name.find_first_of(" ,") != std::string::npos) {
      throw ConfigError("name '" + name + "' must be a single word");
    }
    names.push_back(std::move(name));
  }
  return names;
}

Resources load_resources(const GenConfig& config) {
  Resources r;
  r.names = parse_name_list(config.paths.names ? read_file(*config.paths.names) : std::string(embedded::names_txt()));
  if (r.names.size() < 20) throw ConfigError("name list needs at least 20 names");
  r.vocabulary = config.paths.vocabulary
                     ? Vocabulary::parse(read_file(*config.paths.vocabulary), config.paths.vocabulary->string())
                     : Vocabulary::parse(embedded::vocabulary_json(), "vocabulary.json");
  r.templates = config.paths.template_bank
                    ? TemplateBank::parse(read_file(*config.paths.template_bank),
                                          config.paths.template_bank->string())
                    : TemplateBank::parse(embedded::templates_json(), "templates.json");
  r.templates.validate();
  return r;
}

const Resources& default_resources() {
  static const Resources kResources = load_resources(GenConfig{});
  return kResources;
}

}  // namespace lifelog
