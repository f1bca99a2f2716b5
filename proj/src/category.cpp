#include "lifelog/category.hpp"

#include <array>

namespace lifelog {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kNames = {
    "breakfast",
    "lunch",
    "dinner",
    "chat",
    "watch_tv",
    "read",
    "exercise",
    "social_media",
    "grocery",
    "dating",
    "hobbies",
    "bake",
    "cook",
    "pet_care",
    "travel",
    "places_visited",
    "dining",
    "personal_medical_care",
    "child_medical_care",
    "parent_medical_care",
    "birth_info",
    "college_move",
    "college_graduation",
    "grad_school_move",
    "grad_school_graduation",
};

constexpr std::array<Category, kCategoryCount> make_all() {
  std::array<Category, kCategoryCount> out{};
  for (std::size_t i = 0; i < kCategoryCount; ++i) out[i] = static_cast<Category>(i);
  return out;
}

constexpr std::array<Category, kCategoryCount> kAll = make_all();

constexpr std::array<std::string_view, 5> kTimescales = {"lifetime", "annual", "monthly", "weekly", "daily"};

constexpr std::array<std::string_view, 5> kTimesOfDay = {"in the morning", "at noon", "in the afternoon",
                                                          "in the evening", "late in the evening"};

using F = FieldType;

std::vector<CategorySchema> build_schemas() {
  std::vector<CategorySchema> s;
  s.reserve(kCategoryCount);
  auto add = [&](Category c, std::vector<FieldSpec> fields, bool date_in_text) {
    s.push_back(CategorySchema{c, std::move(fields), date_in_text});
  };
  const FieldSpec company{"participants", F::people, true};
  add(Category::breakfast, {{"meal", F::text, false}, company}, false);
  add(Category::lunch, {{"meal", F::text, false}, company}, false);
  add(Category::dinner, {{"meal", F::text, false}, company}, false);
  add(Category::chat,
      {{"participants", F::people, false}, {"minutes", F::integer, false}, {"time_of_day", F::choice, false}}, false);
  add(Category::watch_tv, {{"show", F::text, false}, {"minutes", F::integer, false}}, false);
  add(Category::read, {{"material", F::text, false}, {"minutes", F::integer, false}}, false);
  add(Category::exercise, {{"activity", F::text, false}, {"minutes", F::integer, false}}, false);
  add(Category::social_media, {{"minutes", F::integer, false}}, false);
  add(Category::grocery, {{"place", F::text, false}, {"items", F::list, false}, company}, false);
  add(Category::dating, {{"participants", F::people, false}, {"place", F::text, false}}, false);
  add(Category::hobbies, {{"hobby", F::text, false}, {"minutes", F::integer, false}}, false);
  add(Category::bake, {{"dish", F::text, false}, company}, false);
  add(Category::cook, {{"dish", F::text, false}, company}, false);
  add(Category::pet_care,
      {{"pet", F::text, false}, {"pet_kind", F::text, false}, {"care", F::text, false}, {"place", F::text, false}},
      false);
  add(Category::travel, {{"city", F::text, false}, {"end_date", F::date, false}, company}, true);
  add(Category::places_visited,
      {{"place", F::text, false}, {"city", F::text, false}, {"time_of_day", F::choice, false}, company}, false);
  add(Category::dining,
      {{"place", F::text, false},
       {"city", F::text, false},
       {"meal", F::text, false},
       {"time_of_day", F::choice, false},
       company},
      false);
  add(Category::personal_medical_care, {{"care_type", F::text, false}, {"place", F::text, false}}, true);
  add(Category::child_medical_care,
      {{"participants", F::people, false}, {"care_type", F::text, false}, {"place", F::text, false}}, true);
  add(Category::parent_medical_care,
      {{"participants", F::people, false}, {"care_type", F::text, false}, {"place", F::text, false}}, true);
  add(Category::birth_info, {{"city", F::text, false}}, true);
  add(Category::college_move, {{"place", F::text, false}, {"city", F::text, false}}, true);
  add(Category::college_graduation, {{"place", F::text, false}, {"degree", F::text, false}}, true);
  add(Category::grad_school_move, {{"place", F::text, false}, {"city", F::text, false}}, true);
  add(Category::grad_school_graduation, {{"place", F::text, false}, {"degree", F::text, false}}, true);
  return s;
}

}  // namespace

std::string_view category_name(Category c) { return kNames[static_cast<std::size_t>(c)]; }

std::optional<Category> parse_category(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    if (kNames[i] == name) return static_cast<Category>(i);
  }
  return std::nullopt;
}

std::span<const Category> all_categories() { return kAll; }

Timescale timescale_of(Category c) {
  switch (c) {
    case Category::breakfast:
    case Category::lunch:
    case Category::dinner:
    case Category::chat:
    case Category::watch_tv:
    case Category::read:
    case Category::exercise:
    case Category::social_media:
      return Timescale::daily;
    case Category::grocery:
    case Category::dating:
    case Category::hobbies:
    case Category::bake:
    case Category::cook:
      return Timescale::weekly;
    case Category::pet_care:
      return Timescale::monthly;
    case Category::travel:
    case Category::places_visited:
    case Category::dining:
    case Category::personal_medical_care:
    case Category::child_medical_care:
    case Category::parent_medical_care:
      return Timescale::annual;
    case Category::birth_info:
    case Category::college_move:
    case Category::college_graduation:
    case Category::grad_school_move:
    case Category::grad_school_graduation:
      return Timescale::lifetime;
  }
  return Timescale::daily;
}

std::string_view timescale_name(Timescale t) { return kTimescales[static_cast<std::size_t>(t)]; }

std::optional<Timescale> parse_timescale(std::string_view name) {
  for (std::size_t i = 0; i < kTimescales.size(); ++i) {
    if (kTimescales[i] == name) return static_cast<Timescale>(i);
  }
  return std::nullopt;
}

bool is_super_episode(Category c) { return c == Category::travel; }
bool is_sub_episode(Category c) { return c == Category::places_visited || c == Category::dining; }
bool is_meal(Category c) { return c == Category::breakfast || c == Category::lunch || c == Category::dinner; }

const FieldSpec* CategorySchema::find(std::string_view name) const {
  for (const auto& f : fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const CategorySchema& schema_of(Category c) {
  static const std::vector<CategorySchema> kSchemas = build_schemas();
  return kSchemas[static_cast<std::size_t>(c)];
}

std::span<const std::string_view> time_of_day_tokens() { return kTimesOfDay; }

}  // namespace lifelog
