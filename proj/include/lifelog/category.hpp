#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lifelog {

// The 25 event categories a lifelog is made of.
enum class Category : std::uint8_t {
  breakfast,
  lunch,
  dinner,
  chat,
  watch_tv,
  read,
  exercise,
  social_media,
  grocery,
  dating,
  hobbies,
  bake,
  cook,
  pet_care,
  travel,
  places_visited,
  dining,
  personal_medical_care,
  child_medical_care,
  parent_medical_care,
  birth_info,
  college_move,
  college_graduation,
  grad_school_move,
  grad_school_graduation,
};

inline constexpr std::size_t kCategoryCount = 25;

enum class Timescale : std::uint8_t { lifetime, annual, monthly, weekly, daily };

std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view name);
std::span<const Category> all_categories();
Timescale timescale_of(Category c);
std::string_view timescale_name(Timescale t);
std::optional<Timescale> parse_timescale(std::string_view name);

// Episodes that own sub-episodes (multi-day trips).
bool is_super_episode(Category c);
// Categories generated only as sub-episodes of a super-episode.
bool is_sub_episode(Category c);
bool is_meal(Category c);

enum class FieldType : std::uint8_t {
  text,     // free text from a vocabulary
  integer,  // decimal digits
  real,     // digits with one decimal place
  list,     // strings joined by ", "
  people,   // person names joined by ", "
  date,     // YYYY/MM/DD
  choice,   // one of a closed set (time of day)
};

struct FieldSpec {
  std::string_view name;
  FieldType type;
  bool optional;
};

// Fields a category guarantees, excluding the start date, which every
// episode has. `date_in_text` means every template must render {date}.
struct CategorySchema {
  Category category;
  std::vector<FieldSpec> fields;
  bool date_in_text;

  const FieldSpec* find(std::string_view name) const;
};

const CategorySchema& schema_of(Category c);

// Coarse times of day used by chats and trip itineraries.
std::span<const std::string_view> time_of_day_tokens();

}  // namespace lifelog
