#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lifelog/attr.hpp"
#include "lifelog/category.hpp"
#include "lifelog/date.hpp"

namespace lifelog {

struct Location {
  std::string place;  // may be empty when only the city is known
  std::string city;   // may be empty when only the place is known

  friend bool operator==(const Location&, const Location&) = default;
};

// One structured life event. Times are day-resolution; the time of day, when
// known, is the `time_of_day` attribute.
struct Episode {
  std::string id;
  Category category = Category::breakfast;
  Date start;
  Date end;
  std::optional<Location> location;
  std::vector<std::string> participants;
  AttrMap attributes;
  std::optional<std::string> parent_id;
  std::string template_id;
  std::string text;

  friend bool operator==(const Episode&, const Episode&) = default;
};

// Every field a template may bind for this episode, keyed by slot name:
// date, end_date (multi-day categories), participants (when non-empty),
// place and city (when set), and each attribute.
SlotMap slot_values(const Episode& e);

// Meals first (breakfast, lunch, dinner), then everything else.
int intra_day_rank(Category c);
// Chronological order: start date, then intra-day rank, then category
// name, then id.
bool chrono_less(const Episode& a, const Episode& b);

// "YYYY/MM/DD, <text>", the form a lifelog is listed and serialized to
// retrievers in.
std::string entry_line(const Episode& e);
std::size_t count_tokens(std::string_view text);
std::size_t entry_tokens(const Episode& e);

// Throws DataError if start > end or an id is empty.
void check_episode(const Episode& e);

}  // namespace lifelog
