#include "lifelog/episode.hpp"

#include "lifelog/error.hpp"

namespace lifelog {

SlotMap slot_values(const Episode& e) {
  SlotMap out;
  out.emplace("date", e.start);
  if (schema_of(e.category).find("end_date") != nullptr) out.emplace("end_date", e.end);
  if (!e.participants.empty()) out.emplace("participants", e.participants);
  if (e.location) {
    if (!e.location->place.empty()) out.emplace("place", e.location->place);
    if (!e.location->city.empty()) out.emplace("city", e.location->city);
  }
  for (const auto& [name, value] : e.attributes) {
    std::visit([&](const auto& v) { out.emplace(name, v); }, value);
  }
  return out;
}

int intra_day_rank(Category c) {
  switch (c) {
    case Category::breakfast:
      return 0;
    case Category::lunch:
      return 1;
    case Category::dinner:
      return 2;
    default:
      return 3;
  }
}

bool chrono_less(const Episode& a, const Episode& b) {
  if (a.start != b.start) return a.start < b.start;
  const int ra = intra_day_rank(a.category);
  const int rb = intra_day_rank(b.category);
  if (ra != rb) return ra < rb;
  const auto na = category_name(a.category);
  const auto nb = category_name(b.category);
  if (na != nb) return na < nb;
  return a.id < b.id;
}

std::string entry_line(const Episode& e) { return e.start.slashed() + ", " + e.text; }

std::size_t count_tokens(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (const char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

std::size_t entry_tokens(const Episode& e) { return count_tokens(e.text) + 1; }

void check_episode(const Episode& e) {
  if (e.id.empty()) throw DataError("episode without id");
  if (e.end < e.start) throw DataError("episode " + e.id + " ends before it starts");
}

}  // namespace lifelog
