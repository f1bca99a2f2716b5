#pragma once

// Brute-force reference for the query engine: a linear scan over raw
// episodes with its own filter, ordering and aggregation code. Shares no
// evaluation code with the library.

#include <set>
#include <span>
#include <stdexcept>
#include <string>

#include "lifelog/episode.hpp"
#include "lifelog/query.hpp"

namespace oracle {

struct EmptyDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Answer {
  lifelog::AnswerValue value;
  std::set<std::string> evidence;
};

bool matches(const lifelog::Episode& e, const lifelog::EpisodeFilter& f);
// Matching episodes in chronological order.
std::vector<const lifelog::Episode*> scan(std::span<const lifelog::Episode> all, const lifelog::EpisodeFilter& f);
Answer evaluate(std::span<const lifelog::Episode> all, const lifelog::QuerySpec& q);

// Numbers compare by value and unit, lists as sequences.
bool same_value(const lifelog::AnswerValue& a, const lifelog::AnswerValue& b);
std::string show(const lifelog::AnswerValue& v);

}  // namespace oracle
