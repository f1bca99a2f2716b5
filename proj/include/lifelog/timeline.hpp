#pragma once

#include <set>
#include <string>
#include <vector>

#include "lifelog/config.hpp"
#include "lifelog/date.hpp"
#include "lifelog/episode.hpp"
#include "lifelog/persona.hpp"
#include "lifelog/resources.hpp"
#include "lifelog/store.hpp"

namespace lifelog {

class Rng;

// What is known about one day while generating: conditions in force
// (traveling, married) and the episodes already scheduled.
struct DayState {
  Date date;
  std::set<std::string> flags;
  std::vector<std::string> episode_ids;
  std::set<std::string> categories;
};

// Category name plus any condition the episode puts in force
// (a trip sets "traveling").
std::vector<std::string> constraint_tokens(const Episode& e);

// False iff a rule pairs one of the candidate's tokens with a flag or
// category already present on the day.
bool check_constraints(const DayState& day, const Episode& candidate, const ConstraintSet& rules);

// Breaks a trip into per-day itinerary sub-episodes (places visited,
// dining) inside the trip window. Sub-episode ids are "<parent id>.<nn>".
// Throws DataError when the parent is not a super-episode category.
std::vector<Episode> expand_super_episode(const Episode& parent, const GenConfig& config, const Resources& resources,
                                          Rng& rng);

// Lifetime episodes, then annual, monthly, weekly and daily ones, each
// checked against the constraint set before insertion. The returned store
// is frozen.
EpisodeStore generate_lifelog(const Persona& persona, const GenConfig& config, const Resources& resources, Rng& rng);

// Recomputes day states from a finished store.
std::vector<DayState> day_states(const EpisodeStore& store, const Persona& persona);

// Post-hoc scan: one message per pair of episodes sharing a day that some
// rule forbids.
std::vector<std::string> constraint_violations(const EpisodeStore& store, const Persona& persona,
                                               const ConstraintSet& rules);

// Episode-level invariants: start <= end, containment in the parent,
// text equals the rendering of its template.
std::vector<std::string> episode_violations(const EpisodeStore& store, const TemplateBank& bank);

}  // namespace lifelog
