#include "lifelog/timeline.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "lifelog/error.hpp"
#include "lifelog/rng.hpp"

namespace lifelog {

namespace {

bool married_on(const Persona& p, Date d) {
  for (const auto* s : p.members(Relation::spouse)) {
    if (s->marriage && *s->marriage <= d && (!s->divorce || d < *s->divorce)) return true;
  }
  return false;
}

bool alive_on(const FamilyMember& m, Date d) {
  return (!m.birthdate || *m.birthdate <= d) && (!m.death || d < *m.death);
}

std::string episode_id(std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "e%07zu", n);
  return buf;
}

bool token_conflict(const std::string& token, const std::set<std::string>& present, const ConstraintSet& rules) {
  for (const auto& r : rules.rules) {
    if (r.first == token && present.contains(r.second)) return true;
    if (r.second == token && present.contains(r.first)) return true;
  }
  return false;
}

class Generator {
 public:
  Generator(const Persona& persona, const GenConfig& config, const Resources& res, Rng& rng)
      : persona_(persona), config_(config), res_(res), vocab_(res.vocabulary), rng_(rng) {
    const DateRange w = generation_window(config);
    window_ = {std::max(w.first, persona.birthdate.plus_years(18)), w.last};
    if (window_.valid()) {
      days_.resize(static_cast<std::size_t>(window_.days()));
      for (int i = 0; i < window_.days(); ++i) {
        auto& day = days_[static_cast<std::size_t>(i)];
        day.date = window_.first.plus_days(i);
        if (married_on(persona, day.date)) day.flags.insert("married");
      }
    }
    // A few people to go on dates with besides a future spouse.
    std::set<std::string> used{persona.name};
    for (const auto& m : persona.family) used.insert(m.name);
    for (int tries = 0; dates_.size() < 3 && tries < 200; ++tries) {
      const std::string& n = rng_.pick(res.names);
      if (used.insert(n).second) dates_.push_back(n);
    }
  }

  EpisodeStore run() {
    lifetime();
    if (window_.valid()) {
      travel();
      medical();
      monthly();
      weekly();
      daily();
    }
    EpisodeStore store;
    for (auto& e : episodes_) store.insert(std::move(e));
    store.freeze();
    return store;
  }

 private:
  double p(const char* key, Timescale scale) const {
    return config_.probabilities.effective(key, scale, config_.density);
  }

  DayState* day(Date d) {
    if (!window_.contains(d)) return nullptr;
    return &days_[static_cast<std::size_t>(d.serial() - window_.first.serial())];
  }

  bool allowed(const Episode& e) {
    for (Date d = e.start; d <= e.end; d = d.plus_days(1)) {
      const DayState* s = day(d);
      if (s != nullptr && !check_constraints(*s, e, config_.constraints)) return false;
    }
    return true;
  }

  void record(const Episode& e) {
    for (Date d = e.start; d <= e.end; d = d.plus_days(1)) {
      DayState* s = day(d);
      if (s == nullptr) continue;
      s->episode_ids.push_back(e.id);
      for (auto& t : constraint_tokens(e)) {
        if (t == category_name(e.category)) {
          s->categories.insert(std::move(t));
        } else {
          s->flags.insert(std::move(t));
        }
      }
    }
  }

  Episode make(Category c, Date start, Date end) {
    Episode e;
    e.id = episode_id(++counter_);
    e.category = c;
    e.start = start;
    e.end = end;
    return e;
  }

  void finish(Episode& e) {
    auto r = render_episode(e, res_.templates, rng_);
    e.template_id = std::move(r.template_id);
    e.text = std::move(r.text);
  }

  // Renders, checks and stores; false when a rule rejects the episode.
  bool add(Episode e) {
    if (!allowed(e)) {
      --counter_;
      return false;
    }
    finish(e);
    record(e);
    episodes_.push_back(std::move(e));
    return true;
  }

  std::vector<std::string> company_pool(Date d) const {
    std::vector<std::string> pool;
    for (const auto& m : persona_.family) {
      if (m.relation == Relation::pet) continue;
      if (m.relation == Relation::spouse) {
        if (married_on(persona_, d)) pool.push_back(m.name);
        continue;
      }
      if (alive_on(m, d)) pool.push_back(m.name);
    }
    return pool;
  }

  std::vector<std::string> companions(Date d, int max) {
    auto pool = company_pool(d);
    if (pool.empty()) return {};
    const auto k = 1 + rng_.below(static_cast<std::uint64_t>(std::min<std::size_t>(max, pool.size())));
    std::vector<std::string> out;
    for (const auto i : rng_.sample_indices(pool.size(), k)) out.push_back(pool[i]);
    return out;
  }

  int minutes(int lo, int hi, int step) {
    return lo + step * static_cast<int>(rng_.below(static_cast<std::uint64_t>((hi - lo) / step + 1)));
  }

  void lifetime() {
    Episode birth = make(Category::birth_info, persona_.birthdate, persona_.birthdate);
    birth.location = Location{"", persona_.homes.front().city};
    add(std::move(birth));
    for (const auto& m : persona_.education) {
      std::optional<Category> c;
      if (m.kind == "college_start") c = Category::college_move;
      if (m.kind == "college_graduation") c = Category::college_graduation;
      if (m.kind == "grad_school_start") c = Category::grad_school_move;
      if (m.kind == "grad_school_graduation") c = Category::grad_school_graduation;
      if (!c) continue;
      Episode e = make(*c, m.date, m.date);
      const bool has_city = schema_of(*c).find("city") != nullptr;
      e.location = Location{m.institution, has_city ? m.city : ""};
      if (!m.degree.empty()) e.attributes["degree"] = m.degree;
      add(std::move(e));
    }
  }

  void travel() {
    for (int y = window_.first.year(); y <= window_.last.year(); ++y) {
      const std::array<DateRange, 2> halves = {DateRange{Date::from_ymd(y, 1, 1), Date::from_ymd(y, 6, 30)},
                                               DateRange{Date::from_ymd(y, 7, 1), Date::from_ymd(y, 12, 31)}};
      for (const auto& half : halves) {
        const DateRange slot{std::max(half.first, window_.first), std::min(half.last, window_.last)};
        const bool go = rng_.bernoulli(p("travel", Timescale::annual));
        const int length = 1 + static_cast<int>(rng_.below(7));
        const auto& dest = rng_.pick(vocab_.destinations);
        const bool company = rng_.bernoulli(config_.probabilities.base("company.trip"));
        if (!go || !slot.valid()) continue;
        const int len = std::min(length, slot.days());
        const Date start = slot.first.plus_days(static_cast<int>(rng_.below(static_cast<std::uint64_t>(slot.days() - len + 1))));
        Episode trip = make(Category::travel, start, start.plus_days(len - 1));
        trip.location = Location{"", dest.city};
        if (company) trip.participants = companions(start, 2);
        if (!allowed(trip)) {
          --counter_;
          continue;
        }
        finish(trip);
        auto subs = expand_super_episode(trip, config_, res_, rng_);
        record(trip);
        episodes_.push_back(std::move(trip));
        for (auto& s : subs) {
          record(s);
          episodes_.push_back(std::move(s));
        }
      }
    }
  }

  // Month/day of an annual appointment, drawn once per subject.
  std::pair<unsigned, unsigned> anchor() {
    const Date d = Date::from_ymd(2000, 1, 1).plus_days(static_cast<int>(rng_.below(366)));
    return {d.month(), d.day()};
  }

  static Date in_year(int y, std::pair<unsigned, unsigned> md) {
    if (md.first == 2 && md.second == 29 && !is_leap_year(y)) return Date::from_ymd(y, 2, 28);
    return Date::from_ymd(y, md.first, md.second);
  }

  void appointment(Category c, const std::string& care, std::pair<unsigned, unsigned> md, const char* key,
                   const FamilyMember* who, int min_age, int max_age) {
    for (int y = window_.first.year(); y <= window_.last.year(); ++y) {
      const Date d = in_year(y, md);
      const bool go = rng_.bernoulli(p(key, Timescale::annual));
      const std::string& place = rng_.pick(vocab_.medical_places);
      if (!go || !window_.contains(d)) continue;
      if (who != nullptr) {
        if (!who->birthdate || !alive_on(*who, d)) continue;
        const int age = age_on(*who->birthdate, d);
        if (age < min_age || age > max_age) continue;
      }
      Episode e = make(c, d, d);
      e.location = Location{place, ""};
      e.attributes["care_type"] = care;
      if (who != nullptr) e.participants = {who->name};
      add(std::move(e));
    }
  }

  void medical() {
    for (const auto& care : vocab_.personal_care) {
      appointment(Category::personal_medical_care, care, anchor(), "personal_medical_care", nullptr, 0, 0);
    }
    for (const auto* child : persona_.members(Relation::child)) {
      for (const auto& care : vocab_.child_care) {
        appointment(Category::child_medical_care, care, anchor(), "child_medical_care", child, 0, 17);
      }
    }
    for (const auto* parent : persona_.members(Relation::parent)) {
      for (const auto& care : vocab_.parent_care) {
        appointment(Category::parent_medical_care, care, anchor(), "parent_medical_care", parent, 60, 200);
      }
    }
  }

  Date pick_day(DateRange r) {
    return r.first.plus_days(static_cast<int>(rng_.below(static_cast<std::uint64_t>(r.days()))));
  }

  void monthly() {
    const auto pets = persona_.members(Relation::pet);
    for (int y = window_.first.year(); y <= window_.last.year(); ++y) {
      for (unsigned m = 1; m <= 12; ++m) {
        const DateRange mr = month_range(y, m);
        const DateRange r{std::max(mr.first, window_.first), std::min(mr.last, window_.last)};
        if (!r.valid()) continue;
        for (const auto* pet : pets) {
          if (!rng_.bernoulli(p("pet_care", Timescale::monthly))) continue;
          Episode e = make(Category::pet_care, pick_day(r), Date{});
          e.end = e.start;
          e.location = Location{rng_.pick(vocab_.pet_places), ""};
          e.attributes["pet"] = pet->name;
          e.attributes["pet_kind"] = pet->kind;
          e.attributes["care"] = rng_.pick(vocab_.pet_care);
          add(std::move(e));
        }
      }
    }
  }

  void weekly() {
    Date monday = window_.first.plus_days(-static_cast<int>(window_.first.iso_weekday_index()));
    for (; monday <= window_.last; monday = monday.plus_days(7)) {
      const DateRange r{std::max(monday, window_.first), std::min(monday.plus_days(6), window_.last)};
      if (rng_.bernoulli(p("grocery", Timescale::weekly))) {
        Episode e = make(Category::grocery, pick_day(r), Date{});
        e.end = e.start;
        e.location = Location{rng_.pick(vocab_.grocery_stores), ""};
        const auto k = 2 + rng_.below(4);
        auto idx = rng_.sample_indices(vocab_.grocery_items.size(), static_cast<std::size_t>(k));
        rng_.shuffle(idx);
        std::vector<std::string> items;
        for (const auto i : idx) items.push_back(vocab_.grocery_items[i]);
        e.attributes["items"] = std::move(items);
        if (rng_.bernoulli(config_.probabilities.base("company.grocery"))) e.participants = companions(e.start, 1);
        add(std::move(e));
      }
      if (rng_.bernoulli(p("dating", Timescale::weekly))) {
        Episode e = make(Category::dating, pick_day(r), Date{});
        e.end = e.start;
        e.location = Location{rng_.pick(vocab_.date_venues), ""};
        e.participants = {date_partner(e.start)};
        if (e.participants.front().empty()) {
          --counter_;
        } else {
          add(std::move(e));
        }
      }
      for (const auto& hobby : persona_.hobbies) {
        if (!rng_.bernoulli(p("hobbies", Timescale::weekly))) continue;
        Episode e = make(Category::hobbies, pick_day(r), Date{});
        e.end = e.start;
        e.attributes["hobby"] = hobby;
        e.attributes["minutes"] = std::int64_t{minutes(30, 180, 5)};
        add(std::move(e));
      }
      for (const auto& [c, key, dishes, company] :
           {std::tuple{Category::bake, "bake", &vocab_.bake, "company.bake"},
            std::tuple{Category::cook, "cook", &vocab_.cook, "company.cook"}}) {
        if (!rng_.bernoulli(p(key, Timescale::weekly))) continue;
        Episode e = make(c, pick_day(r), Date{});
        e.end = e.start;
        e.attributes["dish"] = rng_.pick(*dishes);
        if (rng_.bernoulli(config_.probabilities.base(company))) e.participants = companions(e.start, 2);
        add(std::move(e));
      }
    }
  }

  std::string date_partner(Date d) {
    for (const auto* s : persona_.members(Relation::spouse)) {
      if (s->marriage && d < *s->marriage) return s->name;
    }
    return dates_.empty() ? std::string() : rng_.pick(dates_);
  }

  void daily() {
    for (Date d = window_.first; d <= window_.last; d = d.plus_days(1)) {
      for (const auto& [c, foods] : {std::pair{Category::breakfast, &vocab_.breakfast_foods},
                                     std::pair{Category::lunch, &vocab_.meals},
                                     std::pair{Category::dinner, &vocab_.meals}}) {
        if (!rng_.bernoulli(p(std::string(category_name(c)).c_str(), Timescale::daily))) continue;
        Episode e = make(c, d, d);
        e.attributes["meal"] = rng_.pick(*foods);
        if (rng_.bernoulli(config_.probabilities.base("company.meal"))) e.participants = companions(d, 2);
        add(std::move(e));
      }
      if (rng_.bernoulli(p("chat", Timescale::daily))) {
        auto who = companions(d, 1);
        if (!who.empty()) {
          Episode e = make(Category::chat, d, d);
          e.participants = std::move(who);
          e.attributes["minutes"] = std::int64_t{minutes(5, 120, 1)};
          e.attributes["time_of_day"] = std::string(rng_.pick(time_of_day_tokens()));
          add(std::move(e));
        }
      }
      if (rng_.bernoulli(p("watch_tv", Timescale::daily))) {
        Episode e = make(Category::watch_tv, d, d);
        e.attributes["show"] = rng_.pick(vocab_.shows);
        e.attributes["minutes"] = std::int64_t{minutes(20, 180, 5)};
        add(std::move(e));
      }
      if (rng_.bernoulli(p("read", Timescale::daily))) {
        Episode e = make(Category::read, d, d);
        e.attributes["material"] = rng_.pick(vocab_.reading);
        e.attributes["minutes"] = std::int64_t{minutes(10, 90, 1)};
        add(std::move(e));
      }
      if (rng_.bernoulli(p("exercise", Timescale::daily))) {
        Episode e = make(Category::exercise, d, d);
        e.attributes["activity"] = rng_.pick(vocab_.exercise);
        e.attributes["minutes"] = std::int64_t{minutes(15, 120, 5)};
        add(std::move(e));
      }
      if (rng_.bernoulli(p("social_media", Timescale::daily))) {
        Episode e = make(Category::social_media, d, d);
        e.attributes["minutes"] = std::int64_t{minutes(5, 120, 1)};
        add(std::move(e));
      }
    }
  }

  const Persona& persona_;
  const GenConfig& config_;
  const Resources& res_;
  const Vocabulary& vocab_;
  Rng& rng_;
  DateRange window_;
  std::vector<DayState> days_;
  std::vector<Episode> episodes_;
  std::vector<std::string> dates_;
  std::size_t counter_ = 0;
};

}  // namespace

std::vector<std::string> constraint_tokens(const Episode& e) {
  std::vector<std::string> out{std::string(category_name(e.category))};
  if (e.category == Category::travel) out.emplace_back("traveling");
  return out;
}

bool check_constraints(const DayState& day, const Episode& candidate, const ConstraintSet& rules) {
  if (rules.empty()) return true;
  for (const auto& t : constraint_tokens(candidate)) {
    if (token_conflict(t, day.flags, rules) || token_conflict(t, day.categories, rules)) return false;
  }
  return true;
}

std::vector<Episode> expand_super_episode(const Episode& parent, const GenConfig& config, const Resources& res,
                                          Rng& rng) {
  if (!is_super_episode(parent.category)) {
    throw DataError("episode " + parent.id + " (" + std::string(category_name(parent.category)) +
                    ") is not a super-episode");
  }
  if (parent.end < parent.start) throw DataError("episode " + parent.id + " ends before it starts");
  const std::string city = parent.location ? parent.location->city : "";
  const auto& dests = res.vocabulary.destinations;
  const auto dest = std::find_if(dests.begin(), dests.end(), [&](const Destination& d) { return d.city == city; });
  if (dest == dests.end()) throw DataError("trip " + parent.id + " goes to unknown destination '" + city + "'");

  const auto& probs = config.probabilities;
  const auto tod = time_of_day_tokens();
  std::vector<std::string> places = dest->places;
  rng.shuffle(places);
  std::size_t next_place = 0;
  std::vector<Episode> out;
  auto sub = [&](Category c, Date d, std::string place, std::string_view when) {
    Episode e;
    char suffix[8];
    std::snprintf(suffix, sizeof suffix, ".%02zu", out.size() + 1);
    e.id = parent.id + suffix;
    e.category = c;
    e.start = d;
    e.end = d;
    e.location = Location{std::move(place), city};
    e.participants = parent.participants;
    e.parent_id = parent.id;
    e.attributes["time_of_day"] = std::string(when);
    return e;
  };
  auto finish = [&](Episode e) {
    auto r = render_episode(e, res.templates, rng);
    e.template_id = std::move(r.template_id);
    e.text = std::move(r.text);
    out.push_back(std::move(e));
  };
  // One itinerary slot per time of day: morning sight, lunch, afternoon
  // sight, dinner.
  for (Date d = parent.start; d <= parent.end; d = d.plus_days(1)) {
    finish(sub(Category::places_visited, d, places[next_place++ % places.size()], tod[0]));
    if (rng.bernoulli(probs.base("trip.dining_lunch"))) {
      Episode e = sub(Category::dining, d, rng.pick(dest->restaurants), tod[1]);
      e.attributes["meal"] = rng.pick(res.vocabulary.trip_meals);
      finish(std::move(e));
    }
    if (rng.bernoulli(probs.base("trip.second_place"))) {
      finish(sub(Category::places_visited, d, places[next_place++ % places.size()], tod[2]));
    }
    if (rng.bernoulli(probs.base("trip.dining_dinner"))) {
      Episode e = sub(Category::dining, d, rng.pick(dest->restaurants), tod[3]);
      e.attributes["meal"] = rng.pick(res.vocabulary.trip_meals);
      finish(std::move(e));
    }
  }
  return out;
}

EpisodeStore generate_lifelog(const Persona& persona, const GenConfig& config, const Resources& resources, Rng& rng) {
  if (config.duration < 1) throw ConfigError("duration must be >= 1");
  config.constraints.validate();
  return Generator(persona, config, resources, rng).run();
}

std::vector<DayState> day_states(const EpisodeStore& store, const Persona& persona) {
  std::map<std::int32_t, DayState> days;
  for (const auto& e : store.episodes()) {
    for (Date d = e.start; d <= e.end; d = d.plus_days(1)) {
      auto [it, fresh] = days.try_emplace(d.serial());
      DayState& s = it->second;
      if (fresh) {
        s.date = d;
        if (married_on(persona, d)) s.flags.insert("married");
      }
      s.episode_ids.push_back(e.id);
      for (auto& t : constraint_tokens(e)) {
        if (t == category_name(e.category)) {
          s.categories.insert(std::move(t));
        } else {
          s.flags.insert(std::move(t));
        }
      }
    }
  }
  std::vector<DayState> out;
  out.reserve(days.size());
  for (auto& [serial, s] : days) out.push_back(std::move(s));
  return out;
}

std::vector<std::string> constraint_violations(const EpisodeStore& store, const Persona& persona,
                                               const ConstraintSet& rules) {
  std::vector<std::string> out;
  if (rules.empty()) return out;
  auto forbidden = [&](const std::string& a, const std::string& b) {
    for (const auto& r : rules.rules) {
      if ((r.first == a && r.second == b) || (r.first == b && r.second == a)) return true;
    }
    return false;
  };
  std::map<std::int32_t, std::vector<const Episode*>> by_day;
  for (const auto& e : store.episodes()) {
    for (Date d = e.start; d <= e.end; d = d.plus_days(1)) by_day[d.serial()].push_back(&e);
  }
  for (const auto& [serial, eps] : by_day) {
    const Date d = Date::from_serial(serial);
    const bool married = married_on(persona, d);
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const auto ti = constraint_tokens(*eps[i]);
      if (married) {
        for (const auto& t : ti) {
          if (forbidden(t, "married")) out.push_back(d.slashed() + ": " + eps[i]->id + " (" + t + ") while married");
        }
      }
      for (std::size_t j = i + 1; j < eps.size(); ++j) {
        for (const auto& a : ti) {
          for (const auto& b : constraint_tokens(*eps[j])) {
            if (forbidden(a, b)) {
              out.push_back(d.slashed() + ": " + eps[i]->id + " (" + a + ") conflicts with " + eps[j]->id + " (" +
                            b + ")");
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<std::string> episode_violations(const EpisodeStore& store, const TemplateBank& bank) {
  std::vector<std::string> out;
  for (const auto& e : store.episodes()) {
    if (e.end < e.start) out.push_back(e.id + ": ends before it starts");
    if (e.parent_id) {
      const Episode* parent = store.find(*e.parent_id);
      if (parent == nullptr) {
        out.push_back(e.id + ": parent " + *e.parent_id + " missing");
      } else if (e.start < parent->start || parent->end < e.end) {
        out.push_back(e.id + ": not contained in parent " + parent->id);
      }
    }
    const Template* t = bank.find(e.template_id);
    if (t == nullptr) {
      out.push_back(e.id + ": unknown template " + e.template_id);
    } else if (t->category() != e.category) {
      out.push_back(e.id + ": template " + e.template_id + " belongs to another category");
    } else {
      try {
        if (t->render(slot_values(e)) != e.text) out.push_back(e.id + ": text differs from its rendering");
      } catch (const Error& ex) {
        out.push_back(e.id + ": " + ex.what());
      }
    }
  }
  return out;
}

}  // namespace lifelog
