#include <algorithm>
#include <cstdio>
#include <set>

#include "lifelog/error.hpp"
#include "lifelog/qa.hpp"
#include "lifelog/resources.hpp"
#include "lifelog/rng.hpp"

namespace lifelog {

namespace {

using Bindings = std::function<std::vector<Params>(const CatalogContext&)>;
using Builder = std::function<QuerySpec(const Params&, const CatalogContext&)>;
using Keys = std::function<std::vector<Params>(const Episode&)>;

enum class Scope { month, year, all };

std::string attr_text(const Episode& e, const std::string& name) {
  const auto it = e.attributes.find(name);
  return it == e.attributes.end() ? std::string() : to_text(it->second);
}

Params scope_params(const Episode& e, Scope s) {
  switch (s) {
    case Scope::month:
      return {{"month", std::string(month_name(e.start.month())) + " " + std::to_string(e.start.year())},
              {"year", std::to_string(e.start.year())},
              {"month_no", std::to_string(e.start.month())}};
    case Scope::year:
      return {{"year", std::to_string(e.start.year())}};
    case Scope::all:
      break;
  }
  return {};
}

std::optional<DateRange> scope_window(const Params& p, Scope s) {
  switch (s) {
    case Scope::month:
      return month_range(std::stoi(p.at("year")), static_cast<unsigned>(std::stoi(p.at("month_no"))));
    case Scope::year:
      return year_range(std::stoi(p.at("year")));
    case Scope::all:
      break;
  }
  return std::nullopt;
}

// Distinct bindings over the episodes of `c` inside the lifelog window.
Bindings from_episodes(Category c, Scope s, Keys keys) {
  return [=](const CatalogContext& ctx) {
    std::set<Params> seen;
    for (const auto* e : ctx.store.by_category(c)) {
      if (!ctx.window.contains(e->start)) continue;
      for (auto& k : keys(*e)) {
        auto p = scope_params(*e, s);
        p.insert(k.begin(), k.end());
        seen.insert(std::move(p));
      }
    }
    return std::vector<Params>(seen.begin(), seen.end());
  };
}

Keys attr_key(const std::string& attr, const std::string& param) {
  return [=](const Episode& e) -> std::vector<Params> {
    const auto it = e.attributes.find(attr);
    if (it == e.attributes.end()) return {};
    if (const auto* items = std::get_if<std::vector<std::string>>(&it->second)) {
      std::vector<Params> out;
      for (const auto& i : *items) out.push_back({{param, i}});
      return out;
    }
    return {{{param, to_text(it->second)}}};
  };
}

Keys person_key(const std::string& param = "person") {
  return [=](const Episode& e) {
    std::vector<Params> out;
    for (const auto& p : e.participants) out.push_back({{param, p}});
    return out;
  };
}

Keys city_key() {
  return [](const Episode& e) -> std::vector<Params> {
    if (!e.location || e.location->city.empty()) return {};
    return {{{"city", e.location->city}}};
  };
}

Keys place_key() {
  return [](const Episode& e) -> std::vector<Params> {
    if (!e.location || e.location->place.empty()) return {};
    return {{{"place", e.location->place}}};
  };
}

Keys no_key() {
  return [](const Episode&) { return std::vector<Params>{Params{}}; };
}

Keys both(Keys a, Keys b) {
  return [=](const Episode& e) {
    std::vector<Params> out;
    for (const auto& x : a(e)) {
      for (const auto& y : b(e)) {
        Params p = x;
        p.insert(y.begin(), y.end());
        out.push_back(std::move(p));
      }
    }
    return out;
  };
}

// Filter parts, each reading the binding.
using Part = std::function<void(EpisodeFilter&, const Params&)>;

Part attr_eq(std::string attr, std::string param) {
  return [=](EpisodeFilter& f, const Params& p) {
    f.attributes.push_back({attr, AttributeFilter::Op::equals, p.at(param)});
  };
}
Part with_person(std::string param = "person") {
  return [=](EpisodeFilter& f, const Params& p) { f.participants.push_back(p.at(param)); };
}
Part at_location(std::string param) {
  return [=](EpisodeFilter& f, const Params& p) { f.location = p.at(param); };
}

Builder query(AggregateOp op, Category c, Scope s, std::vector<Part> parts, std::string attribute = {},
              std::string unit = {}, GroupBy g = GroupBy::none, AverageMode m = AverageMode::per_episode) {
  return [=](const Params& p, const CatalogContext&) {
    QuerySpec q;
    q.op = op;
    q.filter.categories = {c};
    q.filter.window = scope_window(p, s);
    for (const auto& part : parts) part(q.filter, p);
    q.attribute = attribute;
    q.unit = unit;
    q.group_by = g;
    q.average_mode = m;
    return q;
  };
}

// Pairs (a, b) of distinct values of one key whose first occurrences fall
// on different days, so the before/after answer is well defined.
Bindings ordered_pairs(Category c, std::function<std::optional<std::string>(const Episode&)> key) {
  return [=](const CatalogContext& ctx) {
    std::vector<std::pair<std::string, Date>> firsts;
    std::set<std::string> seen;
    for (const auto* e : ctx.store.by_category(c)) {
      if (!ctx.window.contains(e->start)) continue;
      const auto k = key(*e);
      if (k && seen.insert(*k).second) firsts.emplace_back(*k, e->start);
    }
    std::vector<Params> out;
    for (std::size_t i = 0; i < firsts.size(); ++i) {
      for (std::size_t j = 0; j < firsts.size(); ++j) {
        if (i != j && firsts[i].second != firsts[j].second) {
          out.push_back({{"a", firsts[i].first}, {"b", firsts[j].first}});
        }
      }
    }
    return out;
  };
}

Builder before_after(Category c, std::function<void(EpisodeFilter&, const std::string&)> narrow) {
  return [=](const Params& p, const CatalogContext&) {
    QuerySpec q;
    q.op = AggregateOp::before_after;
    q.filter.categories = {c};
    narrow(q.filter, p.at("a"));
    EpisodeFilter other;
    other.categories = {c};
    narrow(other, p.at("b"));
    q.other = std::move(other);
    return q;
  };
}

std::string country_of(const std::string& city) {
  const auto comma = city.rfind(", ");
  return comma == std::string::npos ? city : city.substr(comma + 2);
}

ComplexTemplate make(std::string id, AggregateOp op, std::string question, std::string answer, Bindings bindings,
                     Builder build, std::string answer_no = {}) {
  return {std::move(id), op, std::move(question), std::move(answer), std::move(answer_no), std::move(bindings),
          std::move(build)};
}

}  // namespace

std::vector<ComplexTemplate> default_catalog() {
  using C = Category;
  using O = AggregateOp;
  std::vector<ComplexTemplate> t;

  // count
  t.push_back(make("count.dinner_meal_month", O::count, "How many times did I have {meal} for dinner in {month}?",
                   "You had {meal} for dinner {answer} times in {month}.",
                   from_episodes(C::dinner, Scope::month, attr_key("meal", "meal")),
                   query(O::count, C::dinner, Scope::month, {attr_eq("meal", "meal")})));
  t.push_back(make("count.lunch_meal_year", O::count, "How many times did I have {meal} for lunch in {year}?",
                   "You had {meal} for lunch {answer} times in {year}.",
                   from_episodes(C::lunch, Scope::year, attr_key("meal", "meal")),
                   query(O::count, C::lunch, Scope::year, {attr_eq("meal", "meal")})));
  t.push_back(make("count.breakfast_food_month", O::count, "How many times did I eat {meal} for breakfast in {month}?",
                   "You ate {meal} for breakfast {answer} times in {month}.",
                   from_episodes(C::breakfast, Scope::month, attr_key("meal", "meal")),
                   query(O::count, C::breakfast, Scope::month, {attr_eq("meal", "meal")})));
  t.push_back(make("count.chat_person_month", O::count, "How many times did I talk to {person} in {month}?",
                   "You talked to {person} {answer} times in {month}.",
                   from_episodes(C::chat, Scope::month, person_key()),
                   query(O::count, C::chat, Scope::month, {with_person()})));
  t.push_back(make("count.grocery_store_year", O::count, "How many times did I go grocery shopping at {place} in {year}?",
                   "You went grocery shopping at {place} {answer} times in {year}.",
                   from_episodes(C::grocery, Scope::year, place_key()),
                   query(O::count, C::grocery, Scope::year, {at_location("place")})));
  t.push_back(make("count.grocery_item_year", O::count, "How many times did I buy {item} in {year}?",
                   "You bought {item} {answer} times in {year}.",
                   from_episodes(C::grocery, Scope::year, attr_key("items", "item")),
                   query(O::count, C::grocery, Scope::year, {attr_eq("items", "item")})));
  t.push_back(make("count.exercise_activity_month", O::count, "How many times did I go {activity} in {month}?",
                   "You went {activity} {answer} times in {month}.",
                   from_episodes(C::exercise, Scope::month, attr_key("activity", "activity")),
                   query(O::count, C::exercise, Scope::month, {attr_eq("activity", "activity")})));
  t.push_back(make("count.tv_show_all", O::count, "How many times did I watch {show}?",
                   "You watched {show} {answer} times.",
                   from_episodes(C::watch_tv, Scope::all, attr_key("show", "show")),
                   query(O::count, C::watch_tv, Scope::all, {attr_eq("show", "show")})));
  t.push_back(make("count.bake_year", O::count, "How many times did I bake in {year}?",
                   "You baked {answer} times in {year}.", from_episodes(C::bake, Scope::year, no_key()),
                   query(O::count, C::bake, Scope::year, {})));
  t.push_back(make("count.cook_dish_all", O::count, "How many times did I cook {dish}?",
                   "You cooked {dish} {answer} times.", from_episodes(C::cook, Scope::all, attr_key("dish", "dish")),
                   query(O::count, C::cook, Scope::all, {attr_eq("dish", "dish")})));
  {
    auto build = query(O::count, C::child_medical_care, Scope::year, {attr_eq("care_type", "care_type")});
    t.push_back(make("count.kids_care_year", O::count, "How many times did I take my kids for an {care_type} in {year}?",
                     "You took your kids {answer} times to {provider} in {year}.",
                     [](const CatalogContext& ctx) {
                       auto out = from_episodes(C::child_medical_care, Scope::year, attr_key("care_type", "care_type"))(ctx);
                       for (auto& p : out) p["provider"] = ctx.vocabulary.provider_for(p.at("care_type"));
                       return out;
                     },
                     build));
  }
  t.push_back(make("count.trips_year", O::count, "How many trips did I take in {year}?",
                   "You took {answer} trips in {year}.", from_episodes(C::travel, Scope::year, no_key()),
                   query(O::count, C::travel, Scope::year, {})));
  t.push_back(make("count.trips_city", O::count, "How many times did I travel to {city}?",
                   "You traveled to {city} {answer} times.", from_episodes(C::travel, Scope::all, city_key()),
                   query(O::count, C::travel, Scope::all, {at_location("city")})));
  t.push_back(make("count.dates_year", O::count, "How many dates did I go on in {year}?",
                   "You went on {answer} dates in {year}.", from_episodes(C::dating, Scope::year, no_key()),
                   query(O::count, C::dating, Scope::year, {})));
  t.push_back(make("count.pet_care_all", O::count, "How many times did I take {pet} for {care}?",
                   "You took {pet} for {care} {answer} times.",
                   from_episodes(C::pet_care, Scope::all, both(attr_key("pet", "pet"), attr_key("care", "care"))),
                   query(O::count, C::pet_care, Scope::all, {attr_eq("pet", "pet"), attr_eq("care", "care")})));
  t.push_back(make("count.hobby_month", O::count, "How many times did I do {hobby} in {month}?",
                   "You did {hobby} {answer} times in {month}.",
                   from_episodes(C::hobbies, Scope::month, attr_key("hobby", "hobby")),
                   query(O::count, C::hobbies, Scope::month, {attr_eq("hobby", "hobby")})));
  t.push_back(make("count.dinner_person_year", O::count, "How many times did I have dinner with {person} in {year}?",
                   "You had dinner with {person} {answer} times in {year}.",
                   from_episodes(C::dinner, Scope::year, person_key()),
                   query(O::count, C::dinner, Scope::year, {with_person()})));
  t.push_back(make("count.dining_city", O::count, "How many times did I eat out while in {city}?",
                   "You ate out {answer} times in {city}.", from_episodes(C::dining, Scope::all, city_key()),
                   query(O::count, C::dining, Scope::all, {at_location("city")})));

  // average
  t.push_back(make("average.read_material_day_month", O::average,
                   "On average, how many minutes did I spend reading {material} each day in {month}?",
                   "On average, you spent {answer} minutes reading {material} each day.",
                   from_episodes(C::read, Scope::month, attr_key("material", "material")),
                   query(O::average, C::read, Scope::month, {attr_eq("material", "material")}, "minutes", "minutes",
                         GroupBy::none, AverageMode::per_day)));
  t.push_back(make("average.social_day_year", O::average,
                   "On average, how many minutes a day did I spend on social media in {year}?",
                   "On average, you spent {answer} minutes a day on social media.",
                   from_episodes(C::social_media, Scope::year, no_key()),
                   query(O::average, C::social_media, Scope::year, {}, "minutes", "minutes", GroupBy::none,
                         AverageMode::per_day)));
  t.push_back(make("average.chat_person_year", O::average, "How long did I usually talk to {person} in {year}?",
                   "On average, you talked to {person} for {answer} minutes.",
                   from_episodes(C::chat, Scope::year, person_key()),
                   query(O::average, C::chat, Scope::year, {with_person()}, "minutes", "minutes")));
  t.push_back(make("average.exercise_activity_all", O::average,
                   "On average, how long did I spend {activity} each time?",
                   "On average, you spent {answer} minutes {activity} each time.",
                   from_episodes(C::exercise, Scope::all, attr_key("activity", "activity")),
                   query(O::average, C::exercise, Scope::all, {attr_eq("activity", "activity")}, "minutes",
                         "minutes")));
  t.push_back(make("average.tv_day_year", O::average, "On average, how many minutes a day did I watch TV in {year}?",
                   "On average, you watched TV for {answer} minutes a day.",
                   from_episodes(C::watch_tv, Scope::year, no_key()),
                   query(O::average, C::watch_tv, Scope::year, {}, "minutes", "minutes", GroupBy::none,
                         AverageMode::per_day)));
  t.push_back(make("average.hobby_all", O::average, "How long did I usually spend on {hobby}?",
                   "On average, you spent {answer} minutes on {hobby}.",
                   from_episodes(C::hobbies, Scope::all, attr_key("hobby", "hobby")),
                   query(O::average, C::hobbies, Scope::all, {attr_eq("hobby", "hobby")}, "minutes", "minutes")));
  t.push_back(make("average.chat_day_year", O::average, "On average, how many minutes did I chat each day in {year}?",
                   "On average, you chatted for {answer} minutes each day.",
                   from_episodes(C::chat, Scope::year, no_key()),
                   query(O::average, C::chat, Scope::year, {}, "minutes", "minutes", GroupBy::none,
                         AverageMode::per_day)));

  // argmax
  t.push_back(make("argmax.item_year", O::argmax, "In what year did I buy {item} the most?",
                   "You bought {item} the most in {answer}.",
                   from_episodes(C::grocery, Scope::all, attr_key("items", "item")),
                   query(O::argmax, C::grocery, Scope::all, {attr_eq("items", "item")}, {}, {}, GroupBy::year)));
  t.push_back(make("argmax.dinner_meal_month", O::argmax, "In which month of {year} did I have {meal} for dinner the most?",
                   "You had {meal} for dinner the most in {answer}.",
                   from_episodes(C::dinner, Scope::year, attr_key("meal", "meal")),
                   query(O::argmax, C::dinner, Scope::year, {attr_eq("meal", "meal")}, {}, {}, GroupBy::month)));
  t.push_back(make("argmax.travel_year", O::argmax, "In what year did I travel the most?",
                   "You traveled the most in {answer}.", from_episodes(C::travel, Scope::all, no_key()),
                   query(O::argmax, C::travel, Scope::all, {}, {}, {}, GroupBy::year)));
  t.push_back(make("argmax.exercise_month", O::argmax, "In which month of {year} did I exercise the most?",
                   "You exercised the most in {answer}.", from_episodes(C::exercise, Scope::year, no_key()),
                   query(O::argmax, C::exercise, Scope::year, {}, {}, {},
                         GroupBy::month)));
  t.push_back(make("argmax.chat_person_year", O::argmax, "In what year did I talk to {person} the most?",
                   "You talked to {person} the most in {answer}.", from_episodes(C::chat, Scope::all, person_key()),
                   query(O::argmax, C::chat, Scope::all, {with_person()}, {}, {}, GroupBy::year)));
  t.push_back(make("argmax.bake_month", O::argmax, "In which month of {year} did I bake the most?",
                   "You baked the most in {answer}.", from_episodes(C::bake, Scope::year, no_key()),
                   query(O::argmax, C::bake, Scope::year, {}, {}, {}, GroupBy::month)));
  t.push_back(make("argmax.show_year", O::argmax, "In what year did I watch {show} the most?",
                   "You watched {show} the most in {answer}.",
                   from_episodes(C::watch_tv, Scope::all, attr_key("show", "show")),
                   query(O::argmax, C::watch_tv, Scope::all, {attr_eq("show", "show")}, {}, {}, GroupBy::year)));
  t.push_back(make("argmax.dates_month", O::argmax, "In which month of {year} did I go on the most dates?",
                   "You went on the most dates in {answer}.", from_episodes(C::dating, Scope::year, no_key()),
                   query(O::argmax, C::dating, Scope::year, {}, {}, {}, GroupBy::month)));

  // list
  t.push_back(make("list.places_city_person", O::list, "Which places in {city} did I visit with {person}?",
                   "You visited {answer}.", from_episodes(C::places_visited, Scope::all, both(city_key(), person_key())),
                   query(O::list, C::places_visited, Scope::all, {at_location("city"), with_person()}, "place")));
  t.push_back(make("list.places_city", O::list, "Which places did I visit in {city}?", "You visited {answer}.",
                   from_episodes(C::places_visited, Scope::all, city_key()),
                   query(O::list, C::places_visited, Scope::all, {at_location("city")}, "place")));
  t.push_back(make("list.dinner_person_month", O::list, "What did I eat for dinner with {person} in {month}?",
                   "You had {answer}.", from_episodes(C::dinner, Scope::month, person_key()),
                   query(O::list, C::dinner, Scope::month, {with_person()}, "meal")));
  t.push_back(make("list.trip_cities_year", O::list, "Which cities did I travel to in {year}?",
                   "You traveled to {answer}.", from_episodes(C::travel, Scope::year, no_key()),
                   query(O::list, C::travel, Scope::year, {}, "city")));
  t.push_back(make("list.grocery_store_month", O::list, "What did I buy at {place} in {month}?",
                   "You bought {answer}.", from_episodes(C::grocery, Scope::month, place_key()),
                   query(O::list, C::grocery, Scope::month, {at_location("place")}, "items")));
  t.push_back(make("list.chat_people_month", O::list, "Who did I talk to in {month}?", "You talked to {answer}.",
                   from_episodes(C::chat, Scope::month, no_key()),
                   query(O::list, C::chat, Scope::month, {}, "participants")));
  t.push_back(make("list.shows_month", O::list, "What shows did I watch in {month}?", "You watched {answer}.",
                   from_episodes(C::watch_tv, Scope::month, no_key()),
                   query(O::list, C::watch_tv, Scope::month, {}, "show")));
  t.push_back(make("list.restaurants_city", O::list, "Which restaurants did I eat at in {city}?",
                   "You ate at {answer}.", from_episodes(C::dining, Scope::all, city_key()),
                   query(O::list, C::dining, Scope::all, {at_location("city")}, "place")));

  // first / last
  t.push_back(make("first.dinner_meal", O::first, "When was the first time I had {meal} for dinner?",
                   "The first time was on {answer}.", from_episodes(C::dinner, Scope::all, attr_key("meal", "meal")),
                   query(O::first, C::dinner, Scope::all, {attr_eq("meal", "meal")})));
  t.push_back(make("last.trip_city", O::last, "When was the last time I traveled to {city}?",
                   "Your last trip there started on {answer}.", from_episodes(C::travel, Scope::all, city_key()),
                   query(O::last, C::travel, Scope::all, {at_location("city")})));
  t.push_back(make("first.bake_dish", O::first, "When did I first bake {dish}?", "You first baked it on {answer}.",
                   from_episodes(C::bake, Scope::all, attr_key("dish", "dish")),
                   query(O::first, C::bake, Scope::all, {attr_eq("dish", "dish")})));
  t.push_back(make("last.pet_care", O::last, "When did I last take {pet} for {care}?",
                   "The last time was on {answer}.",
                   from_episodes(C::pet_care, Scope::all, both(attr_key("pet", "pet"), attr_key("care", "care"))),
                   query(O::last, C::pet_care, Scope::all, {attr_eq("pet", "pet"), attr_eq("care", "care")})));
  t.push_back(make("last.date_person", O::last, "When was the last time I went on a date with {person}?",
                   "The last time was on {answer}.", from_episodes(C::dating, Scope::all, person_key()),
                   query(O::last, C::dating, Scope::all, {with_person()})));
  t.push_back(make("first.exercise_year", O::first, "When was the first time I went {activity} in {year}?",
                   "The first time was on {answer}.",
                   from_episodes(C::exercise, Scope::year, attr_key("activity", "activity")),
                   query(O::first, C::exercise, Scope::year, {attr_eq("activity", "activity")})));
  t.push_back(make("last.personal_care", O::last, "When did I last have an {care_type}?",
                   "Your last {care_type} was on {answer}.",
                   from_episodes(C::personal_medical_care, Scope::all, attr_key("care_type", "care_type")),
                   query(O::last, C::personal_medical_care, Scope::all, {attr_eq("care_type", "care_type")})));

  // before / after
  t.push_back(make("before_after.trip_country", O::before_after, "Did I go to {a} before {b}?",
                   "Yes, you went to {a} first.",
                   ordered_pairs(C::travel,
                                 [](const Episode& e) -> std::optional<std::string> {
                                   if (!e.location) return std::nullopt;
                                   return country_of(e.location->city);
                                 }),
                   before_after(C::travel, [](EpisodeFilter& f, const std::string& v) { f.location = v; }),
                   "No, you went to {b} first."));
  t.push_back(make("before_after.bake_dish", O::before_after, "Did I bake {a} before I ever baked {b}?",
                   "Yes, you baked {a} first.",
                   ordered_pairs(C::bake, [](const Episode& e) -> std::optional<std::string> { return attr_text(e, "dish"); }),
                   before_after(C::bake,
                                [](EpisodeFilter& f, const std::string& v) {
                                  f.attributes.push_back({"dish", AttributeFilter::Op::equals, v});
                                }),
                   "No, you baked {b} first."));
  t.push_back(make("before_after.place", O::before_after, "Did I visit {a} before {b}?", "Yes, you saw {a} first.",
                   ordered_pairs(C::places_visited,
                                 [](const Episode& e) -> std::optional<std::string> {
                                   if (!e.location) return std::nullopt;
                                   return e.location->place;
                                 }),
                   before_after(C::places_visited, [](EpisodeFilter& f, const std::string& v) { f.location = v; }),
                   "No, you saw {b} first."));
  return t;
}

std::vector<QAPair> gen_complex_qa(const CatalogContext& ctx, const std::vector<ComplexTemplate>& catalog, Rng& rng,
                                   std::size_t per_template, const std::string& id_prefix) {
  if (catalog.empty()) throw ConfigError("complex question catalog is empty");
  if (!ctx.store.frozen()) throw DataError("episode store is not frozen");
  std::vector<QAPair> out;
  for (const auto& tmpl : catalog) {
    auto candidates = tmpl.bindings(ctx);
    rng.shuffle(candidates);
    std::size_t made = 0;
    std::set<std::string> questions;
    for (const auto& params : candidates) {
      if (made >= per_template) break;
      const QuerySpec spec = tmpl.build(params, ctx);
      QueryResult r;
      try {
        r = eval_query(ctx.store, spec);
      } catch (const QueryError&) {
        continue;
      }
      if (spec.op != AggregateOp::count && r.evidence.empty()) continue;
      QAPair qa;
      qa.question = fill(tmpl.question, params);
      if (!questions.insert(qa.question).second) continue;
      qa.kind = kind_for(tmpl.op);
      qa.answer_text = render_answer(qa.kind, r.answer, tmpl.answer, params, tmpl.answer_no);
      qa.answer = std::move(r.answer);
      qa.evidence = std::move(r.evidence);
      qa.scope = spec.filter.categories;
      qa.query = spec;
      qa.template_id = tmpl.id;
      out.push_back(std::move(qa));
      ++made;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "c%04zu", i);
    out[i].id = id_prefix + buf;
  }
  return out;
}

}  // namespace lifelog
