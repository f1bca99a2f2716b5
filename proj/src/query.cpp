#include "lifelog/query.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "lifelog/error.hpp"

namespace lifelog {

namespace {

constexpr std::array<std::string_view, 7> kOpNames = {"count", "average", "argmax", "list",
                                                       "first", "last",    "before_after"};
constexpr std::array<std::string_view, 3> kGroupNames = {"none", "year", "month"};
constexpr std::array<std::string_view, 2> kAverageNames = {"per_episode", "per_day"};

template <typename E, std::size_t N>
std::optional<E> parse_enum(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

std::int64_t pow10(int n) {
  std::int64_t p = 1;
  while (n-- > 0) p *= 10;
  return p;
}

Number trim(Number n) {
  while (n.decimals > 0 && n.scaled % 10 == 0) {
    n.scaled /= 10;
    --n.decimals;
  }
  return n;
}

QueryError empty(const std::string& what) { return QueryError(QueryError::Kind::empty_domain, what); }

// Values of a field as listed by a list query.
std::vector<std::string> field_values(const Episode& e, const std::string& field) {
  if (field == "participants") return e.participants;
  if (field == "place") {
    return e.location && !e.location->place.empty() ? std::vector<std::string>{e.location->place}
                                                    : std::vector<std::string>{};
  }
  if (field == "city") {
    return e.location && !e.location->city.empty() ? std::vector<std::string>{e.location->city}
                                                   : std::vector<std::string>{};
  }
  const auto it = e.attributes.find(field);
  if (it == e.attributes.end()) return {};
  if (const auto* items = std::get_if<std::vector<std::string>>(&it->second)) return *items;
  return {to_text(it->second)};
}

std::string group_key_label(GroupBy g, std::int32_t key) {
  if (g == GroupBy::year) return std::to_string(key);
  return std::string(month_name(static_cast<unsigned>(key % 100))) + " " + std::to_string(key / 100);
}

QueryResult evaluate(const std::vector<const Episode*>& hits, const std::vector<const Episode*>* other_hits,
                     const QuerySpec& spec) {
  QueryResult r;
  auto all_evidence = [&] {
    for (const auto* e : hits) r.evidence.push_back(e->id);
  };
  switch (spec.op) {
    case AggregateOp::count:
      r.answer = Number::integer(static_cast<std::int64_t>(hits.size()), spec.unit);
      all_evidence();
      break;
    case AggregateOp::average: {
      if (hits.empty()) throw empty("average over no episodes");
      // Sum in tenths so integer and one-decimal attributes stay exact.
      std::int64_t tenths = 0;
      for (const auto* e : hits) {
        const auto it = e->attributes.find(spec.attribute);
        if (it == e->attributes.end()) {
          throw QueryError(QueryError::Kind::type_mismatch,
                           "episode " + e->id + " has no attribute '" + spec.attribute + "'");
        }
        if (const auto* i = std::get_if<std::int64_t>(&it->second)) {
          tenths += *i * 10;
        } else if (const auto* d = std::get_if<double>(&it->second)) {
          tenths += std::llround(*d * 10.0);
        } else {
          throw QueryError(QueryError::Kind::type_mismatch, "attribute '" + spec.attribute + "' is not numeric");
        }
      }
      const std::int64_t den =
          spec.average_mode == AverageMode::per_day ? static_cast<std::int64_t>(spec.filter.window->days())
                                                    : static_cast<std::int64_t>(hits.size());
      r.answer = Number::ratio(tenths, den * 10, spec.unit);
      all_evidence();
      break;
    }
    case AggregateOp::argmax: {
      if (hits.empty()) throw empty("argmax over no episodes");
      std::map<std::int32_t, std::size_t> groups;
      for (const auto* e : hits) {
        const std::int32_t key =
            spec.group_by == GroupBy::year ? e->start.year() : e->start.year() * 100 + static_cast<int>(e->start.month());
        ++groups[key];
      }
      auto best = groups.begin();
      for (auto it = groups.begin(); it != groups.end(); ++it) {
        if (it->second > best->second) best = it;
      }
      r.answer = group_key_label(spec.group_by, best->first);
      all_evidence();
      break;
    }
    case AggregateOp::list: {
      std::vector<std::string> values;
      std::set<std::string> seen;
      for (const auto* e : hits) {
        bool contributed = false;
        for (auto& v : field_values(*e, spec.attribute)) {
          if (seen.insert(v).second) {
            values.push_back(std::move(v));
            contributed = true;
          }
        }
        if (contributed) r.evidence.push_back(e->id);
      }
      r.answer = std::move(values);
      break;
    }
    case AggregateOp::first:
    case AggregateOp::last: {
      if (hits.empty()) throw empty(std::string(op_name(spec.op)) + " over no episodes");
      const Episode* e = spec.op == AggregateOp::first ? hits.front() : hits.back();
      r.answer = e->start;
      r.evidence.push_back(e->id);
      break;
    }
    case AggregateOp::before_after: {
      if (hits.empty() || other_hits->empty()) throw empty("before_after needs matches on both sides");
      const Episode* a = hits.front();
      const Episode* b = other_hits->front();
      r.answer = a->start < b->start;
      if (chrono_less(*b, *a)) std::swap(a, b);
      r.evidence.push_back(a->id);
      if (b->id != a->id) r.evidence.push_back(b->id);
      break;
    }
  }
  return r;
}

std::vector<const Episode*> filter_over(std::span<const Episode* const> episodes, const EpisodeFilter& f) {
  if (f.window && !f.window->valid()) {
    throw QueryError(QueryError::Kind::malformed, "query window ends before it starts");
  }
  std::vector<const Episode*> out;
  for (const auto* e : episodes) {
    if (matches(*e, f)) out.push_back(e);
  }
  std::stable_sort(out.begin(), out.end(), [](const Episode* a, const Episode* b) { return chrono_less(*a, *b); });
  return out;
}

}  // namespace

Number Number::integer(std::int64_t v, std::string unit) { return {v, 0, std::move(unit)}; }

Number Number::ratio(std::int64_t num, std::int64_t den, std::string unit) {
  if (den == 0) throw QueryError(QueryError::Kind::empty_domain, "division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const bool neg = num < 0;
  const std::int64_t a = neg ? -num : num;
  // Half-up on the magnitude.
  std::int64_t scaled = (a * 100 * 2 + den) / (den * 2);
  return trim({neg ? -scaled : scaled, 2, std::move(unit)});
}

Number Number::from_double(double v, int decimals, std::string unit) {
  return trim({std::llround(v * static_cast<double>(pow10(decimals))), decimals, std::move(unit)});
}

double Number::value() const { return static_cast<double>(scaled) / static_cast<double>(pow10(decimals)); }

std::string Number::text() const {
  const bool neg = scaled < 0;
  const std::int64_t a = neg ? -scaled : scaled;
  const std::int64_t p = pow10(decimals);
  std::string out = (neg ? "-" : "") + std::to_string(a / p);
  if (decimals > 0) {
    std::string frac = std::to_string(a % p);
    out += "." + std::string(static_cast<std::size_t>(decimals) - frac.size(), '0') + frac;
  }
  return out;
}

std::string_view answer_type_name(const AnswerValue& v) {
  static constexpr std::array<std::string_view, 5> kNames = {"number", "date", "string", "list", "bool"};
  return kNames[v.index()];
}

std::string answer_surface(const AnswerValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Number>) {
          return x.text();
        } else if constexpr (std::is_same_v<T, Date>) {
          return x.slashed();
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "yes" : "no";
        } else {
          std::string out;
          for (std::size_t i = 0; i < x.size(); ++i) out += (i ? ", " : "") + x[i];
          return out;
        }
      },
      v);
}

std::string_view op_name(AggregateOp op) { return kOpNames[static_cast<std::size_t>(op)]; }
std::optional<AggregateOp> parse_op(std::string_view s) { return parse_enum<AggregateOp>(kOpNames, s); }
std::string_view group_by_name(GroupBy g) { return kGroupNames[static_cast<std::size_t>(g)]; }
std::optional<GroupBy> parse_group_by(std::string_view s) { return parse_enum<GroupBy>(kGroupNames, s); }
std::string_view average_mode_name(AverageMode m) { return kAverageNames[static_cast<std::size_t>(m)]; }
std::optional<AverageMode> parse_average_mode(std::string_view s) {
  return parse_enum<AverageMode>(kAverageNames, s);
}

void check_query(const QuerySpec& spec) {
  auto bad = [](const std::string& what) { return QueryError(QueryError::Kind::malformed, what); };
  if ((spec.op == AggregateOp::average || spec.op == AggregateOp::list) && spec.attribute.empty()) {
    throw bad(std::string(op_name(spec.op)) + " needs an attribute");
  }
  if (spec.op == AggregateOp::argmax && spec.group_by == GroupBy::none) throw bad("argmax needs a group_by");
  if (spec.op != AggregateOp::argmax && spec.group_by != GroupBy::none) {
    throw bad("group_by is only valid for argmax");
  }
  if (spec.op == AggregateOp::before_after && !spec.other) throw bad("before_after needs a second filter");
  if (spec.op != AggregateOp::before_after && spec.other) throw bad("only before_after takes a second filter");
  if (spec.op == AggregateOp::average && spec.average_mode == AverageMode::per_day && !spec.filter.window) {
    throw bad("a per-day average needs a window");
  }
  if (spec.filter.window && !spec.filter.window->valid()) throw bad("query window ends before it starts");
  if (spec.other && spec.other->window && !spec.other->window->valid()) {
    throw bad("query window ends before it starts");
  }
}

QueryResult eval_query(const EpisodeStore& store, const QuerySpec& spec) {
  check_query(spec);
  const auto hits = store.query(spec.filter);
  if (spec.op == AggregateOp::before_after) {
    const auto other = store.query(*spec.other);
    return evaluate(hits, &other, spec);
  }
  return evaluate(hits, nullptr, spec);
}

QueryResult eval_query_over(std::span<const Episode* const> episodes, const QuerySpec& spec) {
  check_query(spec);
  const auto hits = filter_over(episodes, spec.filter);
  if (spec.op == AggregateOp::before_after) {
    const auto other = filter_over(episodes, *spec.other);
    return evaluate(hits, &other, spec);
  }
  return evaluate(hits, nullptr, spec);
}

}  // namespace lifelog
