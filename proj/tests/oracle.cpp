#include "oracle.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <tuple>

namespace oracle {

using namespace lifelog;

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool has_sub(const std::string& hay, const std::string& needle) { return lower(hay).find(lower(needle)) != std::string::npos; }

std::string plain(const AttrValue& v) {
  if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (auto d = std::get_if<double>(&v)) {
    const long long tenths = std::llround(*d * 10);
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
  }
  if (auto s = std::get_if<std::string>(&v)) return *s;
  std::string out;
  for (const auto& item : std::get<std::vector<std::string>>(v)) out += (out.empty() ? "" : ", ") + item;
  return out;
}

bool attr_ok(const Episode& e, const AttributeFilter& f) {
  auto it = e.attributes.find(f.name);
  if (it == e.attributes.end()) return false;
  std::vector<std::string> candidates;
  if (auto l = std::get_if<std::vector<std::string>>(&it->second)) {
    candidates = *l;
  } else {
    candidates.push_back(plain(it->second));
  }
  for (const auto& c : candidates) {
    if (f.op == AttributeFilter::Op::equals ? c == f.value : has_sub(c, f.value)) return true;
  }
  return false;
}

int meal_rank(Category c) {
  switch (c) {
    case Category::breakfast: return 0;
    case Category::lunch: return 1;
    case Category::dinner: return 2;
    default: return 3;
  }
}

bool before(const Episode* a, const Episode* b) {
  return std::make_tuple(a->start.serial(), meal_rank(a->category), std::string(category_name(a->category)), a->id) <
         std::make_tuple(b->start.serial(), meal_rank(b->category), std::string(category_name(b->category)), b->id);
}

std::vector<std::string> values_of(const Episode& e, const std::string& field) {
  if (field == "participants") return e.participants;
  if (field == "place" || field == "city") {
    if (!e.location) return {};
    const std::string& v = field == "place" ? e.location->place : e.location->city;
    return v.empty() ? std::vector<std::string>{} : std::vector<std::string>{v};
  }
  auto it = e.attributes.find(field);
  if (it == e.attributes.end()) return {};
  if (auto l = std::get_if<std::vector<std::string>>(&it->second)) return *l;
  return {plain(it->second)};
}

const char* kMonths[] = {"January", "February", "March",     "April",   "May",      "June",
                         "July",    "August",   "September", "October", "November", "December"};

}  // namespace

bool matches(const Episode& e, const EpisodeFilter& f) {
  if (!f.categories.empty() && std::count(f.categories.begin(), f.categories.end(), e.category) == 0) return false;
  if (f.window && (e.start < f.window->first || f.window->last < e.start)) return false;
  for (const auto& p : f.participants) {
    if (std::count(e.participants.begin(), e.participants.end(), p) == 0) return false;
  }
  if (f.location) {
    if (!e.location) return false;
    if (!has_sub(e.location->place, *f.location) && !has_sub(e.location->city, *f.location)) return false;
  }
  for (const auto& a : f.attributes) {
    if (!attr_ok(e, a)) return false;
  }
  return true;
}

std::vector<const Episode*> scan(std::span<const Episode> all, const EpisodeFilter& f) {
  std::vector<const Episode*> hits;
  for (const auto& e : all) {
    if (oracle::matches(e, f)) hits.push_back(&e);
  }
  std::sort(hits.begin(), hits.end(), before);
  return hits;
}

Answer evaluate(std::span<const Episode> all, const QuerySpec& q) {
  const auto hits = scan(all, q.filter);
  Answer a;
  auto every = [&] {
    for (const auto* e : hits) a.evidence.insert(e->id);
  };
  switch (q.op) {
    case AggregateOp::count:
      a.value = Number{static_cast<std::int64_t>(hits.size()), 0, q.unit};
      every();
      break;
    case AggregateOp::average: {
      if (hits.empty()) throw EmptyDomain("average");
      long long tenths = 0;
      for (const auto* e : hits) {
        const AttrValue& v = e->attributes.at(q.attribute);
        if (auto i = std::get_if<std::int64_t>(&v)) {
          tenths += *i * 10;
        } else {
          tenths += std::llround(std::get<double>(v) * 10);
        }
      }
      const long long den =
          q.average_mode == AverageMode::per_day ? (q.filter.window->last.serial() - q.filter.window->first.serial() + 1)
                                                 : static_cast<long long>(hits.size());
      // hundredths = round_half_up(tenths * 10 / den)
      const long long hundredths = (tenths * 10 * 2 + den) / (2 * den);
      a.value = Number{hundredths, 2, q.unit};
      every();
      break;
    }
    case AggregateOp::argmax: {
      if (hits.empty()) throw EmptyDomain("argmax");
      std::map<std::pair<int, unsigned>, int> counts;
      for (const auto* e : hits) {
        ++counts[{e->start.year(), q.group_by == GroupBy::month ? e->start.month() : 0u}];
      }
      std::pair<int, unsigned> best{};
      int best_n = -1;
      for (const auto& [k, n] : counts) {
        if (n > best_n) {
          best = k;
          best_n = n;
        }
      }
      a.value = q.group_by == GroupBy::month ? std::string(kMonths[best.second - 1]) + " " + std::to_string(best.first)
                                             : std::to_string(best.first);
      every();
      break;
    }
    case AggregateOp::list: {
      std::vector<std::string> out;
      for (const auto* e : hits) {
        for (const auto& v : values_of(*e, q.attribute)) {
          if (std::find(out.begin(), out.end(), v) == out.end()) {
            out.push_back(v);
            a.evidence.insert(e->id);
          }
        }
      }
      a.value = out;
      break;
    }
    case AggregateOp::first:
    case AggregateOp::last: {
      if (hits.empty()) throw EmptyDomain("first/last");
      const Episode* e = q.op == AggregateOp::first ? hits.front() : hits.back();
      a.value = e->start;
      a.evidence.insert(e->id);
      break;
    }
    case AggregateOp::before_after: {
      const auto others = scan(all, *q.other);
      if (hits.empty() || others.empty()) throw EmptyDomain("before_after");
      a.value = hits.front()->start < others.front()->start;
      a.evidence = {hits.front()->id, others.front()->id};
      break;
    }
  }
  return a;
}

bool same_value(const AnswerValue& a, const AnswerValue& b) {
  if (a.index() != b.index()) return false;
  if (auto x = std::get_if<Number>(&a)) {
    const auto& y = std::get<Number>(b);
    // Compare at a common scale.
    long long xs = x->scaled;
    long long ys = y.scaled;
    for (int i = x->decimals; i < 4; ++i) xs *= 10;
    for (int i = y.decimals; i < 4; ++i) ys *= 10;
    return xs == ys && x->unit == y.unit;
  }
  return a == b;
}

std::string show(const AnswerValue& v) { return std::string(answer_type_name(v)) + ":" + answer_surface(v); }

}  // namespace oracle
