#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lifelog/date.hpp"
#include "lifelog/store.hpp"

namespace lifelog {

// Exact decimal: value = scaled / 10^decimals.
struct Number {
  std::int64_t scaled = 0;
  int decimals = 0;
  std::string unit;

  static Number integer(std::int64_t v, std::string unit = {});
  // Rounds num/den half-up to two decimals, then drops trailing zeros.
  static Number ratio(std::int64_t num, std::int64_t den, std::string unit = {});
  static Number from_double(double v, int decimals, std::string unit = {});

  double value() const;
  // Plain decimal, no exponent: "84.05", "32", "0".
  std::string text() const;

  friend bool operator==(const Number&, const Number&) = default;
};

using AnswerValue = std::variant<Number, Date, std::string, std::vector<std::string>, bool>;

std::string_view answer_type_name(const AnswerValue& v);
// Surface form: number text, YYYY/MM/DD, the string, items joined by ", ",
// or yes/no.
std::string answer_surface(const AnswerValue& v);

enum class AggregateOp { count, average, argmax, list, first, last, before_after };
enum class GroupBy { none, year, month };
enum class AverageMode { per_episode, per_day };

std::string_view op_name(AggregateOp op);
std::optional<AggregateOp> parse_op(std::string_view s);
std::string_view group_by_name(GroupBy g);
std::optional<GroupBy> parse_group_by(std::string_view s);
std::string_view average_mode_name(AverageMode m);
std::optional<AverageMode> parse_average_mode(std::string_view s);

// Logical query: a filter plus an aggregate.
//  count            number of matches
//  average          mean of a numeric attribute per matching episode, or
//                   its sum divided by the calendar days of the window
//  argmax           group key (year or YYYY/MM) with most matches; ties
//                   resolve to the earliest key
//  list             distinct values of a field, in order of first occurrence
//  first / last     date of the earliest / latest match
//  before_after     whether the first match of `filter` precedes the first
//                   match of `other`
struct QuerySpec {
  EpisodeFilter filter;
  AggregateOp op = AggregateOp::count;
  std::string attribute;  // average, list
  std::string unit;       // carried onto numeric answers
  GroupBy group_by = GroupBy::none;
  AverageMode average_mode = AverageMode::per_episode;
  std::optional<EpisodeFilter> other;  // before_after

  friend bool operator==(const QuerySpec&, const QuerySpec&) = default;
};

// Throws QueryError(malformed) when the op's requirements are not met.
void check_query(const QuerySpec& spec);

struct QueryResult {
  AnswerValue answer;
  // Episodes the answer is derived from, chronological. count/average/argmax:
  // every match. list: the first episode carrying each listed value.
  // first/last: the single deciding episode. before_after: the two firsts.
  std::vector<std::string> evidence;
};

// Evaluates over the store's indexed query. Throws QueryError on a type
// mismatch (average over non-numeric values) or an empty domain
// (average/argmax/first/last/before_after with no matches).
QueryResult eval_query(const EpisodeStore& store, const QuerySpec& spec);

// Same semantics over an arbitrary episode set, e.g. a retriever's output.
QueryResult eval_query_over(std::span<const Episode* const> episodes, const QuerySpec& spec);

}  // namespace lifelog
