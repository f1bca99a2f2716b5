#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lifelog/category.hpp"
#include "lifelog/date.hpp"
#include "lifelog/episode.hpp"
#include "lifelog/query.hpp"
#include "lifelog/store.hpp"

namespace lifelog {

class Rng;
struct Vocabulary;

enum class QuestionKind {
  what,
  where,
  when,
  who,
  duration,
  count,
  average,
  argmax,
  list,
  first,
  last,
  before_after,
};

std::string_view kind_name(QuestionKind k);
std::optional<QuestionKind> parse_kind(std::string_view s);
bool is_atomic(QuestionKind k);
QuestionKind kind_for(AggregateOp op);

struct QAPair {
  std::string id;
  std::string lifelog;
  std::string question;
  QuestionKind kind = QuestionKind::what;
  AnswerValue answer;
  std::string answer_text;
  std::vector<std::string> evidence;
  std::vector<Category> scope;
  std::optional<QuerySpec> query;  // complex questions only
  std::string template_id;
};

using Params = std::map<std::string, std::string>;

// Fills {name} placeholders from `params`; unknown names are left as is.
std::string fill(std::string_view pattern, const Params& params);
// "A", "A and B", "A, B and C"
std::string natural_join(const std::vector<std::string>& items);

// Atomic what/where/when/who/duration questions answerable from the
// episode alone. Kinds whose slot the episode does not fill are skipped;
// `when` is only asked where the date is part of the text.
std::vector<QAPair> gen_atomic_qa(const Episode& e, Rng& rng);

// Answer sentence for a kind. `pattern` holds {answer} plus any template
// parameters; an empty pattern selects the kind's default sentence.
// before_after uses `pattern` when true and `pattern_no` when false.
// Throws DataError when the value's type does not fit the kind.
std::string render_answer(QuestionKind kind, const AnswerValue& value, std::string_view pattern = {},
                          const Params& params = {}, std::string_view pattern_no = {});

// What complex-question templates may draw bindings from.
struct CatalogContext {
  const EpisodeStore& store;
  DateRange window;  // generation window of the lifelog
  const Vocabulary& vocabulary;
};

struct ComplexTemplate {
  std::string id;
  AggregateOp op = AggregateOp::count;
  std::string question;   // with {param} placeholders
  std::string answer;     // with {answer} and {param} placeholders
  std::string answer_no;  // before_after, false case
  // Candidate parameter bindings found in the store, deterministic order.
  std::function<std::vector<Params>(const CatalogContext&)> bindings;
  std::function<QuerySpec(const Params&, const CatalogContext&)> build;
};

std::vector<ComplexTemplate> default_catalog();

// Instantiates catalog templates against the store: for each template, up
// to `per_template` bindings are drawn; a binding is kept only if its query
// evaluates (non-count ops need a non-empty domain). Ids are
// "<prefix>c<nnnn>".
std::vector<QAPair> gen_complex_qa(const CatalogContext& ctx, const std::vector<ComplexTemplate>& catalog, Rng& rng,
                                   std::size_t per_template = 1, const std::string& id_prefix = {});

}  // namespace lifelog
