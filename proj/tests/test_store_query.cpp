#include <set>
#include <sstream>

#include "doctest.h"
#include "lifelog/error.hpp"
#include "lifelog/query.hpp"
#include "lifelog/rng.hpp"
#include "lifelog/store.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace lifelog;
using testing::day;

namespace {

// A ten-line lifelog excerpt encoded by hand in the JSONL schema.
const char* kSnippet = R"({"id":"s01","category":"lunch","start":"2010-01-09","end":"2010-01-09","location":null,"participants":[],"attributes":{"meal":"a sandwich"},"parent_id":null,"template_id":"lunch.1","text":"I had a sandwich for lunch."}
{"id":"s02","category":"breakfast","start":"2010-01-09","end":"2010-01-09","location":null,"participants":[],"attributes":{"meal":"oatmeal"},"parent_id":null,"template_id":"breakfast.0","text":"I had oatmeal for breakfast."}
{"id":"s03","category":"dinner","start":"2010-01-09","end":"2010-01-09","location":null,"participants":["Kayden","Carter"],"attributes":{"meal":"chinese food"},"parent_id":null,"template_id":"dinner.3","text":"I had chinese food for dinner with Kayden, Carter."}
{"id":"s04","category":"social_media","start":"2010-01-10","end":"2010-01-10","location":null,"participants":[],"attributes":{"minutes":35},"parent_id":null,"template_id":"social_media.0","text":"I spent 35 minutes on social media today."}
{"id":"s05","category":"exercise","start":"2010-01-10","end":"2010-01-10","location":null,"participants":[],"attributes":{"activity":"running","minutes":40},"parent_id":null,"template_id":"exercise.1","text":"I did some running for 40 minutes."}
{"id":"s06","category":"lunch","start":"2010-01-11","end":"2010-01-11","location":null,"participants":[],"attributes":{"meal":"tacos"},"parent_id":null,"template_id":"lunch.1","text":"I had tacos for lunch."}
{"id":"s07","category":"breakfast","start":"2010-01-11","end":"2010-01-11","location":null,"participants":[],"attributes":{"meal":"pancakes"},"parent_id":null,"template_id":"breakfast.0","text":"I had pancakes for breakfast."}
{"id":"s08","category":"chat","start":"2010-01-12","end":"2010-01-12","location":null,"participants":["Nora"],"attributes":{"minutes":47,"time_of_day":"in the evening"},"parent_id":null,"template_id":"chat.0","text":"I talked to Nora for 47 minutes in the evening."}
{"id":"s09","category":"dinner","start":"2010-01-12","end":"2010-01-12","location":null,"participants":[],"attributes":{"meal":"pizza"},"parent_id":null,"template_id":"dinner.1","text":"I had pizza for dinner."}
{"id":"s10","category":"social_media","start":"2010-01-12","end":"2010-01-12","location":null,"participants":[],"attributes":{"minutes":20},"parent_id":null,"template_id":"social_media.2","text":"I was on social media for 20 minutes."}
)";

EpisodeStore snippet() {
  std::istringstream in(kSnippet);
  return EpisodeStore::read_jsonl(in, "snippet");
}

// Five taco dinners in September 2019 plus distractors.
EpisodeStore taco_store() {
  EpisodeStore s;
  int n = 0;
  auto add = [&](Category c, Date d, std::string meal) {
    s.insert(testing::episode("t" + std::to_string(n++), c, d, {{"meal", std::move(meal)}}));
  };
  for (unsigned d : {2u, 7u, 13u, 21u, 30u}) add(Category::dinner, day(2019, 9, d), "tacos");
  add(Category::dinner, day(2019, 8, 31), "tacos");
  add(Category::dinner, day(2019, 10, 1), "tacos");
  add(Category::lunch, day(2019, 9, 4), "tacos");
  add(Category::dinner, day(2019, 9, 5), "pizza");
  s.freeze();
  return s;
}

QuerySpec count_of(EpisodeFilter f) {
  QuerySpec q;
  q.op = AggregateOp::count;
  q.filter = std::move(f);
  return q;
}

}  // namespace

TEST_CASE("the hand-encoded excerpt loads as ten episodes") {
  const EpisodeStore s = snippet();
  CHECK(s.size() == 10);
  std::set<Category> cats;
  for (const auto& e : s.episodes()) cats.insert(e.category);
  CHECK(cats == std::set<Category>{Category::lunch, Category::breakfast, Category::dinner, Category::social_media,
                                   Category::exercise, Category::chat});
  // Chronological with meals first within a day.
  CHECK(s.episodes()[0].id == "s02");
  CHECK(s.episodes()[1].id == "s01");
  CHECK(s.episodes()[2].id == "s03");
  CHECK(s.find("s08")->participants == std::vector<std::string>{"Nora"});
  CHECK(s.by_participant("Kayden").size() == 1);
  CHECK(s.on_date(day(2010, 1, 12)).size() == 3);
}

TEST_CASE("store basics") {
  EpisodeStore s;
  CHECK(s.query({}).empty());
  s.insert(testing::episode("a", Category::lunch, day(2020, 1, 1), {{"meal", std::string("x")}}));
  CHECK_THROWS_AS(s.insert(testing::episode("a", Category::lunch, day(2020, 1, 2))), DataError);
  Episode bad = testing::episode("b", Category::lunch, day(2020, 1, 2));
  bad.end = day(2020, 1, 1);
  CHECK_THROWS_AS(s.insert(bad), DataError);
  s.freeze();
  CHECK(s.find("a")->start == day(2020, 1, 1));
  CHECK(s.find("zz") == nullptr);
  CHECK_THROWS_AS(s.insert(testing::episode("c", Category::lunch, day(2020, 1, 2))), DataError);
  EpisodeFilter f;
  f.window = DateRange{day(2020, 2, 1), day(2020, 1, 1)};
  CHECK_THROWS_AS(s.query(f), QueryError);
}

TEST_CASE("jsonl round trip is byte-identical") {
  const Lifelog log = generate_one(testing::config(12, 2), default_resources(), 0);
  std::ostringstream first;
  log.store.write_jsonl(first);
  std::istringstream in(first.str());
  const EpisodeStore back = EpisodeStore::read_jsonl(in, "mem");
  std::ostringstream second;
  back.write_jsonl(second);
  CHECK(first.str() == second.str());
  CHECK(back.size() == log.store.size());
}

TEST_CASE("a truncated last line is a parse error naming the line") {
  std::string text = kSnippet;
  text.resize(text.size() - 40);
  std::istringstream in(text);
  try {
    EpisodeStore::read_jsonl(in, "cut.jsonl");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 10);
    CHECK(std::string(e.what()).find("cut.jsonl:10") != std::string::npos);
  }
  std::istringstream dup(std::string(kSnippet) + std::string(kSnippet).substr(0, std::string(kSnippet).find('\n') + 1));
  CHECK_THROWS_AS(EpisodeStore::read_jsonl(dup, "dup"), ParseError);
  std::istringstream field(R"({"id":"x","category":"brunch","start":"2010-01-09","end":"2010-01-09"})");
  CHECK_THROWS_AS(EpisodeStore::read_jsonl(field, "f"), ParseError);
  CHECK_THROWS_AS(EpisodeStore::load_jsonl("/nonexistent/x.jsonl"), IoError);
}

TEST_CASE("the taco scenario counts five dinners") {
  const EpisodeStore s = taco_store();
  EpisodeFilter f;
  f.categories = {Category::dinner};
  f.window = month_range(2019, 9);
  f.attributes = {{"meal", AttributeFilter::Op::contains, "TACOS"}};
  const auto hits = s.query(f);
  CHECK(hits.size() == 5);
  const QueryResult r = eval_query(s, count_of(f));
  CHECK(std::get<Number>(r.answer).scaled == 5);
  CHECK(r.evidence.size() == 5);
  f.attributes = {{"meal", AttributeFilter::Op::equals, "burritos"}};
  const QueryResult none = eval_query(s, count_of(f));
  CHECK(std::get<Number>(none.answer).scaled == 0);
  CHECK(none.evidence.empty());
}

TEST_CASE("number rounding and text") {
  CHECK(Number::ratio(8405, 100).text() == "84.05");
  CHECK(Number::ratio(1, 3).text() == "0.33");
  CHECK(Number::ratio(2, 3).text() == "0.67");
  CHECK(Number::ratio(1, 8).text() == "0.13");  // half-up
  CHECK(Number::ratio(10, 5).text() == "2");
  CHECK(Number::ratio(5, 2).text() == "2.5");
  CHECK_THROWS_AS(Number::ratio(1, 0), QueryError);
}

TEST_CASE("query semantics on the excerpt") {
  const EpisodeStore s = snippet();
  QuerySpec avg;
  avg.op = AggregateOp::average;
  avg.attribute = "minutes";
  avg.unit = "minutes";
  avg.filter.categories = {Category::social_media};
  CHECK(answer_surface(eval_query(s, avg).answer) == "27.5");
  avg.average_mode = AverageMode::per_day;
  avg.filter.window = DateRange{day(2010, 1, 9), day(2010, 1, 12)};
  CHECK(answer_surface(eval_query(s, avg).answer) == "13.75");

  QuerySpec list;
  list.op = AggregateOp::list;
  list.attribute = "meal";
  list.filter.categories = {Category::dinner};
  const auto lr = eval_query(s, list);
  CHECK(std::get<std::vector<std::string>>(lr.answer) == std::vector<std::string>{"chinese food", "pizza"});

  QuerySpec people = list;
  people.attribute = "participants";
  people.filter.categories = {};
  CHECK(std::get<std::vector<std::string>>(eval_query(s, people).answer) ==
        std::vector<std::string>{"Kayden", "Carter", "Nora"});

  QuerySpec first;
  first.op = AggregateOp::first;
  first.filter.categories = {Category::social_media};
  CHECK(std::get<Date>(eval_query(s, first).answer) == day(2010, 1, 10));
  first.op = AggregateOp::last;
  CHECK(std::get<Date>(eval_query(s, first).answer) == day(2010, 1, 12));

  QuerySpec ba;
  ba.op = AggregateOp::before_after;
  ba.filter.categories = {Category::exercise};
  ba.other = EpisodeFilter{};
  ba.other->categories = {Category::chat};
  const auto br = eval_query(s, ba);
  CHECK(std::get<bool>(br.answer));
  CHECK(br.evidence == std::vector<std::string>{"s05", "s08"});

  QuerySpec arg;
  arg.op = AggregateOp::argmax;
  arg.group_by = GroupBy::month;
  CHECK(std::get<std::string>(eval_query(s, arg).answer) == "January 2010");

  QuerySpec empty_avg = avg;
  empty_avg.filter.categories = {Category::bake};
  CHECK_THROWS_AS(eval_query(s, empty_avg), QueryError);
}

TEST_CASE("malformed queries are rejected") {
  QuerySpec q;
  q.op = AggregateOp::average;
  CHECK_THROWS_AS(check_query(q), QueryError);  // no attribute
  q.attribute = "minutes";
  q.average_mode = AverageMode::per_day;
  CHECK_THROWS_AS(check_query(q), QueryError);  // per-day needs a window
  QuerySpec a;
  a.op = AggregateOp::argmax;
  CHECK_THROWS_AS(check_query(a), QueryError);  // no grouping
  QuerySpec c;
  c.group_by = GroupBy::year;
  CHECK_THROWS_AS(check_query(c), QueryError);
  QuerySpec b;
  b.op = AggregateOp::before_after;
  CHECK_THROWS_AS(check_query(b), QueryError);
}

TEST_CASE("argmax ties go to the earliest group") {
  EpisodeStore s;
  s.insert(testing::episode("a", Category::grocery, day(2006, 3, 1), {{"items", std::vector<std::string>{"facial wash"}}}));
  s.insert(testing::episode("b", Category::grocery, day(2007, 3, 1), {{"items", std::vector<std::string>{"facial wash"}}}));
  s.insert(testing::episode("c", Category::grocery, day(2008, 3, 1), {{"items", std::vector<std::string>{"milk"}}}));
  s.freeze();
  QuerySpec q;
  q.op = AggregateOp::argmax;
  q.group_by = GroupBy::year;
  q.filter.attributes = {{"items", AttributeFilter::Op::equals, "facial wash"}};
  CHECK(std::get<std::string>(eval_query(s, q).answer) == "2006");
}

TEST_CASE("indexed queries agree with a linear scan") {
  Rng rng(77);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Lifelog log = generate_one(testing::config(seed, 3), default_resources(), 0);
    const auto eps = log.store.episodes();
    for (int i = 0; i < 400; ++i) {
      const Episode& pivot = eps[static_cast<std::size_t>(rng.below(eps.size()))];
      EpisodeFilter f;
      if (rng.bernoulli(0.7)) f.categories.push_back(pivot.category);
      if (rng.bernoulli(0.2)) f.categories.push_back(Category::lunch);
      if (rng.bernoulli(0.6)) {
        const int span = static_cast<int>(rng.below(400));
        f.window = DateRange{pivot.start.plus_days(-span), pivot.start.plus_days(static_cast<int>(rng.below(60)))};
      }
      if (!pivot.participants.empty() && rng.bernoulli(0.5)) f.participants.push_back(pivot.participants.front());
      if (pivot.location && rng.bernoulli(0.3)) f.location = pivot.location->city.substr(0, 3);
      if (!pivot.attributes.empty() && rng.bernoulli(0.5)) {
        const auto& [name, value] = *pivot.attributes.begin();
        const bool contains = rng.bernoulli(0.5);
        std::string v = std::holds_alternative<std::vector<std::string>>(value)
                            ? std::get<std::vector<std::string>>(value).front()
                            : to_text(value);
        if (contains) v = v.substr(0, std::max<std::size_t>(1, v.size() / 2));
        f.attributes.push_back({name, contains ? AttributeFilter::Op::contains : AttributeFilter::Op::equals, v});
      }
      const auto indexed = log.store.query(f);
      const auto linear = oracle::scan(eps, f);
      REQUIRE(indexed.size() == linear.size());
      for (std::size_t k = 0; k < indexed.size(); ++k) CHECK(indexed[k]->id == linear[k]->id);
      if (i % 40 == 0) {
        std::size_t disagree = 0;
        for (const auto& e : eps) disagree += matches(e, f) != oracle::matches(e, f) ? 1 : 0;
        CHECK(disagree == 0);
        std::vector<const Episode*> all;
        for (const auto& e : eps) all.push_back(&e);
        const auto over = eval_query_over(all, count_of(f));
        CHECK(std::get<Number>(over.answer).scaled == static_cast<std::int64_t>(linear.size()));
      }
    }
  }
}
