#include <cctype>
#include <algorithm>
#include <set>

#include "doctest.h"
#include "lifelog/error.hpp"
#include "lifelog/qa.hpp"
#include "lifelog/rng.hpp"
#include "lifelog/template.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace lifelog;
using testing::day;

namespace {

Episode rendered(Episode e, const std::string& pattern) {
  const auto t = Template::compile(std::string(category_name(e.category)) + ".t", e.category, pattern);
  e.template_id = t.id();
  e.text = t.render(slot_values(e));
  return e;
}

const QAPair* find_kind(const std::vector<QAPair>& qs, QuestionKind k) {
  for (const auto& q : qs) {
    if (q.kind == k) return &q;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("atomic questions for the example dinner and chat") {
  Rng rng(1);
  const Episode dinner =
      rendered(testing::episode("d1", Category::dinner, day(2010, 1, 9), {{"meal", std::string("chinese food")}},
                                {"Kayden", "Carter"}),
               "I had {meal} for dinner with {participants}.");
  const auto qs = gen_atomic_qa(dinner, rng);
  const QAPair* what = find_kind(qs, QuestionKind::what);
  REQUIRE(what != nullptr);
  CHECK(what->question == "What did I eat with Kayden and Carter on 2010/01/09?");
  CHECK(what->answer_text == "I ate chinese food with Kayden and Carter.");
  CHECK(what->evidence == std::vector<std::string>{"d1"});
  CHECK(find_kind(qs, QuestionKind::who) != nullptr);
  // The date is not in this rendering, so no "when" question.
  CHECK(find_kind(qs, QuestionKind::when) == nullptr);

  const Episode chat = rendered(
      testing::episode("c1", Category::chat, day(2010, 1, 12),
                       {{"minutes", std::int64_t{47}}, {"time_of_day", std::string("in the evening")}}, {"Nora"}),
      "I talked to {participants} for {minutes} minutes {time_of_day}.");
  const auto cq = gen_atomic_qa(chat, rng);
  const QAPair* dur = find_kind(cq, QuestionKind::duration);
  REQUIRE(dur != nullptr);
  CHECK(dur->question == "How long did I talk to Nora on 2010/01/12?");
  CHECK(dur->answer_text == "I talked to Nora for 47 minutes.");
  CHECK(answer_surface(dur->answer) == "47");
}

TEST_CASE("no who question without participants; when only with a dated text") {
  Rng rng(2);
  const Episode alone = rendered(testing::episode("l", Category::lunch, day(2011, 3, 3), {{"meal", std::string("soup")}}),
                                 "I had {meal} for lunch.");
  CHECK(find_kind(gen_atomic_qa(alone, rng), QuestionKind::who) == nullptr);
  Episode ex = rendered(testing::episode("x", Category::exercise, day(2011, 3, 3),
                                         {{"activity", std::string("running")}, {"minutes", std::int64_t{30}}}),
                        "I went {activity} for {minutes} minutes on {date}.");
  const QAPair* when = find_kind(gen_atomic_qa(ex, rng), QuestionKind::when);
  REQUIRE(when != nullptr);
  CHECK(std::get<Date>(when->answer) == day(2011, 3, 3));
}

TEST_CASE("answer sentences") {
  const Params kids{{"provider", "an optician"}};
  CHECK(render_answer(QuestionKind::count, Number::integer(2), "You took your kids {answer} times to {provider}.", kids) ==
        "You took your kids 2 times to an optician.");
  CHECK(render_answer(QuestionKind::count, Number::integer(0), "You took your kids {answer} times to {provider}.", kids) ==
        "You took your kids 0 times to an optician.");
  CHECK(render_answer(QuestionKind::count, Number::integer(1), "You baked {answer} times in {year}.", {{"year", "2019"}}) ==
        "You baked 1 time in 2019.");
  CHECK(render_answer(QuestionKind::average, Number::integer(32, "minutes"),
                      "On average, you spent {answer} minutes reading {material} each day.",
                      {{"material", "the news"}}) == "On average, you spent 32 minutes reading the news each day.");
  CHECK(render_answer(QuestionKind::before_after, false, "Yes, {a} first.", {{"a", "Spain"}, {"b", "Italy"}},
                      "No, {b} first.") == "No, Italy first.");
  CHECK(render_answer(QuestionKind::list, std::vector<std::string>{}) == "nothing.");
  CHECK(render_answer(QuestionKind::list, std::vector<std::string>{"A", "B", "C"}) == "A, B and C.");
  CHECK_THROWS_AS(render_answer(QuestionKind::count, std::string("x")), DataError);
  CHECK(fill("{a} and {zz}", {{"a", "1"}}) == "1 and {zz}");
  CHECK(natural_join({"A", "B"}) == "A and B");
}

TEST_CASE("atomic QA is local to one episode") {
  const Lifelog log = generate_one(testing::config(17, 2), default_resources(), 0);
  Rng rng(3);
  std::size_t n = 0;
  for (const auto& e : log.store.episodes()) {
    for (const auto& q : gen_atomic_qa(e, rng)) {
      ++n;
      CHECK(is_atomic(q.kind));
      REQUIRE(q.evidence.size() == 1);
      CHECK(q.evidence.front() == e.id);
      std::vector<std::string> parts;
      if (const auto* l = std::get_if<std::vector<std::string>>(&q.answer)) {
        parts = *l;
      } else {
        parts.push_back(answer_surface(q.answer));
      }
      for (const auto& p : parts) CHECK_MESSAGE(e.text.find(p) != std::string::npos, p, " not in ", e.text);
    }
  }
  CHECK(n > 1000);
}

TEST_CASE("complex QA gold answers match the brute-force oracle") {
  std::set<QuestionKind> kinds;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Lifelog log = generate_one(testing::config(seed, 4), default_resources(), 0);
    const LifelogQA qa = generate_qa(testing::loaded(log), default_resources().vocabulary, 100);
    CHECK(qa.atomic.size() <= 100);
    CHECK(qa.complex.size() >= 20);
    for (const auto& q : qa.complex) {
      kinds.insert(q.kind);
      REQUIRE(q.query.has_value());
      const auto want = oracle::evaluate(log.store.episodes(), *q.query);
      CHECK_MESSAGE(oracle::same_value(want.value, q.answer), q.question, " gold ", oracle::show(q.answer),
                    " oracle ", oracle::show(want.value));
      CHECK(std::set<std::string>(q.evidence.begin(), q.evidence.end()) == want.evidence);
      CHECK(q.lifelog == log.id);
      auto low = [](std::string s) {
        for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        return s;
      };
      CHECK_MESSAGE(low(q.answer_text).find(low(answer_surface(q.answer)).substr(0, 1)) != std::string::npos,
                    q.answer_text, " / ", answer_surface(q.answer));
    }
  }
  CHECK(kinds.size() == 7);
}

TEST_CASE("trips to two countries give a before/after question") {
  const Resources& res = default_resources();
  EpisodeStore s;
  auto trip = [&](std::string id, Date d, std::string city) {
    Episode e = testing::episode(std::move(id), Category::travel, d);
    e.end = d.plus_days(2);
    e.location = Location{"", std::move(city)};
    Rng rng(1);
    const auto r = render_episode(e, res.templates, rng);
    e.template_id = r.template_id;
    e.text = r.text;
    s.insert(e);
  };
  trip("t1", day(2019, 4, 1), "Madrid, Spain");
  trip("t2", day(2020, 6, 1), "Rome, Italy");
  s.freeze();
  const CatalogContext ctx{s, DateRange{day(2018, 1, 1), day(2022, 12, 31)}, res.vocabulary};
  Rng rng(4);
  const auto qs = gen_complex_qa(ctx, default_catalog(), rng, 5);
  bool found = false;
  for (const auto& q : qs) {
    if (q.template_id != "before_after.trip_country") continue;
    found = true;
    const bool spain_first = q.question == "Did I go to Spain before Italy?";
    CHECK(std::get<bool>(q.answer) == spain_first);
  }
  CHECK(found);
}

TEST_CASE("the kids' optician count reads naturally") {
  const Resources& res = default_resources();
  EpisodeStore s;
  int n = 0;
  for (unsigned m : {3u, 9u}) {
    Episode e = testing::episode("k" + std::to_string(n++), Category::child_medical_care, day(2010, m, 5),
                                 {{"care_type", std::string("annual vision checkup")}}, {"Jack"});
    e.location = Location{"university hospital", ""};
    Rng rng(n);
    const auto r = render_episode(e, res.templates, rng);
    e.template_id = r.template_id;
    e.text = r.text;
    s.insert(e);
  }
  s.freeze();
  const CatalogContext ctx{s, DateRange{day(2010, 1, 1), day(2010, 12, 31)}, res.vocabulary};
  Rng rng(2);
  bool found = false;
  for (const auto& q : gen_complex_qa(ctx, default_catalog(), rng, 3)) {
    if (q.template_id != "count.kids_care_year") continue;
    found = true;
    CHECK(answer_surface(q.answer) == "2");
    CHECK(q.answer_text.find("You took your kids 2 times to ") == 0);
  }
  CHECK(found);
}
