#include <fstream>
#include <numeric>

#include "doctest.h"
#include "lifelog/error.hpp"
#include "lifelog/eval.hpp"
#include "lifelog/rng.hpp"
#include "support.hpp"

using namespace lifelog;

namespace {

Prediction text(std::string s) {
  Prediction p;
  p.text = std::move(s);
  return p;
}

Prediction items(std::vector<std::string> v) {
  Prediction p;
  p.is_list = true;
  p.items = std::move(v);
  return p;
}

std::string random_sentence(Rng& rng) {
  static const std::vector<std::string> words = {"I", "ate", "the", "chinese", "food", "a", "with", "Nora", "Nora.",
                                                 "47", "minutes", "an", "pizza", ",", "and", "Kayden!", "THE"};
  std::string s;
  const int n = static_cast<int>(rng.below(8));
  for (int i = 0; i < n; ++i) s += (i ? " " : "") + rng.pick(words);
  return s;
}

}  // namespace

TEST_CASE("normalization") {
  CHECK(normalize("The Chinese food.") == std::vector<std::string>{"chinese", "food"});
  CHECK(normalize("").empty());
  CHECK(normalize("I ate chinese food") == std::vector<std::string>{"i", "ate", "chinese", "food"});
  CHECK(normalize("  A  an THE ").empty());
}

TEST_CASE("exact match and token F1") {
  CHECK(token_f1("chinese food", "chinese food") == doctest::Approx(1.0));
  CHECK(token_f1("I ate chinese food", "chinese food") == doctest::Approx(0.6667).epsilon(1e-4));
  CHECK(token_f1("pizza", "chinese food") == 0.0);
  CHECK(token_f1("", "") == 1.0);
  CHECK(token_f1("", "x") == 0.0);
  CHECK(token_f1("x", "") == 0.0);
  // Multiset overlap counts duplicates once per occurrence.
  CHECK(token_f1("food food", "food") == doctest::Approx(2.0 / 3.0));
  CHECK(exact_match("The chinese food.", "chinese food"));
  CHECK_FALSE(exact_match("chinese", "chinese food"));
}

TEST_CASE("F1 is symmetric and EM implies F1 = 1 over 1000 random pairs") {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const std::string a = random_sentence(rng);
    const std::string b = rng.bernoulli(0.2) ? a : random_sentence(rng);
    CHECK(token_f1(a, b) == doctest::Approx(token_f1(b, a)));
    const double f = token_f1(a, b);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    if (exact_match(a, b)) CHECK(f == doctest::Approx(1.0));
  }
}

TEST_CASE("denotation matching") {
  CHECK(denotation_match(text("5"), Number::integer(5)));
  CHECK(denotation_match(text("You had tacos 5 times."), Number::integer(5)));
  CHECK_FALSE(denotation_match(text("83.94"), Number{8405, 2, "minutes"}));
  CHECK(denotation_match(text("84.05 minutes"), Number{8405, 2, "minutes"}));
  CHECK(denotation_match(text("84.049"), Number{8405, 2, ""}));  // rounded to the gold's precision
  CHECK(denotation_match(text("2.5"), Number{25, 1, ""}));
  CHECK_FALSE(denotation_match(text("2"), Number{25, 1, ""}));
  CHECK(denotation_match(items({"b", "a"}), std::vector<std::string>{"a", "b"}));
  CHECK(denotation_match(text("A, B and C"), std::vector<std::string>{"C", "B", "A"}));
  CHECK_FALSE(denotation_match(items({"a"}), std::vector<std::string>{"a", "b"}));
  CHECK(denotation_match(text("On 2019/03/23."), testing::day(2019, 3, 23)));
  CHECK(denotation_match(text("2019-03-23"), testing::day(2019, 3, 23)));
  CHECK_FALSE(denotation_match(text("2019/03/24"), testing::day(2019, 3, 23)));
  CHECK(denotation_match(text("Yes, Spain first."), true));
  CHECK(denotation_match(text("false"), false));
  CHECK_FALSE(denotation_match(text("no"), true));
  CHECK(denotation_match(text("March 2019"), std::string("March 2019")));
  CHECK_FALSE(denotation_match(text(""), Number::integer(0)));

  const std::vector<Prediction> p = {text("5"), text("83.94")};
  const std::vector<AnswerValue> g = {Number::integer(5), Number{8405, 2, ""}};
  CHECK(denotation_accuracy(p, g) == doctest::Approx(0.5));
  CHECK_THROWS_AS(denotation_accuracy(p, std::vector<AnswerValue>{Number::integer(1)}), ConfigError);
}

TEST_CASE("breakdown buckets and partitions") {
  CHECK(evidence_bucket(0) == "[0,10]");
  CHECK(evidence_bucket(10) == "[0,10]");
  CHECK(evidence_bucket(11) == "(10,100]");
  CHECK(evidence_bucket(100) == "(10,100]");
  CHECK(evidence_bucket(101) == "(100,1000]");
  CHECK(evidence_bucket(1000) == "(100,1000]");
  CHECK(evidence_bucket(1001) == ">1000");

  std::vector<QuestionResult> rs;
  const char* kinds[] = {"count", "average", "argmax", "list", "first"};
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    QuestionResult r;
    r.id = std::to_string(i);
    r.kind = kinds[i % 5];
    r.evidence_count = static_cast<std::size_t>(rng.below(3000));
    r.denotation_correct = true;
    rs.push_back(r);
  }
  const auto rep = breakdown_report(rs);
  CHECK(rep.overall.total == 200);
  CHECK(rep.overall.accuracy() == doctest::Approx(100.0));
  std::size_t by_kind = 0;
  for (const auto& s : rep.by_kind) {
    by_kind += s.total;
    if (s.total) CHECK(s.accuracy() == doctest::Approx(100.0));
  }
  std::size_t by_ev = 0;
  for (const auto& s : rep.by_evidence) by_ev += s.total;
  CHECK(by_kind == 200);
  CHECK(by_ev == 200);
  CHECK(rep.by_kind[0].label == "average");
  CHECK(rep.by_kind[3].label == "list");
  CHECK(rep.to_text().find("overall") != std::string::npos);
  CHECK(rep.to_json().find("\"by_evidence\"") != std::string::npos);
  rs[0].denotation_correct = false;
  CHECK(breakdown_report(rs).overall.accuracy() == doctest::Approx(99.5));
}

TEST_CASE("dataset statistics") {
  testing::TempDir dir("stats");
  EpisodeStore s;
  for (int i = 0; i < 10; ++i) {
    Episode e = testing::episode("e" + std::to_string(i), Category::lunch, testing::day(2020, 1, 1 + i),
                                 {{"meal", std::string("x")}});
    e.text = "one two three four five six seven eight";
    s.insert(e);
  }
  s.freeze();
  s.save_jsonl(dir.path() / "a.jsonl");
  const std::vector<std::filesystem::path> files = {dir.path() / "a.jsonl"};
  const auto rep = dataset_stats(files);
  CHECK(rep.logs == 1);
  CHECK(rep.entries == 10);
  CHECK(rep.mean_tokens() == doctest::Approx(8.0));
  CHECK(rep.per_category.at("lunch").mean_tokens() == doctest::Approx(8.0));
  CHECK(dataset_stats(files).to_json() == rep.to_json());

  std::ofstream(dir.path() / "b.jsonl") << "{\"id\": 1}\n";
  const std::vector<std::filesystem::path> bad = {dir.path() / "b.jsonl"};
  try {
    dataset_stats(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.source().find("b.jsonl") != std::string::npos);
  }
}
