#include <fstream>
#include <set>

#include "doctest.h"
#include "lifelog/commands.hpp"
#include "lifelog/error.hpp"
#include "lifelog/extraction.hpp"
#include "support.hpp"

using namespace lifelog;
namespace fs = std::filesystem;

TEST_CASE("splits are 2:1:1 by lifelog and seeded") {
  const Splits s = make_splits({"L0000", "L0001", "L0002", "L0003"}, 1);
  CHECK(s.train.size() == 2);
  CHECK(s.valid.size() == 1);
  CHECK(s.test.size() == 1);
  std::set<std::string> all(s.train.begin(), s.train.end());
  all.insert(s.valid.begin(), s.valid.end());
  all.insert(s.test.begin(), s.test.end());
  CHECK(all.size() == 4);
  const Splits again = parse_splits(splits_json(s));
  CHECK(again.train == s.train);
  CHECK(again.test == s.test);
  CHECK(s.split_of(s.valid.front()) == "valid");
  std::vector<std::string> ids;
  for (int i = 0; i < 480; ++i) ids.push_back(lifelog_id(static_cast<std::size_t>(i)));
  const Splits big = make_splits(ids, 2);
  CHECK(big.train.size() == 240);
  CHECK(big.valid.size() == 120);
  CHECK(big.test.size() == 120);
  CHECK_THROWS_AS(parse_splits("{}"), DataError);
}

TEST_CASE("end to end: generate, QA, tables, retrieval, scoring") {
  testing::TempDir dir("e2e");
  GenConfig c = testing::config(5, 2, Density::medium, 4);
  c.output_dir = dir.path() / "corpus";
  CHECK(cmd_generate(c, 2).size() == 4);
  const fs::path corpus = c.output_dir;

  GenQaOptions qo;
  qo.corpus = corpus;
  qo.atomic_cap = 10;
  const auto summary = cmd_gen_qa(qo, default_resources());
  CHECK(summary.lifelogs == 4);
  CHECK(summary.atomic == 40);
  CHECK(summary.splits.train.size() == 2);
  for (const auto& e : list_corpus(corpus)) {
    CHECK(read_qa_file(corpus / "qa" / (e.id + ".atomic.jsonl")).size() <= 10);
  }
  CHECK(cmd_build_tables(corpus, default_resources(), 2) == 4 * ExtractionConfig::defaults().topics.size());

  const fs::path complex = corpus / "qa" / "train.complex.jsonl";
  const fs::path atomic = corpus / "qa" / "train.atomic.jsonl";
  PredictOptions po;
  po.corpus = corpus;
  po.qa = complex;
  po.out = dir.path() / "pred.jsonl";
  cmd_predict(po);
  CHECK(cmd_evaluate(complex, po.out, EvalMode::multihop).score == doctest::Approx(100.0));
  po.corrupt_counts = true;
  po.out = dir.path() / "bad.jsonl";
  cmd_predict(po);
  CHECK(cmd_evaluate(complex, po.out, EvalMode::multihop).score < 100.0);

  // Oracle retrieval written to disk and read back by the reader.
  RetrieveOptions ro;
  ro.corpus = corpus;
  ro.qa = complex;
  ro.out = dir.path() / "ret.jsonl";
  CHECK(cmd_retrieve(ro, default_resources()).truncated == 0);
  po.corrupt_counts = false;
  po.retrieval = ro.out;
  po.out = dir.path() / "pred2.jsonl";
  cmd_predict(po);
  CHECK(cmd_evaluate(complex, po.out, EvalMode::multihop).score == doctest::Approx(100.0));

  ro.mode = RetrieveMode::zeroshot;
  ro.out = dir.path() / "zs.jsonl";
  cmd_retrieve(ro, default_resources());
  po.retrieval = ro.out;
  po.out = dir.path() / "pred3.jsonl";
  cmd_predict(po);
  CHECK(cmd_evaluate(complex, po.out, EvalMode::multihop).score <= 100.0);

  PredictOptions ao;
  ao.corpus = corpus;
  ao.qa = atomic;
  ao.out = dir.path() / "atomic_pred.jsonl";
  cmd_predict(ao);
  const auto ar = cmd_evaluate(atomic, ao.out, EvalMode::atomic);
  CHECK(ar.score == doctest::Approx(100.0));
  CHECK(ar.json.find("\"f1\": 100.0") != std::string::npos);

  const auto stats = cmd_stats(corpus);
  CHECK(stats.logs == 4);
}

TEST_CASE("evaluation rejects empty and misaligned predictions") {
  testing::TempDir dir("evalerr");
  GenConfig c = testing::config(6, 1, Density::sparse, 1);
  c.output_dir = dir.path() / "corpus";
  cmd_generate(c, 1);
  GenQaOptions qo;
  qo.corpus = c.output_dir;
  qo.atomic_cap = 3;
  cmd_gen_qa(qo, default_resources());
  const fs::path qa = c.output_dir / "qa" / "L0000.atomic.jsonl";

  std::ofstream(dir.path() / "empty.jsonl") << "";
  CHECK_THROWS_AS(cmd_evaluate(qa, dir.path() / "empty.jsonl", EvalMode::atomic), ConfigError);

  const auto questions = read_qa_file(qa);
  REQUIRE(questions.size() == 3);
  {
    std::ofstream out(dir.path() / "partial.jsonl");
    out << "{\"id\": \"" << questions[0].id << "\", \"prediction\": \"x\"}\n";
    out << "{\"id\": \"ghost\", \"prediction\": \"x\"}\n";
  }
  try {
    cmd_evaluate(qa, dir.path() / "partial.jsonl", EvalMode::atomic);
    FAIL("expected an alignment error");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(questions[1].id) != std::string::npos);
    CHECK(msg.find(questions[2].id) != std::string::npos);
    CHECK(msg.find("ghost") != std::string::npos);
  }
  std::ofstream(dir.path() / "cut.jsonl") << "{\"id\": \"a\", \"predic";
  CHECK_THROWS_AS(read_predictions(dir.path() / "cut.jsonl"), ParseError);
  CHECK_THROWS_AS(list_corpus(dir.path() / "nothing"), IoError);
}

TEST_CASE("corpus output does not depend on the job count") {
  testing::TempDir a("jobs1");
  testing::TempDir b("jobs3");
  GenConfig c = testing::config(11, 1, Density::medium, 3);
  c.output_dir = a.path();
  cmd_generate(c, 1);
  c.output_dir = b.path();
  cmd_generate(c, 3);
  for (const auto* d : {&a, &b}) {
    GenQaOptions qo;
    qo.corpus = d->path();
    qo.atomic_cap = 50;
    qo.jobs = d == &a ? 1 : 3;
    cmd_gen_qa(qo, default_resources());
    cmd_build_tables(d->path(), default_resources(), qo.jobs);
  }
  CHECK(testing::snapshot(a.path()) == testing::snapshot(b.path()));
}

TEST_CASE("manifests record provenance of each lifelog") {
  const GenConfig c = testing::config(13, 1);
  const Lifelog log = generate_one(c, default_resources(), 0);
  const std::string m = manifest_text(log, c);
  CHECK(m.find(config_hash(c)) != std::string::npos);
  CHECK(m.find("\"schema_version\": 1") != std::string::npos);
  CHECK(m.find("\"tool_version\": \"0.1.0\"") != std::string::npos);
  CHECK(m.find(log.window.first.iso()) != std::string::npos);
  CHECK(lifelog_id(7) == "L0007");
}
