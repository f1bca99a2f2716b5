#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "lifelog/error.hpp"
#include "lifelog/extraction.hpp"
#include "lifelog/qa.hpp"
#include "lifelog/rng.hpp"
#include "lifelog/template.hpp"
#include "support.hpp"

using namespace lifelog;
using testing::day;

namespace {

const PatternRegistry& registry() {
  static const PatternRegistry r = PatternRegistry::from_bank(default_resources().templates);
  return r;
}

// Slot values a text must give back: everything the episode carries,
// with the date only when the template renders it.
SlotMap expected_fields(const Episode& e, const Template& t) {
  SlotMap want;
  for (auto& [k, v] : slot_values(e)) {
    if (t.slots().count(k)) want.emplace(k, v);
  }
  return want;
}

Episode kid_visit(std::string id, Date d, const std::string& pattern) {
  Episode e = testing::episode(std::move(id), Category::child_medical_care, d,
                               {{"care_type", std::string("annual vision checkup")}}, {"Jack"});
  e.location = Location{"university hospital", ""};
  const auto t = Template::compile("child_medical_care.t", e.category, pattern);
  e.template_id = t.id();
  e.text = t.render(slot_values(e));
  return e;
}

}  // namespace

TEST_CASE("the medical-care example parses into its record") {
  const std::string text =
      "I took Jack for his/her for an annual vision checkup on 2019/03/23 at the university hospital.";
  const auto rec = extract_record(text, Category::child_medical_care, registry());
  CHECK(std::get<Date>(rec.fields.at("date")) == day(2019, 3, 23));
  CHECK(std::get<std::string>(rec.fields.at("place")) == "university hospital");
  CHECK(std::get<std::string>(rec.fields.at("care_type")) == "annual vision checkup");
  CHECK(std::get<std::vector<std::string>>(rec.fields.at("participants")) == std::vector<std::string>{"Jack"});
  CHECK_THROWS_AS(extract_record(text, Category::lunch, registry()), ExtractionError);
  CHECK_THROWS_AS(extract_record("Something else entirely.", Category::dinner, registry()), ExtractionError);
}

TEST_CASE("every bank template round-trips over generated values") {
  const auto& bank = default_resources().templates;
  std::map<std::string, std::size_t> checked;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Lifelog log = generate_one(testing::config(seed, 3, Density::dense), default_resources(), 0);
    for (const auto& e : log.store.episodes()) {
      const SlotMap values = slot_values(e);
      for (const Template* t : eligible_templates(bank, e.category, values)) {
        if (checked[t->id()] >= 20) continue;
        ++checked[t->id()];
        const std::string text = t->render(values);
        const auto rec = extract_record(text, e.category, registry());
        CHECK_MESSAGE(rec.fields == expected_fields(e, *t), text);
      }
      // And the stored rendering itself.
      const auto rec = extract_record(e.text, e.category, registry());
      CHECK_MESSAGE(rec.fields == expected_fields(e, *bank.find(e.template_id)), e.text);
    }
  }
  CHECK(checked.size() == bank.size());
}

TEST_CASE("tables project records onto topic columns") {
  const auto& ext = ExtractionConfig::defaults();
  const TopicSchema* med = ext.topic("medical_care");
  REQUIRE(med != nullptr);
  CHECK(ext.topic_of(Category::child_medical_care) == med);

  EpisodeStore s;
  s.insert(kid_visit("k1", day(2010, 3, 5), "I took {participants} to the {place} for an {care_type} on {date}."));
  s.insert(kid_visit("k2", day(2010, 9, 5), "{participants} had an {care_type} at the {place} on {date}."));
  Episode lunch = testing::episode("l", Category::lunch, day(2010, 9, 5), {{"meal", std::string("x")}});
  lunch.text = "I had x for lunch.";
  lunch.template_id = "lunch.1";
  s.insert(lunch);
  s.freeze();
  const Table t = build_table(s, *med, registry());
  CHECK_NOTHROW(t.check());
  REQUIRE(t.rows.size() == 2);
  CHECK(t.episode_ids == std::vector<std::string>{"k1", "k2"});
  CHECK(cell_text(t.rows[0][0]) == "2010/03/05");
  CHECK(cell_text(t.rows[0][1]) == "university hospital");
  CHECK(cell_text(t.rows[0][2]) == "annual vision checkup");
  CHECK(cell_text(t.rows[0][3]) == "Jack");
  std::ostringstream csv;
  t.write_csv(csv);
  CHECK(csv.str().rfind("episode_id,date,place,medical_care_type,person\n", 0) == 0);

  const Table empty = build_table(EpisodeStore{}, *med, registry());
  std::ostringstream header;
  empty.write_csv(header);
  CHECK(header.str() == "episode_id,date,place,medical_care_type,person\n");
}

TEST_CASE("schema conflicts are configuration errors") {
  TopicSchema bad;
  bad.name = "bad";
  bad.categories = {Category::lunch};
  bad.columns = {{"minutes", ColumnType::integer, "minutes", std::nullopt}};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.columns = {{"meal", ColumnType::integer, "meal", std::nullopt}};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.columns = {{"meal", ColumnType::text, "meal", std::nullopt}};
  CHECK_NOTHROW(bad.validate());
  CHECK_THROWS_AS(ExtractionConfig::parse(R"({"topics": [], "keywords": {"x": ["brunch"]}})", "t"), ConfigError);
}

TEST_CASE("all generated tables check on a dense log") {
  const Lifelog log = generate_one(testing::config(3, 2, Density::dense), default_resources(), 0);
  std::size_t rows = 0;
  for (const auto& topic : ExtractionConfig::defaults().topics) {
    const Table t = build_table(log.store, topic, registry());
    CHECK_NOTHROW(t.check());
    rows += t.rows.size();
  }
  CHECK(rows == log.store.size());
}

TEST_CASE("oracle retrieval returns exactly the evidence") {
  const Lifelog log = generate_one(testing::config(5, 2), default_resources(), 0);
  Rng rng(1);
  const auto atomic = gen_atomic_qa(log.store.episodes()[100], rng);
  REQUIRE_FALSE(atomic.empty());
  CHECK(oracle_retrieve(atomic.front(), log.store).size() == 1);
  QAPair q = atomic.front();
  q.evidence = {"nope"};
  CHECK_THROWS_AS(oracle_retrieve(q, log.store), DataError);
}

TEST_CASE("zero-shot retrieval follows topics and the budget") {
  const Lifelog log = generate_one(testing::config(6, 2), default_resources(), 0);
  const auto& ext = ExtractionConfig::defaults();
  CHECK(detect_topic("How long did I talk to Nora?", ext) == std::set<Category>{Category::chat});

  const auto full = zs_retrieve("How long did I talk to Nora?", log.store, 10'000'000, ext, registry(), 1);
  CHECK_FALSE(full.truncated);
  CHECK(full.episodes.size() == log.store.by_category(Category::chat).size());
  for (const auto* e : full.episodes) CHECK(e->category == Category::chat);

  const auto cut = zs_retrieve("How long did I talk to Nora?", log.store, 1024, ext, registry(), 1);
  CHECK(cut.truncated);
  CHECK(serialized_tokens(cut.episodes) <= 1024);
  CHECK(cut.candidate_count == full.episodes.size());
  CHECK(std::is_sorted(cut.episodes.begin(), cut.episodes.end(),
                       [](const Episode* a, const Episode* b) { return chrono_less(*a, *b); }));
  const auto again = zs_retrieve("How long did I talk to Nora?", log.store, 1024, ext, registry(), 1);
  CHECK(again.episodes == cut.episodes);

  const auto none = zs_retrieve("Zzz qqq?", log.store, 1024, ext, registry(), 1);
  CHECK(none.episodes.empty());
  CHECK_FALSE(none.diagnostic.empty());
}

TEST_CASE("external retrievers speak a line protocol") {
  testing::TempDir dir("external");
  const Lifelog log = generate_one(testing::config(7, 1), default_resources(), 0);
  const auto path = dir.path() / "log.jsonl";
  log.store.save_jsonl(path);
  QAPair q;
  q.question = "anything";
  const std::string a = log.store.episodes()[3].id;
  const std::string b = log.store.episodes()[1].id;

  ExternalRetriever ok("read q; read p; test -f \"$p\" && printf '" + a + "\\n" + b + "\\n'", path);
  const auto r = ok.retrieve(q, log.store);
  REQUIRE(r.episodes.size() == 2);
  CHECK(r.episodes[0]->id == b);  // chronological

  ExternalRetriever failing("exit 4", path);
  CHECK_THROWS_AS(failing.retrieve(q, log.store), RetrievalFailure);
  ExternalRetriever unknown("echo no-such-id", path);
  CHECK_THROWS_AS(unknown.retrieve(q, log.store), RetrievalFailure);
}
