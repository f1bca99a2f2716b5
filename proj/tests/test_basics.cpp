#include <set>

#include "doctest.h"
#include "lifelog/attr.hpp"
#include "lifelog/category.hpp"
#include "lifelog/date.hpp"
#include "lifelog/error.hpp"
#include "lifelog/resources.hpp"
#include "lifelog/rng.hpp"
#include "lifelog/template.hpp"
#include "support.hpp"

using namespace lifelog;
using testing::day;

TEST_CASE("dates parse, format and reject invalid calendar days") {
  CHECK(Date::parse_slashed("2010/01/09")->iso() == "2010-01-09");
  CHECK(Date::parse_iso("2020-02-29").has_value());
  CHECK_FALSE(Date::parse_iso("2019-02-29").has_value());
  CHECK_FALSE(Date::parse_iso("2019/02/01").has_value());
  CHECK_FALSE(Date::parse_slashed("2019/2/01").has_value());
  CHECK_FALSE(Date::parse_slashed("").has_value());
  CHECK_THROWS_AS(Date::from_ymd(2019, 13, 1), ConfigError);
  CHECK(day(2020, 2, 29).plus_years(1) == day(2021, 2, 28));
  CHECK(day(2010, 1, 9).slashed() == "2010/01/09");
}

TEST_CASE("age and month lengths agree with day-by-day counting") {
  CHECK(age_on(day(2000, 6, 15), day(2018, 6, 14)) == 17);
  CHECK(age_on(day(2000, 6, 15), day(2018, 6, 15)) == 18);
  for (int y = 1996; y <= 2004; ++y) {
    for (unsigned m = 1; m <= 12; ++m) {
      int n = 0;
      for (Date d = day(y, m, 1); d.month() == m; d = d.plus_days(1)) ++n;
      CHECK(days_in_month(y, m) == n);
    }
    CHECK(is_leap_year(y) == (days_in_month(y, 2) == 29));
  }
  CHECK(year_range(2019).days() == 365);
  CHECK(month_range(2019, 9).days() == 30);
  CHECK(day(2024, 1, 1).iso_weekday_index() == 0);  // a Monday
}

TEST_CASE("rng is deterministic and its distributions stay in range") {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(1);
  bool lo = false;
  bool hi = false;
  for (int i = 0; i < 5000; ++i) {
    const int v = r.uniform_int(3, 6);
    CHECK(v >= 3);
    CHECK(v <= 6);
    lo |= v == 3;
    hi |= v == 6;
    CHECK(r.below(7) < 7);
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK_FALSE(r.bernoulli(0.0));
    CHECK(r.bernoulli(1.0));
  }
  CHECK(lo);
  CHECK(hi);
  for (std::size_t k = 0; k <= 20; k += 5) {
    const auto idx = r.sample_indices(20, k);
    CHECK(idx.size() == k);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == k);
  }
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
}

TEST_CASE("all 25 categories round-trip through their names") {
  CHECK(all_categories().size() == kCategoryCount);
  std::set<std::string> names;
  for (const auto c : all_categories()) {
    const auto name = std::string(category_name(c));
    names.insert(name);
    CHECK(parse_category(name) == c);
    CHECK(schema_of(c).category == c);
  }
  CHECK(names.size() == 25);
  CHECK_FALSE(parse_category("brunch").has_value());
  CHECK(is_super_episode(Category::travel));
  CHECK(is_sub_episode(Category::dining));
}

TEST_CASE("attribute text forms") {
  CHECK(to_text(AttrValue{std::int64_t{47}}) == "47");
  CHECK(to_text(AttrValue{3.0}) == "3.0");
  CHECK(to_text(AttrValue{std::vector<std::string>{"milk", "eggs"}}) == "milk, eggs");
  CHECK(as_double(AttrValue{std::string("x")}) == std::nullopt);
}

TEST_CASE("templates compile, reject malformed patterns and render") {
  CHECK_THROWS_AS(Template::compile("dinner.x", Category::dinner, "I had {meal for dinner."), ConfigError);
  CHECK_THROWS_AS(Template::compile("dinner.x", Category::dinner, "I had {meal}{participants}."), ConfigError);
  CHECK_THROWS_AS(Template::compile("dinner.x", Category::dinner, "I had {} for dinner."), ConfigError);
  const auto t = Template::compile("dinner.x", Category::dinner, "I had {meal} for dinner with {participants}.");
  CHECK(t.slots() == std::set<std::string>{"meal", "participants"});
  SlotMap v{{"meal", std::string("chinese food")}, {"participants", std::vector<std::string>{"Kayden", "Carter"}}};
  CHECK(t.render(v) == "I had chinese food for dinner with Kayden, Carter.");
  CHECK_THROWS_AS(t.render({{"meal", std::string("x")}}), DataError);
}

TEST_CASE("bundled resources validate") {
  const Resources& r = default_resources();
  CHECK(r.names.size() >= 20);
  CHECK_NOTHROW(r.templates.validate());
  CHECK_NOTHROW(r.vocabulary.validate());
  for (const auto c : all_categories()) CHECK_FALSE(r.templates.templates_for(c).empty());
  CHECK(r.vocabulary.provider_for("no such care") == "the doctor");
}

TEST_CASE("every template renders with episode values and the dinner example") {
  const auto& bank = default_resources().templates;
  Episode e = testing::episode("x", Category::dinner, day(2010, 1, 9), {{"meal", std::string("chinese food")}},
                               {"Kayden", "Carter"});
  const auto eligible = eligible_templates(bank, Category::dinner, slot_values(e));
  REQUIRE_FALSE(eligible.empty());
  bool found = false;
  for (const auto* t : eligible) {
    found |= t->render(slot_values(e)) == "I had chinese food for dinner with Kayden, Carter.";
  }
  CHECK(found);

  Episode chat = testing::episode("c", Category::chat, day(2010, 1, 12),
                                  {{"minutes", std::int64_t{47}}, {"time_of_day", std::string("in the evening")}},
                                  {"Nora"});
  Rng rng(3);
  const auto r = render_episode(chat, bank, rng);
  CHECK(r.text.find("47 minutes") != std::string::npos);
  CHECK(r.text.find("Nora") != std::string::npos);
}
