#include "lifelog/persona.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "lifelog/config.hpp"
#include "lifelog/error.hpp"
#include "lifelog/resources.hpp"
#include "lifelog/rng.hpp"

namespace lifelog {

namespace {

constexpr std::array<std::string_view, 3> kGenders = {"female", "male", "nonbinary"};
constexpr std::array<std::string_view, 6> kRelations = {"parent", "sibling", "spouse", "child", "pet", "friend"};

Date uniform_date(Rng& rng, Date lo, Date hi) {
  return Date::from_serial(lo.serial() + static_cast<std::int32_t>(rng.below(
                                             static_cast<std::uint64_t>(hi.serial() - lo.serial() + 1))));
}

// Hands out distinct names from the dictionary.
class NamePool {
 public:
  NamePool(const std::vector<std::string>& names, Rng& rng) : names_(names), order_(names.size()) {
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    rng.shuffle(order_);
  }
  const std::string& next() {
    if (next_ >= order_.size()) throw ConfigError("name dictionary too small for one persona");
    return names_[order_[next_++]];
  }

 private:
  const std::vector<std::string>& names_;
  std::vector<std::size_t> order_;
  std::size_t next_ = 0;
};

}  // namespace

std::string_view gender_name(Gender g) { return kGenders[static_cast<std::size_t>(g)]; }

std::optional<Gender> parse_gender(std::string_view s) {
  for (std::size_t i = 0; i < kGenders.size(); ++i) {
    if (kGenders[i] == s) return static_cast<Gender>(i);
  }
  return std::nullopt;
}

std::string_view relation_name(Relation r) { return kRelations[static_cast<std::size_t>(r)]; }

std::optional<Relation> parse_relation(std::string_view s) {
  for (std::size_t i = 0; i < kRelations.size(); ++i) {
    if (kRelations[i] == s) return static_cast<Relation>(i);
  }
  return std::nullopt;
}

std::vector<const FamilyMember*> Persona::members(Relation r) const {
  std::vector<const FamilyMember*> out;
  for (const auto& m : family) {
    if (m.relation == r) out.push_back(&m);
  }
  return out;
}

const std::string& Persona::home_city_on(Date d) const {
  if (homes.empty()) throw DataError("persona has no home");
  const Residence* current = &homes.front();
  for (const auto& h : homes) {
    if (h.since <= d) current = &h;
  }
  return current->city;
}

Date reference_date(const GenConfig& config) { return Date::from_ymd(config.year, 1, 1); }

Persona generate_persona(const GenConfig& config, const Resources& res, Rng& rng) {
  if (res.names.empty()) throw ConfigError("name dictionary is empty");
  const auto& probs = config.probabilities;
  const auto& vocab = res.vocabulary;
  const Date ref = reference_date(config);
  const Date last_day = ref.plus_days(-1);

  Persona p;
  NamePool names(res.names, rng);
  p.name = names.next();
  const auto g = rng.below(100);
  p.gender = g < 48 ? Gender::female : g < 96 ? Gender::male : Gender::nonbinary;
  // Oldest: 75 on the reference date; youngest: 18.
  p.birthdate = uniform_date(rng, Date::from_ymd(config.year - 75, 1, 1), Date::from_ymd(config.year - 18, 1, 1));
  const int by = p.birthdate.year();

  const std::string& birth_city = rng.pick(vocab.home_cities);
  p.homes.push_back({birth_city, p.birthdate});

  // Education. Milestones after the reference date have not happened yet.
  auto add_milestone = [&](EducationMilestone m) {
    if (m.date < ref) p.education.push_back(std::move(m));
  };
  const Date hs = Date::from_ymd(by + 18, 6, 15);
  add_milestone({"high_school_graduation", hs, "", birth_city, ""});
  Date career_start = hs.plus_days(static_cast<int>(rng.below(180)));
  if (rng.bernoulli(probs.base("persona.college"))) {
    const std::string& school = rng.pick(vocab.schools);
    const std::string& city = rng.pick(vocab.home_cities);
    const Date start = Date::from_ymd(by + 18, 8, 20 + static_cast<unsigned>(rng.below(12)));
    const Date grad = Date::from_ymd(by + 22, 5, 10 + static_cast<unsigned>(rng.below(20)));
    const std::string& degree = rng.pick(vocab.degrees);
    add_milestone({"college_start", start, school, city, ""});
    if (start < ref && city != birth_city) p.homes.push_back({city, start});
    add_milestone({"college_graduation", grad, school, city, degree});
    career_start = grad.plus_days(30 + static_cast<int>(rng.below(150)));
    if (rng.bernoulli(probs.base("persona.grad_school"))) {
      const std::string& gschool = rng.pick(vocab.schools);
      const std::string& gcity = rng.pick(vocab.home_cities);
      const Date gstart = Date::from_ymd(by + 22, 8, 20 + static_cast<unsigned>(rng.below(12)));
      const Date ggrad = Date::from_ymd(by + 24, 5, 10 + static_cast<unsigned>(rng.below(20)));
      const std::string& gdegree = rng.pick(vocab.degrees);
      add_milestone({"grad_school_start", gstart, gschool, gcity, ""});
      if (gstart < ref && gcity != p.homes.back().city) p.homes.push_back({gcity, gstart});
      add_milestone({"grad_school_graduation", ggrad, gschool, gcity, gdegree});
      career_start = ggrad.plus_days(30 + static_cast<int>(rng.below(150)));
    }
  }

  // Jobs: consecutive positions, sometimes with a move.
  Date job_start = career_start;
  while (job_start < ref) {
    const int years = 2 + static_cast<int>(rng.below(7));
    Job job{rng.pick(vocab.job_roles), job_start, std::nullopt, p.home_city_on(job_start)};
    if (rng.bernoulli(0.3)) {
      const std::string& city = rng.pick(vocab.home_cities);
      if (city != job.city) {
        job.city = city;
        p.homes.push_back({city, job_start});
      }
    }
    const Date next = job_start.plus_years(years).plus_days(static_cast<int>(rng.below(60)));
    if (next < ref) job.end = next.plus_days(-1);
    p.jobs.push_back(std::move(job));
    job_start = next;
  }

  // Family.
  for (int i = 0; i < 2; ++i) {
    FamilyMember parent{Relation::parent, names.next(), {}, {}, {}, {}, ""};
    parent.birthdate = p.birthdate.plus_years(-(20 + static_cast<int>(rng.below(21))))
                           .plus_days(-static_cast<int>(rng.below(365)));
    const Date eighty = parent.birthdate->plus_years(80);
    if (eighty < last_day && rng.bernoulli(0.5)) parent.death = uniform_date(rng, eighty, last_day);
    p.family.push_back(std::move(parent));
  }
  for (int i = 0; i < 3; ++i) {
    if (!rng.bernoulli(probs.base("persona.sibling"))) continue;
    FamilyMember sib{Relation::sibling, names.next(), {}, {}, {}, {}, ""};
    const int offset = static_cast<int>(rng.below(3650)) + 300;
    sib.birthdate = p.birthdate.plus_days(rng.bernoulli(0.5) ? offset : -offset);
    if (*sib.birthdate >= ref) sib.birthdate = p.birthdate.plus_days(-offset);
    p.family.push_back(std::move(sib));
  }
  const Date adult = p.birthdate.plus_years(22);
  if (adult < last_day && rng.bernoulli(probs.base("persona.married"))) {
    FamilyMember spouse{Relation::spouse, names.next(), {}, {}, {}, {}, ""};
    spouse.birthdate = p.birthdate.plus_days(static_cast<int>(rng.below(3651)) - 1825);
    spouse.marriage = uniform_date(rng, adult, last_day);
    const Date earliest_divorce = spouse.marriage->plus_years(1);
    if (earliest_divorce < last_day && rng.bernoulli(probs.base("persona.divorced"))) {
      spouse.divorce = uniform_date(rng, earliest_divorce, last_day);
    }
    p.family.push_back(std::move(spouse));
  }
  // Children are born at least min_parental_age years (plus a day) after
  // the persona.
  const Date first_birth = p.birthdate.plus_years(config.min_parental_age).plus_days(1);
  const Date last_birth = std::min(last_day, p.birthdate.plus_years(45));
  std::vector<FamilyMember> children;
  for (int i = 0; i < 3; ++i) {
    if (!rng.bernoulli(probs.base("persona.child"))) continue;
    if (first_birth > last_birth) continue;
    FamilyMember child{Relation::child, names.next(), {}, {}, {}, {}, ""};
    child.birthdate = uniform_date(rng, first_birth, last_birth);
    children.push_back(std::move(child));
  }
  std::stable_sort(children.begin(), children.end(),
                   [](const FamilyMember& a, const FamilyMember& b) { return *a.birthdate < *b.birthdate; });
  for (auto& c : children) p.family.push_back(std::move(c));

  std::vector<std::size_t> pet_order(vocab.pet_names.size());
  for (std::size_t i = 0; i < pet_order.size(); ++i) pet_order[i] = i;
  rng.shuffle(pet_order);
  for (std::size_t i = 0; i < 2 && i < pet_order.size(); ++i) {
    if (!rng.bernoulli(probs.base("persona.pet"))) continue;
    p.family.push_back({Relation::pet, vocab.pet_names[pet_order[i]], {}, {}, {}, {}, rng.pick(vocab.pet_kinds)});
  }
  const int friends = 3 + static_cast<int>(rng.below(4));
  for (int i = 0; i < friends; ++i) p.family.push_back({Relation::friend_, names.next(), {}, {}, {}, {}, ""});

  for (const auto& h : vocab.hobbies) {
    if (rng.bernoulli(probs.base("persona.hobby"))) p.hobbies.push_back(h);
  }
  return p;
}

std::vector<std::string> persona_violations(const Persona& p, const GenConfig& config) {
  std::vector<std::string> out;
  const Date ref = reference_date(config);
  const int age = age_on(p.birthdate, ref);
  if (age < 18 || age > 75) out.push_back("age " + std::to_string(age) + " outside [18, 75]");
  if (p.name.empty()) out.push_back("persona has no name");

  for (std::size_t i = 0; i < p.education.size(); ++i) {
    const auto& m = p.education[i];
    if (m.date < p.birthdate) out.push_back("education milestone " + m.kind + " before birth");
    if (i > 0 && m.date < p.education[i - 1].date) out.push_back("education milestones out of order");
  }
  for (std::size_t i = 0; i < p.jobs.size(); ++i) {
    const auto& j = p.jobs[i];
    if (j.start < p.birthdate) out.push_back("job starts before birth");
    if (j.end && *j.end < j.start) out.push_back("job ends before it starts");
    if (i > 0 && j.start < p.jobs[i - 1].start) out.push_back("jobs out of order");
    if (i > 0 && p.jobs[i - 1].end && j.start <= *p.jobs[i - 1].end) out.push_back("jobs overlap");
  }
  if (p.homes.empty()) out.push_back("persona has no home");
  for (std::size_t i = 1; i < p.homes.size(); ++i) {
    if (p.homes[i].since < p.homes[i - 1].since) out.push_back("homes out of order");
  }

  std::set<std::string> seen{p.name};
  const Date min_child = p.birthdate.plus_years(config.min_parental_age);
  for (const auto& m : p.family) {
    if (m.relation != Relation::pet && !seen.insert(m.name).second) {
      out.push_back("name " + m.name + " used twice");
    }
    if (m.marriage && m.divorce && !(*m.marriage < *m.divorce)) {
      out.push_back("marriage to " + m.name + " does not precede divorce");
    }
    if ((m.marriage || m.divorce) && m.relation != Relation::spouse) {
      out.push_back(m.name + " has marriage dates but is not a spouse");
    }
    if (m.relation == Relation::child) {
      if (!m.birthdate) {
        out.push_back("child " + m.name + " has no birthdate");
      } else if (!(*m.birthdate > min_child)) {
        out.push_back("child " + m.name + " born before the minimum parental age");
      }
    }
    // Ancestry is a two-level tree (parents above, children below); a cycle
    // would need a parent born after the persona or a child before.
    if (m.relation == Relation::parent && m.birthdate && !(*m.birthdate < p.birthdate)) {
      out.push_back("parent " + m.name + " not older than the persona");
    }
    if (m.death && m.birthdate && *m.death < *m.birthdate) out.push_back(m.name + " dies before birth");
  }
  return out;
}

}  // namespace lifelog
