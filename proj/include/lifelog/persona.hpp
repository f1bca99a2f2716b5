#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lifelog/date.hpp"

namespace lifelog {

struct GenConfig;
struct Resources;
class Rng;

enum class Gender { female, male, nonbinary };
enum class Relation { parent, sibling, spouse, child, pet, friend_ };

std::string_view gender_name(Gender g);
std::optional<Gender> parse_gender(std::string_view s);
std::string_view relation_name(Relation r);
std::optional<Relation> parse_relation(std::string_view s);

struct FamilyMember {
  Relation relation = Relation::friend_;
  std::string name;
  std::optional<Date> birthdate;
  std::optional<Date> marriage;
  std::optional<Date> divorce;
  std::optional<Date> death;
  std::string kind;  // species for pets, empty otherwise

  friend bool operator==(const FamilyMember&, const FamilyMember&) = default;
};

struct EducationMilestone {
  std::string kind;  // high_school_graduation, college_start, ...
  Date date;
  std::string institution;
  std::string city;
  std::string degree;

  friend bool operator==(const EducationMilestone&, const EducationMilestone&) = default;
};

struct Job {
  std::string role;
  Date start;
  std::optional<Date> end;
  std::string city;

  friend bool operator==(const Job&, const Job&) = default;
};

struct Residence {
  std::string city;
  Date since;

  friend bool operator==(const Residence&, const Residence&) = default;
};

struct Persona {
  std::string name;
  Gender gender = Gender::female;
  Date birthdate;
  std::vector<EducationMilestone> education;
  std::vector<Job> jobs;
  std::vector<FamilyMember> family;
  std::vector<std::string> hobbies;
  std::vector<Residence> homes;

  std::vector<const FamilyMember*> members(Relation r) const;
  const std::string& home_city_on(Date d) const;

  friend bool operator==(const Persona&, const Persona&) = default;
};

// January 1 of the configured year.
Date reference_date(const GenConfig& config);

// Samples a persona aged 18..75 on the reference date. Pure function of
// (config, resources, rng state).
Persona generate_persona(const GenConfig& config, const Resources& resources, Rng& rng);

// Empty when the persona satisfies every invariant; otherwise one message
// per violation.
std::vector<std::string> persona_violations(const Persona& p, const GenConfig& config);

}  // namespace lifelog
