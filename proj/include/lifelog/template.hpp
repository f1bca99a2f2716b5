#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lifelog/attr.hpp"
#include "lifelog/category.hpp"

namespace lifelog {

class Rng;
struct Episode;

// A literal run of text or a named slot.
struct Segment {
  bool is_slot = false;
  std::string text;  // literal text, or the slot name

  friend bool operator==(const Segment&, const Segment&) = default;
};

// A description pattern such as "I talked to {participants} for {minutes}
// minutes {time_of_day}." Two slots may not be adjacent: every slot except
// possibly the last is followed by literal text, which is what lets the
// extraction side invert it.
class Template {
 public:
  // Throws ConfigError on unbalanced braces, empty or adjacent slots.
  static Template compile(std::string id, Category category, std::string pattern);

  const std::string& id() const { return id_; }
  Category category() const { return category_; }
  const std::string& pattern() const { return pattern_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::set<std::string>& slots() const { return slots_; }
  std::size_t literal_length() const { return literal_length_; }

  // Throws DataError when a slot has no value.
  std::string render(const SlotMap& values) const;

 private:
  std::string id_;
  Category category_ = Category::breakfast;
  std::string pattern_;
  std::vector<Segment> segments_;
  std::set<std::string> slots_;
  std::size_t literal_length_ = 0;
};

std::string render_slot(const SlotValue& value);

// Alternative templates per category. Template ids are "<category>.<n>".
class TemplateBank {
 public:
  static TemplateBank parse(std::string_view json_text, const std::string& source);

  // Throws ConfigError for a category with no templates.
  const std::vector<Template>& templates_for(Category c) const;
  const Template* find(std::string_view id) const;
  std::size_t size() const;

  // Every category has at least one template, every slot binds to a field
  // the category's schema defines, every template of a date_in_text
  // category renders {date}, and every combination of optional fields has
  // at least one eligible template.
  void validate() const;

 private:
  std::vector<std::vector<Template>> by_category_ = std::vector<std::vector<Template>>(kCategoryCount);
};

// Templates whose slots, ignoring {date}, equal the fields `values` carries.
std::vector<const Template*> eligible_templates(const TemplateBank& bank, Category c, const SlotMap& values);

struct Rendering {
  std::string template_id;
  std::string text;
};

// Picks one eligible template uniformly and instantiates it. Throws
// DataError when no template fits the episode's fields.
Rendering render_episode(const Episode& fields, const TemplateBank& bank, Rng& rng);
// Rendering of the episode with its stored template id.
std::string rerender(const Episode& e, const TemplateBank& bank);

}  // namespace lifelog
