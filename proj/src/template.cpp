#include "lifelog/template.hpp"

#include <algorithm>

#include "json.hpp"
#include "lifelog/episode.hpp"
#include "lifelog/error.hpp"
#include "lifelog/rng.hpp"

namespace lifelog {

Template Template::compile(std::string id, Category category, std::string pattern) {
  Template t;
  t.id_ = std::move(id);
  t.category_ = category;
  t.pattern_ = std::move(pattern);
  const std::string& p = t.pattern_;
  std::string literal;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const char c = p[i];
    if (c == '}') throw ConfigError("template " + t.id_ + ": unbalanced '}'");
    if (c != '{') {
      literal += c;
      continue;
    }
    const auto close = p.find('}', i + 1);
    if (close == std::string::npos) throw ConfigError("template " + t.id_ + ": unbalanced '{'");
    std::string name = p.substr(i + 1, close - i - 1);
    if (name.empty() || name.find('{') != std::string::npos) {
      throw ConfigError("template " + t.id_ + ": bad slot name");
    }
    if (!literal.empty()) {
      t.literal_length_ += literal.size();
      t.segments_.push_back({false, std::move(literal)});
      literal.clear();
    } else if (!t.segments_.empty() && t.segments_.back().is_slot) {
      throw ConfigError("template " + t.id_ + ": adjacent slots {" + t.segments_.back().text + "}{" + name + "}");
    }
    if (!t.slots_.insert(name).second) throw ConfigError("template " + t.id_ + ": slot {" + name + "} used twice");
    t.segments_.push_back({true, std::move(name)});
    i = close;
  }
  if (!literal.empty()) {
    t.literal_length_ += literal.size();
    t.segments_.push_back({false, std::move(literal)});
  }
  return t;
}

std::string render_slot(const SlotValue& value) { return to_text(value); }

std::string Template::render(const SlotMap& values) const {
  std::string out;
  for (const auto& seg : segments_) {
    if (!seg.is_slot) {
      out += seg.text;
      continue;
    }
    const auto it = values.find(seg.text);
    if (it == values.end()) throw DataError("template " + id_ + ": no value for slot {" + seg.text + "}");
    out += render_slot(it->second);
  }
  return out;
}

TemplateBank TemplateBank::parse(std::string_view json_text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(source + ": template bank must be an object");
  TemplateBank bank;
  for (const auto& [key, list] : doc.items()) {
    const auto c = parse_category(key);
    if (!c) throw ConfigError(source + ": unknown category '" + key + "'");
    if (!list.is_array()) throw ConfigError(source + ": templates of '" + key + "' must be an array");
    auto& dest = bank.by_category_[static_cast<std::size_t>(*c)];
    for (const auto& item : list) {
      if (!item.is_string()) throw ConfigError(source + ": template of '" + key + "' is not a string");
      dest.push_back(Template::compile(key + "." + std::to_string(dest.size()), *c, item.get<std::string>()));
    }
  }
  return bank;
}

const std::vector<Template>& TemplateBank::templates_for(Category c) const {
  const auto& list = by_category_[static_cast<std::size_t>(c)];
  if (list.empty()) throw ConfigError("no templates for category " + std::string(category_name(c)));
  return list;
}

const Template* TemplateBank::find(std::string_view id) const {
  const auto dot = id.rfind('.');
  if (dot == std::string_view::npos) return nullptr;
  const auto c = parse_category(id.substr(0, dot));
  if (!c) return nullptr;
  for (const auto& t : by_category_[static_cast<std::size_t>(*c)]) {
    if (t.id() == id) return &t;
  }
  return nullptr;
}

std::size_t TemplateBank::size() const {
  std::size_t n = 0;
  for (const auto& list : by_category_) n += list.size();
  return n;
}

void TemplateBank::validate() const {
  for (const Category c : all_categories()) {
    const auto& schema = schema_of(c);
    const auto& list = templates_for(c);
    for (const auto& t : list) {
      for (const auto& slot : t.slots()) {
        if (slot != "date" && schema.find(slot) == nullptr) {
          throw ConfigError("template " + t.id() + ": slot {" + slot + "} is not a field of " +
                            std::string(category_name(c)));
        }
      }
      if (schema.date_in_text && !t.slots().contains("date")) {
        throw ConfigError("template " + t.id() + " must render {date}");
      }
      for (const auto& f : schema.fields) {
        if (!f.optional && !t.slots().contains(std::string(f.name))) {
          throw ConfigError("template " + t.id() + " does not render required field {" + std::string(f.name) + "}");
        }
      }
    }
    // Each subset of optional fields needs an eligible template.
    std::vector<std::string> optional;
    for (const auto& f : schema.fields) {
      if (f.optional) optional.emplace_back(f.name);
    }
    const std::size_t combos = std::size_t{1} << optional.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
      const bool found = std::any_of(list.begin(), list.end(), [&](const Template& t) {
        for (std::size_t i = 0; i < optional.size(); ++i) {
          if (t.slots().contains(optional[i]) != bool(mask & (std::size_t{1} << i))) return false;
        }
        return true;
      });
      if (!found) {
        throw ConfigError("category " + std::string(category_name(c)) +
                          " has no template for one combination of its optional fields");
      }
    }
  }
}

std::vector<const Template*> eligible_templates(const TemplateBank& bank, Category c, const SlotMap& values) {
  std::vector<const Template*> out;
  for (const auto& t : bank.templates_for(c)) {
    bool ok = true;
    for (const auto& slot : t.slots()) {
      if (slot != "date" && !values.contains(slot)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (const auto& [name, _] : values) {
      if (name != "date" && !t.slots().contains(name)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(&t);
  }
  return out;
}

Rendering render_episode(const Episode& fields, const TemplateBank& bank, Rng& rng) {
  const SlotMap values = slot_values(fields);
  const auto candidates = eligible_templates(bank, fields.category, values);
  if (candidates.empty()) {
    throw DataError("no template fits a " + std::string(category_name(fields.category)) + " episode");
  }
  const Template* t = candidates[static_cast<std::size_t>(rng.below(candidates.size()))];
  return {t->id(), t->render(values)};
}

std::string rerender(const Episode& e, const TemplateBank& bank) {
  const Template* t = bank.find(e.template_id);
  if (t == nullptr) throw DataError("episode " + e.id + ": unknown template " + e.template_id);
  return t->render(slot_values(e));
}

}  // namespace lifelog
