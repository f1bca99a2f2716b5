#include "lifelog/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include "json.hpp"
#include "lifelog/resources.hpp"

namespace lifelog {

namespace {

using OJson = nlohmann::ordered_json;

FieldType slot_type(Category c, const std::string& slot) {
  if (slot == "date" || slot == "end_date") return FieldType::date;
  const FieldSpec* f = schema_of(c).find(slot);
  if (f == nullptr) throw ConfigError("slot {" + slot + "} is not a field of " + std::string(category_name(c)));
  return f->type;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(", ", start);
    out.emplace_back(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 2;
  }
  return out;
}

bool plain_value(std::string_view s) {
  return !s.empty() && s.front() != ' ' && s.back() != ' ' && s.find(". ") == std::string_view::npos;
}

bool is_name(std::string_view s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '\'' || c == '-';
  });
}

bool all_digits(std::string_view s) {
  return !s.empty() && s.size() <= 18 &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// Typed value of a capture, or nothing when it does not fit the type.
std::optional<SlotValue> convert(std::string_view cap, FieldType type) {
  switch (type) {
    case FieldType::text:
      if (!plain_value(cap)) return std::nullopt;
      return SlotValue{std::string(cap)};
    case FieldType::integer:
      if (!all_digits(cap)) return std::nullopt;
      return SlotValue{static_cast<std::int64_t>(std::stoll(std::string(cap)))};
    case FieldType::real: {
      const auto dot = cap.find('.');
      if (dot == std::string_view::npos || dot + 2 != cap.size() || !all_digits(cap.substr(0, dot)) ||
          !all_digits(cap.substr(dot + 1))) {
        return std::nullopt;
      }
      return SlotValue{std::stod(std::string(cap))};
    }
    case FieldType::list: {
      auto items = split_list(cap);
      for (const auto& i : items) {
        if (!plain_value(i) || i.find(',') != std::string::npos) return std::nullopt;
      }
      return SlotValue{std::move(items)};
    }
    case FieldType::people: {
      auto names = split_list(cap);
      for (const auto& n : names) {
        if (!is_name(n)) return std::nullopt;
      }
      return SlotValue{std::move(names)};
    }
    case FieldType::date: {
      const auto d = Date::parse_slashed(cap);
      if (!d) return std::nullopt;
      return SlotValue{*d};
    }
    case FieldType::choice: {
      const auto tokens = time_of_day_tokens();
      if (std::find(tokens.begin(), tokens.end(), cap) == tokens.end()) return std::nullopt;
      return SlotValue{std::string(cap)};
    }
  }
  return std::nullopt;
}

std::optional<ColumnType> column_type_of(std::string_view s) {
  if (s == "date") return ColumnType::date;
  if (s == "text") return ColumnType::text;
  if (s == "integer") return ColumnType::integer;
  if (s == "real") return ColumnType::real;
  if (s == "list") return ColumnType::list;
  return std::nullopt;
}

bool type_fits(FieldType f, ColumnType c) {
  switch (c) {
    case ColumnType::date:
      return f == FieldType::date;
    case ColumnType::text:
      return f == FieldType::text || f == FieldType::choice || f == FieldType::people;
    case ColumnType::integer:
      return f == FieldType::integer;
    case ColumnType::real:
      return f == FieldType::real || f == FieldType::integer;
    case ColumnType::list:
      return f == FieldType::list || f == FieldType::people;
  }
  return false;
}

Cell to_cell(const SlotValue& v, ColumnType type) {
  switch (type) {
    case ColumnType::date:
      return std::get<Date>(v);
    case ColumnType::integer:
      return std::get<std::int64_t>(v);
    case ColumnType::real:
      if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
      return std::get<double>(v);
    case ColumnType::list:
      return std::get<std::vector<std::string>>(v);
    case ColumnType::text:
      return to_text(v);
  }
  return std::monostate{};
}

Cell fallback_cell(const std::string& text, ColumnType type) {
  if (type == ColumnType::list) return text.empty() ? std::vector<std::string>{} : std::vector<std::string>{text};
  if (type == ColumnType::text) return text;
  return std::monostate{};
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ExtractionPattern ExtractionPattern::from_template(const Template& t) {
  ExtractionPattern p;
  p.template_id_ = t.id();
  p.category_ = t.category();
  p.literal_length_ = t.literal_length();
  for (const auto& seg : t.segments()) {
    Part part{seg.is_slot, seg.text, FieldType::text};
    if (seg.is_slot) part.type = slot_type(t.category(), seg.text);
    p.parts_.push_back(std::move(part));
  }
  return p;
}

std::size_t ExtractionPattern::slot_count() const {
  return static_cast<std::size_t>(std::count_if(parts_.begin(), parts_.end(), [](const Part& p) { return p.is_slot; }));
}

std::optional<SlotMap> ExtractionPattern::match(std::string_view text) const {
  SlotMap out;
  if (!match_from(text, 0, 0, out)) return std::nullopt;
  return out;
}

bool ExtractionPattern::match_from(std::string_view text, std::size_t part, std::size_t pos, SlotMap& out) const {
  if (part == parts_.size()) return pos == text.size();
  const Part& p = parts_[part];
  if (!p.is_slot) {
    if (text.substr(pos, p.text.size()) != p.text) return false;
    return match_from(text, part + 1, pos + p.text.size(), out);
  }
  if (part + 1 == parts_.size()) {
    auto v = convert(text.substr(pos), p.type);
    if (!v) return false;
    out[p.text] = std::move(*v);
    return true;
  }
  // The next part is literal (slots are never adjacent); try each place it
  // occurs, shortest capture first.
  const std::string& next = parts_[part + 1].text;
  for (auto at = text.find(next, pos + 1); at != std::string_view::npos; at = text.find(next, at + 1)) {
    auto v = convert(text.substr(pos, at - pos), p.type);
    if (!v) continue;
    out[p.text] = std::move(*v);
    if (match_from(text, part + 1, at, out)) return true;
    out.erase(p.text);
  }
  return false;
}

PatternRegistry PatternRegistry::from_bank(const TemplateBank& bank) {
  PatternRegistry r;
  for (const auto c : all_categories()) {
    for (const auto& t : bank.templates_for(c)) r.by_category_[static_cast<std::size_t>(c)].push_back(ExtractionPattern::from_template(t));
  }
  return r;
}

ExtractedRecord extract_record(std::string_view text, Category category, const PatternRegistry& patterns) {
  const auto& list = patterns.for_category(category);
  if (list.empty()) throw ExtractionError("no extraction pattern for category " + std::string(category_name(category)));
  const ExtractionPattern* best = nullptr;
  std::optional<SlotMap> best_fields;
  for (const auto& p : list) {
    auto m = p.match(text);
    if (!m) continue;
    if (best == nullptr || p.literal_length() > best->literal_length() ||
        (p.literal_length() == best->literal_length() && p.slot_count() > best->slot_count())) {
      best = &p;
      best_fields = std::move(m);
    }
  }
  if (best == nullptr) {
    throw ExtractionError("no " + std::string(category_name(category)) + " pattern matches: " + std::string(text));
  }
  return {category, best->template_id(), std::move(*best_fields)};
}

std::string_view column_type_name(ColumnType t) {
  static constexpr std::array<std::string_view, 5> kNames = {"date", "text", "integer", "real", "list"};
  return kNames[static_cast<std::size_t>(t)];
}

void TopicSchema::validate() const {
  if (categories.empty()) throw ConfigError("topic " + name + " has no categories");
  if (columns.empty()) throw ConfigError("topic " + name + " has no columns");
  for (const auto c : categories) {
    const auto& schema = schema_of(c);
    for (const auto& col : columns) {
      if (col.source == "category") {
        if (col.type != ColumnType::text) throw ConfigError("schema conflict in " + name + ": category column must be text");
        continue;
      }
      if (col.source == "date") {
        if (col.type != ColumnType::date) throw ConfigError("schema conflict in " + name + ": date column must be a date");
        continue;
      }
      std::optional<FieldType> type;
      if (col.source == "end_date") {
        if (schema.find("end_date") != nullptr) type = FieldType::date;
      } else if (const FieldSpec* f = schema.find(col.source)) {
        type = f->type;
      }
      if (!type) {
        if (!col.fallback) {
          throw ConfigError("schema conflict in " + name + ": " + std::string(category_name(c)) + " has no field '" +
                            col.source + "' and column " + col.name + " has no fallback");
        }
        continue;
      }
      if (!type_fits(*type, col.type)) {
        throw ConfigError("schema conflict in " + name + ": field '" + col.source + "' of " +
                          std::string(category_name(c)) + " does not fit a " + std::string(column_type_name(col.type)) +
                          " column");
      }
      if (schema.find(col.source) != nullptr && schema.find(col.source)->optional && !col.fallback) {
        throw ConfigError("schema conflict in " + name + ": optional field '" + col.source + "' needs a fallback");
      }
    }
  }
}

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return to_text(AttrValue{v});
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, Date>) {
          return v.slashed();
        } else {
          return to_text(AttrValue{v});
        }
      },
      c);
}

void Table::check() const {
  if (rows.size() != episode_ids.size()) throw DataError("table " + name + ": row and source counts differ");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != schema.size()) throw DataError("table " + name + ": row " + std::to_string(r) + " has wrong arity");
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      bool ok = std::holds_alternative<std::monostate>(c);
      switch (schema[i].type) {
        case ColumnType::date:
          ok = ok || std::holds_alternative<Date>(c);
          break;
        case ColumnType::text:
          ok = ok || std::holds_alternative<std::string>(c);
          break;
        case ColumnType::integer:
          ok = ok || std::holds_alternative<std::int64_t>(c);
          break;
        case ColumnType::real:
          ok = ok || std::holds_alternative<double>(c);
          break;
        case ColumnType::list:
          ok = ok || std::holds_alternative<std::vector<std::string>>(c);
          break;
      }
      if (!ok) throw DataError("table " + name + ": cell " + schema[i].name + " of row " + std::to_string(r) + " has the wrong type");
    }
  }
}

void Table::write_csv(std::ostream& out) const {
  out << "episode_id";
  for (const auto& col : schema) out << ',' << csv_quote(col.name);
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << episode_ids[r];
    for (const auto& c : rows[r]) out << ',' << csv_quote(cell_text(c));
    out << '\n';
  }
}

std::string Table::schema_json() const {
  OJson j;
  j["name"] = name;
  OJson cols = OJson::array();
  for (const auto& c : schema) {
    OJson col;
    col["name"] = c.name;
    col["type"] = column_type_name(c.type);
    col["source"] = c.source;
    col["fallback"] = c.fallback ? OJson(*c.fallback) : OJson(nullptr);
    cols.push_back(std::move(col));
  }
  j["columns"] = std::move(cols);
  j["rows"] = rows.size();
  return j.dump(2) + "\n";
}

ExtractionConfig ExtractionConfig::parse(std::string_view json_text, const std::string& source) {
  OJson doc;
  try {
    doc = OJson::parse(json_text, nullptr, true, true);
  } catch (const OJson::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
  auto category = [&](const OJson& v) {
    const auto c = v.is_string() ? parse_category(v.get<std::string>()) : std::nullopt;
    if (!c) throw ConfigError(source + ": unknown category " + v.dump());
    return *c;
  };
  ExtractionConfig cfg;
  try {
    for (const auto& t : doc.at("topics")) {
      TopicSchema topic;
      topic.name = t.at("name").get<std::string>();
      for (const auto& c : t.at("categories")) topic.categories.push_back(category(c));
      for (const auto& col : t.at("columns")) {
        Column column;
        column.name = col.at("name").get<std::string>();
        const auto type = column_type_of(col.at("type").get<std::string>());
        if (!type) throw ConfigError(source + ": column " + column.name + " has an unknown type");
        column.type = *type;
        column.source = col.at("source").get<std::string>();
        if (col.contains("fallback") && !col.at("fallback").is_null()) column.fallback = col.at("fallback").get<std::string>();
        topic.columns.push_back(std::move(column));
      }
      topic.validate();
      if (cfg.topic(topic.name) != nullptr) throw ConfigError(source + ": duplicate topic " + topic.name);
      cfg.topics.push_back(std::move(topic));
    }
    for (const auto& [kw, cats] : doc.at("keywords").items()) {
      std::vector<Category> list;
      for (const auto& c : cats) list.push_back(category(c));
      std::string lowered = kw;
      for (auto& ch : lowered) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      cfg.keywords.emplace_back(std::move(lowered), std::move(list));
    }
  } catch (const OJson::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

const ExtractionConfig& ExtractionConfig::defaults() {
  static const ExtractionConfig kConfig = parse(embedded::extraction_json(), "extraction.json");
  return kConfig;
}

const TopicSchema* ExtractionConfig::topic(std::string_view name) const {
  for (const auto& t : topics) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const TopicSchema* ExtractionConfig::topic_of(Category c) const {
  for (const auto& t : topics) {
    if (std::find(t.categories.begin(), t.categories.end(), c) != t.categories.end()) return &t;
  }
  return nullptr;
}

Table build_table(const EpisodeStore& store, const TopicSchema& topic, const PatternRegistry& patterns) {
  topic.validate();
  Table table;
  table.name = topic.name;
  table.schema = topic.columns;
  EpisodeFilter f;
  f.categories = topic.categories;
  for (const auto* e : store.query(f)) {
    const auto rec = extract_record(e->text, e->category, patterns);
    std::vector<Cell> row;
    row.reserve(topic.columns.size());
    for (const auto& col : topic.columns) {
      if (col.source == "date") {
        // The entry's date is part of every serialized line, in the text or not.
        row.emplace_back(e->start);
      } else if (col.source == "category") {
        row.emplace_back(std::string(category_name(e->category)));
      } else if (const auto it = rec.fields.find(col.source); it != rec.fields.end()) {
        row.push_back(to_cell(it->second, col.type));
      } else if (col.fallback) {
        row.push_back(fallback_cell(*col.fallback, col.type));
      } else {
        throw ExtractionError("episode " + e->id + " yields no '" + col.source + "' for table " + topic.name);
      }
    }
    table.rows.push_back(std::move(row));
    table.episode_ids.push_back(e->id);
  }
  table.check();
  return table;
}

}  // namespace lifelog
