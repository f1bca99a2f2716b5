#include "lifelog/json_io.hpp"

#include <cmath>

#include "lifelog/error.hpp"

namespace lifelog {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw DataError("expected a JSON object");
  const auto it = j.find(name);
  if (it == j.end()) throw DataError(std::string("missing field '") + name + "'");
  return *it;
}

std::string str(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) throw DataError(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> strings(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_array()) throw DataError(std::string("field '") + name + "' must be a list");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) throw DataError(std::string("field '") + name + "' must hold strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

Date iso_date(const Json& j, const char* name) {
  const std::string s = str(j, name);
  const auto d = Date::parse_iso(s);
  if (!d) throw DataError(std::string("field '") + name + "' is not a YYYY-MM-DD date: " + s);
  return *d;
}

std::optional<Date> opt_date(const Json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return iso_date(j, name);
}

Json opt_date_json(const std::optional<Date>& d) { return d ? Json(d->iso()) : Json(nullptr); }

Category category(const Json& j, const char* name) {
  const std::string s = str(j, name);
  const auto c = parse_category(s);
  if (!c) throw DataError("unknown category '" + s + "'");
  return *c;
}

Json window_json(const std::optional<DateRange>& w) {
  if (!w) return nullptr;
  return Json{{"first", w->first.iso()}, {"last", w->last.iso()}};
}

std::optional<DateRange> window_from(const Json& j) {
  const auto it = j.find("window");
  if (it == j.end() || it->is_null()) return std::nullopt;
  return DateRange{iso_date(*it, "first"), iso_date(*it, "last")};
}

}  // namespace

Json attr_to_json(const AttrValue& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

AttrValue attr_from_json(const Json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::vector<std::string> out;
    for (const auto& s : j) {
      if (!s.is_string()) throw DataError("list attributes must hold strings");
      out.push_back(s.get<std::string>());
    }
    return out;
  }
  throw DataError("unsupported attribute value " + j.dump());
}

Json episode_to_json(const Episode& e) {
  Json j;
  j["id"] = e.id;
  j["category"] = category_name(e.category);
  j["start"] = e.start.iso();
  j["end"] = e.end.iso();
  j["location"] = e.location ? Json{{"place", e.location->place}, {"city", e.location->city}} : Json(nullptr);
  j["participants"] = e.participants;
  Json attrs = Json::object();
  for (const auto& [k, v] : e.attributes) attrs[k] = attr_to_json(v);
  j["attributes"] = std::move(attrs);
  j["parent_id"] = e.parent_id ? Json(*e.parent_id) : Json(nullptr);
  j["template_id"] = e.template_id;
  j["text"] = e.text;
  return j;
}

Episode episode_from_json(const Json& j) {
  Episode e;
  e.id = str(j, "id");
  e.category = category(j, "category");
  e.start = iso_date(j, "start");
  e.end = iso_date(j, "end");
  const Json& loc = field(j, "location");
  if (!loc.is_null()) e.location = Location{str(loc, "place"), str(loc, "city")};
  e.participants = strings(j, "participants");
  const Json& attrs = field(j, "attributes");
  if (!attrs.is_object()) throw DataError("field 'attributes' must be an object");
  for (const auto& [k, v] : attrs.items()) e.attributes[k] = attr_from_json(v);
  const Json& parent = field(j, "parent_id");
  if (!parent.is_null()) e.parent_id = str(j, "parent_id");
  e.template_id = str(j, "template_id");
  e.text = str(j, "text");
  check_episode(e);
  return e;
}

Json persona_to_json(const Persona& p) {
  Json j;
  j["name"] = p.name;
  j["gender"] = gender_name(p.gender);
  j["birthdate"] = p.birthdate.iso();
  Json edu = Json::array();
  for (const auto& m : p.education) {
    edu.push_back({{"kind", m.kind},
                   {"date", m.date.iso()},
                   {"institution", m.institution},
                   {"city", m.city},
                   {"degree", m.degree}});
  }
  j["education_history"] = std::move(edu);
  Json jobs = Json::array();
  for (const auto& job : p.jobs) {
    jobs.push_back({{"role", job.role}, {"start", job.start.iso()}, {"end", opt_date_json(job.end)}, {"city", job.city}});
  }
  j["job_history"] = std::move(jobs);
  Json family = Json::array();
  for (const auto& m : p.family) {
    Json f;
    f["relation"] = relation_name(m.relation);
    f["name"] = m.name;
    f["birthdate"] = opt_date_json(m.birthdate);
    f["marriage"] = opt_date_json(m.marriage);
    f["divorce"] = opt_date_json(m.divorce);
    f["death"] = opt_date_json(m.death);
    f["kind"] = m.kind;
    family.push_back(std::move(f));
  }
  j["family"] = std::move(family);
  j["hobbies"] = p.hobbies;
  Json homes = Json::array();
  for (const auto& h : p.homes) homes.push_back({{"city", h.city}, {"since", h.since.iso()}});
  j["home_locations"] = std::move(homes);
  return j;
}

Persona persona_from_json(const Json& j) {
  Persona p;
  p.name = str(j, "name");
  const auto g = parse_gender(str(j, "gender"));
  if (!g) throw DataError("unknown gender");
  p.gender = *g;
  p.birthdate = iso_date(j, "birthdate");
  for (const auto& m : field(j, "education_history")) {
    p.education.push_back({str(m, "kind"), iso_date(m, "date"), str(m, "institution"), str(m, "city"), str(m, "degree")});
  }
  for (const auto& job : field(j, "job_history")) {
    p.jobs.push_back({str(job, "role"), iso_date(job, "start"), opt_date(job, "end"), str(job, "city")});
  }
  for (const auto& f : field(j, "family")) {
    const auto r = parse_relation(str(f, "relation"));
    if (!r) throw DataError("unknown relation");
    p.family.push_back({*r, str(f, "name"), opt_date(f, "birthdate"), opt_date(f, "marriage"), opt_date(f, "divorce"),
                        opt_date(f, "death"), str(f, "kind")});
  }
  p.hobbies = strings(j, "hobbies");
  for (const auto& h : field(j, "home_locations")) p.homes.push_back({str(h, "city"), iso_date(h, "since")});
  return p;
}

Json filter_to_json(const EpisodeFilter& f) {
  Json j;
  Json cats = Json::array();
  for (const auto c : f.categories) cats.push_back(category_name(c));
  j["categories"] = std::move(cats);
  j["window"] = window_json(f.window);
  j["participants"] = f.participants;
  j["location"] = f.location ? Json(*f.location) : Json(nullptr);
  Json attrs = Json::array();
  for (const auto& a : f.attributes) {
    attrs.push_back(
        {{"name", a.name}, {"op", a.op == AttributeFilter::Op::equals ? "equals" : "contains"}, {"value", a.value}});
  }
  j["attributes"] = std::move(attrs);
  return j;
}

EpisodeFilter filter_from_json(const Json& j) {
  EpisodeFilter f;
  for (const auto& c : field(j, "categories")) {
    if (!c.is_string()) throw DataError("categories must be strings");
    const auto cat = parse_category(c.get<std::string>());
    if (!cat) throw DataError("unknown category '" + c.get<std::string>() + "'");
    f.categories.push_back(*cat);
  }
  f.window = window_from(j);
  f.participants = strings(j, "participants");
  if (const auto it = j.find("location"); it != j.end() && !it->is_null()) f.location = str(j, "location");
  for (const auto& a : field(j, "attributes")) {
    const std::string op = str(a, "op");
    if (op != "equals" && op != "contains") throw DataError("unknown attribute op '" + op + "'");
    f.attributes.push_back({str(a, "name"), op == "equals" ? AttributeFilter::Op::equals : AttributeFilter::Op::contains,
                            str(a, "value")});
  }
  return f;
}

Json query_to_json(const QuerySpec& q) {
  Json j;
  j["op"] = op_name(q.op);
  j["filter"] = filter_to_json(q.filter);
  j["attribute"] = q.attribute;
  j["unit"] = q.unit;
  j["group_by"] = group_by_name(q.group_by);
  j["average_mode"] = average_mode_name(q.average_mode);
  j["other"] = q.other ? filter_to_json(*q.other) : Json(nullptr);
  return j;
}

QuerySpec query_from_json(const Json& j) {
  QuerySpec q;
  const auto op = parse_op(str(j, "op"));
  const auto g = parse_group_by(str(j, "group_by"));
  const auto m = parse_average_mode(str(j, "average_mode"));
  if (!op || !g || !m) throw DataError("malformed query " + j.dump());
  q.op = *op;
  q.group_by = *g;
  q.average_mode = *m;
  q.filter = filter_from_json(field(j, "filter"));
  q.attribute = str(j, "attribute");
  q.unit = str(j, "unit");
  if (const auto it = j.find("other"); it != j.end() && !it->is_null()) q.other = filter_from_json(*it);
  return q;
}

Json answer_to_json(const AnswerValue& v) {
  Json j;
  j["type"] = answer_type_name(v);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Number>) {
          if (x.decimals == 0) {
            j["value"] = x.scaled;
          } else {
            j["value"] = x.value();
          }
          j["decimals"] = x.decimals;
          j["unit"] = x.unit;
        } else if constexpr (std::is_same_v<T, Date>) {
          j["value"] = x.iso();
        } else {
          j["value"] = x;
        }
      },
      v);
  return j;
}

AnswerValue answer_from_json(const Json& j) {
  const std::string type = str(j, "type");
  const Json& v = field(j, "value");
  if (type == "number") {
    const int decimals = field(j, "decimals").get<int>();
    if (decimals < 0 || decimals > 6) throw DataError("bad decimals in number answer");
    Number n;
    n.decimals = decimals;
    n.unit = str(j, "unit");
    double scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    n.scaled = v.is_number_integer() ? v.get<std::int64_t>() * static_cast<std::int64_t>(scale)
                                     : std::llround(v.get<double>() * scale);
    return n;
  }
  if (type == "date") return iso_date(j, "value");
  if (type == "string") return str(j, "value");
  if (type == "list") return strings(j, "value");
  if (type == "bool") {
    if (!v.is_boolean()) throw DataError("bool answer must be true or false");
    return v.get<bool>();
  }
  throw DataError("unknown answer type '" + type + "'");
}

Json qa_to_json(const QAPair& qa) {
  Json j;
  j["id"] = qa.id;
  j["lifelog"] = qa.lifelog;
  j["question"] = qa.question;
  j["kind"] = kind_name(qa.kind);
  j["answer"] = answer_to_json(qa.answer);
  j["answer_text"] = qa.answer_text;
  j["evidence"] = qa.evidence;
  Json scope = Json::array();
  for (const auto c : qa.scope) scope.push_back(category_name(c));
  j["scope"] = std::move(scope);
  j["template_id"] = qa.template_id;
  if (qa.query) j["query"] = query_to_json(*qa.query);
  return j;
}

QAPair qa_from_json(const Json& j) {
  QAPair qa;
  qa.id = str(j, "id");
  qa.lifelog = str(j, "lifelog");
  qa.question = str(j, "question");
  const auto k = parse_kind(str(j, "kind"));
  if (!k) throw DataError("unknown question kind");
  qa.kind = *k;
  qa.answer = answer_from_json(field(j, "answer"));
  qa.answer_text = str(j, "answer_text");
  qa.evidence = strings(j, "evidence");
  for (const auto& c : field(j, "scope")) {
    const auto cat = parse_category(c.get<std::string>());
    if (!cat) throw DataError("unknown category in scope");
    qa.scope.push_back(*cat);
  }
  qa.template_id = str(j, "template_id");
  if (const auto it = j.find("query"); it != j.end() && !it->is_null()) qa.query = query_from_json(*it);
  return qa;
}

}  // namespace lifelog
