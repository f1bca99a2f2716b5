#include "lifelog/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lifelog/error.hpp"
#include "lifelog/store.hpp"

namespace lifelog {

namespace {

using OJson = nlohmann::ordered_json;

std::string joined(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
  return out;
}

// First decimal number in the text, e.g. "84.05" in "about 84.05 minutes".
std::optional<double> first_number(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool sign = s[i] == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1]));
    if (!sign && !std::isdigit(static_cast<unsigned char>(s[i]))) continue;
    if (i > 0 && (std::isalnum(static_cast<unsigned char>(s[i - 1])) || s[i - 1] == '/')) continue;
    std::size_t j = i + (sign ? 1 : 0);
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j + 1 < s.size() && s[j] == '.' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
      ++j;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    }
    // A date is not a number answer.
    if (j < s.size() && (s[j] == '/' || s[j] == '-')) {
      i = j;
      continue;
    }
    return std::stod(std::string(s.substr(i, j - i)));
  }
  return std::nullopt;
}

std::optional<Date> first_date(std::string_view s) {
  for (std::size_t i = 0; i + 10 <= s.size(); ++i) {
    const auto chunk = s.substr(i, 10);
    if (auto d = Date::parse_slashed(chunk)) return d;
    if (auto d = Date::parse_iso(chunk)) return d;
  }
  return std::nullopt;
}

std::vector<std::string> split_items(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    const auto b = cur.find_first_not_of(' ');
    if (b != std::string::npos) out.push_back(cur.substr(b, cur.find_last_not_of(' ') - b + 1));
    cur.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ',' || text[i] == ';') {
      flush();
      ++i;
    } else if (text.substr(i, 5) == " and ") {
      flush();
      i += 5;
    } else {
      cur += text[i++];
    }
  }
  flush();
  return out;
}

std::set<std::string> normalized_set(const std::vector<std::string>& items) {
  std::set<std::string> out;
  for (const auto& i : items) {
    auto n = joined(normalize(i));
    if (!n.empty()) out.insert(std::move(n));
  }
  return out;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string slice_row(const Slice& s) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-16s %8zu %8zu %9.2f\n", s.label.c_str(), s.total, s.correct, s.accuracy());
  return buf;
}

OJson slice_json(const Slice& s) {
  return {{"label", s.label}, {"total", s.total}, {"correct", s.correct}, {"accuracy", std::round(s.accuracy() * 100) / 100}};
}

}  // namespace

std::vector<std::string> normalize(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (const char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::ispunct(u)) continue;
    s += static_cast<char>(std::tolower(u));
  }
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    if (tok == "a" || tok == "an" || tok == "the") continue;
    out.push_back(std::move(tok));
  }
  return out;
}

bool exact_match(std::string_view predicted, std::string_view gold) { return normalize(predicted) == normalize(gold); }

double token_f1(std::string_view predicted, std::string_view gold) {
  const auto p = normalize(predicted);
  const auto g = normalize(gold);
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<std::string, std::size_t> counts;
  for (const auto& t : g) ++counts[t];
  std::size_t common = 0;
  for (const auto& t : p) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(p.size());
  const double recall = static_cast<double>(common) / static_cast<double>(g.size());
  return 2 * precision * recall / (precision + recall);
}

bool denotation_match(const Prediction& predicted, const AnswerValue& gold) {
  const std::string text = predicted.is_list ? (predicted.items.empty() ? "" : predicted.items.front()) : predicted.text;
  return std::visit(
      [&](const auto& g) -> bool {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Number>) {
          const auto v = first_number(text);
          if (!v) return false;
          double scale = 1;
          for (int i = 0; i < g.decimals; ++i) scale *= 10;
          // Round half away from zero at the gold's precision.
          return std::llround(*v * scale) == g.scaled;
        } else if constexpr (std::is_same_v<T, Date>) {
          const auto d = first_date(text);
          return d && *d == g;
        } else if constexpr (std::is_same_v<T, std::string>) {
          return normalize(text) == normalize(g);
        } else if constexpr (std::is_same_v<T, bool>) {
          const auto tokens = normalize(text);
          if (tokens.empty()) return false;
          if (tokens.front() == "yes" || tokens.front() == "true") return g;
          if (tokens.front() == "no" || tokens.front() == "false") return !g;
          return false;
        } else {
          const auto items = predicted.is_list ? predicted.items : split_items(predicted.text);
          return normalized_set(items) == normalized_set(g);
        }
      },
      gold);
}

double denotation_accuracy(std::span<const Prediction> predicted, std::span<const AnswerValue> gold) {
  if (predicted.size() != gold.size()) {
    throw ConfigError("denotation accuracy needs aligned lists (" + std::to_string(predicted.size()) + " predictions, " +
                      std::to_string(gold.size()) + " gold answers)");
  }
  if (gold.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) correct += denotation_match(predicted[i], gold[i]) ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

double Slice::accuracy() const {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

std::string_view evidence_bucket(std::size_t n) {
  if (n <= 10) return "[0,10]";
  if (n <= 100) return "(10,100]";
  if (n <= 1000) return "(100,1000]";
  return ">1000";
}

BreakdownReport breakdown_report(std::span<const QuestionResult> results) {
  BreakdownReport r;
  r.overall.label = "overall";
  for (const auto* k : {"average", "count", "argmax", "list"}) r.by_kind.push_back({k, 0, 0});
  for (const auto* b : {"[0,10]", "(10,100]", "(100,1000]", ">1000"}) r.by_evidence.push_back({b, 0, 0});
  for (const auto& q : results) {
    const std::size_t ok = q.denotation_correct ? 1 : 0;
    ++r.overall.total;
    r.overall.correct += ok;
    auto kind = std::find_if(r.by_kind.begin(), r.by_kind.end(), [&](const Slice& s) { return s.label == q.kind; });
    if (kind == r.by_kind.end()) {
      r.by_kind.push_back({q.kind, 0, 0});
      kind = r.by_kind.end() - 1;
    }
    ++kind->total;
    kind->correct += ok;
    const auto bucket = evidence_bucket(q.evidence_count);
    for (auto& s : r.by_evidence) {
      if (s.label == bucket) {
        ++s.total;
        s.correct += ok;
      }
    }
  }
  return r;
}

std::string BreakdownReport::to_text() const {
  std::string out = "slice                total  correct  accuracy\n";
  out += slice_row(overall);
  out += "-- question type\n";
  for (const auto& s : by_kind) out += slice_row(s);
  out += "-- evidence set size\n";
  for (const auto& s : by_evidence) out += slice_row(s);
  return out;
}

std::string BreakdownReport::to_json() const {
  OJson j;
  j["overall"] = slice_json(overall);
  j["by_kind"] = OJson::array();
  for (const auto& s : by_kind) j["by_kind"].push_back(slice_json(s));
  j["by_evidence"] = OJson::array();
  for (const auto& s : by_evidence) j["by_evidence"].push_back(slice_json(s));
  return j.dump(2) + "\n";
}

AtomicReport atomic_report(std::span<const QuestionResult> results) {
  AtomicReport r;
  r.total = results.size();
  if (results.empty()) return r;
  double em = 0;
  double f1 = 0;
  for (const auto& q : results) {
    em += q.em ? 1 : 0;
    f1 += q.f1;
  }
  r.exact_match = 100.0 * em / static_cast<double>(results.size());
  r.f1 = 100.0 * f1 / static_cast<double>(results.size());
  return r;
}

std::string AtomicReport::to_text() const {
  return "questions " + std::to_string(total) + "\nexact match " + fmt2(exact_match) + "\nf1 " + fmt2(f1) + "\n";
}

std::string AtomicReport::to_json() const {
  OJson j{{"total", total},
          {"exact_match", std::round(exact_match * 100) / 100},
          {"f1", std::round(f1 * 100) / 100}};
  return j.dump(2) + "\n";
}

std::string StatsReport::to_text() const {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "lifelogs %zu\nentries %zu\nentries per lifelog %.1f\nmean tokens per entry %.2f\n\n",
                logs, entries, logs == 0 ? 0.0 : static_cast<double>(entries) / static_cast<double>(logs), mean_tokens());
  out << buf;
  std::snprintf(buf, sizeof buf, "%-24s %10s %8s\n", "category", "entries", "tokens");
  out << buf;
  for (const auto& [name, s] : per_category) {
    std::snprintf(buf, sizeof buf, "%-24s %10zu %8.2f\n", name.c_str(), s.entries, s.mean_tokens());
    out << buf;
  }
  return out.str();
}

std::string StatsReport::to_json() const {
  OJson j;
  j["lifelogs"] = logs;
  j["entries"] = entries;
  j["tokens"] = tokens;
  j["mean_tokens_per_entry"] = std::round(mean_tokens() * 100) / 100;
  OJson cats = OJson::object();
  for (const auto& [name, s] : per_category) {
    cats[name] = {{"entries", s.entries}, {"tokens", s.tokens}, {"mean_tokens", std::round(s.mean_tokens() * 100) / 100}};
  }
  j["per_category"] = std::move(cats);
  OJson logs_json = OJson::array();
  for (const auto& l : per_lifelog) logs_json.push_back({{"name", l.name}, {"entries", l.entries}, {"tokens", l.tokens}});
  j["per_lifelog"] = std::move(logs_json);
  return j.dump(2) + "\n";
}

StatsReport dataset_stats(std::span<const std::filesystem::path> files) {
  StatsReport r;
  for (const auto& f : files) {
    const auto store = EpisodeStore::load_jsonl(f);
    LifelogStats l{f.stem().string(), 0, 0};
    for (const auto& e : store.episodes()) {
      const std::size_t t = count_tokens(e.text);
      auto& c = r.per_category[std::string(category_name(e.category))];
      ++c.entries;
      c.tokens += t;
      ++l.entries;
      l.tokens += t;
    }
    r.entries += l.entries;
    r.tokens += l.tokens;
    r.per_lifelog.push_back(std::move(l));
    ++r.logs;
  }
  return r;
}

}  // namespace lifelog
