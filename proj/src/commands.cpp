#include "lifelog/commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "lifelog/error.hpp"
#include "lifelog/extraction.hpp"
#include "lifelog/json_io.hpp"
#include "lifelog/rng.hpp"

namespace lifelog {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kRetrievalStream = 4;

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create " + p.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the error of
// the lowest failing index.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr err;
  std::size_t err_index = n;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::clamp(jobs, 1, 256)), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
}

// JSONL reader calling fn(json, line_no) for every non-blank line.
template <typename Fn>
void for_each_jsonl(const fs::path& path, Fn fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
    try {
      fn(j, line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const DataError& e) {
      throw ParseError(path.string(), line_no, e.what());
    } catch (const Json::exception& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
  }
}

std::uint64_t corpus_seed(const CorpusEntry& entry) {
  const Json j = Json::parse(read_text(entry.manifest), nullptr, false);
  if (j.is_discarded() || !j.contains("manifest") || !j["manifest"].contains("global_seed")) {
    throw DataError(entry.manifest.string() + ": manifest lacks global_seed");
  }
  return j["manifest"]["global_seed"].get<std::uint64_t>();
}

class LifelogCache {
 public:
  explicit LifelogCache(const fs::path& corpus) {
    for (auto& e : list_corpus(corpus)) entries_.emplace(e.id, std::move(e));
  }

  const LoadedLifelog& get(const std::string& id) {
    auto it = loaded_.find(id);
    if (it != loaded_.end()) return it->second;
    return loaded_.emplace(id, load_lifelog(entry(id))).first->second;
  }

  const CorpusEntry& entry(const std::string& id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw DataError("question refers to unknown lifelog '" + id + "'");
    return it->second;
  }

 private:
  std::map<std::string, CorpusEntry> entries_;
  std::map<std::string, LoadedLifelog> loaded_;
};

Json prediction_json(const Prediction& p) {
  if (p.is_list) return p.items;
  return p.text;
}

Prediction prediction_of(const AnswerValue& v) {
  Prediction p;
  if (const auto* items = std::get_if<std::vector<std::string>>(&v)) {
    p.is_list = true;
    p.items = *items;
  }
  p.text = answer_surface(v);
  return p;
}

}  // namespace

std::vector<QAPair> read_qa_file(const fs::path& path) {
  std::vector<QAPair> out;
  for_each_jsonl(path, [&](const Json& j, std::size_t) { out.push_back(qa_from_json(j)); });
  return out;
}

void write_qa_file(const fs::path& path, const std::vector<QAPair>& qa) {
  auto out = open_out(path);
  for (const auto& q : qa) out << qa_to_json(q).dump() << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<PredictionRecord> read_predictions(const fs::path& path) {
  std::vector<PredictionRecord> out;
  for_each_jsonl(path, [&](const Json& j, std::size_t) {
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) throw DataError("prediction lacks a string id");
    if (!j.contains("prediction")) throw DataError("prediction lacks a 'prediction' field");
    PredictionRecord r;
    r.id = j["id"].get<std::string>();
    const Json& p = j["prediction"];
    if (p.is_string()) {
      r.prediction.text = p.get<std::string>();
    } else if (p.is_boolean()) {
      r.prediction.text = p.get<bool>() ? "yes" : "no";
    } else if (p.is_number()) {
      r.prediction.text = p.dump();
    } else if (p.is_array()) {
      r.prediction.is_list = true;
      for (const auto& item : p) {
        if (!item.is_string()) throw DataError("list prediction items must be strings");
        r.prediction.items.push_back(item.get<std::string>());
      }
      r.prediction.text = natural_join(r.prediction.items);
    } else if (p.is_null()) {
      r.prediction.text.clear();
    } else {
      throw DataError("prediction must be a string, number, boolean or list");
    }
    out.push_back(std::move(r));
  });
  if (out.empty()) throw ConfigError("predictions file " + path.string() + " is empty");
  return out;
}

void write_predictions(const fs::path& path, const std::vector<PredictionRecord>& records) {
  auto out = open_out(path);
  for (const auto& r : records) {
    Json j;
    j["id"] = r.id;
    j["prediction"] = prediction_json(r.prediction);
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<fs::path> cmd_generate(const GenConfig& config, int jobs) {
  const Resources resources = load_resources(config);
  return write_corpus(config, resources, jobs);
}

Splits cmd_split(const fs::path& corpus, std::optional<std::uint64_t> seed) {
  const auto entries = list_corpus(corpus);
  std::vector<std::string> ids;
  for (const auto& e : entries) ids.push_back(e.id);
  const Splits s = make_splits(ids, seed ? *seed : corpus_seed(entries.front()));
  auto out = open_out(corpus / "splits.json");
  out << splits_json(s);
  return s;
}

GenQaSummary cmd_gen_qa(const GenQaOptions& options, const Resources& resources) {
  if (options.atomic_cap < 0) throw ConfigError("atomic cap must be >= 0");
  const auto entries = list_corpus(options.corpus);
  const fs::path qa_dir = options.corpus / "qa";
  ensure_dir(qa_dir);

  std::vector<LifelogQA> per_log(entries.size());
  parallel_for(entries.size(), options.jobs, [&](std::size_t i) {
    const LoadedLifelog log = load_lifelog(entries[i]);
    per_log[i] = generate_qa(log, resources.vocabulary, options.atomic_cap);
    write_qa_file(qa_dir / (log.id + ".atomic.jsonl"), per_log[i].atomic);
    write_qa_file(qa_dir / (log.id + ".complex.jsonl"), per_log[i].complex);
  });

  GenQaSummary summary;
  summary.lifelogs = entries.size();
  summary.splits = cmd_split(options.corpus, options.split_seed);
  std::map<std::string, std::pair<std::vector<QAPair>, std::vector<QAPair>>> by_split;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    summary.atomic += per_log[i].atomic.size();
    summary.complex += per_log[i].complex.size();
    auto& bucket = by_split[summary.splits.split_of(entries[i].id)];
    bucket.first.insert(bucket.first.end(), per_log[i].atomic.begin(), per_log[i].atomic.end());
    bucket.second.insert(bucket.second.end(), per_log[i].complex.begin(), per_log[i].complex.end());
  }
  for (const char* split : {"train", "valid", "test"}) {
    const auto& b = by_split[split];
    write_qa_file(qa_dir / (std::string(split) + ".atomic.jsonl"), b.first);
    write_qa_file(qa_dir / (std::string(split) + ".complex.jsonl"), b.second);
  }
  return summary;
}

std::size_t cmd_build_tables(const fs::path& corpus, const Resources& resources, int jobs) {
  const auto entries = list_corpus(corpus);
  const ExtractionConfig& ext = ExtractionConfig::defaults();
  const PatternRegistry patterns = PatternRegistry::from_bank(resources.templates);
  const fs::path root = corpus / "tables";
  ensure_dir(root);

  {
    Json schema = Json::array();
    for (const auto& topic : ext.topics) {
      Table empty;
      empty.name = topic.name;
      empty.schema = topic.columns;
      schema.push_back(Json::parse(empty.schema_json()));
    }
    auto out = open_out(root / "schema.json");
    out << schema.dump(2) << '\n';
  }

  std::vector<std::size_t> counts(entries.size(), 0);
  parallel_for(entries.size(), jobs, [&](std::size_t i) {
    const auto store = EpisodeStore::load_jsonl(entries[i].lifelog);
    const fs::path dir = root / entries[i].id;
    ensure_dir(dir);
    for (const auto& topic : ext.topics) {
      const Table t = build_table(store, topic, patterns);
      t.check();
      auto out = open_out(dir / (topic.name + ".csv"));
      t.write_csv(out);
      if (!out) throw IoError("write failed for " + (dir / (topic.name + ".csv")).string());
      ++counts[i];
    }
  });
  std::size_t total = 0;
  for (const auto c : counts) total += c;
  return total;
}

std::optional<RetrieveMode> parse_retrieve_mode(std::string_view s) {
  if (s == "oracle") return RetrieveMode::oracle;
  if (s == "zeroshot") return RetrieveMode::zeroshot;
  if (s == "external") return RetrieveMode::external;
  return std::nullopt;
}

double RetrieveSummary::truncated_fraction() const {
  return questions == 0 ? 0.0 : static_cast<double>(truncated) / static_cast<double>(questions);
}

RetrieveSummary cmd_retrieve(const RetrieveOptions& options, const Resources& resources) {
  if (options.mode == RetrieveMode::external && options.command.empty()) {
    throw ConfigError("external retrieval needs a command");
  }
  const auto questions = read_qa_file(options.qa);
  LifelogCache cache(options.corpus);
  const ExtractionConfig& ext = ExtractionConfig::defaults();
  const PatternRegistry patterns = PatternRegistry::from_bank(resources.templates);

  RetrieveSummary summary;
  auto out = open_out(options.out);
  for (const auto& qa : questions) {
    const LoadedLifelog& log = cache.get(qa.lifelog);
    RetrievalResult r;
    switch (options.mode) {
      case RetrieveMode::oracle:
        r = OracleRetriever().retrieve(qa, log.store);
        break;
      case RetrieveMode::zeroshot:
        r = ZeroShotRetriever(options.budget, derive_seed(log.seed, kRetrievalStream), ext, patterns)
                .retrieve(qa, log.store);
        break;
      case RetrieveMode::external:
        r = ExternalRetriever(options.command, cache.entry(qa.lifelog).lifelog).retrieve(qa, log.store);
        break;
    }
    ++summary.questions;
    summary.truncated += r.truncated ? 1 : 0;
    summary.unrecognized += r.diagnostic.empty() ? 0 : 1;
    Json j;
    j["id"] = qa.id;
    j["lifelog"] = qa.lifelog;
    Json ids = Json::array();
    for (const auto* e : r.episodes) ids.push_back(e->id);
    j["episodes"] = std::move(ids);
    j["candidate_count"] = r.candidate_count;
    j["candidate_tokens"] = r.candidate_tokens;
    j["truncated"] = r.truncated;
    j["diagnostic"] = r.diagnostic;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write failed for " + options.out.string());
  return summary;
}

std::size_t cmd_predict(const PredictOptions& options) {
  const auto questions = read_qa_file(options.qa);
  LifelogCache cache(options.corpus);

  std::map<std::string, std::vector<std::string>> retrieved;
  if (options.retrieval) {
    for_each_jsonl(*options.retrieval, [&](const Json& j, std::size_t) {
      std::vector<std::string> ids;
      for (const auto& e : j.at("episodes")) ids.push_back(e.get<std::string>());
      retrieved[j.at("id").get<std::string>()] = std::move(ids);
    });
  }

  std::vector<PredictionRecord> records;
  for (const auto& qa : questions) {
    PredictionRecord rec;
    rec.id = qa.id;
    if (!qa.query) {
      rec.prediction.text = qa.answer_text;
      records.push_back(std::move(rec));
      continue;
    }
    const LoadedLifelog& log = cache.get(qa.lifelog);
    std::vector<const Episode*> episodes;
    if (options.retrieval) {
      auto it = retrieved.find(qa.id);
      if (it == retrieved.end()) throw DataError("no retrieval output for question " + qa.id);
      for (const auto& id : it->second) {
        const Episode* e = log.store.find(id);
        if (!e) throw DataError("retrieval for " + qa.id + " names unknown episode " + id);
        episodes.push_back(e);
      }
    } else {
      episodes = oracle_retrieve(qa, log.store);
    }
    try {
      AnswerValue v = eval_query_over(episodes, *qa.query).answer;
      if (options.corrupt_counts && qa.kind == QuestionKind::count) {
        auto& n = std::get<Number>(v);
        std::int64_t one = 1;
        for (int i = 0; i < n.decimals; ++i) one *= 10;
        n.scaled += one;
      }
      rec.prediction = prediction_of(v);
    } catch (const QueryError&) {
      // Retrieved set too thin to answer (e.g. zero-shot sampling); no answer.
      rec.prediction.text.clear();
    }
    records.push_back(std::move(rec));
  }
  write_predictions(options.out, records);
  return records.size();
}

std::optional<EvalMode> parse_eval_mode(std::string_view s) {
  if (s == "atomic") return EvalMode::atomic;
  if (s == "multihop") return EvalMode::multihop;
  return std::nullopt;
}

EvaluateResult cmd_evaluate(const fs::path& qa_path, const fs::path& predictions_path, EvalMode mode) {
  const auto questions = read_qa_file(qa_path);
  const auto predictions = read_predictions(predictions_path);
  if (questions.empty()) throw ConfigError("question file " + qa_path.string() + " is empty");

  std::map<std::string, const Prediction*> by_id;
  std::vector<std::string> duplicates;
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.id, &p.prediction).second) duplicates.push_back(p.id);
  }
  std::set<std::string> question_ids;
  std::vector<std::string> missing;
  for (const auto& q : questions) {
    question_ids.insert(q.id);
    if (!by_id.count(q.id)) missing.push_back(q.id);
  }
  std::vector<std::string> extra;
  for (const auto& [id, _] : by_id) {
    if (!question_ids.count(id)) extra.push_back(id);
  }
  if (!missing.empty() || !extra.empty() || !duplicates.empty()) {
    std::string msg = "prediction ids do not align with questions";
    auto list = [&](const char* label, const std::vector<std::string>& ids) {
      if (ids.empty()) return;
      msg += std::string("\n  ") + label + " (" + std::to_string(ids.size()) + "):";
      for (const auto& id : ids) msg += " " + id;
    };
    list("missing predictions", missing);
    list("unknown ids", extra);
    list("duplicate ids", duplicates);
    throw ConfigError(msg);
  }

  EvaluateResult res;
  for (const auto& q : questions) {
    const Prediction& p = *by_id.at(q.id);
    QuestionResult r;
    r.id = q.id;
    r.kind = std::string(kind_name(q.kind));
    r.evidence_count = q.evidence.size();
    r.predicted = p.text;
    r.gold = q.answer_text;
    r.em = exact_match(p.text, q.answer_text);
    r.f1 = token_f1(p.text, q.answer_text);
    r.denotation_correct = denotation_match(p, q.answer);
    res.results.push_back(std::move(r));
  }
  if (mode == EvalMode::atomic) {
    const auto rep = atomic_report(res.results);
    res.text = rep.to_text();
    res.json = rep.to_json();
    res.score = rep.exact_match;
  } else {
    const auto rep = breakdown_report(res.results);
    res.text = rep.to_text();
    res.json = rep.to_json();
    res.score = rep.overall.accuracy();
  }
  return res;
}

StatsReport cmd_stats(const fs::path& corpus) {
  std::vector<fs::path> files;
  for (const auto& e : list_corpus(corpus)) files.push_back(e.lifelog);
  return dataset_stats(files);
}

}  // namespace lifelog
