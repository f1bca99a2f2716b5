#include "lifelog/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "lifelog/error.hpp"
#include "lifelog/json_io.hpp"
#include "lifelog/rng.hpp"
#include "lifelog/timeline.hpp"

namespace lifelog {

namespace {

namespace fs = std::filesystem;

// Sub-streams of a lifelog seed.
constexpr std::uint64_t kPersonaStream = 1;
constexpr std::uint64_t kTimelineStream = 2;
constexpr std::uint64_t kQaStream = 3;
constexpr std::uint64_t kAtomicStream = 1;
constexpr std::uint64_t kComplexStream = 2;

// Complex instances drawn per catalog template, and the per-lifelog target
// the instantiated set is sampled down to.
constexpr std::size_t kPerTemplate = 1;
constexpr std::size_t kComplexTarget = 35;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("write failed for " + p.string());
}

Date parse_manifest_date(const Json& j, const char* key, const fs::path& source) {
  if (!j.contains(key) || !j[key].is_string()) throw DataError(source.string() + ": manifest lacks window." + key);
  const auto d = Date::parse_iso(j[key].get<std::string>());
  if (!d) throw DataError(source.string() + ": bad date in window." + key);
  return *d;
}

}  // namespace

std::string lifelog_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "L%04zu", index);
  return buf;
}

std::uint64_t lifelog_seed(std::uint64_t global_seed, std::size_t index) { return derive_seed(global_seed, index); }

std::uint64_t qa_seed(std::uint64_t seed) { return derive_seed(seed, kQaStream); }

Lifelog generate_one(const GenConfig& config, const Resources& resources, std::size_t index) {
  Lifelog log;
  log.id = lifelog_id(index);
  log.seed = lifelog_seed(config.seed, index);
  Rng persona_rng(derive_seed(log.seed, kPersonaStream));
  log.persona = generate_persona(config, resources, persona_rng);
  Rng timeline_rng(derive_seed(log.seed, kTimelineStream));
  log.store = generate_lifelog(log.persona, config, resources, timeline_rng);
  const DateRange w = generation_window(config);
  log.window = {std::max(w.first, log.persona.birthdate.plus_years(18)), w.last};
  return log;
}

std::string manifest_text(const Lifelog& log, const GenConfig& config) {
  Json j;
  j["id"] = log.id;
  j["persona"] = persona_to_json(log.persona);
  Json m;
  m["seed"] = log.seed;
  m["global_seed"] = config.seed;
  m["config_hash"] = config_hash(config);
  m["tool_version"] = kToolVersion;
  m["schema_version"] = kSchemaVersion;
  m["density"] = std::string(density_name(config.density));
  m["year"] = config.year;
  m["duration"] = config.duration;
  m["window"] = {{"first", log.window.first.iso()}, {"last", log.window.last.iso()}};
  m["episodes"] = log.store.size();
  j["manifest"] = std::move(m);
  return j.dump(2) + "\n";
}

std::vector<fs::path> write_corpus(const GenConfig& config, const Resources& resources, int jobs) {
  validate_config(config);
  const fs::path dir = config.output_dir / "lifelogs";
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const auto n = static_cast<std::size_t>(config.num_lifelogs);
  std::vector<fs::path> written(n);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  std::size_t first_error_index = n;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        const Lifelog log = generate_one(config, resources, i);
        const fs::path jsonl = dir / (log.id + ".jsonl");
        log.store.save_jsonl(jsonl);
        write_file(dir / (log.id + ".meta.json"), manifest_text(log, config));
        written[i] = jsonl;
      } catch (...) {
        // Report the lowest failing index so errors do not depend on scheduling.
        std::lock_guard lock(err_mu);
        if (i < first_error_index) {
          first_error_index = i;
          first_error = std::current_exception();
        }
      }
    }
  };

  const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return written;
}

std::vector<CorpusEntry> list_corpus(const fs::path& dir) {
  const fs::path logs = dir / "lifelogs";
  if (!fs::is_directory(logs)) throw IoError("no lifelogs directory under " + dir.string());
  std::vector<CorpusEntry> out;
  for (const auto& ent : fs::directory_iterator(logs)) {
    const auto& p = ent.path();
    if (p.extension() != ".jsonl") continue;
    CorpusEntry e;
    e.id = p.stem().string();
    e.lifelog = p;
    e.manifest = logs / (e.id + ".meta.json");
    if (!fs::exists(e.manifest)) throw IoError("missing manifest " + e.manifest.string());
    out.push_back(std::move(e));
  }
  if (out.empty()) throw IoError("no lifelogs found under " + logs.string());
  std::sort(out.begin(), out.end(), [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
  return out;
}

LoadedLifelog load_lifelog(const CorpusEntry& entry) {
  LoadedLifelog log;
  log.id = entry.id;
  Json meta;
  try {
    meta = Json::parse(read_file(entry.manifest));
  } catch (const Json::parse_error& e) {
    throw ParseError(entry.manifest.string(), 0, e.what());
  }
  if (!meta.contains("manifest") || !meta["manifest"].is_object()) {
    throw DataError(entry.manifest.string() + ": missing manifest object");
  }
  const Json& m = meta["manifest"];
  if (!m.contains("seed") || !m["seed"].is_number_unsigned()) throw DataError(entry.manifest.string() + ": bad seed");
  log.seed = m["seed"].get<std::uint64_t>();
  if (!m.contains("window") || !m["window"].is_object()) throw DataError(entry.manifest.string() + ": missing window");
  log.window = {parse_manifest_date(m["window"], "first", entry.manifest),
                parse_manifest_date(m["window"], "last", entry.manifest)};
  log.store = EpisodeStore::load_jsonl(entry.lifelog);
  return log;
}

std::string Splits::split_of(const std::string& id) const {
  auto has = [&](const std::vector<std::string>& v) { return std::find(v.begin(), v.end(), id) != v.end(); };
  if (has(train)) return "train";
  if (has(valid)) return "valid";
  if (has(test)) return "test";
  return {};
}

Splits make_splits(std::vector<std::string> ids, std::uint64_t seed) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  Rng rng(derive_seed(seed, fnv1a64("splits")));
  rng.shuffle(ids);
  const std::size_t quarter = ids.size() / 4;
  Splits s;
  s.valid.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(quarter));
  s.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(quarter), ids.begin() + static_cast<std::ptrdiff_t>(2 * quarter));
  s.train.assign(ids.begin() + static_cast<std::ptrdiff_t>(2 * quarter), ids.end());
  for (auto* v : {&s.train, &s.valid, &s.test}) std::sort(v->begin(), v->end());
  return s;
}

std::string splits_json(const Splits& s) {
  Json j{{"train", s.train}, {"valid", s.valid}, {"test", s.test}};
  return j.dump(2) + "\n";
}

Splits parse_splits(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("splits", 0, e.what());
  }
  Splits s;
  auto read = [&](const char* key, std::vector<std::string>& out) {
    if (!j.contains(key) || !j[key].is_array()) throw DataError(std::string("splits lack array '") + key + "'");
    for (const auto& v : j[key]) {
      if (!v.is_string()) throw DataError(std::string("non-string id in split '") + key + "'");
      out.push_back(v.get<std::string>());
    }
  };
  read("train", s.train);
  read("valid", s.valid);
  read("test", s.test);
  return s;
}

LifelogQA generate_qa(const LoadedLifelog& log, const Vocabulary& vocabulary, int atomic_cap) {
  LifelogQA out;
  const std::uint64_t qs = qa_seed(log.seed);

  Rng atomic_rng(derive_seed(qs, kAtomicStream));
  std::vector<QAPair> all;
  for (const auto& e : log.store.episodes()) {
    for (auto& qa : gen_atomic_qa(e, atomic_rng)) all.push_back(std::move(qa));
  }
  const auto cap = static_cast<std::size_t>(std::max(atomic_cap, 0));
  if (all.size() > cap) {
    Rng pick(derive_seed(qs, kAtomicStream + 100));
    for (const std::size_t i : pick.sample_indices(all.size(), cap)) out.atomic.push_back(std::move(all[i]));
  } else {
    out.atomic = std::move(all);
  }
  for (std::size_t i = 0; i < out.atomic.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "a%06zu", i);
    out.atomic[i].id = log.id + "." + buf;
    out.atomic[i].lifelog = log.id;
  }

  Rng complex_rng(derive_seed(qs, kComplexStream));
  const CatalogContext ctx{log.store, log.window, vocabulary};
  static const std::vector<ComplexTemplate> catalog = default_catalog();
  auto complex = gen_complex_qa(ctx, catalog, complex_rng, kPerTemplate);
  if (complex.size() > kComplexTarget) {
    for (const std::size_t i : complex_rng.sample_indices(complex.size(), kComplexTarget)) {
      out.complex.push_back(std::move(complex[i]));
    }
  } else {
    out.complex = std::move(complex);
  }
  for (std::size_t i = 0; i < out.complex.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "c%04zu", i);
    out.complex[i].id = log.id + "." + buf;
    out.complex[i].lifelog = log.id;
  }
  return out;
}

}  // namespace lifelog
