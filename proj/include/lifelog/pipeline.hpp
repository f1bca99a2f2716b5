#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lifelog/config.hpp"
#include "lifelog/persona.hpp"
#include "lifelog/qa.hpp"
#include "lifelog/resources.hpp"
#include "lifelog/store.hpp"

namespace lifelog {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct Lifelog {
  std::string id;
  std::uint64_t seed = 0;
  Persona persona;
  EpisodeStore store;
  DateRange window;
};

std::string lifelog_id(std::size_t index);
// Stable hash of (global seed, index).
std::uint64_t lifelog_seed(std::uint64_t global_seed, std::size_t index);

// Persona and lifelog for one corpus index; independent of every other index.
Lifelog generate_one(const GenConfig& config, const Resources& resources, std::size_t index);

// Sidecar JSON: persona plus manifest (seed, config hash, tool and schema
// versions, window).
std::string manifest_text(const Lifelog& log, const GenConfig& config);

// Writes lifelogs/<id>.jsonl and lifelogs/<id>.meta.json for every index
// under config.output_dir, using up to `jobs` threads. Output does not
// depend on `jobs`.
std::vector<std::filesystem::path> write_corpus(const GenConfig& config, const Resources& resources, int jobs);

struct CorpusEntry {
  std::string id;
  std::filesystem::path lifelog;
  std::filesystem::path manifest;
};

// Lifelogs present under <dir>/lifelogs, sorted by id. Throws IoError when
// the directory is missing or empty.
std::vector<CorpusEntry> list_corpus(const std::filesystem::path& dir);

struct LoadedLifelog {
  std::string id;
  std::uint64_t seed = 0;
  EpisodeStore store;
  DateRange window;
};

LoadedLifelog load_lifelog(const CorpusEntry& entry);

struct Splits {
  std::vector<std::string> train;
  std::vector<std::string> valid;
  std::vector<std::string> test;

  std::string split_of(const std::string& id) const;
};

// 2:1:1 by lifelog: valid and test get floor(n/4) each, train the rest,
// after a seeded shuffle.
Splits make_splits(std::vector<std::string> ids, std::uint64_t seed);
std::string splits_json(const Splits& s);
Splits parse_splits(const std::string& json_text);

struct LifelogQA {
  std::vector<QAPair> atomic;
  std::vector<QAPair> complex;
};

// Atomic QA over every episode, sampled down to `atomic_cap` and kept in
// episode order, plus the complex catalog instantiated on the store.
LifelogQA generate_qa(const LoadedLifelog& log, const Vocabulary& vocabulary, int atomic_cap);

// The QA seed stream of a lifelog.
std::uint64_t qa_seed(std::uint64_t lifelog_seed);

}  // namespace lifelog
