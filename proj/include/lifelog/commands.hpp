#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lifelog/config.hpp"
#include "lifelog/eval.hpp"
#include "lifelog/pipeline.hpp"
#include "lifelog/qa.hpp"
#include "lifelog/resources.hpp"

// Subcommand bodies shared by the CLI, the acceptance binary and the
// Python module. Corpus layout:
//   <corpus>/lifelogs/<id>.jsonl, <id>.meta.json
//   <corpus>/qa/<id>.atomic.jsonl, <id>.complex.jsonl
//   <corpus>/qa/<split>.atomic.jsonl, <split>.complex.jsonl
//   <corpus>/splits.json
//   <corpus>/tables/<id>/<topic>.csv, <corpus>/tables/schema.json
namespace lifelog {

std::vector<QAPair> read_qa_file(const std::filesystem::path& path);
void write_qa_file(const std::filesystem::path& path, const std::vector<QAPair>& qa);

struct PredictionRecord {
  std::string id;
  Prediction prediction;
};

// JSONL {"id", "prediction"}: a string, a number, a boolean or an array of
// strings. Throws ConfigError for an empty file, ParseError for bad lines.
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);
void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRecord>& records);

std::vector<std::filesystem::path> cmd_generate(const GenConfig& config, int jobs);

struct GenQaOptions {
  std::filesystem::path corpus;
  int atomic_cap = 5000;
  int jobs = 1;
  // Defaults to the corpus seed recorded in the manifests.
  std::optional<std::uint64_t> split_seed;
};

struct GenQaSummary {
  std::size_t lifelogs = 0;
  std::size_t atomic = 0;
  std::size_t complex = 0;
  Splits splits;
};

GenQaSummary cmd_gen_qa(const GenQaOptions& options, const Resources& resources);

// Writes <corpus>/splits.json.
Splits cmd_split(const std::filesystem::path& corpus, std::optional<std::uint64_t> seed);

// Returns the number of tables written.
std::size_t cmd_build_tables(const std::filesystem::path& corpus, const Resources& resources, int jobs);

enum class RetrieveMode { oracle, zeroshot, external };
std::optional<RetrieveMode> parse_retrieve_mode(std::string_view s);

struct RetrieveOptions {
  std::filesystem::path corpus;
  std::filesystem::path qa;
  std::filesystem::path out;
  RetrieveMode mode = RetrieveMode::oracle;
  std::size_t budget = 1024;
  std::string command;  // external mode
};

struct RetrieveSummary {
  std::size_t questions = 0;
  std::size_t truncated = 0;
  std::size_t unrecognized = 0;
  double truncated_fraction() const;
};

// JSONL {"id", "episodes", "candidate_count", "candidate_tokens",
// "truncated", "diagnostic"} per question.
RetrieveSummary cmd_retrieve(const RetrieveOptions& options, const Resources& resources);

struct PredictOptions {
  std::filesystem::path corpus;
  std::filesystem::path qa;
  std::filesystem::path out;
  // Retrieval output to read from; oracle evidence when absent.
  std::optional<std::filesystem::path> retrieval;
  // Adds one to every count answer; a sanity check for the scorer.
  bool corrupt_counts = false;
};

// Reference reader: executes each question's query over its retrieved
// episodes. Questions without a query (atomic) replay the gold sentence.
std::size_t cmd_predict(const PredictOptions& options);

enum class EvalMode { atomic, multihop };
std::optional<EvalMode> parse_eval_mode(std::string_view s);

struct EvaluateResult {
  std::vector<QuestionResult> results;
  std::string text;
  std::string json;
  double score = 0;  // EM (atomic) or denotation accuracy (multihop), percent
};

// Throws ConfigError listing every id missing on either side.
EvaluateResult cmd_evaluate(const std::filesystem::path& qa, const std::filesystem::path& predictions, EvalMode mode);

StatsReport cmd_stats(const std::filesystem::path& corpus);

}  // namespace lifelog
