#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lifelog/query.hpp"

namespace lifelog {

// Lower-cases, strips punctuation, drops the articles a/an/the and splits
// on whitespace.
std::vector<std::string> normalize(std::string_view text);

bool exact_match(std::string_view predicted, std::string_view gold);
// Harmonic mean of multiset token precision and recall over normalized
// tokens. Both empty: 1. Exactly one empty: 0.
double token_f1(std::string_view predicted, std::string_view gold);

// A system's answer: free text, or a list of values when the prediction
// was given as a JSON array.
struct Prediction {
  std::string text;
  std::vector<std::string> items;
  bool is_list = false;
};

// Compares a prediction with a gold value under normalization: numbers
// after rounding the prediction to the gold's decimal places, dates in
// any of YYYY/MM/DD, YYYY-MM-DD, lists as sets, booleans as yes/no/true/false.
bool denotation_match(const Prediction& predicted, const AnswerValue& gold);
// Fraction correct. Throws ConfigError when the lengths differ.
double denotation_accuracy(std::span<const Prediction> predicted, std::span<const AnswerValue> gold);

struct QuestionResult {
  std::string id;
  std::string kind;
  std::size_t evidence_count = 0;
  std::string predicted;
  std::string gold;
  bool em = false;
  double f1 = 0.0;
  bool denotation_correct = false;
};

struct Slice {
  std::string label;
  std::size_t total = 0;
  std::size_t correct = 0;

  // Percent, 0 when the slice is empty.
  double accuracy() const;
};

// Evidence-count buckets: [0, 10], (10, 100], (100, 1000], >1000.
std::string_view evidence_bucket(std::size_t evidence_count);

struct BreakdownReport {
  Slice overall;
  std::vector<Slice> by_kind;      // average, count, argmax, list, then any other kind seen
  std::vector<Slice> by_evidence;  // the four buckets, in order

  std::string to_text() const;
  std::string to_json() const;
};

// Accuracy is denotation correctness.
BreakdownReport breakdown_report(std::span<const QuestionResult> results);

struct AtomicReport {
  std::size_t total = 0;
  double exact_match = 0.0;  // percent
  double f1 = 0.0;           // percent

  std::string to_text() const;
  std::string to_json() const;
};

AtomicReport atomic_report(std::span<const QuestionResult> results);

struct CategoryStats {
  std::size_t entries = 0;
  std::size_t tokens = 0;

  double mean_tokens() const { return entries == 0 ? 0.0 : static_cast<double>(tokens) / static_cast<double>(entries); }
};

struct LifelogStats {
  std::string name;
  std::size_t entries = 0;
  std::size_t tokens = 0;
};

struct StatsReport {
  std::size_t logs = 0;
  std::size_t entries = 0;
  std::size_t tokens = 0;
  std::map<std::string, CategoryStats> per_category;
  std::vector<LifelogStats> per_lifelog;

  double mean_tokens() const { return entries == 0 ? 0.0 : static_cast<double>(tokens) / static_cast<double>(entries); }
  std::string to_text() const;
  std::string to_json() const;
};

// Tokens are whitespace-separated words of an episode's text.
StatsReport dataset_stats(std::span<const std::filesystem::path> lifelog_files);

}  // namespace lifelog
