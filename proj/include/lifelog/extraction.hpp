#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lifelog/attr.hpp"
#include "lifelog/category.hpp"
#include "lifelog/episode.hpp"
#include "lifelog/error.hpp"
#include "lifelog/store.hpp"
#include "lifelog/template.hpp"

namespace lifelog {

struct QAPair;

// Inverse of a Template: literal text with typed capture slots. Captures
// are validated by type (digits, YYYY/MM/DD, name lists, closed choices)
// and the first full parse in shortest-capture order wins.
class ExtractionPattern {
 public:
  static ExtractionPattern from_template(const Template& t);

  const std::string& template_id() const { return template_id_; }
  Category category() const { return category_; }
  std::size_t literal_length() const { return literal_length_; }
  std::size_t slot_count() const;

  std::optional<SlotMap> match(std::string_view text) const;

 private:
  struct Part {
    bool is_slot = false;
    std::string text;  // literal, or slot name
    FieldType type = FieldType::text;
  };

  bool match_from(std::string_view text, std::size_t part, std::size_t pos, SlotMap& out) const;

  std::string template_id_;
  Category category_ = Category::breakfast;
  std::vector<Part> parts_;
  std::size_t literal_length_ = 0;
};

// All inverse patterns of a template bank, grouped by category. When
// several patterns of a category parse a text, the one with the most
// literal text wins, then the one with more slots.
class PatternRegistry {
 public:
  static PatternRegistry from_bank(const TemplateBank& bank);

  const std::vector<ExtractionPattern>& for_category(Category c) const { return by_category_[static_cast<std::size_t>(c)]; }
  bool has(Category c) const { return !for_category(c).empty(); }

 private:
  std::vector<std::vector<ExtractionPattern>> by_category_ = std::vector<std::vector<ExtractionPattern>>(kCategoryCount);
};

// No registered pattern of the category parses the text: the text was not
// produced by the paired template bank.
class ExtractionError : public DataError {
 public:
  using DataError::DataError;
};

struct ExtractedRecord {
  Category category = Category::breakfast;
  std::string template_id;
  SlotMap fields;
};

ExtractedRecord extract_record(std::string_view text, Category category, const PatternRegistry& patterns);

// ---- tables ----

enum class ColumnType { date, text, integer, real, list };

std::string_view column_type_name(ColumnType t);

struct Column {
  std::string name;
  ColumnType type = ColumnType::text;
  // Slot name to read, "date" for the episode date, or "category".
  std::string source;
  // Used when a category does not carry `source`.
  std::optional<std::string> fallback;
};

struct TopicSchema {
  std::string name;
  std::vector<Category> categories;
  std::vector<Column> columns;

  // Throws ConfigError ("schema conflict") when a category lacks a column's
  // source without a fallback, or the source's type does not fit the column.
  void validate() const;
};

using Cell = std::variant<std::monostate, std::int64_t, double, std::string, std::vector<std::string>, Date>;

std::string cell_text(const Cell& c);

struct Table {
  std::string name;
  std::vector<Column> schema;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> episode_ids;  // source episode per row

  // Throws DataError if a row's arity or a cell's type disagrees with the schema.
  void check() const;
  void write_csv(std::ostream& out) const;
  std::string schema_json() const;
};

struct ExtractionConfig {
  std::vector<TopicSchema> topics;
  // Lower-case keyword -> categories it refers to, in file order.
  std::vector<std::pair<std::string, std::vector<Category>>> keywords;

  static ExtractionConfig parse(std::string_view json_text, const std::string& source);
  static const ExtractionConfig& defaults();
  const TopicSchema* topic(std::string_view name) const;
  const TopicSchema* topic_of(Category c) const;
};

// One row per matching episode, chronological; each row is the extracted
// record projected onto the topic's columns.
Table build_table(const EpisodeStore& store, const TopicSchema& topic, const PatternRegistry& patterns);

// ---- retrieval ----

struct RetrievalResult {
  std::vector<const Episode*> episodes;  // chronological
  std::size_t candidate_count = 0;
  std::size_t candidate_tokens = 0;      // serialized size before sampling
  bool truncated = false;                // candidates exceeded the budget
  std::string diagnostic;
};

// Exactly the evidence episodes. Throws DataError on a dangling id.
std::vector<const Episode*> oracle_retrieve(const QAPair& qa, const EpisodeStore& store);

std::set<Category> detect_topic(std::string_view question, const ExtractionConfig& config);

// Episodes of the question's detected categories that a pattern parses; if
// their serialized size exceeds `token_budget`, a seeded uniform sample
// that fits. Unrecognized topic: empty result with a diagnostic.
RetrievalResult zs_retrieve(std::string_view question, const EpisodeStore& store, std::size_t token_budget,
                            const ExtractionConfig& config, const PatternRegistry& patterns, std::uint64_t seed);

// Size of an episode list as retriever input (whitespace tokens of the
// entry lines).
std::size_t serialized_tokens(std::span<const Episode* const> episodes);

class Retriever {
 public:
  virtual ~Retriever() = default;
  // Implementations must return episodes of `store`.
  virtual RetrievalResult retrieve(const QAPair& qa, const EpisodeStore& store) = 0;
};

class OracleRetriever final : public Retriever {
 public:
  RetrievalResult retrieve(const QAPair& qa, const EpisodeStore& store) override;
};

class ZeroShotRetriever final : public Retriever {
 public:
  ZeroShotRetriever(std::size_t token_budget, std::uint64_t seed, const ExtractionConfig& config,
                    const PatternRegistry& patterns)
      : budget_(token_budget), seed_(seed), config_(config), patterns_(patterns) {}

  RetrievalResult retrieve(const QAPair& qa, const EpisodeStore& store) override;

 private:
  std::size_t budget_;
  std::uint64_t seed_;
  const ExtractionConfig& config_;
  const PatternRegistry& patterns_;
};

// Raised for any failure of an external retriever.
class RetrievalFailure : public Error {
 public:
  using Error::Error;
};

// Runs an external program per question. Protocol: the program receives
// two lines on stdin, the question and the lifelog JSONL path, and prints
// one episode id per line on stdout. A non-zero exit status or an id not
// in the store is a RetrievalFailure.
class ExternalRetriever final : public Retriever {
 public:
  ExternalRetriever(std::string command, std::filesystem::path store_path)
      : command_(std::move(command)), store_path_(std::move(store_path)) {}

  RetrievalResult retrieve(const QAPair& qa, const EpisodeStore& store) override;

 private:
  std::string command_;
  std::filesystem::path store_path_;
};

}  // namespace lifelog
