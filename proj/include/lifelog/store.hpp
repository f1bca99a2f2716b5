#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lifelog/category.hpp"
#include "lifelog/date.hpp"
#include "lifelog/episode.hpp"

namespace lifelog {

struct AttributeFilter {
  enum class Op { equals, contains };

  std::string name;
  Op op = Op::equals;
  std::string value;

  friend bool operator==(const AttributeFilter&, const AttributeFilter&) = default;
};

// Conjunction of optional conditions. An empty filter matches everything.
struct EpisodeFilter {
  std::vector<Category> categories;            // any of; empty = all
  std::optional<DateRange> window;             // on the start date, inclusive
  std::vector<std::string> participants;       // all must take part
  std::optional<std::string> location;         // case-insensitive substring of place or city
  std::vector<AttributeFilter> attributes;     // all must hold

  friend bool operator==(const EpisodeFilter&, const EpisodeFilter&) = default;
};

// Linear definition of filter semantics; the store's indexed query must
// agree with it.
bool matches(const Episode& e, const EpisodeFilter& f);
bool attribute_matches(const Episode& e, const AttributeFilter& f);

// Append-only collection of one lifelog's episodes. freeze() sorts the
// collection chronologically and builds the indexes; after that the store
// is read-only and safe to share between threads.
class EpisodeStore {
 public:
  EpisodeStore() = default;

  // Throws DataError on a duplicate id or an insert after freeze().
  void insert(Episode e);
  void freeze();
  bool frozen() const { return frozen_; }

  std::size_t size() const { return episodes_.size(); }
  bool empty() const { return episodes_.empty(); }
  // Chronological once frozen, insertion order before.
  std::span<const Episode> episodes() const { return episodes_; }

  const Episode* find(std::string_view id) const;
  std::vector<const Episode*> by_category(Category c) const;
  std::vector<const Episode*> on_date(Date d) const;
  std::vector<const Episode*> by_participant(std::string_view name) const;
  std::vector<const Episode*> children_of(std::string_view parent_id) const;

  // Episodes satisfying every condition, in chronological order. Throws
  // QueryError when the window is reversed.
  std::vector<const Episode*> query(const EpisodeFilter& filter) const;

  void write_jsonl(std::ostream& out) const;
  static EpisodeStore read_jsonl(std::istream& in, const std::string& source);
  void save_jsonl(const std::filesystem::path& path) const;
  static EpisodeStore load_jsonl(const std::filesystem::path& path);

  // Builds a frozen store holding copies of the given episodes.
  static EpisodeStore from_episodes(std::span<const Episode* const> episodes);

 private:
  std::vector<const Episode*> collect(const std::vector<std::size_t>& positions) const;
  void index(std::size_t pos);

  std::vector<Episode> episodes_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::vector<std::vector<std::size_t>> by_category_ = std::vector<std::vector<std::size_t>>(kCategoryCount);
  std::map<std::int32_t, std::vector<std::size_t>> by_date_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_participant_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_parent_;
  bool frozen_ = false;
};

}  // namespace lifelog
