#include "lifelog/store.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include "lifelog/error.hpp"
#include "lifelog/json_io.hpp"

namespace lifelog {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool icontains(std::string_view hay, std::string_view needle) {
  return lower(hay).find(lower(needle)) != std::string::npos;
}

}  // namespace

bool attribute_matches(const Episode& e, const AttributeFilter& f) {
  const auto it = e.attributes.find(f.name);
  if (it == e.attributes.end()) return false;
  const AttrValue& v = it->second;
  if (const auto* items = std::get_if<std::vector<std::string>>(&v)) {
    return std::any_of(items->begin(), items->end(), [&](const std::string& item) {
      return f.op == AttributeFilter::Op::equals ? item == f.value : icontains(item, f.value);
    });
  }
  const std::string text = to_text(v);
  return f.op == AttributeFilter::Op::equals ? text == f.value : icontains(text, f.value);
}

bool matches(const Episode& e, const EpisodeFilter& f) {
  if (!f.categories.empty() &&
      std::find(f.categories.begin(), f.categories.end(), e.category) == f.categories.end()) {
    return false;
  }
  if (f.window && !f.window->contains(e.start)) return false;
  for (const auto& p : f.participants) {
    if (std::find(e.participants.begin(), e.participants.end(), p) == e.participants.end()) return false;
  }
  if (f.location) {
    if (!e.location) return false;
    if (!icontains(e.location->place, *f.location) && !icontains(e.location->city, *f.location)) return false;
  }
  for (const auto& a : f.attributes) {
    if (!attribute_matches(e, a)) return false;
  }
  return true;
}

void EpisodeStore::insert(Episode e) {
  if (frozen_) throw DataError("insert into a frozen episode store");
  check_episode(e);
  if (by_id_.contains(e.id)) throw DataError("duplicate episode id " + e.id);
  by_id_.emplace(e.id, episodes_.size());
  episodes_.push_back(std::move(e));
}

void EpisodeStore::freeze() {
  if (frozen_) return;
  std::stable_sort(episodes_.begin(), episodes_.end(), chrono_less);
  by_id_.clear();
  for (std::size_t i = 0; i < episodes_.size(); ++i) index(i);
  for (const auto& e : episodes_) {
    if (e.parent_id && !by_id_.contains(*e.parent_id)) {
      throw DataError("episode " + e.id + " references missing parent " + *e.parent_id);
    }
  }
  frozen_ = true;
}

void EpisodeStore::index(std::size_t pos) {
  const Episode& e = episodes_[pos];
  by_id_[e.id] = pos;
  by_category_[static_cast<std::size_t>(e.category)].push_back(pos);
  for (std::int32_t d = e.start.serial(); d <= e.end.serial(); ++d) by_date_[d].push_back(pos);
  for (const auto& p : e.participants) by_participant_[p].push_back(pos);
  if (e.parent_id) by_parent_[*e.parent_id].push_back(pos);
}

std::vector<const Episode*> EpisodeStore::collect(const std::vector<std::size_t>& positions) const {
  std::vector<const Episode*> out;
  out.reserve(positions.size());
  for (const auto pos : positions) out.push_back(&episodes_[pos]);
  return out;
}

const Episode* EpisodeStore::find(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &episodes_[it->second];
}

std::vector<const Episode*> EpisodeStore::by_category(Category c) const {
  if (!frozen_) throw DataError("episode store is not frozen");
  return collect(by_category_[static_cast<std::size_t>(c)]);
}

std::vector<const Episode*> EpisodeStore::on_date(Date d) const {
  if (!frozen_) throw DataError("episode store is not frozen");
  const auto it = by_date_.find(d.serial());
  return it == by_date_.end() ? std::vector<const Episode*>{} : collect(it->second);
}

std::vector<const Episode*> EpisodeStore::by_participant(std::string_view name) const {
  if (!frozen_) throw DataError("episode store is not frozen");
  const auto it = by_participant_.find(std::string(name));
  return it == by_participant_.end() ? std::vector<const Episode*>{} : collect(it->second);
}

std::vector<const Episode*> EpisodeStore::children_of(std::string_view parent_id) const {
  if (!frozen_) throw DataError("episode store is not frozen");
  const auto it = by_parent_.find(std::string(parent_id));
  return it == by_parent_.end() ? std::vector<const Episode*>{} : collect(it->second);
}

std::vector<const Episode*> EpisodeStore::query(const EpisodeFilter& filter) const {
  if (filter.window && !filter.window->valid()) {
    throw QueryError(QueryError::Kind::malformed, "query window ends before it starts");
  }
  std::vector<const Episode*> out;
  if (!frozen_) {
    for (const auto& e : episodes_) {
      if (matches(e, filter)) out.push_back(&e);
    }
    return out;
  }

  // Pick the smallest candidate set any index offers, then filter linearly.
  std::vector<std::size_t> candidates;
  bool have = false;
  auto offer = [&](std::vector<std::size_t> set) {
    if (!have || set.size() < candidates.size()) {
      candidates = std::move(set);
      have = true;
    }
  };
  if (!filter.categories.empty()) {
    std::vector<std::size_t> set;
    for (const auto c : filter.categories) {
      const auto& list = by_category_[static_cast<std::size_t>(c)];
      set.insert(set.end(), list.begin(), list.end());
    }
    offer(std::move(set));
  }
  for (const auto& p : filter.participants) {
    const auto it = by_participant_.find(p);
    offer(it == by_participant_.end() ? std::vector<std::size_t>{} : it->second);
  }
  if (filter.window) {
    // Episodes are indexed on every day they cover; keep those starting
    // inside the window.
    std::vector<std::size_t> set;
    for (auto it = by_date_.lower_bound(filter.window->first.serial());
         it != by_date_.end() && it->first <= filter.window->last.serial(); ++it) {
      for (const auto pos : it->second) {
        if (episodes_[pos].start.serial() == it->first) set.push_back(pos);
      }
    }
    offer(std::move(set));
  }
  if (!have) {
    candidates.resize(episodes_.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i] = i;
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (const auto pos : candidates) {
    if (matches(episodes_[pos], filter)) out.push_back(&episodes_[pos]);
  }
  return out;
}

void EpisodeStore::write_jsonl(std::ostream& out) const {
  for (const auto& e : episodes_) out << episode_to_json(e).dump() << '\n';
}

EpisodeStore EpisodeStore::read_jsonl(std::istream& in, const std::string& source) {
  EpisodeStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Episode e;
    try {
      e = episode_from_json(Json::parse(line));
    } catch (const Json::exception& ex) {
      throw ParseError(source, line_no, ex.what());
    } catch (const DataError& ex) {
      throw ParseError(source, line_no, ex.what());
    }
    try {
      store.insert(std::move(e));
    } catch (const DataError& ex) {
      throw ParseError(source, line_no, ex.what());
    }
  }
  store.freeze();
  return store;
}

void EpisodeStore::save_jsonl(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_jsonl(out);
  if (!out) throw IoError("write failed: " + path.string());
}

EpisodeStore EpisodeStore::load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return read_jsonl(in, path.string());
}

EpisodeStore EpisodeStore::from_episodes(std::span<const Episode* const> episodes) {
  EpisodeStore store;
  for (const auto* e : episodes) {
    if (!store.by_id_.contains(e->id)) store.insert(*e);
  }
  // Sub-episodes may arrive without their parent; drop the dangling link
  // rather than reject the subset.
  for (auto& e : store.episodes_) {
    if (e.parent_id && !store.by_id_.contains(*e.parent_id)) e.parent_id.reset();
  }
  store.freeze();
  return store;
}

}  // namespace lifelog
