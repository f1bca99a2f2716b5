#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lifelog/config.hpp"
#include "lifelog/episode.hpp"
#include "lifelog/pipeline.hpp"
#include "lifelog/resources.hpp"

namespace testing {

inline lifelog::Date day(int y, unsigned m, unsigned d) { return lifelog::Date::from_ymd(y, m, d); }

inline lifelog::Episode episode(std::string id, lifelog::Category c, lifelog::Date start, lifelog::AttrMap attrs = {},
                                std::vector<std::string> people = {}) {
  lifelog::Episode e;
  e.id = std::move(id);
  e.category = c;
  e.start = start;
  e.end = start;
  e.attributes = std::move(attrs);
  e.participants = std::move(people);
  return e;
}

inline lifelog::GenConfig config(std::uint64_t seed, int duration = 5,
                                 lifelog::Density density = lifelog::Density::medium, int n = 1) {
  lifelog::GenConfig c = lifelog::default_config();
  c.seed = seed;
  c.duration = duration;
  c.density = density;
  c.num_lifelogs = n;
  return c;
}

inline lifelog::LoadedLifelog loaded(const lifelog::Lifelog& log) {
  lifelog::LoadedLifelog l;
  l.id = log.id;
  l.seed = log.seed;
  l.store = log.store;
  l.window = log.window;
  return l;
}

// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);
// Relative path -> contents of every regular file under `root`.
std::vector<std::pair<std::string, std::string>> snapshot(const std::filesystem::path& root);

}  // namespace testing
