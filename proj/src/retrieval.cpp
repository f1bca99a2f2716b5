#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <csignal>
#include <cstring>

#include "lifelog/extraction.hpp"
#include "lifelog/qa.hpp"
#include "lifelog/rng.hpp"

namespace lifelog {

namespace {

void sort_chrono(std::vector<const Episode*>& v) {
  std::stable_sort(v.begin(), v.end(), [](const Episode* a, const Episode* b) { return chrono_less(*a, *b); });
}

void write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw RetrievalFailure(std::string("writing to retriever: ") + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

std::size_t serialized_tokens(std::span<const Episode* const> episodes) {
  std::size_t total = 0;
  for (const auto* e : episodes) total += entry_tokens(*e);
  return total;
}

std::vector<const Episode*> oracle_retrieve(const QAPair& qa, const EpisodeStore& store) {
  std::vector<const Episode*> out;
  out.reserve(qa.evidence.size());
  for (const auto& id : qa.evidence) {
    const Episode* e = store.find(id);
    if (e == nullptr) throw DataError("question " + qa.id + " cites missing episode " + id);
    out.push_back(e);
  }
  sort_chrono(out);
  return out;
}

std::set<Category> detect_topic(std::string_view question, const ExtractionConfig& config) {
  std::string q(question);
  for (auto& c : q) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::set<Category> out;
  for (const auto& [kw, cats] : config.keywords) {
    if (q.find(kw) != std::string::npos) out.insert(cats.begin(), cats.end());
  }
  return out;
}

RetrievalResult zs_retrieve(std::string_view question, const EpisodeStore& store, std::size_t token_budget,
                            const ExtractionConfig& config, const PatternRegistry& patterns, std::uint64_t seed) {
  if (token_budget == 0) throw ConfigError("token budget must be > 0");
  RetrievalResult r;
  const auto cats = detect_topic(question, config);
  if (cats.empty()) {
    r.diagnostic = "unrecognized topic";
    return r;
  }
  EpisodeFilter f;
  f.categories.assign(cats.begin(), cats.end());
  std::vector<const Episode*> candidates;
  for (const auto* e : store.query(f)) {
    // Pattern gate: only entries a registered pattern parses are candidates.
    const auto& list = patterns.for_category(e->category);
    if (std::any_of(list.begin(), list.end(), [&](const ExtractionPattern& p) { return p.match(e->text).has_value(); })) {
      candidates.push_back(e);
    }
  }
  r.candidate_count = candidates.size();
  r.candidate_tokens = serialized_tokens(candidates);
  if (r.candidate_tokens <= token_budget) {
    r.episodes = std::move(candidates);
    return r;
  }
  r.truncated = true;
  Rng rng(derive_seed(seed, fnv1a64(question)));
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::size_t used = 0;
  std::vector<std::size_t> keep;
  for (const auto i : order) {
    const std::size_t t = entry_tokens(*candidates[i]);
    if (used + t > token_budget) break;
    used += t;
    keep.push_back(i);
  }
  std::sort(keep.begin(), keep.end());
  for (const auto i : keep) r.episodes.push_back(candidates[i]);
  return r;
}

RetrievalResult OracleRetriever::retrieve(const QAPair& qa, const EpisodeStore& store) {
  RetrievalResult r;
  r.episodes = oracle_retrieve(qa, store);
  r.candidate_count = r.episodes.size();
  r.candidate_tokens = serialized_tokens(r.episodes);
  return r;
}

RetrievalResult ZeroShotRetriever::retrieve(const QAPair& qa, const EpisodeStore& store) {
  return zs_retrieve(qa.question, store, budget_, config_, patterns_, seed_);
}

RetrievalResult ExternalRetriever::retrieve(const QAPair& qa, const EpisodeStore& store) {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe(in_pipe) != 0) throw RetrievalFailure("pipe failed");
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw RetrievalFailure("pipe failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw RetrievalFailure("fork failed");
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  std::string output;
  std::string failure;
  // A child that exits without reading its input must not kill us.
  const auto old = std::signal(SIGPIPE, SIG_IGN);
  try {
    write_all(in_pipe[1], qa.question + "\n" + store_path_.string() + "\n");
  } catch (const RetrievalFailure& e) {
    failure = e.what();
  }
  ::close(in_pipe[1]);
  char buf[4096];
  while (true) {
    const ssize_t n = ::read(out_pipe[0], buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  ::close(out_pipe[0]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  std::signal(SIGPIPE, old);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw RetrievalFailure("retriever '" + command_ + "' failed with status " +
                           std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));
  }
  if (!failure.empty()) throw RetrievalFailure(failure);

  RetrievalResult r;
  std::set<std::string> seen;
  std::size_t start = 0;
  while (start < output.size()) {
    auto end = output.find('\n', start);
    if (end == std::string::npos) end = output.size();
    std::string id = output.substr(start, end - start);
    start = end + 1;
    if (!id.empty() && id.back() == '\r') id.pop_back();
    if (id.empty()) continue;
    const Episode* e = store.find(id);
    if (e == nullptr) throw RetrievalFailure("retriever returned unknown episode id '" + id + "'");
    if (seen.insert(id).second) r.episodes.push_back(e);
  }
  sort_chrono(r.episodes);
  r.candidate_count = r.episodes.size();
  r.candidate_tokens = serialized_tokens(r.episodes);
  return r;
}

}  // namespace lifelog
