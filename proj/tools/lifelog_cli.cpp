#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lifelog/commands.hpp"
#include "lifelog/error.hpp"
#include "lifelog/extraction.hpp"

namespace fs = std::filesystem;
using namespace lifelog;

namespace {

enum Exit { kOk = 0, kValidation = 1, kIo = 2, kData = 3 };

void write_or_print(const std::optional<fs::path>& out, const std::string& text) {
  if (!out) {
    std::cout << text;
    return;
  }
  std::ofstream f(*out, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + out->string());
  f << text;
}

// Flag values sit under the config file: a --config file overrides them.
struct GenerateFlags {
  std::optional<fs::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> year;
  std::optional<int> duration;
  std::optional<std::string> density;
  std::optional<int> num_lifelogs;
  std::optional<fs::path> output_dir;
  std::optional<int> atomic_cap;
  int jobs = 1;

  GenConfig resolve() const {
    GenConfig c = default_config();
    if (seed) c.seed = *seed;
    if (year) c.year = *year;
    if (duration) c.duration = *duration;
    if (density) {
      const auto d = parse_density(*density);
      if (!d) throw ConfigError("unknown density '" + *density + "' (sparse, medium, dense)");
      c.density = *d;
    }
    if (num_lifelogs) c.num_lifelogs = *num_lifelogs;
    if (output_dir) c.output_dir = *output_dir;
    if (atomic_cap) c.atomic_cap = *atomic_cap;
    if (config) c = load_config(*config, c);
    validate_config(c);
    return c;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"Synthetic lifelog benchmark: generation, QA, tables, retrieval, scoring"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // generate
  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "Generate lifelogs and persona manifests");
  generate->add_option("-c,--config", gen.config, "JSON config file (overrides flags)")->check(CLI::ExistingFile);
  generate->add_option("--seed", gen.seed, "Global seed");
  generate->add_option("--year", gen.year, "Reference year; episodes end Dec 31 of the previous year");
  generate->add_option("--duration", gen.duration, "Years of episodes");
  generate->add_option("--density", gen.density, "sparse, medium or dense");
  generate->add_option("-n,--num-lifelogs", gen.num_lifelogs, "Number of lifelogs");
  generate->add_option("-o,--out", gen.output_dir, "Corpus directory");
  generate->add_option("-j,--jobs", gen.jobs, "Worker threads");

  // gen-qa
  GenQaOptions qa_opts;
  std::optional<fs::path> qa_config;
  std::optional<std::uint64_t> qa_split_seed;
  auto* gen_qa = app.add_subcommand("gen-qa", "Emit atomic and complex QA plus train/valid/test splits");
  gen_qa->add_option("corpus", qa_opts.corpus, "Corpus directory")->required();
  gen_qa->add_option("--atomic-cap", qa_opts.atomic_cap, "Atomic questions kept per lifelog")->capture_default_str();
  gen_qa->add_option("--split-seed", qa_split_seed, "Split seed (default: corpus seed)");
  gen_qa->add_option("-c,--config", qa_config, "Config naming resource overrides")->check(CLI::ExistingFile);
  gen_qa->add_option("-j,--jobs", qa_opts.jobs, "Worker threads");

  // split
  fs::path split_corpus;
  std::optional<std::uint64_t> split_seed;
  auto* split = app.add_subcommand("split", "Write splits.json (2:1:1 by lifelog)");
  split->add_option("corpus", split_corpus, "Corpus directory")->required();
  split->add_option("--seed", split_seed, "Split seed (default: corpus seed)");

  // build-tables
  fs::path tables_corpus;
  std::optional<fs::path> tables_config;
  int tables_jobs = 1;
  auto* tables = app.add_subcommand("build-tables", "Extract per-topic CSV tables from every lifelog");
  tables->add_option("corpus", tables_corpus, "Corpus directory")->required();
  tables->add_option("-c,--config", tables_config, "Config naming resource overrides")->check(CLI::ExistingFile);
  tables->add_option("-j,--jobs", tables_jobs, "Worker threads");

  // retrieve
  RetrieveOptions ret;
  std::string ret_mode = "oracle";
  auto* retrieve = app.add_subcommand("retrieve", "Retrieve evidence for each question");
  retrieve->add_option("corpus", ret.corpus, "Corpus directory")->required();
  retrieve->add_option("--qa", ret.qa, "QA JSONL file")->required()->check(CLI::ExistingFile);
  retrieve->add_option("-o,--out", ret.out, "Output JSONL")->required();
  retrieve->add_option("--mode", ret_mode, "oracle, zeroshot or external")->capture_default_str();
  retrieve->add_option("--budget", ret.budget, "Token budget (zeroshot)")->capture_default_str();
  retrieve->add_option("--command", ret.command, "Retriever command (external)");

  // predict
  PredictOptions pred;
  std::optional<fs::path> pred_retrieval;
  auto* predict = app.add_subcommand("predict", "Reference reader: run each question's query over its evidence");
  predict->add_option("corpus", pred.corpus, "Corpus directory")->required();
  predict->add_option("--qa", pred.qa, "QA JSONL file")->required()->check(CLI::ExistingFile);
  predict->add_option("-o,--out", pred.out, "Predictions JSONL")->required();
  predict->add_option("--retrieval", pred_retrieval, "Retrieval output (default: oracle evidence)")
      ->check(CLI::ExistingFile);
  predict->add_flag("--corrupt-counts", pred.corrupt_counts, "Add one to count answers (scorer sanity check)");

  // evaluate
  fs::path eval_qa;
  fs::path eval_pred;
  std::string eval_mode = "multihop";
  bool eval_json = false;
  std::optional<fs::path> eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions");
  evaluate->add_option("--qa", eval_qa, "QA JSONL file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--predictions", eval_pred, "Predictions JSONL")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--mode", eval_mode, "atomic or multihop")->capture_default_str();
  evaluate->add_flag("--json", eval_json, "Print JSON instead of a table");
  evaluate->add_option("-o,--out", eval_out, "Also write the JSON report here");

  // stats
  fs::path stats_corpus;
  bool stats_json = false;
  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("corpus", stats_corpus, "Corpus directory")->required();
  stats->add_flag("--json", stats_json, "Print JSON instead of a table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  auto resources_for = [](const std::optional<fs::path>& config) {
    return config ? load_resources(load_config(*config, default_config())) : default_resources();
  };

  if (*generate) {
    const GenConfig c = gen.resolve();
    const auto files = cmd_generate(c, gen.jobs);
    std::cout << "wrote " << files.size() << " lifelogs to " << (c.output_dir / "lifelogs").string() << "\n";
  } else if (*gen_qa) {
    qa_opts.split_seed = qa_split_seed;
    const auto s = cmd_gen_qa(qa_opts, resources_for(qa_config));
    std::cout << "lifelogs " << s.lifelogs << ", atomic " << s.atomic << ", complex " << s.complex << "\n"
              << "splits train " << s.splits.train.size() << ", valid " << s.splits.valid.size() << ", test "
              << s.splits.test.size() << "\n";
  } else if (*split) {
    const auto s = cmd_split(split_corpus, split_seed);
    std::cout << "train " << s.train.size() << ", valid " << s.valid.size() << ", test " << s.test.size() << "\n";
  } else if (*tables) {
    const auto n = cmd_build_tables(tables_corpus, resources_for(tables_config), tables_jobs);
    std::cout << "wrote " << n << " tables\n";
  } else if (*retrieve) {
    const auto mode = parse_retrieve_mode(ret_mode);
    if (!mode) throw ConfigError("unknown retrieval mode '" + ret_mode + "' (oracle, zeroshot, external)");
    ret.mode = *mode;
    const auto s = cmd_retrieve(ret, default_resources());
    std::cout << "questions " << s.questions << ", truncated " << s.truncated << " ("
              << std::fixed << std::setprecision(1) << 100.0 * s.truncated_fraction() << "%), unrecognized " << s.unrecognized
              << "\n";
  } else if (*predict) {
    pred.retrieval = pred_retrieval;
    const auto n = cmd_predict(pred);
    std::cout << "wrote " << n << " predictions\n";
  } else if (*evaluate) {
    const auto mode = parse_eval_mode(eval_mode);
    if (!mode) throw ConfigError("unknown evaluation mode '" + eval_mode + "' (atomic, multihop)");
    const auto r = cmd_evaluate(eval_qa, eval_pred, *mode);
    std::cout << (eval_json ? r.json : r.text);
    if (eval_out) write_or_print(eval_out, r.json);
  } else if (*stats) {
    const auto r = cmd_stats(stats_corpus);
    std::cout << (stats_json ? r.to_json() : r.to_text());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const QueryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const RetrievalFailure& e) {
    std::cerr << "retrieval error: " << e.what() << "\n";
    return kIo;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
}
