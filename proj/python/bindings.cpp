#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lifelog/commands.hpp"
#include "lifelog/extraction.hpp"

namespace py = pybind11;
using namespace lifelog;

namespace {

GenConfig make_config(std::optional<std::filesystem::path> config, std::optional<std::uint64_t> seed,
                      std::optional<int> year, std::optional<int> duration, std::optional<std::string> density,
                      std::optional<int> num_lifelogs, std::optional<std::filesystem::path> out) {
  GenConfig c = default_config();
  if (seed) c.seed = *seed;
  if (year) c.year = *year;
  if (duration) c.duration = *duration;
  if (density) {
    const auto d = parse_density(*density);
    if (!d) throw ConfigError("unknown density '" + *density + "'");
    c.density = *d;
  }
  if (num_lifelogs) c.num_lifelogs = *num_lifelogs;
  if (out) c.output_dir = *out;
  if (config) c = load_config(*config, c);
  validate_config(c);
  return c;
}

Resources resources_for(const std::optional<std::filesystem::path>& config) {
  if (!config) return default_resources();
  return load_resources(load_config(*config, default_config()));
}

py::dict summary_dict(const GenQaSummary& s) {
  py::dict d;
  d["lifelogs"] = s.lifelogs;
  d["atomic"] = s.atomic;
  d["complex"] = s.complex;
  d["train"] = s.splits.train;
  d["valid"] = s.splits.valid;
  d["test"] = s.splits.test;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = std::string(kToolVersion);

  auto base = py::register_exception<Error>(m, "LifelogError", PyExc_RuntimeError);
  auto config_error = py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  auto io_error = py::register_exception<IoError>(m, "IoError", base.ptr());
  auto data_error = py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", data_error.ptr());
  py::register_exception<QueryError>(m, "QueryError", base.ptr());
  py::register_exception<RetrievalFailure>(m, "RetrievalFailure", base.ptr());
  (void)config_error;
  (void)io_error;

  m.def(
      "generate",
      [](std::filesystem::path out, int n, std::uint64_t seed, int duration, std::string density,
         std::optional<int> year, std::optional<std::filesystem::path> config, int jobs) {
        const GenConfig c = make_config(config, seed, year, duration, density, n, out);
        py::gil_scoped_release release;
        return cmd_generate(c, jobs);
      },
      py::arg("out"), py::arg("n") = 10, py::arg("seed") = 42, py::arg("duration") = 5,
      py::arg("density") = "medium", py::arg("year") = py::none(), py::arg("config") = py::none(),
      py::arg("jobs") = 1, "Generate lifelogs into `out`; returns the written lifelog files.");

  m.def(
      "gen_qa",
      [](std::filesystem::path corpus, int atomic_cap, std::optional<std::uint64_t> split_seed,
         std::optional<std::filesystem::path> config, int jobs) {
        GenQaOptions o;
        o.corpus = std::move(corpus);
        o.atomic_cap = atomic_cap;
        o.split_seed = split_seed;
        o.jobs = jobs;
        const Resources r = resources_for(config);
        GenQaSummary s;
        {
          py::gil_scoped_release release;
          s = cmd_gen_qa(o, r);
        }
        return summary_dict(s);
      },
      py::arg("corpus"), py::arg("atomic_cap") = 5000, py::arg("split_seed") = py::none(),
      py::arg("config") = py::none(), py::arg("jobs") = 1);

  m.def(
      "split",
      [](std::filesystem::path corpus, std::optional<std::uint64_t> seed) {
        const Splits s = cmd_split(corpus, seed);
        py::dict d;
        d["train"] = s.train;
        d["valid"] = s.valid;
        d["test"] = s.test;
        return d;
      },
      py::arg("corpus"), py::arg("seed") = py::none());

  m.def(
      "build_tables",
      [](std::filesystem::path corpus, std::optional<std::filesystem::path> config, int jobs) {
        const Resources r = resources_for(config);
        py::gil_scoped_release release;
        return cmd_build_tables(corpus, r, jobs);
      },
      py::arg("corpus"), py::arg("config") = py::none(), py::arg("jobs") = 1);

  m.def(
      "retrieve",
      [](std::filesystem::path corpus, std::filesystem::path qa, std::filesystem::path out, std::string mode,
         std::size_t budget, std::string command) {
        RetrieveOptions o;
        o.corpus = std::move(corpus);
        o.qa = std::move(qa);
        o.out = std::move(out);
        const auto md = parse_retrieve_mode(mode);
        if (!md) throw ConfigError("unknown retrieval mode '" + mode + "'");
        o.mode = *md;
        o.budget = budget;
        o.command = std::move(command);
        RetrieveSummary s;
        {
          py::gil_scoped_release release;
          s = cmd_retrieve(o, default_resources());
        }
        py::dict d;
        d["questions"] = s.questions;
        d["truncated"] = s.truncated;
        d["unrecognized"] = s.unrecognized;
        d["truncated_fraction"] = s.truncated_fraction();
        return d;
      },
      py::arg("corpus"), py::arg("qa"), py::arg("out"), py::arg("mode") = "oracle", py::arg("budget") = 1024,
      py::arg("command") = "");

  m.def(
      "predict",
      [](std::filesystem::path corpus, std::filesystem::path qa, std::filesystem::path out,
         std::optional<std::filesystem::path> retrieval, bool corrupt_counts) {
        PredictOptions o;
        o.corpus = std::move(corpus);
        o.qa = std::move(qa);
        o.out = std::move(out);
        o.retrieval = std::move(retrieval);
        o.corrupt_counts = corrupt_counts;
        py::gil_scoped_release release;
        return cmd_predict(o);
      },
      py::arg("corpus"), py::arg("qa"), py::arg("out"), py::arg("retrieval") = py::none(),
      py::arg("corrupt_counts") = false);

  m.def(
      "evaluate",
      [](std::filesystem::path qa, std::filesystem::path predictions, std::string mode) {
        const auto md = parse_eval_mode(mode);
        if (!md) throw ConfigError("unknown evaluation mode '" + mode + "'");
        const EvaluateResult r = cmd_evaluate(qa, predictions, *md);
        py::dict d;
        d["score"] = r.score;
        d["text"] = r.text;
        d["json"] = r.json;
        return d;
      },
      py::arg("qa"), py::arg("predictions"), py::arg("mode") = "multihop",
      "Score predictions; `json` holds the full breakdown report.");

  m.def(
      "stats", [](std::filesystem::path corpus) { return cmd_stats(corpus).to_json(); }, py::arg("corpus"),
      "Corpus statistics as a JSON string.");

  m.def("normalize", &normalize, py::arg("text"));
  m.def("exact_match", &exact_match, py::arg("predicted"), py::arg("gold"));
  m.def("token_f1", &token_f1, py::arg("predicted"), py::arg("gold"));
}
