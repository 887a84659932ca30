#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "bzsl/pipeline.hpp"
#include "bzsl/search.hpp"

namespace bzsl {

// Enum spellings shared by config files, reports and the CLI.
std::string_view to_string(Learner l);
std::string_view to_string(GraphMode g);
std::string_view to_string(PostProc p);
std::string_view to_string(Metric m);
std::string_view to_string(SemanticKind k);
Learner parse_learner(std::string_view s);
GraphMode parse_graph_mode(std::string_view s);
PostProc parse_postproc(std::string_view s);
Metric parse_metric(std::string_view s);
SemanticKind parse_semantic_kind(std::string_view s);

// Experiment config document. Relative paths resolve against base_dir.
//
//   {
//     "views": ["x.bin"],             visual features, d_x x n each
//     "labels": "labels.csv",
//     "semantics": [{"path": "att.csv", "metric": "euclidean", "kind": "attributes"}],
//     "split": {"train": [...], "test": [...]}  or  {"test_fraction": 0.2, "seed": 7},
//     "hyper": {"alpha": 1, "d_y": 10, "k_G": 5, "eta": 0.1, "k_ST": 20, "gamma": 0.5, "seed": 0},
//     "graph": "supervised", "learner": "slpp", "kernelized": false,
//     "postproc": "none", "lsm": {"max_iters": 5000, "rel_tol": 1e-8},
//     "trials": 1, "threads": 0
//   }
//
// Every key except views, labels and semantics is optional. Unknown keys
// are rejected with Error{parse}.
ExperimentConfig parse_config(std::string_view json, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

std::string hyper_to_json(const HyperParams& h);
HyperParams hyper_from_json(std::string_view json);

std::string model_to_json(const ZslModel& model);
ZslModel model_from_json(std::string_view json);
void save_model(const ZslModel& model, const std::filesystem::path& path);
ZslModel load_model(const std::filesystem::path& path);

// Byte-deterministic report: per-trial results plus the mean +- standard
// error summary.
std::string report_to_json(const RunReport& report);
std::string report_to_text(const RunReport& report);
// Text table for a report previously written by report_to_json.
std::string report_text_from_json(std::string_view json);
std::string eval_to_json(const EvalReport& report);
std::string search_to_json(const SearchResult& result);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace bzsl
