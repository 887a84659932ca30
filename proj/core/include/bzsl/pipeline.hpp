#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bzsl/lsm.hpp"
#include "bzsl/recognition.hpp"
#include "bzsl/semantics.hpp"
#include "bzsl/split.hpp"
#include "bzsl/subspace.hpp"

namespace bzsl {

struct HyperParams {
  double alpha = 1.0;
  Index d_y = 10;
  Index k_G = 5;
  double eta = 0.1;
  Index k_ST = 20;
  double gamma = 0.5;
  std::uint64_t seed = 0;
};

// Throws Error{bounds} unless alpha > 0, d_y >= 1, k_G >= 1, k_ST >= 1,
// eta > 0 and gamma in [0, 1].
void validate(const HyperParams& h);

// Published optimum for AwA with GoogLeNet features and attributes.
HyperParams awa_googlenet_attributes_preset();
// Published optimum for AwA with Vgg19 features and attributes.
HyperParams awa_vgg19_attributes_preset();

enum class GraphMode { supervised, unsupervised };
enum class PostProc { none, self_train, structured };

struct PipelineOptions {
  GraphMode graph = GraphMode::supervised;
  Learner learner = Learner::slpp;
  bool kernelized = false;
  PostProc postproc = PostProc::none;
  Index lsm_max_iters = 5000;
  double lsm_rel_tol = 1e-8;
  Index kmeans_max_iters = 100;
  // With two semantic sources the distances are fused by gamma unless a
  // single source is selected here.
  std::optional<std::size_t> semantic_source;
};

// Class-level semantic vectors; column c describes class id c.
struct SemanticSource {
  std::string name;
  Matrix vectors;
  Metric metric = Metric::euclidean;
  SemanticKind kind = SemanticKind::attributes;
};

// Visual views share instance order; labels are class ids.
struct Dataset {
  std::vector<Matrix> views;
  Labels labels;
  std::vector<SemanticSource> semantics;
};

// Throws Error{shape|invalid_input} on inconsistent views, labels or semantics.
void validate(const Dataset& data);

// Column indices of instances whose label is in `classes` (ascending).
std::vector<Index> instances_of(const Dataset& data, std::span<const Label> classes);

// Semantic distances between known and unseen classes, fused when the
// dataset carries two sources (first = attributes role, second = word vectors).
SemanticDistances class_distances(const Dataset& data, std::span<const Label> known,
                                  std::span<const Label> unseen, const HyperParams& h,
                                  const PipelineOptions& options);

// Bottom-up fit on the training classes, landmarks, then LSM for the unseen classes.
ZslModel fit_model(const Dataset& data, const SplitSpec& split, const HyperParams& h,
                   const PipelineOptions& options);

// Projects test views (raw: exactly one view) into the model's latent space.
Matrix project_views(const ZslModel& model, std::span<const Matrix> test_views);

// Labels for the projected batch under the chosen post-processing.
Labels predict_projected(const ZslModel& model, const Matrix& projected, const HyperParams& h,
                         const PipelineOptions& options);

struct TrialResult {
  std::uint64_t lsm_seed = 0;
  SplitSpec split;
  EvalReport report;
  UnseenEmbedding lsm;
};

// One full train/test run on the split's train and test classes.
TrialResult run_experiment(const Dataset& data, const SplitSpec& split, const HyperParams& h,
                           const PipelineOptions& options);

struct SemanticFile {
  std::filesystem::path path;
  Metric metric = Metric::euclidean;
  SemanticKind kind = SemanticKind::attributes;
};

struct SplitSource {
  // Either explicit class lists or a seeded random split with test_fraction.
  std::optional<SplitSpec> explicit_split;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  std::vector<std::filesystem::path> views;
  std::filesystem::path labels;
  std::vector<SemanticFile> semantics;
  SplitSource split;
  HyperParams hyper;
  PipelineOptions options;
  std::size_t trials = 1;
  std::size_t threads = 0;  // 0: max_threads()
};

Dataset load_dataset(const ExperimentConfig& config);

// Split used by trial t: the explicit split, or a random split seeded by
// (split seed, t).
SplitSpec trial_split(const Dataset& data, const SplitSource& source, std::size_t trial);

struct RunReport {
  HyperParams hyper;
  PipelineOptions options;
  std::vector<TrialResult> trials;
  double mean_accuracy = 0.0;
  double standard_error = 0.0;
  double mean_per_image_accuracy = 0.0;
};

// Runs config.trials independent trials (trial t seeds LSM with
// derive_seed(hyper.seed, t)) in parallel and aggregates mean +- standard error.
RunReport run_pipeline(const Dataset& data, const ExperimentConfig& config);
RunReport run_pipeline(const ExperimentConfig& config);

}  // namespace bzsl
