#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bzsl/pipeline.hpp"

namespace bzsl {

// Hyper-parameter grids. Defaults are the published search schedule.
struct SearchGrids {
  std::vector<double> coarse_alpha{0.1, 10.0};
  std::vector<Index> coarse_d_y{10, 100, 500};
  std::vector<Index> coarse_k_G{1, 10, 50};

  std::vector<double> fine_alpha{0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0};
  std::vector<Index> fine_d_y{50, 100, 150, 200, 250, 300};
  std::vector<Index> fine_k_G{5, 10, 15, 20, 25, 30};
  std::vector<Index> fine_k_ST{20, 40, 60, 80, 100, 120, 140, 160, 180, 200};

  std::vector<double> gamma{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
};

// Default CV trial counts: a single default split, or per split of a
// multi-split benchmark.
inline constexpr std::size_t kSingleSplitCvTrials = 5;
inline constexpr std::size_t kMultiSplitCvTrials = 3;

// Classwise cross-validation over a set of training classes: each trial
// holds out `holdout_fraction` of them as validation classes.
struct CvSetup {
  const Dataset* data = nullptr;
  Labels train_classes;
  HyperParams base;
  PipelineOptions options;
  std::size_t cv_trials = kSingleSplitCvTrials;
  double holdout_fraction = 0.2;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  SearchGrids grids;
};

struct TraceEntry {
  std::string parameter;  // "grid", "alpha", "d_y", "k_G", "k_ST", "gamma"
  HyperParams point;
  bool feasible = true;
  std::string reason;  // why the point was skipped
  double score = 0.0;
};

struct SearchResult {
  HyperParams best;
  double score = 0.0;
  std::vector<TraceEntry> trace;
};

// Validation tasks used by every evaluation of `setup`; trial t is seeded by
// (setup.seed, t) so all grid points see the same class splits.
std::vector<SplitSpec> cv_tasks(const CvSetup& setup);

// Reason a hyper-parameter point cannot run on any of the tasks, if any.
std::optional<std::string> infeasibility(const CvSetup& setup, const HyperParams& h,
                                         const PipelineOptions& options);

// Mean validation per-class accuracy over the CV trials.
double cv_score(const CvSetup& setup, const HyperParams& h, const PipelineOptions& options);

// Exhaustive coarse grid. Ties prefer smaller d_y, then smaller alpha, then
// smaller k_G. Infeasible points are skipped with a warning; Error{search}
// if none is feasible.
SearchResult coarse_grid_search(const CvSetup& setup);

// Sequential fine-tuning in the order alpha, d_y, k_G, k_ST; each sweep fixes
// the others at their current best. The k_ST sweep runs with self-training.
// Ties prefer the smaller value.
SearchResult fine_tune_sequence(const CvSetup& setup, const HyperParams& start);

// Coarse search followed by fine-tuning from its optimum; traces concatenated.
SearchResult full_search(const CvSetup& setup);

// Sweeps gamma over the fusion grid with the other hyper-parameters fixed at
// setup.base. Needs two semantic sources. Ties prefer the smaller gamma.
SearchResult gamma_search(const CvSetup& setup);

// Picks, among candidates, the point with the best accuracy averaged over the
// single-source runs of each semantic representation.
SearchResult select_joint_hyper(const CvSetup& setup, const std::vector<HyperParams>& candidates);

}  // namespace bzsl
