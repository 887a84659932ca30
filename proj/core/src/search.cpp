#include "bzsl/search.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

#include "bzsl/diagnostics.hpp"
#include "bzsl/error.hpp"
#include "bzsl/parallel.hpp"
#include "bzsl/random.hpp"

namespace bzsl {

namespace {

const Dataset& data_of(const CvSetup& setup) {
  if (setup.data == nullptr) throw Error(ErrorKind::usage, "search: no dataset");
  return *setup.data;
}

// Evaluates every point on every CV task in parallel; scores land in
// point order regardless of scheduling.
std::vector<double> score_points(const CvSetup& setup, const std::vector<HyperParams>& points,
                                 const std::vector<PipelineOptions>& options) {
  const auto tasks = cv_tasks(setup);
  const std::size_t t = tasks.size();
  std::vector<double> acc(points.size() * t, 0.0);
  parallel_for(acc.size(), setup.threads, [&](std::size_t idx) {
    const std::size_t p = idx / t, trial = idx % t;
    HyperParams h = points[p];
    h.seed = derive_seed(points[p].seed, trial);
    try {
      acc[idx] = run_experiment(data_of(setup), tasks[trial], h, options[p]).report.mean_per_class_accuracy;
    } catch (const Error& e) {
      rethrow_with_context(e, "cv trial " + std::to_string(trial));
    }
  });
  std::vector<double> scores(points.size(), 0.0);
  for (std::size_t p = 0; p < points.size(); ++p) {
    double s = 0.0;
    for (std::size_t k = 0; k < t; ++k) s += acc[p * t + k];
    scores[p] = s / static_cast<double>(t);
  }
  return scores;
}

// Scores the feasible candidates, records all of them in the trace and
// returns the index of the best (first on ties; candidates are pre-ordered by
// preference).
std::size_t sweep(const CvSetup& setup, const std::string& parameter, const std::vector<HyperParams>& points,
                  const PipelineOptions& options, SearchResult& result) {
  std::vector<HyperParams> runnable;
  std::vector<std::size_t> where;
  std::vector<TraceEntry> entries;
  for (const auto& h : points) {
    TraceEntry e;
    e.parameter = parameter;
    e.point = h;
    if (auto why = infeasibility(setup, h, options)) {
      e.feasible = false;
      e.reason = *why;
      warn("search: skipping " + parameter + " point: " + *why);
    } else {
      where.push_back(entries.size());
      runnable.push_back(h);
    }
    entries.push_back(std::move(e));
  }
  if (runnable.empty()) {
    throw Error(ErrorKind::search, "search: every " + parameter + " candidate is infeasible");
  }
  const auto scores = score_points(setup, runnable, std::vector<PipelineOptions>(runnable.size(), options));
  std::size_t best = 0;
  for (std::size_t i = 0; i < runnable.size(); ++i) {
    entries[where[i]].score = scores[i];
    if (scores[i] > scores[best]) best = i;
  }
  result.trace.insert(result.trace.end(), entries.begin(), entries.end());
  result.best = runnable[best];
  result.score = scores[best];
  return best;
}

template <typename T>
std::vector<T> ascending(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

std::vector<SplitSpec> cv_tasks(const CvSetup& setup) {
  if (setup.cv_trials < 1) throw Error(ErrorKind::bounds, "search: cv_trials must be at least 1");
  std::vector<SplitSpec> tasks;
  for (std::size_t t = 0; t < setup.cv_trials; ++t) {
    tasks.push_back(validation_task(
        make_classwise_split(setup.train_classes, setup.holdout_fraction, derive_seed(setup.seed, t))));
  }
  return tasks;
}

std::optional<std::string> infeasibility(const CvSetup& setup, const HyperParams& h,
                                         const PipelineOptions& options) {
  const Dataset& data = data_of(setup);
  try {
    validate(h);
  } catch (const Error& e) {
    return std::string(e.what());
  }
  for (const auto& task : cv_tasks(setup)) {
    const auto n = static_cast<Index>(instances_of(data, task.train_classes).size());
    if (h.k_G >= n && options.learner != Learner::pca) {
      return "k_G = " + std::to_string(h.k_G) + " needs more than " + std::to_string(n) + " training instances";
    }
    Index limit = options.kernelized ? n : data.views.front().rows();
    if (options.learner == Learner::pca) limit = std::min(limit, n);
    if (h.d_y > limit) {
      return "d_y = " + std::to_string(h.d_y) + " exceeds the solvable dimension " + std::to_string(limit);
    }
  }
  return std::nullopt;
}

double cv_score(const CvSetup& setup, const HyperParams& h, const PipelineOptions& options) {
  return score_points(setup, {h}, {options}).front();
}

SearchResult coarse_grid_search(const CvSetup& setup) {
  // Enumerate in tie-break preference order: d_y, then alpha, then k_G.
  std::vector<HyperParams> points;
  for (Index d_y : ascending(setup.grids.coarse_d_y))
    for (double alpha : ascending(setup.grids.coarse_alpha))
      for (Index k_g : ascending(setup.grids.coarse_k_G)) {
        HyperParams h = setup.base;
        h.alpha = alpha;
        h.d_y = d_y;
        h.k_G = k_g;
        points.push_back(h);
      }
  SearchResult result;
  sweep(setup, "grid", points, setup.options, result);
  return result;
}

SearchResult fine_tune_sequence(const CvSetup& setup, const HyperParams& start) {
  SearchResult result;
  result.best = start;

  auto run = [&](const std::string& name, auto grid, auto assign, const PipelineOptions& options) {
    std::vector<HyperParams> points;
    for (auto value : ascending(grid)) {
      HyperParams h = result.best;
      assign(h, value);
      points.push_back(h);
    }
    sweep(setup, name, points, options, result);
  };

  run("alpha", setup.grids.fine_alpha, [](HyperParams& h, double v) { h.alpha = v; }, setup.options);
  run("d_y", setup.grids.fine_d_y, [](HyperParams& h, Index v) { h.d_y = v; }, setup.options);
  run("k_G", setup.grids.fine_k_G, [](HyperParams& h, Index v) { h.k_G = v; }, setup.options);
  PipelineOptions self_training = setup.options;
  self_training.postproc = PostProc::self_train;
  run("k_ST", setup.grids.fine_k_ST, [](HyperParams& h, Index v) { h.k_ST = v; }, self_training);
  return result;
}

SearchResult full_search(const CvSetup& setup) {
  SearchResult coarse = coarse_grid_search(setup);
  SearchResult fine = fine_tune_sequence(setup, coarse.best);
  coarse.trace.insert(coarse.trace.end(), fine.trace.begin(), fine.trace.end());
  fine.trace = std::move(coarse.trace);
  return fine;
}

SearchResult gamma_search(const CvSetup& setup) {
  if (data_of(setup).semantics.size() != 2) {
    throw Error(ErrorKind::usage, "gamma search needs exactly two semantic representations");
  }
  PipelineOptions fused = setup.options;
  fused.semantic_source.reset();
  std::vector<HyperParams> points;
  for (double g : ascending(setup.grids.gamma)) {
    HyperParams h = setup.base;
    h.gamma = g;
    points.push_back(h);
  }
  SearchResult result;
  sweep(setup, "gamma", points, fused, result);
  return result;
}

SearchResult select_joint_hyper(const CvSetup& setup, const std::vector<HyperParams>& candidates) {
  const Dataset& data = data_of(setup);
  if (candidates.empty()) throw Error(ErrorKind::usage, "select_joint_hyper: no candidates");
  SearchResult result;
  double best = -1.0;
  for (const auto& h : candidates) {
    TraceEntry e;
    e.parameter = "joint";
    e.point = h;
    double total = 0.0;
    for (std::size_t s = 0; s < data.semantics.size(); ++s) {
      PipelineOptions single = setup.options;
      single.semantic_source = s;
      total += cv_score(setup, h, single);
    }
    e.score = total / static_cast<double>(data.semantics.size());
    if (e.score > best) {
      best = e.score;
      result.best = h;
      result.score = e.score;
    }
    result.trace.push_back(e);
  }
  return result;
}

}  // namespace bzsl
