#include <filesystem>
#include <fstream>

#include "bzsl/error.hpp"
#include "bzsl/matrix_io.hpp"
#include "bzsl/pipeline.hpp"
#include "bzsl/postproc.hpp"
#include "bzsl/search.hpp"
#include "bzsl/serialize.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace bzsl;

namespace {

SplitSpec seven_three() {
  SplitSpec s;
  s.train_classes = {0, 1, 2, 3, 4, 5, 6};
  s.test_classes = {7, 8, 9};
  return s;
}

Dataset twenty_classes(std::uint64_t seed) {
  synthetic::Options o;
  o.classes = 20;
  o.per_class = 15;
  o.radius = 14.0;
  o.seed = seed;
  return synthetic::gaussian_classes(o);
}

CvSetup cv_over(const Dataset& data) {
  CvSetup s;
  s.data = &data;
  s.train_classes = unique_labels(data.labels);
  s.cv_trials = 2;
  s.seed = 3;
  s.base.d_y = 3;
  s.grids.coarse_alpha = {1.0};
  s.grids.coarse_d_y = {3};
  s.grids.coarse_k_G = {5};
  s.grids.fine_alpha = {1.0};
  s.grids.fine_d_y = {3};
  s.grids.fine_k_G = {5};
  s.grids.fine_k_ST = {10};
  return s;
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "bzsl_harness";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("hyper-parameter validation and preset") {
  HyperParams h;
  CHECK_NOTHROW(validate(h));
  h.gamma = 1.2;
  CHECK_THROWS_AS(validate(h), Error);
  h = HyperParams{};
  h.alpha = 0.0;
  CHECK_THROWS_AS(validate(h), Error);
  h = HyperParams{};
  h.d_y = 0;
  CHECK_THROWS_AS(validate(h), Error);

  const auto p = awa_googlenet_attributes_preset();
  CHECK(p.alpha == 1000.0);
  CHECK(p.d_y == 50);
  CHECK(p.k_G == 5);
  CHECK(p.k_ST == 180);
}

TEST_CASE("published search grids") {
  const SearchGrids g;
  CHECK(g.coarse_alpha == std::vector<double>{0.1, 10});
  CHECK(g.coarse_d_y == std::vector<Index>{10, 100, 500});
  CHECK(g.coarse_k_G == std::vector<Index>{1, 10, 50});
  CHECK(g.fine_alpha == std::vector<double>{0.001, 0.01, 0.1, 1, 10, 100, 1000});
  CHECK(g.fine_d_y == std::vector<Index>{50, 100, 150, 200, 250, 300});
  CHECK(g.fine_k_G == std::vector<Index>{5, 10, 15, 20, 25, 30});
  CHECK(g.fine_k_ST == std::vector<Index>{20, 40, 60, 80, 100, 120, 140, 160, 180, 200});
  CHECK(g.gamma == std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
  CHECK(kSingleSplitCvTrials == 5);
  CHECK(kMultiSplitCvTrials == 3);
}

TEST_CASE("synthetic task end to end") {
  synthetic::Options o;
  o.seed = 1;
  const Dataset data = synthetic::gaussian_classes(o);
  CHECK(synthetic::min_separation(data.semantics[0].vectors) >= 8.0 * o.sigma);
  HyperParams h;
  h.d_y = 3;
  const auto r = run_experiment(data, seven_three(), h, {});
  CHECK(r.report.mean_per_class_accuracy >= 0.9);
  CHECK(r.report.classes == Labels{7, 8, 9});
}

TEST_CASE("self-training changes only the unseen embeddings") {
  const Dataset data = synthetic::gaussian_classes({});
  HyperParams h;
  h.d_y = 3;
  const ZslModel m = fit_model(data, seven_three(), h, {});
  const auto test = instances_of(data, seven_three().test_classes);
  Matrix x(3, static_cast<Index>(test.size()));
  for (std::size_t j = 0; j < test.size(); ++j) x.col(static_cast<Index>(j)) = data.views[0].col(test[j]);
  const std::vector<Matrix> views{x};
  const ZslModel adjusted = self_train(m, project_views(m, views), 10);
  CHECK(adjusted.subspace.projection == m.subspace.projection);
  CHECK(adjusted.subspace.training_mean == m.subspace.training_mean);
  CHECK(adjusted.landmarks.embedding == m.landmarks.embedding);
  CHECK(adjusted.unseen_class_ids == m.unseen_class_ids);
  CHECK(adjusted.unseen.embedding != m.unseen.embedding);
}

TEST_CASE("kernelized, unsupervised and baseline learners run end to end") {
  const Dataset data = synthetic::gaussian_classes({});
  HyperParams h;
  h.d_y = 3;
  PipelineOptions o;
  o.kernelized = true;
  CHECK(run_experiment(data, seven_three(), h, o).report.mean_per_class_accuracy > 0.0);
  o.kernelized = false;
  o.learner = Learner::lpp;
  CHECK_NOTHROW(run_experiment(data, seven_three(), h, o));
  o.learner = Learner::pca;
  CHECK_NOTHROW(run_experiment(data, seven_three(), h, o));
  o.learner = Learner::slpp;
  o.postproc = PostProc::structured;
  CHECK_NOTHROW(run_experiment(data, seven_three(), h, o));
  o.postproc = PostProc::self_train;
  CHECK_NOTHROW(run_experiment(data, seven_three(), h, o));

  o = PipelineOptions{};
  o.kernelized = true;
  o.learner = Learner::pca;
  try {
    run_experiment(data, seven_three(), h, o);
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::usage);
    CHECK(std::string(e.what()).find("bottom-up fit") != std::string::npos);
  }
}

TEST_CASE("errors carry the failing stage") {
  const Dataset data = synthetic::gaussian_classes({});
  HyperParams h;
  h.d_y = 4;
  try {
    run_experiment(data, seven_three(), h, {});
    FAIL("expected bounds error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::bounds);
    CHECK(std::string(e.what()).rfind("bottom-up fit", 0) == 0);
  }
}

TEST_CASE("run_pipeline is byte-identical across runs and thread counts") {
  const Dataset data = synthetic::gaussian_classes({});
  ExperimentConfig c;
  c.hyper.d_y = 3;
  c.hyper.seed = 11;
  c.trials = 4;
  c.split.test_fraction = 0.3;
  c.threads = 1;
  const std::string serial = report_to_json(run_pipeline(data, c));
  c.threads = 4;
  const std::string parallel = report_to_json(run_pipeline(data, c));
  CHECK(serial == parallel);
  CHECK(report_to_json(run_pipeline(data, c)) == parallel);
  CHECK(serial.find("standard_error") != std::string::npos);
  const std::string text = report_text_from_json(serial);
  CHECK(text.find("mean per-class accuracy") != std::string::npos);
}

TEST_CASE("coarse grid search") {
  const Dataset data = twenty_classes(5);
  CvSetup s = cv_over(data);
  const auto single = coarse_grid_search(s);
  CHECK(single.best.alpha == 1.0);
  CHECK(single.best.d_y == 3);
  CHECK(single.best.k_G == 5);
  REQUIRE(single.trace.size() == 1);

  // A one-dimensional latent space collapses every instance to +-1.
  s.grids.coarse_d_y = {1, 3};
  const auto planted = coarse_grid_search(s);
  CHECK(planted.best.d_y == 3);
  CHECK(planted.trace.size() == 2);
  CHECK(planted.trace[0].score < planted.trace[1].score);

  oracle::WarningCapture warnings;
  s.grids.coarse_d_y = {3, 500};
  const auto skipped = coarse_grid_search(s);
  CHECK(skipped.best.d_y == 3);
  CHECK_FALSE(skipped.trace[1].feasible);
  CHECK(warnings.messages.size() == 1);
  CHECK_FALSE(infeasibility(s, skipped.best, s.options).has_value());

  s.grids.coarse_d_y = {500};
  try {
    coarse_grid_search(s);
    FAIL("expected search error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::search);
  }
}

TEST_CASE("infeasible d_y on 50-dimensional features is skipped") {
  Dataset data = twenty_classes(6);
  Matrix wide(50, data.views[0].cols());
  wide.topRows(3) = data.views[0];
  wide.bottomRows(47) = 0.1 * oracle::random_matrix(47, wide.cols(), 9);
  data.views[0] = wide;
  CvSetup s = cv_over(data);
  s.grids.coarse_d_y = {10, 500};
  oracle::WarningCapture warnings;
  const auto r = coarse_grid_search(s);
  CHECK(r.best.d_y == 10);
  CHECK_FALSE(r.trace[1].feasible);
}

TEST_CASE("fine-tuning visits alpha, d_y, k_G, k_ST in order") {
  const Dataset data = twenty_classes(7);
  CvSetup s = cv_over(data);
  HyperParams start = s.base;
  start.alpha = 1.0;
  start.k_G = 5;
  start.k_ST = 10;
  const auto same = fine_tune_sequence(s, start);
  CHECK(same.best.alpha == start.alpha);
  CHECK(same.best.d_y == start.d_y);
  CHECK(same.best.k_G == start.k_G);
  CHECK(same.best.k_ST == start.k_ST);

  s.grids.fine_alpha = {0.1, 10.0};
  s.grids.fine_d_y = {2, 3};
  s.grids.fine_k_G = {3, 6};
  s.grids.fine_k_ST = {5, 10};
  const auto r = fine_tune_sequence(s, start);
  std::vector<std::string> order;
  for (const auto& e : r.trace) order.push_back(e.parameter);
  CHECK(order == std::vector<std::string>{"alpha", "alpha", "d_y", "d_y", "k_G", "k_G", "k_ST", "k_ST"});
  CHECK(r.trace[0].point.alpha == 0.1);
  CHECK(r.trace[1].point.alpha == 10.0);
  // Later sweeps start from the earlier winners.
  CHECK(r.trace[2].point.alpha == r.trace[3].point.alpha);
  CHECK(r.trace[6].point.k_G == r.trace[7].point.k_G);
  CHECK_FALSE(infeasibility(s, r.best, s.options).has_value());
}

TEST_CASE("gamma search") {
  Dataset data = twenty_classes(8);
  CvSetup s = cv_over(data);
  try {
    gamma_search(s);
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::usage);
  }

  data.semantics.push_back(data.semantics[0]);
  const auto tie = gamma_search(s);
  CHECK(tie.best.gamma == 0.1);
  CHECK(tie.trace.size() == 9);

  // Informative attributes first, random word vectors second.
  data.semantics[1] = {"noise", oracle::random_matrix(30, 20, 77), Metric::cosine, SemanticKind::word_vectors};
  const auto r = gamma_search(s);
  CHECK(r.best.gamma <= 0.3);
  CHECK(r.trace.front().score >= r.trace.back().score);

  const std::vector<HyperParams> candidates{s.base};
  const auto joint = select_joint_hyper(s, candidates);
  CHECK(joint.trace.size() == 1);
}

TEST_CASE("config parsing") {
  const auto dir = scratch_dir();
  const std::string text = R"({
    "views": ["x.bin"], "labels": "labels.csv",
    "semantics": [{"path": "/abs/att.csv", "metric": "euclidean", "kind": "attributes"},
                  {"path": "wv.csv", "metric": "cosine", "kind": "word-vectors"}],
    "split": {"train": [3, 1, 2], "test": [5, 4]},
    "hyper": {"alpha": 2, "d_y": 7, "k_G": 3, "gamma": 0.25, "seed": 9},
    "graph": "unsupervised", "learner": "lpp", "kernelized": true,
    "postproc": "self-train", "lsm": {"max_iters": 100}, "trials": 3, "threads": 2
  })";
  const auto c = parse_config(text, dir);
  CHECK(c.views.front() == dir / "x.bin");
  CHECK(c.semantics[0].path == "/abs/att.csv");
  CHECK(c.semantics[1].metric == Metric::cosine);
  CHECK(c.semantics[1].kind == SemanticKind::word_vectors);
  REQUIRE(c.split.explicit_split);
  CHECK(c.split.explicit_split->train_classes == Labels{1, 2, 3});
  CHECK(c.hyper.alpha == 2.0);
  CHECK(c.hyper.d_y == 7);
  CHECK(c.hyper.gamma == 0.25);
  CHECK(c.hyper.eta == 0.1);
  CHECK(c.options.graph == GraphMode::unsupervised);
  CHECK(c.options.learner == Learner::lpp);
  CHECK(c.options.kernelized);
  CHECK(c.options.postproc == PostProc::self_train);
  CHECK(c.options.lsm_max_iters == 100);
  CHECK(c.trials == 3);

  try {
    parse_config(R"({"views": ["x"], "labels": "l", "semantics": [], "colour": 1})", dir);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
  }
  CHECK_THROWS_AS(parse_config("{not json", dir), Error);
  try {
    parse_config(R"({"views": ["x"], "labels": "l", "semantics": [], "learner": "lda"})", dir);
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::usage);
  }
  CHECK(hyper_from_json(hyper_to_json(c.hyper)).k_G == 3);
}

TEST_CASE("files on disk: load, fit, save and reload a model") {
  const auto dir = scratch_dir();
  const Dataset data = synthetic::gaussian_classes({});
  save_matrix(data.views[0], dir / "x.bin");
  save_labels(data.labels, dir / "labels.csv");
  save_matrix(data.semantics[0].vectors, dir / "att.csv");
  {
    std::ofstream f(dir / "config.json");
    f << R"({"views": ["x.bin"], "labels": "labels.csv", "semantics": [{"path": "att.csv"}],
             "split": {"train": [0,1,2,3,4,5,6], "test": [7,8,9]}, "hyper": {"d_y": 3}})";
  }
  const auto c = load_config(dir / "config.json");
  const Dataset loaded = load_dataset(c);
  CHECK(loaded.labels == data.labels);
  const ZslModel m = fit_model(loaded, trial_split(loaded, c.split, 0), c.hyper, c.options);
  save_model(m, dir / "model.json");
  const ZslModel back = load_model(dir / "model.json");
  CHECK(back.subspace.projection == m.subspace.projection);
  CHECK(back.subspace.training_mean == m.subspace.training_mean);
  CHECK(back.unseen.embedding == m.unseen.embedding);
  CHECK(back.unseen_class_ids == m.unseen_class_ids);
  const std::vector<Matrix> views{loaded.views[0]};
  CHECK(classify(project_views(back, views), back) == classify(project_views(m, views), m));
  CHECK_THROWS_AS(model_from_json(R"({"format": "other"})"), Error);
}

}  // TEST_SUITE
