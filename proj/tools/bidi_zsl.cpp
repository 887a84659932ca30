// bidi-zsl: command-line front end for fitting, evaluating and tuning the
// bidirectional latent-embedding ZSL pipeline.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bzsl/error.hpp"
#include "bzsl/matrix_io.hpp"
#include "bzsl/pipeline.hpp"
#include "bzsl/search.hpp"
#include "bzsl/serialize.hpp"
#include "bzsl/split.hpp"
#include "bzsl/viewselect.hpp"
#include "json.hpp"

namespace {

using namespace bzsl;

// Distinct exit status per error category; 1 is reserved for anything else.
int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return 2;
    case ErrorKind::definiteness: return 3;
    case ErrorKind::bounds: return 4;
    case ErrorKind::shape: return 5;
    case ErrorKind::degenerate_vector: return 6;
    case ErrorKind::degenerate_landmark: return 7;
    case ErrorKind::usage: return 8;
    case ErrorKind::divergence: return 9;
    case ErrorKind::parse: return 10;
    case ErrorKind::io: return 11;
    case ErrorKind::search: return 12;
  }
  return 1;
}

int fail(std::string_view category, std::string_view message, int code) {
  nlohmann::json j{{"error", category}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return code;
}

// Flags shared by every subcommand that runs the pipeline. Unset flags keep
// the config file's values.
struct Overrides {
  std::optional<double> alpha, eta, gamma;
  std::optional<Index> d_y, k_G, k_ST;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> graph, learner, postproc, metric;
  bool kernelized = false;
  std::optional<std::size_t> trials, threads;

  void attach(CLI::App* app) {
    app->add_option("--alpha", alpha, "SLPP regularizer");
    app->add_option("--dy", d_y, "latent dimension");
    app->add_option("--kg", k_G, "kNN graph neighbours");
    app->add_option("--eta", eta, "LSM learning rate");
    app->add_option("--kst", k_ST, "self-training neighbours");
    app->add_option("--gamma", gamma, "fusion weight of the second semantic source");
    app->add_option("--seed", seed, "base seed");
    app->add_option("--graph", graph, "supervised|unsupervised");
    app->add_option("--learner", learner, "slpp|lpp|pca");
    app->add_flag("--kernelized", kernelized, "use the kernel (multi-view) path");
    app->add_option("--postproc", postproc, "none|self-train|structured");
    app->add_option("--metric", metric, "euclidean|cosine for every semantic source");
    app->add_option("--trials", trials, "number of trials");
    app->add_option("--threads", threads, "worker threads (0: all)");
  }

  void apply(ExperimentConfig& c) const {
    if (alpha) c.hyper.alpha = *alpha;
    if (d_y) c.hyper.d_y = *d_y;
    if (k_G) c.hyper.k_G = *k_G;
    if (eta) c.hyper.eta = *eta;
    if (k_ST) c.hyper.k_ST = *k_ST;
    if (gamma) c.hyper.gamma = *gamma;
    if (seed) c.hyper.seed = *seed;
    if (graph) c.options.graph = parse_graph_mode(*graph);
    if (learner) c.options.learner = parse_learner(*learner);
    if (kernelized) c.options.kernelized = true;
    if (postproc) c.options.postproc = parse_postproc(*postproc);
    if (metric)
      for (auto& s : c.semantics) s.metric = parse_metric(*metric);
    if (trials) c.trials = *trials;
    if (threads) c.threads = *threads;
  }
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

struct SearchFlags {
  std::size_t cv_trials = kSingleSplitCvTrials;
  double holdout = 0.2;
  std::optional<std::uint64_t> cv_seed;

  void attach(CLI::App* app) {
    app->add_option("--cv-trials", cv_trials, "cross-validation trials")->check(CLI::PositiveNumber);
    app->add_option("--holdout", holdout, "fraction of training classes held out per CV trial");
    app->add_option("--cv-seed", cv_seed, "seed of the validation splits (default: --seed)");
  }

  CvSetup setup(const Dataset& data, const ExperimentConfig& c) const {
    CvSetup s;
    s.data = &data;
    s.train_classes = trial_split(data, c.split, 0).train_classes;
    s.base = c.hyper;
    s.options = c.options;
    s.cv_trials = cv_trials;
    s.holdout_fraction = holdout;
    s.seed = cv_seed.value_or(c.hyper.seed);
    s.threads = c.threads;
    return s;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bidirectional latent embedding zero-shot learning"};
  app.require_subcommand(1);

  std::string config_path, out, model_path, in_path;
  Overrides ov;
  SearchFlags sf;

  auto* fit = app.add_subcommand("fit", "fit a model on the training classes of the split");
  fit->add_option("--config", config_path, "experiment config (JSON)")->required();
  fit->add_option("-o,--out", out, "model file")->required();
  ov.attach(fit);

  std::vector<std::string> views;
  auto* predict = app.add_subcommand("predict", "label test instances with a fitted model");
  predict->add_option("--model", model_path, "model file")->required();
  predict->add_option("--view", views, "test features, one file per visual view")->required();
  predict->add_option("-o,--out", out, "labels CSV (default: stdout)");
  ov.attach(predict);

  bool text = false;
  auto* eval = app.add_subcommand("eval", "run the full pipeline and report accuracy");
  eval->add_option("--config", config_path, "experiment config (JSON)")->required();
  eval->add_option("-o,--out", out, "JSON report (default: stdout)");
  eval->add_flag("--text", text, "print a plain-text table to stderr as well");
  ov.attach(eval);

  auto* cv = app.add_subcommand("cv", "coarse grid search followed by sequential fine-tuning");
  cv->add_option("--config", config_path, "experiment config (JSON)")->required();
  cv->add_option("-o,--out", out, "search result JSON (default: stdout)");
  ov.attach(cv);
  sf.attach(cv);

  auto* gamma = app.add_subcommand("gamma-search", "tune the fusion weight of two semantic sources");
  gamma->add_option("--config", config_path, "experiment config (JSON)")->required();
  gamma->add_option("-o,--out", out, "search result JSON (default: stdout)");
  ov.attach(gamma);
  sf.attach(gamma);

  Index k = 10;
  std::optional<std::size_t> max_count;
  std::optional<double> min_c;
  auto* select = app.add_subcommand("select-views", "greedy complementary visual view selection");
  select->add_option("--config", config_path, "experiment config listing the candidate views")->required();
  select->add_option("-k", k, "neighbourhood size for complementarity");
  select->add_option("--max-count", max_count, "stop after this many views");
  select->add_option("--min-complementarity", min_c, "stop when the best gain falls below this");
  select->add_option("-o,--out", out, "selection JSON (default: stdout)");
  ov.attach(select);
  sf.attach(select);

  auto* report = app.add_subcommand("report", "render a JSON report as a text table");
  report->add_option("--in", in_path, "JSON report")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what(), exit_code(ErrorKind::usage));
  }

  try {
    if (fit->parsed()) {
      auto c = load_config(config_path);
      ov.apply(c);
      const Dataset data = load_dataset(c);
      save_model(fit_model(data, trial_split(data, c.split, 0), c.hyper, c.options), out);
    } else if (predict->parsed()) {
      const ZslModel model = load_model(model_path);
      std::vector<Matrix> test;
      for (const auto& v : views) test.push_back(load_matrix(v));
      ExperimentConfig c;
      ov.apply(c);
      const Labels labels = predict_projected(model, project_views(model, test), c.hyper, c.options);
      emit(format_labels(labels), out);
    } else if (eval->parsed()) {
      auto c = load_config(config_path);
      ov.apply(c);
      const RunReport r = run_pipeline(c);
      emit(report_to_json(r), out);
      if (text) std::cerr << report_to_text(r);
    } else if (cv->parsed()) {
      auto c = load_config(config_path);
      ov.apply(c);
      const Dataset data = load_dataset(c);
      emit(search_to_json(full_search(sf.setup(data, c))), out);
    } else if (gamma->parsed()) {
      auto c = load_config(config_path);
      ov.apply(c);
      const Dataset data = load_dataset(c);
      emit(search_to_json(gamma_search(sf.setup(data, c))), out);
    } else if (select->parsed()) {
      auto c = load_config(config_path);
      ov.apply(c);
      const Dataset data = load_dataset(c);
      const CvSetup setup = sf.setup(data, c);
      const auto train_idx = instances_of(data, setup.train_classes);

      std::vector<NamedRepresentation> candidates;
      Labels train_labels;
      for (Index i : train_idx) train_labels.push_back(data.labels[static_cast<std::size_t>(i)]);
      for (std::size_t m = 0; m < data.views.size(); ++m) {
        Matrix x(data.views[m].rows(), static_cast<Index>(train_idx.size()));
        for (std::size_t j = 0; j < train_idx.size(); ++j) x.col(static_cast<Index>(j)) = data.views[m].col(train_idx[j]);
        candidates.push_back({c.views[m].filename().string() + "#" + std::to_string(m), std::move(x)});
      }
      // A view's score is its own cross-validated ZSL accuracy.
      auto scorer = [&](const NamedRepresentation& r) {
        const auto m = std::stoul(r.name.substr(r.name.rfind('#') + 1));
        Dataset single = data;
        single.views = {data.views[m]};
        CvSetup s = setup;
        s.data = &single;
        s.options.kernelized = false;
        return cv_score(s, s.base, s.options);
      };
      SelectionStop stop;
      stop.max_count = max_count;
      stop.min_complementarity = min_c;
      const auto chosen = select_representations(candidates, train_labels, k, stop, scorer);
      emit(nlohmann::json{{"selected", chosen}}.dump(2) + "\n", out);
    } else if (report->parsed()) {
      std::cout << report_text_from_json(read_text_file(in_path));
    }
  } catch (const Error& e) {
    return fail(to_string(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}
