#include "bzsl/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "bzsl/error.hpp"
#include "bzsl/matrix_io.hpp"
#include "bzsl/parallel.hpp"
#include "bzsl/postproc.hpp"
#include "bzsl/random.hpp"
#include "bzsl/viewselect.hpp"

namespace bzsl {

void validate(const HyperParams& h) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::bounds, "hyper-parameters: " + what); };
  if (!(h.alpha > 0.0) || !std::isfinite(h.alpha)) fail("alpha must be positive");
  if (h.d_y < 1) fail("d_y must be at least 1");
  if (h.k_G < 1) fail("k_G must be at least 1");
  if (h.k_ST < 1) fail("k_ST must be at least 1");
  if (!(h.eta > 0.0) || !std::isfinite(h.eta)) fail("eta must be positive");
  if (!(h.gamma >= 0.0 && h.gamma <= 1.0)) fail("gamma must be in [0, 1]");
}

HyperParams awa_googlenet_attributes_preset() {
  HyperParams h;
  h.alpha = 1000.0;
  h.d_y = 50;
  h.k_G = 5;
  h.k_ST = 180;
  return h;
}

HyperParams awa_vgg19_attributes_preset() {
  HyperParams h = awa_googlenet_attributes_preset();
  h.d_y = 150;
  return h;
}

void validate(const Dataset& data) {
  if (data.views.empty()) throw Error(ErrorKind::invalid_input, "dataset: no visual views");
  const Index n = data.views.front().cols();
  for (std::size_t m = 0; m < data.views.size(); ++m) {
    if (data.views[m].cols() != n) {
      throw Error(ErrorKind::shape, "dataset: view " + std::to_string(m) + " has " +
                                        std::to_string(data.views[m].cols()) + " instances, expected " +
                                        std::to_string(n));
    }
  }
  if (static_cast<Index>(data.labels.size()) != n) {
    throw Error(ErrorKind::shape, "dataset: " + std::to_string(data.labels.size()) + " labels for " +
                                      std::to_string(n) + " instances");
  }
  if (data.semantics.empty()) throw Error(ErrorKind::invalid_input, "dataset: no semantic representation");
  if (data.semantics.size() > 2) throw Error(ErrorKind::usage, "dataset: at most two semantic sources are supported");
  for (const Label l : data.labels) {
    for (const auto& s : data.semantics) {
      if (l < 0 || l >= s.vectors.cols()) {
        throw Error(ErrorKind::shape, "dataset: class " + std::to_string(l) + " has no column in semantic source '" +
                                          s.name + "' (" + std::to_string(s.vectors.cols()) + " columns)");
      }
    }
  }
}

std::vector<Index> instances_of(const Dataset& data, std::span<const Label> classes) {
  const std::set<Label> wanted(classes.begin(), classes.end());
  std::vector<Index> out;
  for (std::size_t i = 0; i < data.labels.size(); ++i)
    if (wanted.contains(data.labels[i])) out.push_back(static_cast<Index>(i));
  return out;
}

namespace {

Matrix columns(const Matrix& m, std::span<const Index> idx) {
  Matrix out(m.rows(), static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Index>(j)) = m.col(idx[j]);
  return out;
}

Matrix class_columns(const Matrix& m, std::span<const Label> classes) {
  Matrix out(m.rows(), static_cast<Index>(classes.size()));
  for (std::size_t j = 0; j < classes.size(); ++j) out.col(static_cast<Index>(j)) = m.col(classes[j]);
  return out;
}

SemanticDistances source_distances(const SemanticSource& s, std::span<const Label> known,
                                   std::span<const Label> unseen) {
  const auto table =
      make_semantic_table(class_columns(s.vectors, known), class_columns(s.vectors, unseen), s.metric, s.kind);
  return semantic_distances(table);
}

}  // namespace

SemanticDistances class_distances(const Dataset& data, std::span<const Label> known,
                                  std::span<const Label> unseen, const HyperParams& h,
                                  const PipelineOptions& options) {
  if (options.semantic_source) {
    if (*options.semantic_source >= data.semantics.size()) {
      throw Error(ErrorKind::usage, "semantic source " + std::to_string(*options.semantic_source) + " does not exist");
    }
    return source_distances(data.semantics[*options.semantic_source], known, unseen);
  }
  if (data.semantics.size() == 1) return source_distances(data.semantics.front(), known, unseen);
  return fuse_distances(source_distances(data.semantics[0], known, unseen),
                        source_distances(data.semantics[1], known, unseen), h.gamma);
}

ZslModel fit_model(const Dataset& data, const SplitSpec& split, const HyperParams& h,
                   const PipelineOptions& options) {
  validate(h);
  validate(data);
  validate_split(split);
  if (split.train_classes.empty() || split.test_classes.empty()) {
    throw Error(ErrorKind::invalid_input, "fit: split needs both training and unseen classes");
  }
  const auto train_idx = instances_of(data, split.train_classes);
  Labels train_labels;
  for (Index i : train_idx) train_labels.push_back(data.labels[static_cast<std::size_t>(i)]);
  const bool supervised = options.learner == Learner::slpp && options.graph == GraphMode::supervised;

  ZslModel model;
  Matrix embedded;
  try {
    if (options.kernelized) {
      if (options.learner == Learner::pca) {
        throw Error(ErrorKind::usage, "the kernelized path supports slpp and lpp learners only");
      }
      std::vector<Matrix> train_views;
      std::vector<SimilarityGraph> graphs;
      std::vector<Matrix> kernels;
      for (const auto& v : data.views) {
        train_views.push_back(columns(v, train_idx));
        graphs.push_back(supervised ? build_similarity(train_views.back(), train_labels, h.k_G)
                                    : build_similarity(train_views.back(), h.k_G));
        kernels.push_back(build_kernel(train_views.back()));
      }
      KernelColumns combined{average_kernels(kernels)};
      model.subspace = fit_slpp_kernelized(combined.values, average_similarity(graphs), h.alpha, h.d_y,
                                           std::move(train_views));
      model.subspace.learner = options.learner;
      model.subspace.hyper.k_G = h.k_G;
      embedded = embed_training(model.subspace, combined);
    } else {
      if (data.views.size() != 1) {
        throw Error(ErrorKind::usage, "multiple visual views require the kernelized path");
      }
      const Matrix x = columns(data.views.front(), train_idx);
      switch (options.learner) {
        case Learner::slpp:
          model.subspace = supervised ? fit_slpp(x, train_labels, h.alpha, h.d_y, h.k_G)
                                      : fit_lpp(x, h.alpha, h.d_y, h.k_G);
          model.subspace.learner = Learner::slpp;
          break;
        case Learner::lpp:
          model.subspace = fit_lpp(x, h.alpha, h.d_y, h.k_G);
          break;
        case Learner::pca:
          model.subspace = fit_pca(x, h.d_y);
          break;
      }
      embedded = embed_training(model.subspace, x);
    }
  } catch (const Error& e) {
    rethrow_with_context(e, "bottom-up fit");
  }

  try {
    model.landmarks = compute_landmarks(embedded, train_labels, split.train_classes);
  } catch (const Error& e) {
    rethrow_with_context(e, "landmarks");
  }

  SemanticDistances delta;
  try {
    delta = class_distances(data, split.train_classes, split.test_classes, h, options);
  } catch (const Error& e) {
    rethrow_with_context(e, "semantic distances");
  }

  LsmOptions lsm;
  lsm.eta = h.eta;
  lsm.seed = h.seed;
  lsm.max_iters = options.lsm_max_iters;
  lsm.rel_tol = options.lsm_rel_tol;
  try {
    model.unseen = embed_unseen(model.landmarks, delta, lsm);
  } catch (const Error& e) {
    rethrow_with_context(e, "top-down embedding");
  }
  model.unseen_class_ids = split.test_classes;
  return model;
}

Matrix project_views(const ZslModel& model, std::span<const Matrix> test_views) {
  if (model.subspace.flavor == Flavor::kernelized) {
    return project_test(model, test_kernel_columns(model.subspace, test_views));
  }
  if (test_views.size() != 1) throw Error(ErrorKind::usage, "raw model expects exactly one test view");
  return project_test(model, test_views.front());
}

Labels predict_projected(const ZslModel& model, const Matrix& projected, const HyperParams& h,
                         const PipelineOptions& options) {
  switch (options.postproc) {
    case PostProc::none:
      return classify(projected, model);
    case PostProc::self_train:
      return classify(projected, self_train(model, projected, h.k_ST));
    case PostProc::structured: {
      KMeansOptions km;
      km.max_iters = options.kmeans_max_iters;
      return structured_predict(model, projected, km);
    }
  }
  throw Error(ErrorKind::usage, "unknown post-processing mode");
}

TrialResult run_experiment(const Dataset& data, const SplitSpec& split, const HyperParams& h,
                           const PipelineOptions& options) {
  TrialResult out;
  out.lsm_seed = h.seed;
  out.split = split;
  const ZslModel model = fit_model(data, split, h, options);
  out.lsm = model.unseen;

  const auto test_idx = instances_of(data, split.test_classes);
  if (test_idx.empty()) throw Error(ErrorKind::invalid_input, "test classes have no instances");
  std::vector<Matrix> test_views;
  for (const auto& v : data.views) test_views.push_back(columns(v, test_idx));
  Labels truth;
  for (Index i : test_idx) truth.push_back(data.labels[static_cast<std::size_t>(i)]);

  Labels predicted;
  try {
    predicted = predict_projected(model, project_views(model, test_views), h, options);
  } catch (const Error& e) {
    rethrow_with_context(e, "recognition");
  }
  out.report = per_class_accuracy(predicted, truth, split.test_classes);
  return out;
}

Dataset load_dataset(const ExperimentConfig& config) {
  Dataset d;
  for (const auto& p : config.views) d.views.push_back(load_matrix(p));
  d.labels = load_labels(config.labels);
  for (const auto& s : config.semantics) {
    SemanticSource src;
    src.name = s.path.filename().string();
    src.vectors = load_matrix(s.path);
    src.metric = s.metric;
    src.kind = s.kind;
    d.semantics.push_back(std::move(src));
  }
  validate(d);
  return d;
}

SplitSpec trial_split(const Dataset& data, const SplitSource& source, std::size_t trial) {
  if (source.explicit_split) {
    validate_split(*source.explicit_split);
    return *source.explicit_split;
  }
  auto s = make_classwise_split(data.labels, source.test_fraction, derive_seed(source.seed, trial));
  return validation_task(s);
}

RunReport run_pipeline(const Dataset& data, const ExperimentConfig& config) {
  validate(config.hyper);
  if (config.trials < 1) throw Error(ErrorKind::bounds, "trials must be at least 1");
  RunReport report;
  report.hyper = config.hyper;
  report.options = config.options;
  report.trials.resize(config.trials);
  parallel_for(config.trials, config.threads, [&](std::size_t t) {
    HyperParams h = config.hyper;
    h.seed = derive_seed(config.hyper.seed, t);
    try {
      report.trials[t] = run_experiment(data, trial_split(data, config.split, t), h, config.options);
    } catch (const Error& e) {
      rethrow_with_context(e, "trial " + std::to_string(t));
    }
  });

  const auto n = static_cast<double>(report.trials.size());
  double sum = 0.0, sum_img = 0.0;
  for (const auto& t : report.trials) {
    sum += t.report.mean_per_class_accuracy;
    sum_img += t.report.per_image_accuracy;
  }
  report.mean_accuracy = sum / n;
  report.mean_per_image_accuracy = sum_img / n;
  if (report.trials.size() > 1) {
    double ss = 0.0;
    for (const auto& t : report.trials) {
      const double d = t.report.mean_per_class_accuracy - report.mean_accuracy;
      ss += d * d;
    }
    report.standard_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return report;
}

RunReport run_pipeline(const ExperimentConfig& config) {
  return run_pipeline(load_dataset(config), config);
}

}  // namespace bzsl
