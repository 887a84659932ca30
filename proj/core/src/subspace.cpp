#include "bzsl/subspace.hpp"

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "bzsl/diagnostics.hpp"
#include "bzsl/error.hpp"
#include "bzsl/linalg.hpp"

namespace bzsl {

namespace {

void check_fit_args(const Matrix& x, double alpha, Index d_y) {
  if (x.cols() < 2) throw Error(ErrorKind::invalid_input, "fit: need at least 2 instances");
  if (!std::isfinite(alpha)) throw Error(ErrorKind::invalid_input, "fit: alpha is not finite");
  if (d_y < 1 || d_y > x.rows()) {
    throw Error(ErrorKind::bounds, "fit: d_y = " + std::to_string(d_y) + " outside [1, " +
                                       std::to_string(x.rows()) + "]");
  }
}

Matrix project_and_normalize(SubspaceModel& model, const Matrix& input) {
  Matrix y = model.projection.transpose() * input;
  auto centered = center_rows(y);
  model.training_mean = std::move(centered.mean);
  return l2_normalize_columns(centered.centered);
}

}  // namespace

SubspaceModel fit_graph_projection(const Matrix& features, const SimilarityGraph& graph,
                                   double alpha, Index d_y) {
  if (graph.size() != features.cols()) {
    throw Error(ErrorKind::shape, "graph has " + std::to_string(graph.size()) + " nodes but " +
                                      std::to_string(features.cols()) + " instances were given");
  }
  check_fit_args(features, alpha, d_y);
  require_finite(features, "fit: features");

  const Matrix a = (features * graph.degrees.asDiagonal()) * features.transpose();
  const Matrix lf = graph.laplacian * features.transpose();
  Matrix b = features * lf;
  b.diagonal().array() += alpha;

  auto eig = solve_gsep(0.5 * (a + a.transpose()), 0.5 * (b + b.transpose()), d_y);
  SubspaceModel model;
  model.projection = std::move(eig.vectors);
  model.eigenvalues = std::move(eig.values);
  model.hyper.alpha = alpha;
  model.hyper.d_y = d_y;
  return model;
}

SubspaceModel fit_slpp(const Matrix& x, std::span<const Label> labels, double alpha, Index d_y,
                       Index k_g) {
  check_fit_args(x, alpha, d_y);
  if (std::set<Label>(labels.begin(), labels.end()).size() < 2) {
    warn("fit_slpp: fewer than two distinct labels; the graph is entirely intra-class");
  }
  auto model = fit_graph_projection(x, build_similarity(x, labels, k_g), alpha, d_y);
  model.learner = Learner::slpp;
  model.hyper.k_G = k_g;
  return model;
}

SubspaceModel fit_lpp(const Matrix& x, double alpha, Index d_y, Index k_g) {
  check_fit_args(x, alpha, d_y);
  auto model = fit_graph_projection(x, build_similarity(x, k_g), alpha, d_y);
  model.learner = Learner::lpp;
  model.hyper.k_G = k_g;
  return model;
}

SubspaceModel fit_pca(const Matrix& x, Index d_y) {
  const Index limit = std::min(x.rows(), x.cols());
  if (d_y < 1 || d_y > limit) {
    throw Error(ErrorKind::bounds, "fit_pca: d_y = " + std::to_string(d_y) + " outside [1, " +
                                       std::to_string(limit) + "]");
  }
  const auto centered = center_rows(x);
  const Matrix cov =
      centered.centered * centered.centered.transpose() / static_cast<double>(x.cols());
  auto eig = solve_gsep(cov, Matrix::Identity(x.rows(), x.rows()), d_y);
  SubspaceModel model;
  model.projection = std::move(eig.vectors);
  model.eigenvalues = std::move(eig.values);
  model.learner = Learner::pca;
  model.hyper.alpha = 0.0;
  model.hyper.d_y = d_y;
  model.hyper.k_G = 0;
  return model;
}

SubspaceModel fit_slpp_kernelized(const Matrix& kernel, const SimilarityGraph& graph, double alpha,
                                  Index d_y, std::vector<Matrix> train_views) {
  if (kernel.rows() != kernel.cols()) {
    throw Error(ErrorKind::shape, "fit_slpp_kernelized: kernel matrix must be square");
  }
  require_finite(kernel, "fit_slpp_kernelized: kernel");
  const double scale = std::max(1.0, kernel.cwiseAbs().maxCoeff());
  if ((kernel - kernel.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorKind::invalid_input, "fit_slpp_kernelized: kernel matrix is not symmetric");
  }
  for (const auto& v : train_views) {
    if (v.cols() != kernel.cols()) {
      throw Error(ErrorKind::shape, "fit_slpp_kernelized: retained view has " +
                                        std::to_string(v.cols()) + " instances, kernel has " +
                                        std::to_string(kernel.cols()));
    }
  }
  auto model = fit_graph_projection(kernel, graph, alpha, d_y);
  model.flavor = Flavor::kernelized;
  model.learner = Learner::slpp;
  model.kernel_train_features = std::move(train_views);
  return model;
}

Matrix embed_training(SubspaceModel& model, const Matrix& x) {
  if (model.flavor != Flavor::raw) {
    throw Error(ErrorKind::usage, "embed_training: kernelized model needs kernel columns");
  }
  if (x.rows() != model.projection.rows()) {
    throw Error(ErrorKind::shape, "embed_training: feature dimension " + std::to_string(x.rows()) +
                                      " does not match model (" +
                                      std::to_string(model.projection.rows()) + ")");
  }
  return project_and_normalize(model, x);
}

Matrix embed_training(SubspaceModel& model, const KernelColumns& k) {
  if (model.flavor != Flavor::kernelized) {
    throw Error(ErrorKind::usage, "embed_training: raw model needs feature columns");
  }
  if (k.values.rows() != model.projection.rows()) {
    throw Error(ErrorKind::shape, "embed_training: kernel has " + std::to_string(k.values.rows()) +
                                      " rows, model expects " +
                                      std::to_string(model.projection.rows()));
  }
  return project_and_normalize(model, k.values);
}

Landmarks compute_landmarks(const Matrix& embedded, std::span<const Label> labels) {
  const std::set<Label> present(labels.begin(), labels.end());
  const Labels classes(present.begin(), present.end());
  return compute_landmarks(embedded, labels, classes);
}

Landmarks compute_landmarks(const Matrix& embedded, std::span<const Label> labels,
                            std::span<const Label> classes) {
  if (static_cast<Index>(labels.size()) != embedded.cols()) {
    throw Error(ErrorKind::shape, "compute_landmarks: " + std::to_string(labels.size()) +
                                      " labels for " + std::to_string(embedded.cols()) +
                                      " instances");
  }
  if (classes.empty()) throw Error(ErrorKind::invalid_input, "compute_landmarks: no classes");

  std::map<Label, Index> column;
  for (const Label c : classes) {
    if (!column.try_emplace(c, static_cast<Index>(column.size())).second) {
      throw Error(ErrorKind::invalid_input,
                  "compute_landmarks: class " + std::to_string(c) + " listed twice");
    }
  }
  Matrix sums = Matrix::Zero(embedded.rows(), static_cast<Index>(classes.size()));
  std::vector<Index> counts(classes.size(), 0);
  for (Index j = 0; j < embedded.cols(); ++j) {
    const auto it = column.find(labels[static_cast<std::size_t>(j)]);
    if (it == column.end()) continue;
    sums.col(it->second) += embedded.col(j);
    ++counts[static_cast<std::size_t>(it->second)];
  }

  Landmarks out;
  out.embedding.resize(embedded.rows(), sums.cols());
  out.class_ids.assign(classes.begin(), classes.end());
  for (Index c = 0; c < sums.cols(); ++c) {
    const Index count = counts[static_cast<std::size_t>(c)];
    if (count == 0) {
      throw Error(ErrorKind::invalid_input, "compute_landmarks: class " +
                                                std::to_string(out.class_ids[c]) +
                                                " has no instances");
    }
    const Vector mean = sums.col(c) / static_cast<double>(count);
    const double n = mean.norm();
    if (!(n > 1e-12)) {
      throw Error(ErrorKind::degenerate_landmark, "compute_landmarks: class " +
                                                      std::to_string(out.class_ids[c]) +
                                                      " has a zero mean embedding");
    }
    out.embedding.col(c) = mean / n;
  }
  return out;
}

}  // namespace bzsl
