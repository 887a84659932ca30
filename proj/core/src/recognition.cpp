#include "bzsl/recognition.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "bzsl/error.hpp"
#include "bzsl/linalg.hpp"

namespace bzsl {

namespace {

Matrix normalize_latent(const ZslModel& model, const Matrix& input) {
  const auto& sub = model.subspace;
  if (sub.training_mean.size() != sub.projection.cols()) {
    throw Error(ErrorKind::usage, "project_test: model has no training mean (embed_training not run)");
  }
  if (input.rows() != sub.projection.rows()) {
    throw Error(ErrorKind::shape, "project_test: input has " + std::to_string(input.rows()) +
                                      " rows, model expects " +
                                      std::to_string(sub.projection.rows()));
  }
  Matrix y = sub.projection.transpose() * input;
  y.colwise() -= sub.training_mean;
  return l2_normalize_columns(y);
}

}  // namespace

Matrix project_test(const ZslModel& model, const Matrix& x) {
  if (model.subspace.flavor != Flavor::raw) {
    throw Error(ErrorKind::usage, "project_test: kernelized model needs kernel columns");
  }
  return normalize_latent(model, x);
}

Matrix project_test(const ZslModel& model, const KernelColumns& k) {
  if (model.subspace.flavor != Flavor::kernelized) {
    throw Error(ErrorKind::usage, "project_test: raw model needs feature columns");
  }
  return normalize_latent(model, k.values);
}

KernelColumns test_kernel_columns(const SubspaceModel& model, std::span<const Matrix> test_views) {
  const auto& train = model.kernel_train_features;
  if (train.empty()) throw Error(ErrorKind::usage, "test_kernel_columns: model retains no training views");
  if (test_views.size() != train.size()) {
    throw Error(ErrorKind::shape, "test_kernel_columns: model has " + std::to_string(train.size()) +
                                      " views, got " + std::to_string(test_views.size()));
  }
  KernelColumns out;
  for (std::size_t m = 0; m < train.size(); ++m) {
    if (train[m].rows() != test_views[m].rows()) {
      throw Error(ErrorKind::shape, "test_kernel_columns: view " + std::to_string(m) +
                                        " dimension mismatch");
    }
    if (m > 0 && test_views[m].cols() != test_views[0].cols()) {
      throw Error(ErrorKind::shape, "test_kernel_columns: views disagree on instance count");
    }
    const Matrix k = train[m].transpose() * test_views[m];
    if (m == 0) out.values = k;
    else out.values += k;
  }
  out.values /= static_cast<double>(train.size());
  return out;
}

std::vector<Index> nearest_columns(const Matrix& points, const Matrix& centers) {
  if (centers.cols() == 0) throw Error(ErrorKind::usage, "nearest: no candidate columns");
  if (points.rows() != centers.rows()) {
    throw Error(ErrorKind::shape, "nearest: dimension mismatch (" + std::to_string(points.rows()) +
                                      " vs " + std::to_string(centers.rows()) + ")");
  }
  std::vector<Index> out(static_cast<std::size_t>(points.cols()));
  for (Index j = 0; j < points.cols(); ++j) {
    Index best = 0;
    double best_d = euclidean(points.col(j), centers.col(0));
    for (Index c = 1; c < centers.cols(); ++c) {
      const double d = euclidean(points.col(j), centers.col(c));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out[static_cast<std::size_t>(j)] = best;
  }
  return out;
}

Labels classify(const Matrix& projected, const ZslModel& model) {
  const Matrix& b = model.unseen.embedding;
  if (b.cols() == 0 || model.unseen_class_ids.empty()) {
    throw Error(ErrorKind::usage, "classify: model has no unseen classes");
  }
  if (static_cast<Index>(model.unseen_class_ids.size()) != b.cols()) {
    throw Error(ErrorKind::shape, "classify: unseen class ids do not match embedding columns");
  }
  const auto idx = nearest_columns(projected, b);
  Labels out;
  out.reserve(idx.size());
  for (Index i : idx) out.push_back(model.unseen_class_ids[static_cast<std::size_t>(i)]);
  return out;
}

EvalReport per_class_accuracy(std::span<const Label> predicted, std::span<const Label> truth,
                              std::span<const Label> classes) {
  const std::set<Label> present(truth.begin(), truth.end());
  for (const Label c : classes) {
    if (!present.contains(c)) {
      throw Error(ErrorKind::invalid_input,
                  "per_class_accuracy: class " + std::to_string(c) + " has no test instances");
    }
  }
  if (present.size() != std::set<Label>(classes.begin(), classes.end()).size()) {
    throw Error(ErrorKind::invalid_input, "per_class_accuracy: truth contains unlisted classes");
  }
  return per_class_accuracy(predicted, truth);
}

EvalReport per_class_accuracy(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorKind::shape, "per_class_accuracy: " + std::to_string(predicted.size()) +
                                      " predictions for " + std::to_string(truth.size()) +
                                      " instances");
  }
  if (truth.empty()) throw Error(ErrorKind::invalid_input, "per_class_accuracy: no instances");

  EvalReport r;
  const std::set<Label> truth_set(truth.begin(), truth.end());
  const std::set<Label> pred_set(predicted.begin(), predicted.end());
  r.classes.assign(truth_set.begin(), truth_set.end());
  r.predicted_classes.assign(pred_set.begin(), pred_set.end());
  auto row_of = [&](Label c) {
    return std::lower_bound(r.classes.begin(), r.classes.end(), c) - r.classes.begin();
  };
  auto col_of = [&](Label c) {
    return std::lower_bound(r.predicted_classes.begin(), r.predicted_classes.end(), c) -
           r.predicted_classes.begin();
  };
  r.confusion.setZero(static_cast<Index>(r.classes.size()),
                      static_cast<Index>(r.predicted_classes.size()));
  std::vector<std::int64_t> totals(r.classes.size(), 0), hits(r.classes.size(), 0);
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto row = row_of(truth[i]);
    ++r.confusion(row, col_of(predicted[i]));
    ++totals[static_cast<std::size_t>(row)];
    if (predicted[i] == truth[i]) {
      ++hits[static_cast<std::size_t>(row)];
      ++correct;
    }
  }
  double sum = 0.0;
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    const double recall = static_cast<double>(hits[c]) / static_cast<double>(totals[c]);
    r.per_class_recall[r.classes[c]] = recall;
    sum += recall;
  }
  r.mean_per_class_accuracy = sum / static_cast<double>(r.classes.size());
  r.per_image_accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
  return r;
}

}  // namespace bzsl
