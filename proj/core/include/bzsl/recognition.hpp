#pragma once

#include <map>
#include <span>
#include <vector>

#include "bzsl/lsm.hpp"
#include "bzsl/subspace.hpp"
#include "bzsl/types.hpp"

namespace bzsl {

// Everything needed to label test instances: projection, landmarks and the
// unseen-class embedding (columns aligned with unseen_class_ids).
struct ZslModel {
  SubspaceModel subspace;
  Landmarks landmarks;
  UnseenEmbedding unseen;
  Labels unseen_class_ids;
};

// y = P^T x minus the training latent mean, then l2-normalized per column.
Matrix project_test(const ZslModel& model, const Matrix& x);
Matrix project_test(const ZslModel& model, const KernelColumns& k);

// Combined (averaged) linear kernel between the model's retained training
// views and the matching test views.
KernelColumns test_kernel_columns(const SubspaceModel& model, std::span<const Matrix> test_views);

// Index of the nearest column of `centers` for every column of `points`
// (Euclidean, ties to the lowest index).
std::vector<Index> nearest_columns(const Matrix& points, const Matrix& centers);

// Nearest unseen-class embedding for each projected test instance.
Labels classify(const Matrix& projected, const ZslModel& model);

struct EvalReport {
  Labels classes;  // truth classes, ascending
  std::map<Label, double> per_class_recall;
  double mean_per_class_accuracy = 0.0;
  double per_image_accuracy = 0.0;
  // Rows follow `classes`; columns follow `predicted_classes`.
  Labels predicted_classes;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> confusion;
};

// Unweighted mean of per-class recalls over the classes present in `truth`.
EvalReport per_class_accuracy(std::span<const Label> predicted, std::span<const Label> truth);

// As above over an explicit class list; a listed class with no truth
// instances is an Error{invalid_input}.
EvalReport per_class_accuracy(std::span<const Label> predicted, std::span<const Label> truth,
                              std::span<const Label> classes);

}  // namespace bzsl
