#pragma once

#include <vector>

#include "bzsl/recognition.hpp"
#include "bzsl/types.hpp"

namespace bzsl {

// Moves every unseen-class embedding b_i halfway towards the mean of its k_st
// nearest projected test instances. k_st larger than the batch is clamped with
// a warning. The adjusted embeddings are not re-normalized.
ZslModel self_train(const ZslModel& model, const Matrix& projected_test, Index k_st);

struct KMeansOptions {
  Index max_iters = 100;
};

struct KMeansResult {
  Matrix centers;
  std::vector<Index> assignments;
  // Within-cluster sum of squares after each assignment step.
  std::vector<double> wcss;
  Index iterations = 0;
};

// Lloyd iterations from the given centers. An empty cluster is reseeded with
// the point farthest from its current center (taken from a cluster with at
// least two members).
KMeansResult kmeans(const Matrix& points, const Matrix& init_centers, const KMeansOptions& options = {});

// mapping[k] is the column assigned to row k.
struct Assignment {
  std::vector<Index> mapping;
  double total_cost = 0.0;
};

// Minimum-cost perfect matching on a square cost matrix (Hungarian method).
Assignment solve_assignment(const Matrix& cost);

struct StructuredPrediction {
  Labels labels;
  KMeansResult clusters;
  Assignment assignment;  // cluster -> unseen-class column
};

// K-means over the projected test batch seeded with the unseen embeddings,
// then a one-to-one cluster/class matching on center-to-embedding distance.
StructuredPrediction structured_predict_detailed(const ZslModel& model, const Matrix& projected_test,
                                                 const KMeansOptions& options = {});

Labels structured_predict(const ZslModel& model, const Matrix& projected_test,
                          const KMeansOptions& options = {});

}  // namespace bzsl
