#pragma once

#include <span>
#include <vector>

#include "bzsl/graph.hpp"
#include "bzsl/types.hpp"

namespace bzsl {

enum class Flavor { raw, kernelized };
enum class Learner { slpp, lpp, pca };

struct SubspaceHyper {
  double alpha = 1.0;
  Index d_y = 1;
  Index k_G = 1;
};

// Learned projection plus the latent-space normalization state.
//
// Raw models project features directly (projection is d_x x d_y). Kernelized
// models project kernel columns against the retained training views
// (projection is n_l x d_y). training_mean is filled by embed_training.
struct SubspaceModel {
  Matrix projection;
  Vector eigenvalues;
  Vector training_mean;
  Flavor flavor = Flavor::raw;
  Learner learner = Learner::slpp;
  std::vector<Matrix> kernel_train_features;
  SubspaceHyper hyper;

  Index latent_dim() const { return projection.cols(); }
};

// Unit-norm class landmarks in the latent space; class_ids ascending and
// aligned to columns.
struct Landmarks {
  Matrix embedding;
  Labels class_ids;
};

// Supervised LPP: top-d_y solutions of X D X^T p = lambda (X L X^T + alpha I) p
// over the label-filtered kNN graph.
SubspaceModel fit_slpp(const Matrix& x, std::span<const Label> labels, double alpha, Index d_y,
                       Index k_g);

// Unsupervised LPP: as fit_slpp with no label filter on the graph.
SubspaceModel fit_lpp(const Matrix& x, double alpha, Index d_y, Index k_g);

// Top-d_y principal directions of the row-centered data, orthonormal.
SubspaceModel fit_pca(const Matrix& x, Index d_y);

// SLPP with the combined kernel standing in for the features:
// K D K^T p = lambda (K L K^T + alpha I) p. `train_views` are retained so test
// kernels can be evaluated later. No kernel centering is applied.
SubspaceModel fit_slpp_kernelized(const Matrix& kernel, const SimilarityGraph& graph, double alpha,
                                  Index d_y, std::vector<Matrix> train_views = {});

// Solves the graph-regularized eigenproblem for arbitrary features F (d x n):
// F D F^T p = lambda (F L F^T + alpha I) p.
SubspaceModel fit_graph_projection(const Matrix& features, const SimilarityGraph& graph,
                                   double alpha, Index d_y);

// Projects training data, centers the rows (recording the mean into the
// model) and l2-normalizes every column. The raw overload requires a raw
// model and the kernel overload a kernelized one.
Matrix embed_training(SubspaceModel& model, const Matrix& x);
Matrix embed_training(SubspaceModel& model, const KernelColumns& k);

// Column i is the l2-normalized mean of the normalized embeddings of class i.
Landmarks compute_landmarks(const Matrix& embedded, std::span<const Label> labels);

// As above with an explicit class list (columns follow `classes`); a listed
// class without instances is an Error{invalid_input}.
Landmarks compute_landmarks(const Matrix& embedded, std::span<const Label> labels,
                            std::span<const Label> classes);

}  // namespace bzsl
