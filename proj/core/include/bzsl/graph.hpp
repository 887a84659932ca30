#pragma once

#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "bzsl/types.hpp"

namespace bzsl {

using SparseMatrix = Eigen::SparseMatrix<double>;

// kNN similarity graph over n instances with its degree vector and Laplacian.
// weights is exactly symmetric with a zero diagonal; laplacian = diag(degrees) - weights.
struct SimilarityGraph {
  SparseMatrix weights;
  Vector degrees;
  SparseMatrix laplacian;

  Index size() const { return weights.rows(); }
};

// Indices of the k nearest other columns of x for every column, nearest
// first. Distance ties are broken by ascending index.
std::vector<std::vector<Index>> knn_indices(const Matrix& x, Index k);

// Supervised graph: W_ij = exp(-||x_i - x_j|| / 2) when i and j are kNN of one
// another (either direction) and share a label. Neighborhoods are computed over
// all points before the label filter removes edges.
SimilarityGraph build_similarity(const Matrix& x, std::span<const Label> labels, Index k);

// Unsupervised (LPP) graph: as above without the label filter.
SimilarityGraph build_similarity(const Matrix& x, Index k);

// Builds a graph from an explicit symmetric weight matrix, filling in degrees
// and Laplacian.
SimilarityGraph graph_from_weights(SparseMatrix weights);

struct LaplacianParts {
  Vector degrees;
  SparseMatrix laplacian;
};

LaplacianParts laplacian(const SimilarityGraph& g);

}  // namespace bzsl
