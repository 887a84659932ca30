#include "bzsl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "bzsl/error.hpp"
#include "bzsl/linalg.hpp"

namespace bzsl {

namespace {

constexpr Index kDistanceBlock = 256;

SimilarityGraph build(const Matrix& x, std::span<const Label> labels, bool supervised, Index k) {
  const Index n = x.cols();
  if (k < 1 || k >= n) {
    throw Error(ErrorKind::bounds, "build_similarity: k_G = " + std::to_string(k) +
                                       " outside [1, " + std::to_string(n - 1) + "]");
  }
  if (supervised && static_cast<Index>(labels.size()) != n) {
    throw Error(ErrorKind::shape, "build_similarity: " + std::to_string(labels.size()) +
                                      " labels for " + std::to_string(n) + " instances");
  }
  require_finite(x, "build_similarity");

  const auto neighbors = knn_indices(x, k);

  // Collect each undirected edge once as (min, max).
  std::vector<std::pair<Index, Index>> edges;
  edges.reserve(static_cast<std::size_t>(n * k));
  for (Index i = 0; i < n; ++i) {
    for (Index j : neighbors[i]) {
      if (supervised && labels[i] != labels[j]) continue;
      edges.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * edges.size());
  for (const auto& [i, j] : edges) {
    const double w = std::exp(-euclidean(x.col(i), x.col(j)) / 2.0);
    triplets.emplace_back(i, j, w);
    triplets.emplace_back(j, i, w);
  }
  SparseMatrix weights(n, n);
  weights.setFromTriplets(triplets.begin(), triplets.end());
  return graph_from_weights(std::move(weights));
}

}  // namespace

std::vector<std::vector<Index>> knn_indices(const Matrix& x, Index k) {
  const Index n = x.cols();
  if (k < 1 || k >= n) {
    throw Error(ErrorKind::bounds, "knn: k = " + std::to_string(k) + " outside [1, " +
                                       std::to_string(n - 1) + "]");
  }
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index start = 0; start < n; start += kDistanceBlock) {
    const Index len = std::min(kDistanceBlock, n - start);
    const Matrix d = pairwise_distances(x.middleCols(start, len), x, Metric::euclidean);
    for (Index r = 0; r < len; ++r) {
      const Index i = start + r;
      std::iota(order.begin(), order.end(), Index{0});
      std::swap(order[static_cast<std::size_t>(i)], order.back());
      auto less = [&](Index a, Index b) {
        const double da = d(r, a), db = d(r, b);
        return da < db || (da == db && a < b);
      };
      std::partial_sort(order.begin(), order.begin() + k, order.end() - 1, less);
      out[static_cast<std::size_t>(i)].assign(order.begin(), order.begin() + k);
    }
  }
  return out;
}

SimilarityGraph build_similarity(const Matrix& x, std::span<const Label> labels, Index k) {
  return build(x, labels, true, k);
}

SimilarityGraph build_similarity(const Matrix& x, Index k) { return build(x, {}, false, k); }

SimilarityGraph graph_from_weights(SparseMatrix weights) {
  SimilarityGraph g;
  g.weights = std::move(weights);
  g.weights.makeCompressed();
  auto parts = laplacian(g);
  g.degrees = std::move(parts.degrees);
  g.laplacian = std::move(parts.laplacian);
  return g;
}

LaplacianParts laplacian(const SimilarityGraph& g) {
  const Index n = g.weights.rows();
  LaplacianParts out;
  out.degrees = Vector::Zero(n);
  // Row sums in column order; weights is symmetric so column sums are row sums.
  for (Index c = 0; c < g.weights.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(g.weights, c); it; ++it) out.degrees(it.row()) += it.value();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(g.weights.nonZeros() + n));
  for (Index i = 0; i < n; ++i) triplets.emplace_back(i, i, out.degrees(i));
  for (Index c = 0; c < g.weights.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(g.weights, c); it; ++it)
      triplets.emplace_back(it.row(), it.col(), -it.value());
  out.laplacian.resize(n, n);
  out.laplacian.setFromTriplets(triplets.begin(), triplets.end());
  out.laplacian.makeCompressed();
  return out;
}

}  // namespace bzsl
