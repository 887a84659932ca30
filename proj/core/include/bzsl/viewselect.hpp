#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bzsl/graph.hpp"
#include "bzsl/types.hpp"

namespace bzsl {

// Equal-weight fusion of per-view graphs; degrees and Laplacian are rebuilt.
SimilarityGraph average_similarity(std::span<const SimilarityGraph> graphs);

// Linear kernel K_ij = x_i^T z_j.
Matrix build_kernel(const Matrix& x, const Matrix& z);
// Linear Gram matrix of x, exactly symmetric.
Matrix build_kernel(const Matrix& x);

Matrix average_kernels(std::span<const Matrix> kernels);

// (anchor, neighbor) pair; the unit counted by the complementarity measure.
using NeighborPair = std::pair<Index, Index>;

// kNN neighborhoods of one representation split by label agreement.
struct NeighborPartition {
  Index n = 0;
  Index k = 0;
  std::vector<std::vector<Index>> same_label;
  std::vector<std::vector<Index>> diff_label;
  // Sorted, duplicate-free union of all same-label (anchor, neighbor) pairs.
  std::vector<NeighborPair> union_same;
};

NeighborPartition neighbor_partition(const Matrix& x, std::span<const Label> labels, Index k);

// Overlap-based complementarity of two correct-neighbor sets:
// 
//   c = (min(|I1|, |I2|) - |I1 n I2|) / (|I1| + |I2| - |I1 n I2|)
// 
// in [0, 0.5]; 0 when both sets are empty. Inputs must be sorted and unique.
double complementarity(std::span<const NeighborPair> first, std::span<const NeighborPair> second);

double complementarity_pair(const NeighborPartition& p1, const NeighborPartition& p2);

// Complementarity between p and the union of the selected partitions' sets.
double complementarity_set(const NeighborPartition& p, std::span<const NeighborPartition> selected);

struct SelectionStop {
  std::optional<std::size_t> max_count;
  // Stop before adding a candidate whose complementarity is below this.
  std::optional<double> min_complementarity;
};

struct NamedRepresentation {
  std::string name;
  Matrix features;  // d_m x n, columns aligned across representations
};

// Classification performance of a single representation (higher is better).
using RepresentationScorer = std::function<double(const NamedRepresentation&)>;

// Greedy complementary-view selection: start from the best-scoring
// candidate, then repeatedly move the candidate with the highest
// complementarity to the selected set. Ties go to the earlier candidate.
// Returns names in selection order.
std::vector<std::string> select_representations(std::span<const NamedRepresentation> candidates,
                                                std::span<const Label> labels, Index k,
                                                const SelectionStop& stop,
                                                const RepresentationScorer& scorer);

// Selection on precomputed partitions and scores; returns candidate indices in
// selection order.
std::vector<std::size_t> select_from_partitions(std::span<const NeighborPartition> partitions,
                                                std::span<const double> scores,
                                                const SelectionStop& stop);

}  // namespace bzsl
