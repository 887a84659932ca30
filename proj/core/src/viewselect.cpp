#include "bzsl/viewselect.hpp"

#include <algorithm>
#include <iterator>
#include <string>

#include "bzsl/error.hpp"
#include "bzsl/linalg.hpp"

namespace bzsl {

SimilarityGraph average_similarity(std::span<const SimilarityGraph> graphs) {
  if (graphs.empty()) throw Error(ErrorKind::invalid_input, "average_similarity: no graphs");
  if (graphs.size() == 1) return graphs.front();
  SparseMatrix sum = graphs.front().weights;
  for (std::size_t m = 1; m < graphs.size(); ++m) {
    if (graphs[m].size() != sum.rows()) {
      throw Error(ErrorKind::shape, "average_similarity: graph " + std::to_string(m) + " has " +
                                        std::to_string(graphs[m].size()) + " nodes, expected " +
                                        std::to_string(sum.rows()));
    }
    sum += graphs[m].weights;
  }
  sum /= static_cast<double>(graphs.size());
  sum.prune(0.0);
  return graph_from_weights(std::move(sum));
}

Matrix build_kernel(const Matrix& x, const Matrix& z) {
  if (x.rows() != z.rows()) {
    throw Error(ErrorKind::shape, "build_kernel: feature dimensions differ (" +
                                      std::to_string(x.rows()) + " vs " + std::to_string(z.rows()) + ")");
  }
  return x.transpose() * z;
}

Matrix build_kernel(const Matrix& x) {
  Matrix k = x.transpose() * x;
  for (Index j = 0; j < k.cols(); ++j)
    for (Index i = j + 1; i < k.rows(); ++i) k(j, i) = k(i, j);
  return k;
}

Matrix average_kernels(std::span<const Matrix> kernels) {
  if (kernels.empty()) throw Error(ErrorKind::invalid_input, "average_kernels: no kernels");
  if (kernels.size() == 1) return kernels.front();
  Matrix sum = kernels.front();
  for (std::size_t m = 1; m < kernels.size(); ++m) {
    if (kernels[m].rows() != sum.rows() || kernels[m].cols() != sum.cols()) {
      throw Error(ErrorKind::shape, "average_kernels: kernel " + std::to_string(m) + " differs in shape");
    }
    sum += kernels[m];
  }
  return sum / static_cast<double>(kernels.size());
}

NeighborPartition neighbor_partition(const Matrix& x, std::span<const Label> labels, Index k) {
  const Index n = x.cols();
  if (static_cast<Index>(labels.size()) != n) {
    throw Error(ErrorKind::shape, "neighbor_partition: " + std::to_string(labels.size()) +
                                      " labels for " + std::to_string(n) + " instances");
  }
  NeighborPartition p;
  p.n = n;
  p.k = k;
  const auto knn = knn_indices(x, k);
  p.same_label.resize(static_cast<std::size_t>(n));
  p.diff_label.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (Index j : knn[ui]) {
      if (labels[ui] == labels[static_cast<std::size_t>(j)]) {
        p.same_label[ui].push_back(j);
        p.union_same.emplace_back(i, j);
      } else {
        p.diff_label[ui].push_back(j);
      }
    }
  }
  std::sort(p.union_same.begin(), p.union_same.end());
  return p;
}

double complementarity(std::span<const NeighborPair> first, std::span<const NeighborPair> second) {
  std::size_t common = 0;
  for (auto a = first.begin(), b = second.begin(); a != first.end() && b != second.end();) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++common;
      ++a;
      ++b;
    }
  }
  const auto denom = static_cast<double>(first.size() + second.size() - common);
  if (denom == 0.0) return 0.0;
  return (static_cast<double>(std::min(first.size(), second.size())) - static_cast<double>(common)) / denom;
}

namespace {

void require_same_instances(const NeighborPartition& a, const NeighborPartition& b) {
  if (a.n != b.n || a.k != b.k) {
    throw Error(ErrorKind::usage, "complementarity: partitions cover different instance sets or k (" +
                                      std::to_string(a.n) + "/" + std::to_string(a.k) + " vs " +
                                      std::to_string(b.n) + "/" + std::to_string(b.k) + ")");
  }
}

}  // namespace

double complementarity_pair(const NeighborPartition& p1, const NeighborPartition& p2) {
  require_same_instances(p1, p2);
  return complementarity(p1.union_same, p2.union_same);
}

double complementarity_set(const NeighborPartition& p, std::span<const NeighborPartition> selected) {
  if (selected.empty()) throw Error(ErrorKind::usage, "complementarity_set: empty selection");
  std::vector<NeighborPair> merged;
  for (const auto& s : selected) {
    require_same_instances(p, s);
    std::vector<NeighborPair> next;
    next.reserve(merged.size() + s.union_same.size());
    std::set_union(merged.begin(), merged.end(), s.union_same.begin(), s.union_same.end(),
                   std::back_inserter(next));
    merged = std::move(next);
  }
  return complementarity(p.union_same, merged);
}

std::vector<std::size_t> select_from_partitions(std::span<const NeighborPartition> partitions,
                                                std::span<const double> scores,
                                                const SelectionStop& stop) {
  if (partitions.empty()) throw Error(ErrorKind::invalid_input, "select_representations: no candidates");
  if (scores.size() != partitions.size()) {
    throw Error(ErrorKind::shape, "select_representations: one score per candidate required");
  }
  std::vector<std::size_t> remaining(partitions.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;

  std::size_t seed = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[seed]) seed = i;

  std::vector<std::size_t> order{seed};
  std::vector<NeighborPartition> chosen{partitions[seed]};
  remaining.erase(std::find(remaining.begin(), remaining.end(), seed));

  while (!remaining.empty()) {
    if (stop.max_count && order.size() >= *stop.max_count) break;
    std::size_t best_pos = 0;
    double best_c = -1.0;
    for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
      const double c = complementarity_set(partitions[remaining[pos]], chosen);
      if (c > best_c) {
        best_c = c;
        best_pos = pos;
      }
    }
    if (stop.min_complementarity && best_c < *stop.min_complementarity) break;
    const std::size_t pick = remaining[best_pos];
    order.push_back(pick);
    chosen.push_back(partitions[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }
  return order;
}

std::vector<std::string> select_representations(std::span<const NamedRepresentation> candidates,
                                                std::span<const Label> labels, Index k,
                                                const SelectionStop& stop,
                                                const RepresentationScorer& scorer) {
  if (candidates.empty()) throw Error(ErrorKind::invalid_input, "select_representations: no candidates");
  std::vector<NeighborPartition> partitions;
  std::vector<double> scores;
  for (const auto& c : candidates) {
    try {
      scores.push_back(scorer(c));
    } catch (const Error& e) {
      rethrow_with_context(e, "scorer failed for representation '" + c.name + "'");
    } catch (const std::exception& e) {
      throw Error(ErrorKind::invalid_input,
                  "scorer failed for representation '" + c.name + "': " + e.what());
    }
    partitions.push_back(neighbor_partition(c.features, labels, k));
  }
  std::vector<std::string> names;
  for (std::size_t i : select_from_partitions(partitions, scores, stop)) names.push_back(candidates[i].name);
  return names;
}

}  // namespace bzsl
