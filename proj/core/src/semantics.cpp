#include "bzsl/semantics.hpp"

#include <string>
#include <utility>

#include "bzsl/error.hpp"
#include "bzsl/linalg.hpp"

namespace bzsl {

SemanticTable make_semantic_table(Matrix known, Matrix unseen, Metric metric, SemanticKind kind) {
  if (known.rows() != unseen.rows()) {
    throw Error(ErrorKind::shape, "semantic table: known and unseen dimensions differ (" +
                                      std::to_string(known.rows()) + " vs " +
                                      std::to_string(unseen.rows()) + ")");
  }
  SemanticTable t;
  t.metric = metric;
  t.kind = kind;
  if (kind == SemanticKind::attributes) {
    t.known = l2_normalize_columns(known);
    t.unseen = l2_normalize_columns(unseen);
  } else {
    t.known = std::move(known);
    t.unseen = std::move(unseen);
  }
  return t;
}

SemanticDistances semantic_distances(const SemanticTable& table) {
  if (table.known.rows() != table.unseen.rows()) {
    throw Error(ErrorKind::shape, "semantic_distances: known and unseen dimensions differ");
  }
  SemanticDistances d;
  d.known_unseen = pairwise_distances(table.known, table.unseen, table.metric);
  d.unseen_unseen = self_distances(table.unseen, table.metric);
  return d;
}

SemanticDistances fuse_distances(const SemanticDistances& attributes,
                                 const SemanticDistances& word_vectors, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error(ErrorKind::bounds, "fuse_distances: gamma = " + std::to_string(gamma) +
                                       " outside [0, 1]");
  }
  auto same_shape = [](const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols();
  };
  if (!same_shape(attributes.known_unseen, word_vectors.known_unseen) ||
      !same_shape(attributes.unseen_unseen, word_vectors.unseen_unseen)) {
    throw Error(ErrorKind::shape, "fuse_distances: distance blocks differ in shape");
  }
  if (gamma == 0.0) return attributes;
  if (gamma == 1.0) return word_vectors;
  SemanticDistances out;
  out.known_unseen = gamma * word_vectors.known_unseen + (1.0 - gamma) * attributes.known_unseen;
  out.unseen_unseen = gamma * word_vectors.unseen_unseen + (1.0 - gamma) * attributes.unseen_unseen;
  return out;
}

}  // namespace bzsl
