#pragma once

#include "bzsl/types.hpp"

namespace bzsl {

enum class SemanticKind { attributes, word_vectors, other };

// Class-level semantic vectors, one column per class.
struct SemanticTable {
  Matrix known;   // d_s x |C^l|
  Matrix unseen;  // d_s x |C^u|
  Metric metric = Metric::euclidean;
  SemanticKind kind = SemanticKind::attributes;
};

// Builds a table, l2-normalizing the columns of attribute tables. Applying it
// to an already-ingested table is a no-op up to rounding.
SemanticTable make_semantic_table(Matrix known, Matrix unseen, Metric metric, SemanticKind kind);

// Known-to-unseen and unseen-to-unseen distance blocks.
struct SemanticDistances {
  Matrix known_unseen;   // |C^l| x |C^u|
  Matrix unseen_unseen;  // |C^u| x |C^u|, symmetric, zero diagonal
};

SemanticDistances semantic_distances(const SemanticTable& table);

// gamma * word_vectors + (1 - gamma) * attributes, blockwise. No rescaling of
// either input is performed.
SemanticDistances fuse_distances(const SemanticDistances& attributes,
                                 const SemanticDistances& word_vectors, double gamma);

}  // namespace bzsl
