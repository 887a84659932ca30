#pragma once

#include "bzsl/types.hpp"

namespace bzsl {

// Generalized symmetric-definite eigenpairs, values in descending order.
// Column i of `vectors` pairs with values[i] and has unit B-norm.
struct EigenPairs {
  Vector values;
  Matrix vectors;
};

struct GsepOptions {
  // Max |A - A^T| allowed, relative to max(1, max|A|).
  double symmetry_tol = 1e-10;
  // First component with magnitude above this is made positive.
  double sign_threshold = 1e-12;
};

// Solves A v = lambda B v for the k largest lambda by Cholesky reduction
// B = L L^T and a dense symmetric solve of L^-1 A L^-T.
// 
// Throws Error{invalid_input} on non-finite or asymmetric input,
// Error{definiteness} naming the failing pivot when B is not SPD, and
// Error{bounds} when k is outside [1, n].
EigenPairs solve_gsep(const Matrix& a, const Matrix& b, Index k,
                      const GsepOptions& options = {});

// Lower Cholesky factor of an SPD matrix. Throws Error{definiteness} with the
// zero-based index of the first non-positive pivot.
Matrix cholesky_lower(const Matrix& b);

// Entry (i, j) is the distance between column i of x and column j of y.
// Cosine distance is 1 - cos(x, y), clamped to be non-negative.
Matrix pairwise_distances(const Matrix& x, const Matrix& y, Metric metric);

// Same as pairwise_distances(x, x, metric) but exactly symmetric with an
// exactly zero diagonal.
Matrix self_distances(const Matrix& x, Metric metric);

// Euclidean distance between two columns, summed in index order.
double euclidean(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

struct CenteredRows {
  Matrix centered;
  Vector mean;  // centered + mean * 1^T reproduces the input
};

CenteredRows center_rows(const Matrix& x);

// Throws Error{degenerate_vector} naming the first zero column.
Matrix l2_normalize_columns(const Matrix& x);

bool all_finite(const Matrix& x) noexcept;

// Throws Error{invalid_input} mentioning `what` when x has NaN/inf entries.
void require_finite(const Matrix& x, const char* what);

}  // namespace bzsl
