#include "bzsl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "bzsl/error.hpp"

namespace bzsl {

bool all_finite(const Matrix& x) noexcept { return x.allFinite(); }

void require_finite(const Matrix& x, const char* what) {
  if (!x.allFinite()) {
    throw Error(ErrorKind::invalid_input, std::string(what) + " contains non-finite entries");
  }
}

namespace {

// Unblocked factorization, used only to report which pivot fails.
[[noreturn]] void throw_failing_pivot(const Matrix& b) {
  const Index n = b.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double pivot = b(j, j);
    for (Index p = 0; p < j; ++p) pivot -= l(j, p) * l(j, p);
    if (!(pivot > 0.0)) {
      throw Error(ErrorKind::definiteness,
                  "matrix is not positive-definite: pivot " + std::to_string(j) +
                      " is " + std::to_string(pivot));
    }
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (Index i = j + 1; i < n; ++i) {
      double s = b(i, j);
      for (Index p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
      l(i, j) = s / d;
    }
  }
  throw Error(ErrorKind::definiteness, "matrix is numerically not positive-definite");
}

}  // namespace

Matrix cholesky_lower(const Matrix& b) {
  Eigen::LLT<Matrix> llt(b);
  if (llt.info() != Eigen::Success) throw_failing_pivot(b);
  Matrix l = llt.matrixL();
  if (!(l.diagonal().minCoeff() > 0.0)) throw_failing_pivot(b);
  return l;
}

namespace {

void require_symmetric(const Matrix& m, double tol, const char* what) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw Error(ErrorKind::invalid_input, std::string(what) + " is not symmetric");
  }
}

}  // namespace

EigenPairs solve_gsep(const Matrix& a, const Matrix& b, Index k, const GsepOptions& options) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw Error(ErrorKind::shape, "solve_gsep: A and B must be square and of equal size");
  }
  const Index n = a.rows();
  if (k < 1 || k > n) {
    throw Error(ErrorKind::bounds, "solve_gsep: k = " + std::to_string(k) +
                                       " outside [1, " + std::to_string(n) + "]");
  }
  require_finite(a, "solve_gsep: A");
  require_finite(b, "solve_gsep: B");
  require_symmetric(a, options.symmetry_tol, "solve_gsep: A");
  require_symmetric(b, options.symmetry_tol, "solve_gsep: B");

  const Matrix a_sym = 0.5 * (a + a.transpose());
  const Matrix b_sym = 0.5 * (b + b.transpose());
  const Matrix l = cholesky_lower(b_sym);
  const auto lower = l.triangularView<Eigen::Lower>();

  // C = L^-1 A L^-T
  Matrix c = lower.solve(a_sym);
  c = lower.solve(c.transpose()).transpose();
  c = 0.5 * (c + c.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(c);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::invalid_input, "solve_gsep: symmetric eigensolver did not converge");
  }

  EigenPairs out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  const auto upper_t = l.transpose().triangularView<Eigen::Upper>();
  for (Index i = 0; i < k; ++i) {
    // Eigen returns ascending order; ties keep the solver's column order.
    const Index src = n - 1 - i;
    out.values(i) = eig.eigenvalues()(src);
    Vector v = upper_t.solve(eig.eigenvectors().col(src));
    const double bnorm = std::sqrt(v.dot(b_sym * v));
    v /= bnorm;
    for (Index r = 0; r < n; ++r) {
      if (std::abs(v(r)) > options.sign_threshold) {
        if (v(r) < 0.0) v = -v;
        break;
      }
    }
    out.vectors.col(i) = v;
  }
  return out;
}

double euclidean(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  double s = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const double d = a(i) - b(i);
    s += d * d;
  }
  return std::sqrt(s);
}

namespace {

void check_pairwise(const Matrix& x, const Matrix& y, Metric metric, Vector& xn, Vector& yn) {
  if (x.rows() != y.rows()) {
    throw Error(ErrorKind::shape, "pairwise_distances: row count mismatch (" +
                                      std::to_string(x.rows()) + " vs " +
                                      std::to_string(y.rows()) + ")");
  }
  require_finite(x, "pairwise_distances: X");
  require_finite(y, "pairwise_distances: Y");
  xn = x.colwise().norm().transpose();
  yn = y.colwise().norm().transpose();
  if (metric == Metric::cosine) {
    for (Index j = 0; j < xn.size(); ++j)
      if (xn(j) == 0.0)
        throw Error(ErrorKind::degenerate_vector,
                    "cosine distance: column " + std::to_string(j) + " of X is zero");
    for (Index j = 0; j < yn.size(); ++j)
      if (yn(j) == 0.0)
        throw Error(ErrorKind::degenerate_vector,
                    "cosine distance: column " + std::to_string(j) + " of Y is zero");
  }
}

}  // namespace

Matrix pairwise_distances(const Matrix& x, const Matrix& y, Metric metric) {
  Vector xn, yn;
  check_pairwise(x, y, metric, xn, yn);
  const Matrix gram = x.transpose() * y;
  Matrix out(x.cols(), y.cols());
  for (Index j = 0; j < y.cols(); ++j) {
    for (Index i = 0; i < x.cols(); ++i) {
      if (metric == Metric::cosine) {
        out(i, j) = std::max(0.0, 1.0 - gram(i, j) / (xn(i) * yn(j)));
        continue;
      }
      const double scale = xn(i) * xn(i) + yn(j) * yn(j);
      const double sq = scale - 2.0 * gram(i, j);
      // The Gram expansion loses all precision when the points nearly
      // coincide; fall back to the direct difference there.
      out(i, j) = sq > 1e-6 * scale ? std::sqrt(sq) : euclidean(x.col(i), y.col(j));
    }
  }
  return out;
}

Matrix self_distances(const Matrix& x, Metric metric) {
  Matrix d = pairwise_distances(x, x, metric);
  for (Index j = 0; j < d.cols(); ++j) {
    d(j, j) = 0.0;
    for (Index i = j + 1; i < d.rows(); ++i) d(j, i) = d(i, j);
  }
  return d;
}

CenteredRows center_rows(const Matrix& x) {
  if (x.cols() < 1) throw Error(ErrorKind::shape, "center_rows: matrix has no columns");
  require_finite(x, "center_rows");
  CenteredRows out;
  out.mean = x.rowwise().mean();
  out.centered = x.colwise() - out.mean;
  return out;
}

Matrix l2_normalize_columns(const Matrix& x) {
  require_finite(x, "l2_normalize_columns");
  Matrix out = x;
  for (Index j = 0; j < x.cols(); ++j) {
    const double n = x.col(j).norm();
    if (n == 0.0) {
      throw Error(ErrorKind::degenerate_vector,
                  "l2_normalize_columns: column " + std::to_string(j) + " has zero norm");
    }
    out.col(j) /= n;
  }
  return out;
}

}  // namespace bzsl
