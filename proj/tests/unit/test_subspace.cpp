#include <cmath>
#include <numeric>

#include "bzsl/error.hpp"
#include "bzsl/graph.hpp"
#include "bzsl/linalg.hpp"
#include "bzsl/subspace.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bzsl;

namespace {

struct Pencil {
  Matrix a, b;
};

// The SLPP pencil recomputed from the graph with dense products.
Pencil slpp_pencil(const Matrix& f, const SimilarityGraph& g, double alpha) {
  const Matrix w(g.weights);
  Vector d = w.rowwise().sum();
  const Matrix l = Matrix(d.asDiagonal()) - w;
  Pencil p;
  p.a = f * d.asDiagonal() * f.transpose();
  p.b = f * l * f.transpose() + alpha * Matrix::Identity(f.rows(), f.rows());
  return p;
}

void check_residuals(const Pencil& p, const SubspaceModel& m) {
  for (Index j = 0; j < m.projection.cols(); ++j) {
    const Vector v = m.projection.col(j);
    const double lambda = m.eigenvalues(j);
    const double bound = 1e-8 * (p.a.norm() + std::abs(lambda) * p.b.norm());
    CHECK((p.a * v - lambda * (p.b * v)).norm() <= bound);
  }
}

Labels cyclic_labels(Index n, Index classes) {
  Labels l;
  for (Index i = 0; i < n; ++i) l.push_back(i % classes);
  return l;
}

}  // namespace

TEST_SUITE("subspace") {

TEST_CASE("one-hot instances satisfy the SLPP residual bound") {
  const Matrix x = Matrix::Identity(3, 3);
  const Labels labels{0, 1, 2};
  const auto m = fit_slpp(x, labels, 1.0, 2, 1);
  CHECK(m.projection.rows() == 3);
  CHECK(m.projection.cols() == 2);
  check_residuals(slpp_pencil(x, build_similarity(x, labels, 1), 1.0), m);
}

TEST_CASE("SLPP residuals and Rayleigh quotient ordering on random data") {
  const Matrix x = oracle::random_matrix(8, 40, 3);
  const Labels labels = cyclic_labels(40, 4);
  const auto m = fit_slpp(x, labels, 0.5, 6, 5);
  const auto p = slpp_pencil(x, build_similarity(x, labels, 5), 0.5);
  check_residuals(p, m);
  double previous = INFINITY;
  for (Index j = 0; j < 6; ++j) {
    const Vector v = m.projection.col(j);
    const double q = v.dot(p.a * v) / v.dot(p.b * v);
    CHECK(q <= previous + 1e-12);
    previous = q;
  }
}

TEST_CASE("SLPP is invariant to instance order") {
  const Matrix x = oracle::random_matrix(6, 30, 8);
  const Labels labels = cyclic_labels(30, 3);
  std::vector<Index> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(4);
  for (Index i = 29; i > 0; --i) std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i + 1))]);
  Matrix xp(6, 30);
  Labels lp(30);
  for (Index j = 0; j < 30; ++j) {
    xp.col(j) = x.col(perm[j]);
    lp[j] = labels[perm[j]];
  }
  const auto a = fit_slpp(x, labels, 1.0, 4, 4);
  const auto b = fit_slpp(xp, lp, 1.0, 4, 4);
  CHECK((a.projection - b.projection).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("single-class SLPP runs with a warning") {
  oracle::WarningCapture warnings;
  const Matrix x = oracle::random_matrix(3, 10, 2);
  const Labels labels(10, 7);
  const auto m = fit_slpp(x, labels, 1.0, 2, 3);
  CHECK(m.projection.cols() == 2);
  CHECK(warnings.messages.size() == 1);
  const Matrix w(build_similarity(x, labels, 3).weights);
  const Matrix wu(build_similarity(x, 3).weights);
  CHECK(w == wu);
}

TEST_CASE("LPP equals SLPP when all labels agree") {
  oracle::WarningCapture warnings;
  const Matrix x = oracle::random_matrix(5, 25, 31);
  const Labels labels(25, 0);
  const auto s = fit_slpp(x, labels, 2.0, 3, 4);
  const auto l = fit_lpp(x, 2.0, 3, 4);
  CHECK(s.projection == l.projection);
  CHECK(s.eigenvalues == l.eigenvalues);
  check_residuals(slpp_pencil(x, build_similarity(x, 4), 2.0), l);
  // k_G = n - 1: complete graph.
  const auto dense_graph = fit_lpp(x, 2.0, 3, 24);
  check_residuals(slpp_pencil(x, build_similarity(x, 24), 2.0), dense_graph);
}

TEST_CASE("fit argument errors") {
  const Matrix x = oracle::random_matrix(3, 10, 2);
  const Labels labels = cyclic_labels(10, 2);
  try {
    fit_slpp(x, labels, 1.0, 4, 2);
    FAIL("expected bounds error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::bounds);
  }
  // Rank-deficient X L X^T with alpha = 0: one-hot singleton classes give L = 0.
  try {
    fit_slpp(Matrix::Identity(3, 3), Labels{0, 1, 2}, 0.0, 1, 1);
    FAIL("expected definiteness error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::definiteness);
  }
}

TEST_CASE("PCA on a line recovers the line direction") {
  Matrix x(2, 5);
  for (Index j = 0; j < 5; ++j) x.col(j) << 3.0 * j, 4.0 * j;
  const auto m = fit_pca(x, 1);
  CHECK(std::abs(m.projection(0, 0) - 0.6) <= 1e-10);
  CHECK(std::abs(m.projection(1, 0) - 0.8) <= 1e-10);
}

TEST_CASE("PCA projection is orthonormal and reconstruction error decreases with d_y") {
  const Matrix x = oracle::random_matrix(6, 20, 17);
  const auto c = center_rows(x).centered;
  double previous = INFINITY;
  for (Index d = 1; d <= 6; ++d) {
    const auto m = fit_pca(x, d);
    CHECK((m.projection.transpose() * m.projection - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10);
    const double err = (c - m.projection * (m.projection.transpose() * c)).squaredNorm();
    CHECK(err <= previous + 1e-10);
    previous = err;
  }
  CHECK(previous <= 1e-18 * c.squaredNorm() + 1e-20);
  CHECK_THROWS_AS(fit_pca(x, 7), Error);
  CHECK_THROWS_AS(fit_pca(oracle::random_matrix(6, 3, 1), 4), Error);
}

TEST_CASE("kernelized SLPP with a single linear view") {
  const Matrix x = oracle::random_matrix(5, 20, 23);
  const Labels labels = cyclic_labels(20, 4);
  const Matrix k = x.transpose() * x;
  const auto g = build_similarity(x, labels, 3);
  auto m = fit_slpp_kernelized(k, g, 1.0, 4, {x});
  CHECK(m.flavor == Flavor::kernelized);
  CHECK(m.projection.rows() == 20);
  check_residuals(slpp_pencil(k, g, 1.0), m);
  const Matrix y = embed_training(m, KernelColumns{k});
  for (Index j = 0; j < 20; ++j) CHECK(std::abs(y.col(j).norm() - 1.0) <= 1e-12);
}

TEST_CASE("identity kernel reduces to D p = lambda (L + alpha I) p") {
  const Matrix x = oracle::random_matrix(3, 12, 41);
  const Labels labels = cyclic_labels(12, 2);
  const auto g = build_similarity(x, labels, 3);
  const auto m = fit_slpp_kernelized(Matrix::Identity(12, 12), g, 0.7, 3);
  const Matrix w(g.weights);
  const Vector d = w.rowwise().sum();
  Pencil p;
  p.a = d.asDiagonal();
  p.b = Matrix(d.asDiagonal()) - w + 0.7 * Matrix::Identity(12, 12);
  check_residuals(p, m);
}

TEST_CASE("asymmetric kernels are rejected") {
  Matrix k = Matrix::Identity(4, 4);
  k(0, 1) = 0.5;
  const auto g = build_similarity(oracle::random_matrix(2, 4, 1), 1);
  try {
    fit_slpp_kernelized(k, g, 1.0, 2);
    FAIL("expected invalid input");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_input);
  }
}

TEST_CASE("embed_training normalization") {
  const Matrix x = oracle::random_matrix(7, 30, 5);
  auto m = fit_slpp(x, cyclic_labels(30, 3), 1.0, 4, 5);
  const Matrix y = embed_training(m, x);
  const Matrix before = (m.projection.transpose() * x).colwise() - m.training_mean;
  for (Index i = 0; i < 4; ++i) CHECK(std::abs(before.row(i).mean()) <= 1e-12);
  for (Index j = 0; j < 30; ++j) CHECK(std::abs(y.col(j).norm() - 1.0) <= 1e-12);

  try {
    embed_training(m, KernelColumns{Matrix::Identity(30, 30)});
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::usage);
  }
}

TEST_CASE("identity projection leaves centered unit-norm input unchanged") {
  // Unit columns (a, a) and (-a, -a); every row already sums to zero.
  const double a = 1.0 / std::sqrt(2.0);
  Matrix y(2, 2);
  y << a, -a, a, -a;
  SubspaceModel m;
  m.projection = Matrix::Identity(2, 2);
  const Matrix out = embed_training(m, y);
  CHECK((out - y).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(m.training_mean.isZero());
}

TEST_CASE("landmarks") {
  Matrix e(2, 2);
  e << 1, 0, 0, 1;
  const Labels same{5, 5};
  const auto lm = compute_landmarks(e, same);
  CHECK(lm.class_ids == Labels{5});
  CHECK(lm.embedding(0, 0) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
  CHECK(lm.embedding(1, 0) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));

  const Labels split{1, 2};
  const auto singles = compute_landmarks(e, split);
  CHECK(singles.embedding == e);

  Matrix antipodal(2, 2);
  antipodal << 1, -1, 0, 0;
  try {
    compute_landmarks(antipodal, same);
    FAIL("expected degenerate landmark");
  } catch (const Error& ex) {
    CHECK(ex.kind() == ErrorKind::degenerate_landmark);
  }
  const Labels classes{1, 2, 3};
  try {
    compute_landmarks(e, split, classes);
    FAIL("expected invalid input");
  } catch (const Error& ex) {
    CHECK(ex.kind() == ErrorKind::invalid_input);
  }
}

}  // TEST_SUITE
