#include <cmath>

#include "bzsl/error.hpp"
#include "bzsl/semantics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bzsl;

TEST_SUITE("semantics") {

TEST_CASE("identical known and unseen vectors are at distance zero") {
  Matrix known(3, 2), unseen(3, 1);
  known << 1, 0, 2, 1, 0, 0;
  unseen << 0, 1, 0;
  const auto d = semantic_distances(make_semantic_table(known, unseen, Metric::euclidean, SemanticKind::attributes));
  CHECK(d.known_unseen(1, 0) == 0.0);
  CHECK(d.known_unseen(0, 0) > 0.0);
}

TEST_CASE("distances match a direct recomputation") {
  const Matrix known = oracle::random_matrix(6, 3, 1), unseen = oracle::random_matrix(6, 2, 2);
  const auto table = make_semantic_table(known, unseen, Metric::euclidean, SemanticKind::attributes);
  for (Index j = 0; j < 3; ++j) CHECK(std::abs(table.known.col(j).norm() - 1.0) <= 1e-15);
  const auto d = semantic_distances(table);
  const Matrix kn = known.colwise().normalized(), un = unseen.colwise().normalized();
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 2; ++j) CHECK(d.known_unseen(i, j) == doctest::Approx(oracle::dist(kn, i, un, j)).epsilon(1e-12));
  CHECK(d.unseen_unseen(0, 0) == 0.0);
  CHECK(d.unseen_unseen(1, 1) == 0.0);
  CHECK(d.unseen_unseen(0, 1) == d.unseen_unseen(1, 0));
  CHECK(d.unseen_unseen(0, 1) == doctest::Approx(oracle::dist(un, 0, un, 1)).epsilon(1e-12));

  const auto cos = semantic_distances(make_semantic_table(known, unseen, Metric::cosine, SemanticKind::word_vectors));
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 2; ++j) {
      const double c = known.col(i).dot(unseen.col(j)) / (known.col(i).norm() * unseen.col(j).norm());
      CHECK(cos.known_unseen(i, j) == doctest::Approx(1.0 - c).epsilon(1e-12));
    }
}

TEST_CASE("attribute ingestion is idempotent") {
  const auto once = make_semantic_table(oracle::random_matrix(4, 3, 5), oracle::random_matrix(4, 2, 6),
                                        Metric::euclidean, SemanticKind::attributes);
  const auto twice = make_semantic_table(once.known, once.unseen, Metric::euclidean, SemanticKind::attributes);
  CHECK((once.known - twice.known).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((once.unseen - twice.unseen).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("zero word vector under cosine is degenerate") {
  Matrix known = oracle::random_matrix(3, 2, 1);
  known.col(1).setZero();
  try {
    semantic_distances(make_semantic_table(known, oracle::random_matrix(3, 1, 2), Metric::cosine, SemanticKind::word_vectors));
    FAIL("expected degenerate vector");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_vector);
  }
}

TEST_CASE("fusion endpoints, midpoint and affinity") {
  SemanticDistances att, wv;
  att.known_unseen = Matrix::Constant(2, 2, 2.0);
  att.unseen_unseen = Matrix::Zero(2, 2);
  wv.known_unseen = Matrix::Constant(2, 2, 4.0);
  wv.unseen_unseen = Matrix::Zero(2, 2);
  CHECK(fuse_distances(att, wv, 0.0).known_unseen == att.known_unseen);
  CHECK(fuse_distances(att, wv, 1.0).known_unseen == wv.known_unseen);
  CHECK(fuse_distances(att, wv, 0.5).known_unseen(0, 0) == 3.0);

  SemanticDistances a, b;
  a.known_unseen = oracle::random_matrix(3, 4, 1).cwiseAbs();
  b.known_unseen = oracle::random_matrix(3, 4, 2).cwiseAbs();
  a.unseen_unseen = oracle::random_matrix(4, 4, 3).cwiseAbs();
  b.unseen_unseen = oracle::random_matrix(4, 4, 4).cwiseAbs();
  for (double g1 : {0.1, 0.3, 0.9})
    for (double g2 : {0.0, 0.4, 1.0}) {
      const Matrix lhs = fuse_distances(a, b, g1).known_unseen + fuse_distances(a, b, g2).known_unseen;
      const Matrix rhs = 2.0 * fuse_distances(a, b, (g1 + g2) / 2.0).known_unseen;
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    }

  try {
    fuse_distances(a, b, 1.5);
    FAIL("expected bounds error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::bounds);
  }
  try {
    fuse_distances(a, att, 0.5);
    FAIL("expected shape error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::shape);
  }
}

}  // TEST_SUITE
