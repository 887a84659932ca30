#include <cmath>

#include "bzsl/error.hpp"
#include "bzsl/recognition.hpp"
#include "bzsl/subspace.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bzsl;

namespace {

ZslModel identity_model(const Matrix& unseen) {
  ZslModel m;
  m.subspace.projection = Matrix::Identity(unseen.rows(), unseen.rows());
  m.subspace.training_mean = Vector::Zero(unseen.rows());
  m.unseen.embedding = unseen;
  for (Index c = 0; c < unseen.cols(); ++c) m.unseen_class_ids.push_back(100 + c);
  return m;
}

}  // namespace

TEST_SUITE("recognition") {

TEST_CASE("project_test normalizes after centering") {
  const ZslModel m = identity_model(Matrix::Identity(2, 2));
  Matrix x(2, 1);
  x << 3, 4;
  const Matrix y = project_test(m, x);
  CHECK(y(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(y(1, 0) == doctest::Approx(0.8).epsilon(1e-15));

  const Matrix batch = project_test(m, oracle::random_matrix(2, 20, 3));
  for (Index j = 0; j < 20; ++j) CHECK(std::abs(batch.col(j).norm() - 1.0) <= 1e-12);

  try {
    project_test(m, Matrix::Zero(2, 1));
    FAIL("expected degenerate vector");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_vector);
  }
  try {
    project_test(m, KernelColumns{Matrix::Identity(2, 2)});
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::usage);
  }
}

TEST_CASE("training instances project onto their stored embeddings") {
  const Matrix x = oracle::random_matrix(6, 24, 9);
  Labels labels;
  for (Index i = 0; i < 24; ++i) labels.push_back(i % 3);
  ZslModel m;
  m.subspace = fit_slpp(x, labels, 1.0, 3, 4);
  const Matrix stored = embed_training(m.subspace, x);
  CHECK((project_test(m, x) - stored).cwiseAbs().maxCoeff() <= 1e-14);

  ZslModel k;
  const Matrix kernel = x.transpose() * x;
  k.subspace = fit_slpp_kernelized(kernel, build_similarity(x, labels, 4), 1.0, 3, {x});
  const Matrix kstored = embed_training(k.subspace, KernelColumns{kernel});
  const std::vector<Matrix> views{x};
  CHECK((project_test(k, test_kernel_columns(k.subspace, views)) - kstored).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("classify picks the nearest unseen embedding") {
  Matrix u(2, 2);
  u << 1, -1, 0, 0;
  const ZslModel m = identity_model(u);
  Matrix at(2, 2);
  at << 1, -1, 0, 0;
  CHECK(classify(at, m) == Labels{100, 101});
  Matrix tie(2, 1);
  tie << 0, 1;
  CHECK(classify(tie, m) == Labels{100});
}

TEST_CASE("classify matches exhaustive scan and is permutation and scale invariant") {
  const Matrix u = oracle::random_matrix(4, 5, 1), y = oracle::random_matrix(4, 20, 2);
  const ZslModel m = identity_model(u);
  const Labels got = classify(y, m);
  for (Index j = 0; j < 20; ++j) {
    Index best = 0;
    for (Index c = 1; c < 5; ++c)
      if (oracle::dist(y, j, u, c) < oracle::dist(y, j, u, best)) best = c;
    CHECK(got[j] == 100 + best);
  }
  // Reverse the class columns and ids.
  ZslModel r = m;
  for (Index c = 0; c < 5; ++c) {
    r.unseen.embedding.col(c) = u.col(4 - c);
    r.unseen_class_ids[c] = m.unseen_class_ids[4 - c];
  }
  CHECK(classify(y, r) == got);
  ZslModel scaled = m;
  scaled.unseen.embedding *= 3.5;
  CHECK(classify(3.5 * y, scaled) == got);

  ZslModel empty = m;
  empty.unseen.embedding.resize(4, 0);
  empty.unseen_class_ids.clear();
  try {
    classify(y, empty);
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::usage);
  }
}

TEST_CASE("per-class accuracy") {
  const Labels truth{1, 1, 2, 2}, pred{1, 2, 2, 2};
  const auto r = per_class_accuracy(pred, truth);
  CHECK(r.per_class_recall.at(1) == 0.5);
  CHECK(r.per_class_recall.at(2) == 1.0);
  CHECK(r.mean_per_class_accuracy == 0.75);
  CHECK(r.per_image_accuracy == 0.75);
  CHECK(r.confusion(0, 0) == 1);
  CHECK(r.confusion(0, 1) == 1);
  CHECK(r.confusion(1, 1) == 2);

  CHECK(per_class_accuracy(truth, truth).mean_per_class_accuracy == 1.0);

  Labels imbalanced(9, 1), all_a(10, 1);
  imbalanced.push_back(2);
  const auto i = per_class_accuracy(all_a, imbalanced);
  CHECK(i.mean_per_class_accuracy == 0.5);
  CHECK(i.per_image_accuracy == doctest::Approx(0.9));

  // Duplicating all instances of one class leaves the mean unchanged.
  Labels t2 = truth, p2 = pred;
  t2.insert(t2.end(), {1, 1});
  p2.insert(p2.end(), {1, 2});
  CHECK(per_class_accuracy(p2, t2).mean_per_class_accuracy == 0.75);

  const Labels listed{1, 2, 3};
  try {
    per_class_accuracy(pred, truth, listed);
    FAIL("expected invalid input");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_input);
  }
}

}  // TEST_SUITE
