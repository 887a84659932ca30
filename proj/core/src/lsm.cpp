#include "bzsl/lsm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bzsl/diagnostics.hpp"
#include "bzsl/error.hpp"
#include "bzsl/linalg.hpp"
#include "bzsl/random.hpp"

namespace bzsl {

namespace {

void check_shapes(const Matrix& landmarks, const Matrix& unseen, const SemanticDistances& delta) {
  const Index l = landmarks.cols();
  const Index u = unseen.cols();
  if (landmarks.rows() != unseen.rows()) {
    throw Error(ErrorKind::shape, "lsm: landmark dimension " + std::to_string(landmarks.rows()) +
                                      " differs from unseen dimension " +
                                      std::to_string(unseen.rows()));
  }
  if (delta.known_unseen.rows() != l || delta.known_unseen.cols() != u) {
    throw Error(ErrorKind::shape, "lsm: known-unseen distances are " +
                                      std::to_string(delta.known_unseen.rows()) + "x" +
                                      std::to_string(delta.known_unseen.cols()) + ", expected " +
                                      std::to_string(l) + "x" + std::to_string(u));
  }
  if (delta.unseen_unseen.rows() != u || delta.unseen_unseen.cols() != u) {
    throw Error(ErrorKind::shape, "lsm: unseen-unseen distances must be " + std::to_string(u) +
                                      "x" + std::to_string(u));
  }
}

double pair_weight_uu(Index u) {
  return u > 1 ? 2.0 / (static_cast<double>(u) * static_cast<double>(u - 1)) : 0.0;
}

}  // namespace

double lsm_cost(const Matrix& landmarks, const Matrix& unseen, const SemanticDistances& delta,
                double delta_floor) {
  check_shapes(landmarks, unseen, delta);
  const Index l = landmarks.cols();
  const Index u = unseen.cols();

  double known_term = 0.0;
  for (Index j = 0; j < u; ++j) {
    for (Index i = 0; i < l; ++i) {
      const double target = std::max(delta.known_unseen(i, j), delta_floor);
      const double diff = euclidean(landmarks.col(i), unseen.col(j)) - target;
      known_term += diff * diff / target;
    }
  }
  double unseen_term = 0.0;
  for (Index i = 0; i < u; ++i) {
    for (Index j = i + 1; j < u; ++j) {
      const double target = std::max(delta.unseen_unseen(i, j), delta_floor);
      const double diff = euclidean(unseen.col(i), unseen.col(j)) - target;
      unseen_term += diff * diff / target;
    }
  }
  return known_term / (static_cast<double>(l) * static_cast<double>(u)) +
         pair_weight_uu(u) * unseen_term;
}

Matrix lsm_gradient(const Matrix& landmarks, const Matrix& unseen, const SemanticDistances& delta,
                    double delta_floor) {
  check_shapes(landmarks, unseen, delta);
  const Index l = landmarks.cols();
  const Index u = unseen.cols();
  const double known_scale = 2.0 / (static_cast<double>(l) * static_cast<double>(u));
  const double unseen_scale = 2.0 * pair_weight_uu(u);

  Matrix grad = Matrix::Zero(unseen.rows(), u);
  for (Index j = 0; j < u; ++j) {
    for (Index i = 0; i < l; ++i) {
      const double d = euclidean(landmarks.col(i), unseen.col(j));
      if (d == 0.0) continue;
      const double target = std::max(delta.known_unseen(i, j), delta_floor);
      grad.col(j) += known_scale * (d - target) / (target * d) * (unseen.col(j) - landmarks.col(i));
    }
    for (Index i = 0; i < u; ++i) {
      if (i == j) continue;
      const double d = euclidean(unseen.col(i), unseen.col(j));
      if (d == 0.0) continue;
      const double target = std::max(delta.unseen_unseen(i, j), delta_floor);
      grad.col(j) += unseen_scale * (d - target) / (target * d) * (unseen.col(j) - unseen.col(i));
    }
  }
  return grad;
}

namespace {

// Moves any unseen point that coincides with a landmark or another unseen
// point by a small random offset. Returns true when something moved.
bool separate_coincident(const Matrix& landmarks, Matrix& unseen, double jitter, Rng& rng) {
  bool moved = false;
  for (Index j = 0; j < unseen.cols(); ++j) {
    bool clash = false;
    for (Index i = 0; i < landmarks.cols() && !clash; ++i)
      clash = euclidean(landmarks.col(i), unseen.col(j)) == 0.0;
    for (Index i = 0; i < j && !clash; ++i) clash = euclidean(unseen.col(i), unseen.col(j)) == 0.0;
    if (!clash) continue;
    for (Index r = 0; r < unseen.rows(); ++r) unseen(r, j) += rng.uniform(-jitter, jitter);
    moved = true;
  }
  return moved;
}

void check_distances(const SemanticDistances& delta, double floor) {
  if (!delta.known_unseen.allFinite() || !delta.unseen_unseen.allFinite()) {
    throw Error(ErrorKind::invalid_input, "embed_unseen: semantic distances are not finite");
  }
  if (delta.known_unseen.minCoeff() < 0.0 || delta.unseen_unseen.minCoeff() < 0.0) {
    throw Error(ErrorKind::invalid_input, "embed_unseen: negative semantic distance");
  }
  Index clamped = 0;
  for (Index j = 0; j < delta.known_unseen.cols(); ++j) {
    for (Index i = 0; i < delta.known_unseen.rows(); ++i) clamped += delta.known_unseen(i, j) < floor;
    for (Index i = 0; i < j; ++i) clamped += delta.unseen_unseen(i, j) < floor;
  }
  if (clamped > 0) {
    warn("embed_unseen: " + std::to_string(clamped) +
         " semantic distances below the floor were clamped (duplicate semantic vectors?)");
  }
}

[[noreturn]] void diverged(Index iteration) {
  throw Error(ErrorKind::divergence,
              "embed_unseen: non-finite cost at iteration " + std::to_string(iteration));
}

}  // namespace

UnseenEmbedding embed_unseen(const Landmarks& landmarks, const SemanticDistances& delta,
                             const LsmOptions& options) {
  const Matrix& anchors = landmarks.embedding;
  const Index d_y = anchors.rows();
  const Index u = delta.unseen_unseen.cols();
  if (u < 1) throw Error(ErrorKind::usage, "embed_unseen: no unseen classes");
  if (!(options.eta > 0.0)) throw Error(ErrorKind::bounds, "embed_unseen: eta must be positive");
  if (options.max_iters < 0) throw Error(ErrorKind::bounds, "embed_unseen: negative max_iters");
  check_shapes(anchors, Matrix(d_y, u), delta);
  check_distances(delta, options.delta_floor);

  Rng rng(options.seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(d_y));
  UnseenEmbedding out;
  Matrix current(d_y, u);
  for (Index j = 0; j < u; ++j)
    for (Index r = 0; r < d_y; ++r) current(r, j) = rng.uniform(-bound, bound);
  separate_coincident(anchors, current, options.jitter, rng);

  auto cost_of = [&](const Matrix& b) { return lsm_cost(anchors, b, delta, options.delta_floor); };
  double cost = cost_of(current);
  if (!std::isfinite(cost)) diverged(0);
  out.initial_cost = cost;
  out.cost_history.push_back(cost);

  Index iter = 0;
  while (iter < options.max_iters) {
    if (cost == 0.0) {
      out.converged = true;
      break;
    }
    if (separate_coincident(anchors, current, options.jitter, rng)) {
      // Descent is measured from the jittered point.
      cost = cost_of(current);
      if (!std::isfinite(cost)) diverged(iter);
    }
    const Matrix grad = lsm_gradient(anchors, current, delta, options.delta_floor);
    if (!grad.allFinite()) diverged(iter);

    double step = options.eta;
    Matrix trial;
    double trial_cost = std::numeric_limits<double>::infinity();
    bool accepted = false;
    while (step >= options.eta * 1e-30) {
      trial = current - step * grad;
      trial_cost = cost_of(trial);
      if (std::isnan(trial_cost)) diverged(iter + 1);
      if (trial_cost <= cost) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No descent step exists at machine precision.
      out.converged = true;
      break;
    }
    const double change = (cost - trial_cost) / std::max(cost, std::numeric_limits<double>::min());
    current = std::move(trial);
    cost = trial_cost;
    ++iter;
    out.cost_history.push_back(cost);
    if (change < options.rel_tol) {
      out.converged = true;
      break;
    }
  }

  out.embedding = std::move(current);
  out.final_cost = cost;
  out.iterations = iter;
  return out;
}

UnseenEmbedding combine_embeddings(const UnseenEmbedding& a, const UnseenEmbedding& b,
                                   const Landmarks& landmarks, const SemanticDistances& delta) {
  if (a.embedding.rows() != b.embedding.rows() || a.embedding.cols() != b.embedding.cols()) {
    throw Error(ErrorKind::shape, "combine_embeddings: embeddings differ in shape");
  }
  UnseenEmbedding out;
  out.embedding = 0.5 * (a.embedding + b.embedding);
  out.final_cost = lsm_cost(landmarks.embedding, out.embedding, delta);
  out.initial_cost = out.final_cost;
  out.iterations = 0;
  out.converged = a.converged && b.converged;
  out.cost_history = {out.final_cost};
  return out;
}

}  // namespace bzsl
