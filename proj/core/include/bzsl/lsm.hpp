#pragma once

#include <cstdint>
#include <vector>

#include "bzsl/semantics.hpp"
#include "bzsl/subspace.hpp"
#include "bzsl/types.hpp"

namespace bzsl {

// Latent embedding of the unseen classes, one column per unseen class.
struct UnseenEmbedding {
  Matrix embedding;  // d_y x |C^u|
  double initial_cost = 0.0;
  double final_cost = 0.0;
  Index iterations = 0;
  bool converged = false;
  std::vector<double> cost_history;  // cost after init and after every accepted step
};

struct LsmOptions {
  double eta = 0.1;
  std::uint64_t seed = 0;
  Index max_iters = 5000;
  double rel_tol = 1e-8;
  // Semantic distances below this are clamped (duplicate semantic vectors).
  double delta_floor = 1e-12;
  // Amplitude of the jitter that separates coincident latent points.
  double jitter = 1e-9;
};

// Landmark-based Sammon stress of an unseen-class placement:
// 
//   E = 1/(L U) sum_ij (d_lu - delta_lu)^2 / delta_lu
//     + 2/(U (U - 1)) sum_{i<j} (d_uu - delta_uu)^2 / delta_uu
// 
// with Euclidean latent distances d. The second term is 0 when U = 1.
// Semantic distances are clamped below at `delta_floor`.
double lsm_cost(const Matrix& landmarks, const Matrix& unseen, const SemanticDistances& delta,
                double delta_floor = 1e-12);

// Gradient of lsm_cost with respect to the unseen embedding, returned in the
// same d_y x |C^u| orientation as the embedding (the transpose of the
// |C^u| x d_y layout). Pairs at exactly zero latent distance contribute
// nothing; embed_unseen jitters them apart before taking a step.
Matrix lsm_gradient(const Matrix& landmarks, const Matrix& unseen, const SemanticDistances& delta,
                    double delta_floor = 1e-12);

// Gradient descent on lsm_cost from a seeded uniform start in
// [-1/sqrt(d_y), 1/sqrt(d_y)]. The step starts at eta, halves until the
// cost does not increase, and resets to eta after each accepted step.
// Converged means the relative cost change fell below rel_tol (or no
// decreasing step exists) before max_iters.
UnseenEmbedding embed_unseen(const Landmarks& landmarks, const SemanticDistances& delta,
                             const LsmOptions& options = {});

// Column-wise mean of two embeddings; the cost is re-evaluated against the
// given landmarks and distances.
UnseenEmbedding combine_embeddings(const UnseenEmbedding& a, const UnseenEmbedding& b,
                                   const Landmarks& landmarks, const SemanticDistances& delta);

}  // namespace bzsl
