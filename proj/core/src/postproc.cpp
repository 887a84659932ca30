#include "bzsl/postproc.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "bzsl/diagnostics.hpp"
#include "bzsl/error.hpp"
#include "bzsl/linalg.hpp"

namespace bzsl {

ZslModel self_train(const ZslModel& model, const Matrix& projected_test, Index k_st) {
  const Index n = projected_test.cols();
  if (n == 0) throw Error(ErrorKind::usage, "self_train: empty test batch");
  if (k_st < 1) throw Error(ErrorKind::bounds, "self_train: k_ST must be at least 1");
  const Matrix& b = model.unseen.embedding;
  if (projected_test.rows() != b.rows()) {
    throw Error(ErrorKind::shape, "self_train: test dimension does not match the embedding");
  }
  if (k_st > n) {
    warn("self_train: k_ST = " + std::to_string(k_st) + " exceeds the " + std::to_string(n) +
         " test instances; using all of them");
    k_st = n;
  }

  ZslModel out = model;
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (Index c = 0; c < b.cols(); ++c) {
    for (Index j = 0; j < n; ++j) dist[static_cast<std::size_t>(j)] = euclidean(projected_test.col(j), b.col(c));
    std::iota(order.begin(), order.end(), Index{0});
    std::partial_sort(order.begin(), order.begin() + k_st, order.end(), [&](Index a, Index z) {
      const double da = dist[static_cast<std::size_t>(a)], dz = dist[static_cast<std::size_t>(z)];
      return da < dz || (da == dz && a < z);
    });
    // Sum in index order so the mean does not depend on the sort.
    std::sort(order.begin(), order.begin() + k_st);
    Vector mean = Vector::Zero(b.rows());
    for (Index i = 0; i < k_st; ++i) mean += projected_test.col(order[static_cast<std::size_t>(i)]);
    mean /= static_cast<double>(k_st);
    out.unseen.embedding.col(c) = 0.5 * (mean + b.col(c));
  }
  return out;
}

namespace {

double squared(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  const double d = euclidean(a, b);
  return d * d;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, const Matrix& init_centers, const KMeansOptions& options) {
  const Index n = points.cols();
  const Index k = init_centers.cols();
  if (k < 1) throw Error(ErrorKind::invalid_input, "kmeans: no initial centers");
  if (points.rows() != init_centers.rows()) {
    throw Error(ErrorKind::shape, "kmeans: points and centers differ in dimension");
  }
  if (n < k) {
    throw Error(ErrorKind::invalid_input, "kmeans: " + std::to_string(n) + " points for " +
                                              std::to_string(k) + " clusters");
  }
  require_finite(points, "kmeans: points");
  require_finite(init_centers, "kmeans: centers");

  KMeansResult r;
  r.centers = init_centers;
  r.assignments.assign(static_cast<std::size_t>(n), -1);
  std::vector<Index> counts(static_cast<std::size_t>(k));

  for (Index iter = 0; iter < std::max<Index>(options.max_iters, 1); ++iter) {
    const auto next = nearest_columns(points, r.centers);
    const bool changed = next != r.assignments;
    r.assignments = next;

    std::fill(counts.begin(), counts.end(), 0);
    for (Index a : r.assignments) ++counts[static_cast<std::size_t>(a)];
    // Repair empty clusters: steal the worst-fitting point of a cluster that
    // can spare one.
    for (Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Index far = -1;
      double far_d = -1.0;
      for (Index j = 0; j < n; ++j) {
        const Index a = r.assignments[static_cast<std::size_t>(j)];
        if (counts[static_cast<std::size_t>(a)] < 2) continue;
        const double d = squared(points.col(j), r.centers.col(a));
        if (d > far_d) {
          far_d = d;
          far = j;
        }
      }
      --counts[static_cast<std::size_t>(r.assignments[static_cast<std::size_t>(far)])];
      r.assignments[static_cast<std::size_t>(far)] = c;
      counts[static_cast<std::size_t>(c)] = 1;
      r.centers.col(c) = points.col(far);
    }

    double wcss = 0.0;
    for (Index j = 0; j < n; ++j)
      wcss += squared(points.col(j), r.centers.col(r.assignments[static_cast<std::size_t>(j)]));
    r.wcss.push_back(wcss);

    if (!changed && iter > 0) break;
    r.iterations = iter + 1;

    Matrix sums = Matrix::Zero(points.rows(), k);
    for (Index j = 0; j < n; ++j) sums.col(r.assignments[static_cast<std::size_t>(j)]) += points.col(j);
    for (Index c = 0; c < k; ++c) r.centers.col(c) = sums.col(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
  }
  return r;
}

Assignment solve_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols()) {
    throw Error(ErrorKind::shape, "solve_assignment: cost matrix is " + std::to_string(cost.rows()) +
                                      "x" + std::to_string(cost.cols()) + ", must be square");
  }
  require_finite(cost, "solve_assignment");
  const Index n = cost.rows();
  Assignment out;
  if (n == 0) return out;

  // Shortest augmenting paths with row/column potentials; slot 0 is a sentinel.
  const auto size = static_cast<std::size_t>(n);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(size + 1, 0.0), v(size + 1, 0.0), minv(size + 1);
  std::vector<std::size_t> match(size + 1, 0), way(size + 1, 0);
  std::vector<char> used(size + 1);
  for (std::size_t row = 1; row <= size; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t row0 = match[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= size; ++col) {
        if (used[col]) continue;
        const double reduced = cost(static_cast<Index>(row0 - 1), static_cast<Index>(col - 1)) - u[row0] - v[col];
        if (reduced < minv[col]) {
          minv[col] = reduced;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= size; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  out.mapping.assign(size, -1);
  for (std::size_t col = 1; col <= size; ++col) out.mapping[match[col] - 1] = static_cast<Index>(col - 1);
  for (std::size_t r = 0; r < size; ++r) out.total_cost += cost(static_cast<Index>(r), out.mapping[r]);
  return out;
}

StructuredPrediction structured_predict_detailed(const ZslModel& model, const Matrix& projected_test,
                                                 const KMeansOptions& options) {
  const Matrix& b = model.unseen.embedding;
  if (static_cast<Index>(model.unseen_class_ids.size()) != b.cols()) {
    throw Error(ErrorKind::shape, "structured_predict: unseen class ids do not match embedding");
  }
  StructuredPrediction out;
  out.clusters = kmeans(projected_test, b, options);
  out.assignment = solve_assignment(pairwise_distances(out.clusters.centers, b, Metric::euclidean));
  out.labels.reserve(out.clusters.assignments.size());
  for (Index cluster : out.clusters.assignments) {
    const Index cls = out.assignment.mapping[static_cast<std::size_t>(cluster)];
    out.labels.push_back(model.unseen_class_ids[static_cast<std::size_t>(cls)]);
  }
  return out;
}

Labels structured_predict(const ZslModel& model, const Matrix& projected_test,
                          const KMeansOptions& options) {
  return structured_predict_detailed(model, projected_test, options).labels;
}

}  // namespace bzsl
