#include <benchmark/benchmark.h>

#include "bzsl/graph.hpp"
#include "bzsl/linalg.hpp"
#include "bzsl/lsm.hpp"
#include "bzsl/postproc.hpp"
#include "bzsl/random.hpp"
#include "bzsl/semantics.hpp"
#include "bzsl/subspace.hpp"

namespace {

using namespace bzsl;

Matrix random_matrix(Index r, Index c, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

void BM_SolveGsep(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix g = random_matrix(n, n, 1);
  const Matrix h = random_matrix(n, n, 2);
  const Matrix a = g + g.transpose();
  const Matrix b = h * h.transpose() + Matrix::Identity(n, n) * static_cast<double>(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_gsep(a, b, n / 4));
}
BENCHMARK(BM_SolveGsep)->Arg(50)->Arg(200)->Arg(500);

void BM_BuildSimilarity(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix x = random_matrix(64, n, 3);
  Labels labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i % 10;
  for (auto _ : state) benchmark::DoNotOptimize(build_similarity(x, labels, 10));
}
BENCHMARK(BM_BuildSimilarity)->Arg(500)->Arg(2000);

void BM_EmbedUnseen(benchmark::State& state) {
  const Index d_y = 50, known = 40, unseen = 10;
  Landmarks lm;
  lm.embedding = random_matrix(d_y, known, 4);
  lm.embedding.colwise().normalize();
  for (Index c = 0; c < known; ++c) lm.class_ids.push_back(c);
  Matrix truth = random_matrix(d_y, unseen, 5);
  truth.colwise().normalize();
  SemanticDistances delta;
  delta.known_unseen = pairwise_distances(lm.embedding, truth, Metric::euclidean);
  delta.unseen_unseen = self_distances(truth, Metric::euclidean);
  LsmOptions opts;
  opts.max_iters = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(embed_unseen(lm, delta, opts));
}
BENCHMARK(BM_EmbedUnseen)->Arg(100)->Arg(1000);

void BM_SolveAssignment(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix cost = random_matrix(n, n, 6).cwiseAbs();
  for (auto _ : state) benchmark::DoNotOptimize(solve_assignment(cost));
}
BENCHMARK(BM_SolveAssignment)->Arg(10)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
