#include "bzsl/split.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "bzsl/error.hpp"
#include "bzsl/random.hpp"

namespace bzsl {

Labels unique_labels(std::span<const Label> labels) {
  const std::set<Label> s(labels.begin(), labels.end());
  return Labels(s.begin(), s.end());
}

void validate_split(const SplitSpec& split) {
  std::set<Label> seen;
  auto absorb = [&](const Labels& set, const char* name) {
    for (const Label c : set) {
      if (!seen.insert(c).second) {
        throw Error(ErrorKind::invalid_input, std::string("split: class ") + std::to_string(c) +
                                                  " in " + name + " appears in more than one set");
      }
    }
  };
  absorb(split.train_classes, "train_classes");
  absorb(split.test_classes, "test_classes");
  if (split.validation_classes) absorb(*split.validation_classes, "validation_classes");
}

namespace {

// Partial Fisher-Yates: the first `take` entries of the result are a uniform
// draw without replacement.
Labels shuffled_prefix(std::span<const Label> classes, std::size_t take, std::uint64_t seed) {
  Labels pool = unique_labels(classes);
  Rng rng(seed);
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  return pool;
}

}  // namespace

SplitSpec make_classwise_split(std::span<const Label> classes, double holdout_fraction,
                               std::uint64_t seed) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw Error(ErrorKind::bounds, "classwise split: fraction must be in (0, 1)");
  }
  const std::size_t n = unique_labels(classes).size();
  if (n < 2) {
    throw Error(ErrorKind::invalid_input, "classwise split: need at least 2 classes, have " + std::to_string(n));
  }
  const auto take = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(holdout_fraction * static_cast<double>(n))));
  Labels pool = shuffled_prefix(classes, take, seed);
  SplitSpec s;
  Labels held(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
  s.train_classes.assign(pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end());
  std::sort(held.begin(), held.end());
  std::sort(s.train_classes.begin(), s.train_classes.end());
  s.validation_classes = std::move(held);
  return s;
}

SplitSpec validation_task(const SplitSpec& split) {
  if (!split.validation_classes) throw Error(ErrorKind::usage, "split has no validation classes");
  SplitSpec t;
  t.train_classes = split.train_classes;
  t.test_classes = *split.validation_classes;
  return t;
}

SplitSpec random_class_split(std::span<const Label> classes, std::size_t n_test, std::uint64_t seed) {
  const std::size_t n = unique_labels(classes).size();
  if (n_test < 1 || n_test >= n) {
    throw Error(ErrorKind::bounds, "random split: " + std::to_string(n_test) + " test classes out of " +
                                       std::to_string(n));
  }
  Labels pool = shuffled_prefix(classes, n_test, seed);
  SplitSpec s;
  s.test_classes.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_test));
  s.train_classes.assign(pool.begin() + static_cast<std::ptrdiff_t>(n_test), pool.end());
  std::sort(s.test_classes.begin(), s.test_classes.end());
  std::sort(s.train_classes.begin(), s.train_classes.end());
  return s;
}

}  // namespace bzsl
