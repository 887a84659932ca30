#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "bzsl/types.hpp"

namespace bzsl {

// Disjoint class sets. Label sets are kept sorted ascending.
struct SplitSpec {
  Labels train_classes;
  Labels test_classes;
  std::optional<Labels> validation_classes;
};

// Throws Error{invalid_input} when any two class sets overlap or a set has
// duplicates.
void validate_split(const SplitSpec& split);

// Holds out floor(fraction * |classes|) classes (at least one) drawn
// uniformly without replacement as validation classes; the rest become
// training classes. test_classes is left empty.
SplitSpec make_classwise_split(std::span<const Label> classes, double holdout_fraction,
                               std::uint64_t seed);

// Train/test task over a split's validation classes.
SplitSpec validation_task(const SplitSpec& split);

// Seeded train/test split with exactly `n_test` test classes.
SplitSpec random_class_split(std::span<const Label> classes, std::size_t n_test, std::uint64_t seed);

// Sorted distinct labels.
Labels unique_labels(std::span<const Label> labels);

}  // namespace bzsl
