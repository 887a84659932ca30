#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace bzsl {

// Column-per-instance dense storage. Column j of a feature matrix is instance j.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

using Label = std::int64_t;
using Labels = std::vector<Label>;

enum class Metric { euclidean, cosine };

// Kernel evaluations k(x_train_i, x_j), one column per instance. Kept distinct
// from Matrix so raw features cannot be fed to a kernelized model by accident.
struct KernelColumns {
  Matrix values;
};

}  // namespace bzsl
