// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MCAR_AVG_TYPES_HPP
#define MCAR_AVG_TYPES_HPP

#include <Eigen/Dense>
#include <vector>

namespace mcar {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// true = observed
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
/// Sorted, 0-based row or column indices.
using IndexSet = std::vector<Index>;

}  // namespace mcar

#endif  // MCAR_AVG_TYPES_HPP
