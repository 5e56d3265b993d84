#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace prfair {

using NodeId = std::int32_t;
using Index = Eigen::Index;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

inline constexpr NodeId kNoNode = -1;

}  // namespace prfair
