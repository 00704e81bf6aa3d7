#pragma once

#include <Eigen/Dense>

namespace irlbfgs {

// Iterate space R^n. Optimizer state is dense; sparse training data lives in
// problems.hpp as index/value pairs.
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace irlbfgs
