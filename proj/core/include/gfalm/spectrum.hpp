#pragma once

#include <functional>

#include <Eigen/Dense>

#include "gfalm/grid.hpp"

namespace gfalm {

using LinearMap = std::function<GridField(const GridField&)>;

struct EigenEstimate {
  double value = 0.0;
  GridField vector;
  int iterations = 0;
  double residual = 0.0;
};

/// Smallest eigenpair of an operator that is self-adjoint for Re<.,.>_h,
/// using single-vector LOBPCG. `precondition` should approximate the inverse
/// of `apply` and be symmetric positive definite.
///
/// Throws ConvergenceError when the residual does not fall below
/// tol * max(1, |theta|) within max_iters iterations.
EigenEstimate lowest_eigenpair(const LinearMap& apply, const LinearMap& precondition,
                               GridField start, double tol = 1e-10, int max_iters = 2000);

/// Column j is apply(e_j) for the real unit vectors e_j of `grid`. Only the real
/// parts are kept, so `apply` must map real fields to real fields.
Eigen::MatrixXd dense_real_matrix(const GridSpec& grid, const LinearMap& apply);

}  // namespace gfalm
