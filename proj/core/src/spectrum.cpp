#include "gfalm/spectrum.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gfalm/error.hpp"
#include "gfalm/spectral.hpp"

namespace gfalm {
namespace {

double real_inner(const GridField& a, const GridField& b) { return inner(a, b).real(); }

// Modified Gram-Schmidt against Re<.,.>_h, twice for stability. Vectors that
// lose almost all of their norm are dropped.
std::vector<GridField> orthonormalize(std::vector<GridField> vs) {
  std::vector<GridField> basis;
  for (auto& v : vs) {
    const double original = std::sqrt(std::max(0.0, real_inner(v, v)));
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v.axpy(-real_inner(v, b), b);
    const double n = std::sqrt(std::max(0.0, real_inner(v, v)));
    if (n <= 1e-10 * original) continue;
    v *= 1.0 / n;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

EigenEstimate lowest_eigenpair(const LinearMap& apply, const LinearMap& precondition,
                               GridField start, double tol, int max_iters) {
  auto init = orthonormalize({std::move(start)});
  if (init.empty()) throw DomainError("lowest_eigenpair: zero start vector");
  GridField x = std::move(init.front());
  GridField ax = apply(x);
  double theta = real_inner(x, ax);
  std::optional<GridField> direction;

  for (int it = 0; it <= max_iters; ++it) {
    GridField r = ax;
    r.axpy(-theta, x);
    const double rnorm = std::sqrt(std::max(0.0, real_inner(r, r)));
    if (!std::isfinite(rnorm)) throw ConvergenceError("lowest_eigenpair: non-finite residual");
    if (rnorm <= tol * std::max(1.0, std::abs(theta)))
      return EigenEstimate{theta, std::move(x), it, rnorm};
    if (it == max_iters) break;

    std::vector<GridField> trial{x, precondition(r)};
    if (direction) trial.push_back(*direction);
    auto basis = orthonormalize(std::move(trial));

    std::vector<GridField> images;
    images.reserve(basis.size());
    for (const auto& b : basis) images.push_back(apply(b));

    const auto k = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd h(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j)
        h(i, j) = real_inner(basis[static_cast<std::size_t>(i)], images[static_cast<std::size_t>(j)]);
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::VectorXd c = es.eigenvectors().col(0);

    GridField xn(x.grid());
    GridField axn(x.grid());
    GridField pn(x.grid());
    for (Eigen::Index i = 0; i < k; ++i) {
      xn.axpy(c(i), basis[static_cast<std::size_t>(i)]);
      axn.axpy(c(i), images[static_cast<std::size_t>(i)]);
      if (i > 0) pn.axpy(c(i), basis[static_cast<std::size_t>(i)]);
    }
    const double n = std::sqrt(real_inner(xn, xn));
    xn *= 1.0 / n;
    axn *= 1.0 / n;
    x = std::move(xn);
    ax = std::move(axn);
    theta = real_inner(x, ax);
    direction = std::move(pn);
  }
  throw ConvergenceError("lowest_eigenpair: no convergence after " + std::to_string(max_iters) +
                         " iterations");
}

Eigen::MatrixXd dense_real_matrix(const GridSpec& grid, const LinearMap& apply) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd m(n, n);
  GridField e(grid);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    const GridField col = apply(e);
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = col[static_cast<std::size_t>(i)].real();
    e[static_cast<std::size_t>(j)] = 0.0;
  }
  return m;
}

}  // namespace gfalm
