#include "gfalm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "gfalm/error.hpp"
#include "gfalm/random_fields.hpp"
#include "gfalm/spectral.hpp"

namespace gfalm {
namespace {

double real_inner(const GridField& a, const GridField& b) { return inner(a, b).real(); }

// Coordinates of a field in the real basis {e_j} (real mode) or {e_j, i e_j}.
// With these, Re<f, g>_h = h * coords(f) . coords(g).
Eigen::VectorXd coords(const GridField& f, bool real_mode) {
  const auto n = static_cast<Eigen::Index>(f.size());
  Eigen::VectorXd c(real_mode ? n : 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    c(j) = f[static_cast<std::size_t>(j)].real();
    if (!real_mode) c(n + j) = f[static_cast<std::size_t>(j)].imag();
  }
  return c;
}

GridField basis_vector(const GridSpec& grid, Eigen::Index k) {
  GridField e(grid);
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (k < n)
    e[static_cast<std::size_t>(k)] = 1.0;
  else
    e[static_cast<std::size_t>(k - n)] = Complex(0.0, 1.0);
  return e;
}

// Low Fourier modes as real fields (cos and sin parts), used when the grid is
// too large for the dense eigenproblem.
std::vector<GridField> low_mode_basis(const GridSpec& grid, std::size_t cap, bool real_mode) {
  int kmax = 1;
  auto count = [&](int k) {
    const std::size_t per = grid.dims() == 1 ? static_cast<std::size_t>(2 * k + 1)
                                             : static_cast<std::size_t>((2 * k + 1) * (2 * k + 1));
    return per * (real_mode ? 1 : 2);
  };
  while (count(kmax + 1) <= cap) ++kmax;

  std::vector<GridField> basis;
  const int k2max = grid.dims() == 2 ? kmax : 0;
  for (int k1 = -kmax; k1 <= kmax; ++k1) {
    for (int k2 = -k2max; k2 <= k2max; ++k2) {
      // cos for (k1,k2) >= 0 lexicographically, sin for the mirrored half.
      const bool use_cos = k1 > 0 || (k1 == 0 && k2 >= 0);
      GridField f(grid);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        double phase = k1 * grid.axis(0).sigma() * (grid.coordinate(j, 0) - grid.axis(0).x0);
        if (grid.dims() == 2)
          phase += k2 * grid.axis(1).sigma() * (grid.coordinate(j, 1) - grid.axis(1).x0);
        f[j] = use_cos ? std::cos(phase) : std::sin(phase);
      }
      if (!use_cos && k1 == 0 && k2 == 0) continue;
      if (!real_mode) basis.push_back(Complex(0.0, 1.0) * f);
      basis.push_back(std::move(f));
    }
  }
  return basis;
}

}  // namespace

GroundStateContext::GroundStateContext(GridField u_g, Problem problem, GridField w, double lambda,
                                       double residual, bool real)
    : u_g_(std::move(u_g)),
      problem_(std::move(problem)),
      w_(std::move(w)),
      lambda_(lambda),
      residual_(residual),
      real_(real) {}

GroundStateContext GroundStateContext::certify(GridField u_g, const Problem& problem,
                                               double residual_tol) {
  problem.require_grid(u_g);
  const double nrm = lp_norm(u_g, problem.p() + 1.0);
  if (!(std::abs(nrm - 1.0) <= 1e-13))
    throw DomainError("GroundStateContext: ||u_g||_{h,p+1} = " + std::to_string(nrm) +
                      " is not on the unit sphere");
  const double res = max_norm(residual_mu(u_g, problem));
  if (!(res <= residual_tol))
    throw DomainError("GroundStateContext: residual " + std::to_string(res) +
                      " exceeds the certification tolerance");
  const double lambda = quadratic_energy(u_g, problem);
  GridField w = nonlinearity(u_g, problem.p());
  const bool real = u_g.is_real(0.0);
  return GroundStateContext(std::move(u_g), problem, std::move(w), lambda, res, real);
}

GroundStateContext GroundStateContext::rotated(double theta) const {
  const Complex z = std::polar(1.0, theta);
  GridField u = u_g_ * z;
  GridField w = w_ * z;
  const bool real = u.is_real(1e-12 * u.max_abs());
  if (real) {
    for (auto& v : u.values()) v.imag(0.0);
    for (auto& v : w.values()) v.imag(0.0);
  }
  return GroundStateContext(std::move(u), problem_, std::move(w), lambda_, residual_, real);
}

ChartCoordinates chart_inverse(const GridField& u, const GroundStateContext& ctx) {
  const double r = real_inner(ctx.constraint_direction(), u) - 1.0;
  GridField xi = u;
  xi.axpy(-(1.0 + r), ctx.ground_state());
  return ChartCoordinates{r, std::move(xi)};
}

GridField chart(double r, const GridField& xi, const GroundStateContext& ctx) {
  GridField u = xi;
  u.axpy(1.0 + r, ctx.ground_state());
  return u;
}

GridField project_tangent(const GridField& v, const GroundStateContext& ctx) {
  GridField out = v;
  out.axpy(-real_inner(ctx.constraint_direction(), v), ctx.ground_state());
  return out;
}

double solve_r_of_xi(const GridField& xi, const GroundStateContext& ctx) {
  const double p = ctx.problem().p();
  const GridField& ug = ctx.ground_state();
  const double h = ug.grid().cell_volume();

  auto f_and_df = [&](double s) {
    double f = 0.0;
    double df = 0.0;
    for (std::size_t j = 0; j < ug.size(); ++j) {
      const Complex v = (1.0 + s) * ug[j] + xi[j];
      const double a = std::abs(v);
      if (a == 0.0) continue;
      const double ap = std::pow(a, p - 1.0);
      f += ap * a * a;
      df += ap * (std::conj(v) * ug[j]).real();
    }
    return std::pair{h * f - 1.0, (p + 1.0) * h * df};
  };

  double lo = -1.0;
  const double f_lo = f_and_df(lo).first;
  if (!(f_lo < 0.0))
    throw ChartError("solve_r_of_xi: ||xi||_{h,p+1} >= 1, outside the chart neighborhood");
  double hi = 1.0;
  int expansions = 0;
  while (f_and_df(hi).first <= 0.0) {
    hi *= 2.0;
    if (++expansions > 60) throw ChartError("solve_r_of_xi: could not bracket the root");
  }

  double s = 0.0;
  for (int it = 0; it < 200; ++it) {
    const auto [f, df] = f_and_df(s);
    if (!std::isfinite(f)) throw ChartError("solve_r_of_xi: non-finite constraint value");
    if (f == 0.0) return s;
    if (f < 0.0)
      lo = s;
    else
      hi = s;
    double next = df != 0.0 ? s - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(s)))
      return next;
    s = next;
  }
  throw ChartError("solve_r_of_xi: Newton iteration did not converge");
}

GridField apply_L(const GridField& v, const GroundStateContext& ctx) {
  const Problem& problem = ctx.problem();
  const double p = problem.p();
  const GridField& ug = ctx.ground_state();
  GridField out = apply_A(v, problem);
  const double lambda = ctx.lambda();
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double a = std::abs(ug[j]);
    if (a == 0.0) continue;
    const double a1 = std::pow(a, p - 1.0);
    const double a3 = a1 / (a * a);
    const Complex lin = a1 * v[j] + (p - 1.0) * a3 * ug[j] * (std::conj(ug[j]) * v[j]).real();
    out[j] -= lambda * lin;
  }
  return out;
}

CoercivityReport coercivity_check(const GroundStateContext& input, std::size_t subspace_dim_cap,
                                  bool complex_extension) {
  // Rotate so the largest entry is real; a rotated real state becomes real.
  const GridField& ug0 = input.ground_state();
  std::size_t peak = 0;
  for (std::size_t j = 1; j < ug0.size(); ++j)
    if (std::abs(ug0[j]) > std::abs(ug0[peak])) peak = j;
  const GroundStateContext ctx = input.rotated(-std::arg(ug0[peak]));
  const GridSpec& grid = ctx.ground_state().grid();
  const bool real_mode = ctx.real_valued() && !complex_extension;
  const auto n = static_cast<Eigen::Index>(grid.size());
  const Eigen::Index full_dim = real_mode ? n : 2 * n;

  CoercivityReport report;
  report.real_subspace = real_mode;

  auto gram = [&](const GridField& f) {
    GridField g = f;
    g -= apply_dxx(f);
    return g;
  };

  Eigen::MatrixXd lmat;
  Eigen::MatrixXd bmat;
  Eigen::VectorXd c;
  if (static_cast<std::size_t>(full_dim) <= subspace_dim_cap) {
    lmat.resize(full_dim, full_dim);
    bmat.resize(full_dim, full_dim);
    for (Eigen::Index k = 0; k < full_dim; ++k) {
      const GridField e = basis_vector(grid, k);
      lmat.col(k) = coords(apply_L(e, ctx), real_mode);
      bmat.col(k) = coords(gram(e), real_mode);
    }
    c = coords(ctx.constraint_direction(), real_mode);
  } else {
    report.restricted = true;
    const auto basis = low_mode_basis(grid, subspace_dim_cap, real_mode);
    const auto k = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd bc(full_dim, k);
    Eigen::MatrixXd lc(full_dim, k);
    Eigen::MatrixXd gc(full_dim, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const GridField& b = basis[static_cast<std::size_t>(i)];
      bc.col(i) = coords(b, real_mode);
      lc.col(i) = coords(apply_L(b, ctx), real_mode);
      gc.col(i) = coords(gram(b), real_mode);
    }
    lmat = bc.transpose() * lc;
    bmat = bc.transpose() * gc;
    c = bc.transpose() * coords(ctx.constraint_direction(), real_mode);
  }
  lmat = 0.5 * (lmat + lmat.transpose()).eval();
  bmat = 0.5 * (bmat + bmat.transpose()).eval();

  // Orthonormal basis of c^perp from a full QR of c.
  const Eigen::Index dim = lmat.rows();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd t = q.rightCols(dim - 1);
  const Eigen::MatrixXd lt = t.transpose() * lmat * t;
  const Eigen::MatrixXd bt = t.transpose() * bmat * t;

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(lt, bt, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("coercivity_check: eigensolve failed");
  report.min_eig = es.eigenvalues()(0);
  report.passes = report.min_eig > 0.0;
  report.dimension = static_cast<std::size_t>(dim - 1);

  const GridField iug = Complex(0.0, 1.0) * ctx.ground_state();
  const GridField liug = apply_L(iug, ctx);
  report.phase_mode_residual = l2_norm(liug) / l2_norm(ctx.ground_state());
  const double h1 = h1_norm(ctx.ground_state());
  report.phase_mode_rayleigh = real_inner(liug, iug) / (h1 * h1);
  return report;
}

GridField sample_tangent(const GroundStateContext& ctx, std::uint64_t seed, double scale,
                         int max_mode) {
  std::mt19937_64 rng(seed);
  const GridField raw =
      random_low_mode_field(ctx.ground_state().grid(), rng, max_mode, ctx.real_valued());
  GridField xi = project_tangent(raw, ctx);
  const double n = h1_norm(xi);
  if (!(n > 0.0)) throw DomainError("sample_tangent: degenerate sample");
  return xi * (scale / n);
}

GrowthReport quadratic_growth_probe(const GroundStateContext& ctx, int n_samples,
                                    std::span<const double> scales, std::uint64_t seed,
                                    int max_mode) {
  GrowthReport report;
  report.master_seed = seed;
  report.max_mode = max_mode;
  const Problem& problem = ctx.problem();
  for (std::size_t s = 0; s < scales.size(); ++s) {
    GrowthScale gs;
    gs.scale = scales[s];
    for (int k = 0; k < n_samples; ++k) {
      // Same direction at every scale: the seed ignores the scale index.
      const std::uint64_t sample_seed = derive_seed(seed, 0, static_cast<std::uint64_t>(k));
      const GridField xi = sample_tangent(ctx, sample_seed, scales[s], max_mode);
      try {
        const double r = solve_r_of_xi(xi, ctx);
        const GridField u = chart(r, xi, ctx);
        const GridField diff = u - ctx.ground_state();
        const double d = h1_norm(diff);
        const double gap = quadratic_energy(u, problem) - ctx.lambda();
        gs.ratios.push_back(gap / (d * d));
        gs.predicted.push_back(real_inner(apply_L(xi, ctx), xi) / (d * d));
        gs.seeds.push_back(sample_seed);
      } catch (const ChartError& e) {
        gs.skipped.push_back("sample " + std::to_string(k) + ": " + e.what());
      }
    }
    report.scales.push_back(std::move(gs));
  }
  return report;
}

RSweep r_quadratic_sweep(const GroundStateContext& ctx, const GridField& xi, int halvings,
                         int tail_start) {
  RSweep sweep;
  const double p = ctx.problem().p();
  double factor = 1.0;
  for (int k = 0; k <= halvings; ++k) {
    const GridField xk = xi * factor;
    const double r = solve_r_of_xi(xk, ctx);
    const double n = lp_norm(xk, p + 1.0);
    sweep.xi_lp.push_back(n);
    sweep.r.push_back(r);
    sweep.quotient.push_back(std::abs(r) / (n * n));
    factor *= 0.5;
  }
  const auto first = sweep.quotient.begin() + std::min<std::ptrdiff_t>(tail_start, halvings);
  const auto [mn, mx] = std::minmax_element(first, sweep.quotient.end());
  sweep.tail_spread = *mn > 0.0 ? *mx / *mn : std::numeric_limits<double>::infinity();
  return sweep;
}

double lojasiewicz_quotient(const GridField& u, const GroundStateContext& ctx) {
  const double gap = quadratic_energy(u, ctx.problem()) - ctx.lambda();
  if (gap <= 1e-14) return 0.0;
  const double hm1 = hm1_norm(residual_mu(u, ctx.problem()));
  if (hm1 == 0.0) return std::numeric_limits<double>::infinity();
  return gap / (hm1 * hm1);
}

}  // namespace gfalm
