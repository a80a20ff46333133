#include "gfalm/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gfalm/error.hpp"
#include "gfalm/spectrum.hpp"

namespace gfalm {
namespace {

constexpr std::size_t kDenseEigenLimit = 1024;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// h/N sum_l rho_l |u_hat_l|^2 == |u|_{1,h}^2 by Parseval; one transform instead of two.
double h1_semi_squared(const GridField& u, const SpectralMultiplier& rho) {
  const auto modes = forward_transform(u);
  double s = 0.0;
  for (std::size_t l = 0; l < modes.size(); ++l) s += rho[l] * std::norm(modes[l]);
  return u.grid().cell_volume() * s / static_cast<double>(modes.size());
}

double potential_term(const GridField& u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += v[j] * std::norm(u[j]);
  return u.grid().cell_volume() * s;
}

}  // namespace

std::vector<double> PotentialSpec::evaluate(const GridSpec& grid) const {
  std::vector<double> v(grid.size(), 0.0);
  std::visit(Overloaded{
                 [](const Zero&) {},
                 [&](const Harmonic& h) {
                   if (static_cast<int>(h.gamma.size()) != grid.dims())
                     throw DomainError("PotentialSpec: harmonic needs one gamma per axis");
                   for (double g : h.gamma)
                     if (!(g >= 0.0)) throw DomainError("PotentialSpec: gamma must be >= 0");
                   for (std::size_t j = 0; j < grid.size(); ++j) {
                     double s = 0.0;
                     for (int d = 0; d < grid.dims(); ++d) {
                       const double x = grid.coordinate(j, d);
                       const double g = h.gamma[static_cast<std::size_t>(d)];
                       s += g * g * x * x;
                     }
                     v[j] = 0.5 * s;
                   }
                 },
                 [&](const Sampled& s) {
                   if (!(s.samples.grid() == grid))
                     throw DomainError("PotentialSpec: sampled potential lives on another grid");
                   for (std::size_t j = 0; j < grid.size(); ++j) {
                     const Complex z = s.samples[j];
                     if (z.imag() != 0.0) throw DomainError("PotentialSpec: samples must be real");
                     v[j] = z.real();
                   }
                 },
             },
             value_);
  for (double x : v)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw DomainError("PotentialSpec: potential must be finite and non-negative");
  return v;
}

void ProblemParams::validate() const {
  if (!std::isfinite(omega)) throw DomainError("ProblemParams: omega must be finite");
  if (!(beta < 0.0) || !std::isfinite(beta))
    throw DomainError("ProblemParams: beta must be negative (focusing case)");
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("ProblemParams: p must exceed 1");
}

Problem::Problem(GridSpec grid, ProblemParams params)
    : grid_(grid), params_(std::move(params)), rho_(grid_) {
  params_.validate();
  potential_ = params_.potential.evaluate(grid_);
}

void Problem::require_grid(const GridField& u) const {
  if (!(u.grid() == grid_)) throw DomainError("Problem: field lives on another grid");
}

GridField nonlinearity(const GridField& u, double p) {
  GridField out(u.grid());
  const auto in = u.values();
  auto dst = out.values();
  if (p == 3.0) {
    for (std::size_t j = 0; j < in.size(); ++j) dst[j] = std::norm(in[j]) * in[j];
  } else {
    for (std::size_t j = 0; j < in.size(); ++j) {
      const double a = std::abs(in[j]);
      dst[j] = a == 0.0 ? Complex{} : std::exp((p - 1.0) * std::log(a)) * in[j];
    }
  }
  return out;
}

GridField apply_A(const GridField& u, const Problem& problem) {
  problem.require_grid(u);
  GridField out = apply_symbol(u, problem.symbol(), [](double r) { return 0.5 * r; });
  const auto v = problem.potential();
  const double omega = problem.omega();
  for (std::size_t j = 0; j < v.size(); ++j) out[j] += (v[j] + omega) * u[j];
  return out;
}

double quadratic_energy(const GridField& u, const Problem& problem) {
  problem.require_grid(u);
  const double l2 = l2_norm(u);
  return 0.5 * h1_semi_squared(u, problem.symbol()) + potential_term(u, problem.potential()) +
         problem.omega() * l2 * l2;
}

double lambda_tilde(const GridField& u, const Problem& problem) {
  const double denom = lp_norm_pow(u, problem.p() + 1.0);
  if (!(denom > 0.0)) throw DomainError("lambda_tilde: zero field");
  return quadratic_energy(u, problem) / denom;
}

double lambda_exact(const GridField& u, const Problem& problem) {
  const double denom = lp_norm_pow(u, 2.0 * problem.p());
  if (!(denom > 0.0)) throw DomainError("lambda_exact: zero field");
  return inner(apply_A(u, problem), nonlinearity(u, problem.p())).real() / denom;
}

GridField residual_mu(const GridField& u, const Problem& problem) {
  const double lt = lambda_tilde(u, problem);
  GridField mu = apply_A(u, problem);
  mu.axpy(-lt, nonlinearity(u, problem.p()));
  return mu;
}

double constraint_G(const GridField& u, double p) {
  return 2.0 / (p + 1.0) * (lp_norm_pow(u, p + 1.0) - 1.0);
}

ActionValues action_functionals(const GridField& phi, const Problem& problem) {
  problem.require_grid(phi);
  const double p = problem.p();
  const double beta = problem.beta();
  const double l2 = l2_norm(phi);
  const double kinetic = 0.5 * h1_semi_squared(phi, problem.symbol());
  const double pot = potential_term(phi, problem.potential());
  const double lp = lp_norm_pow(phi, p + 1.0);
  ActionValues out;
  out.energy = kinetic + pot + 2.0 * beta / (p + 1.0) * lp;
  out.action = out.energy + problem.omega() * l2 * l2;
  out.nehari = kinetic + pot + beta * lp + problem.omega() * l2 * l2;
  return out;
}

double rescale_factor(const GridField& u, const Problem& problem) {
  if (!(problem.beta() < 0.0)) throw DomainError("rescale_to_phi: beta must be negative");
  const double q = quadratic_energy(u, problem);
  if (!(q > 0.0)) throw DomainError("rescale_to_phi: Q(u) must be positive");
  return std::pow(q / (-problem.beta()), 1.0 / (problem.p() - 1.0));
}

GridField rescale_to_phi(const GridField& u, const Problem& problem) {
  return u * rescale_factor(u, problem);
}

OmegaCheck check_omega(const Problem& problem) {
  const GridSpec& grid = problem.grid();
  const auto v = problem.potential();
  auto apply_h = [&](const GridField& u) {
    GridField out = apply_symbol(u, problem.symbol(), [](double r) { return 0.5 * r; });
    for (std::size_t j = 0; j < v.size(); ++j) out[j] += v[j] * u[j];
    return out;
  };

  OmegaCheck out;
  if (grid.size() <= kDenseEigenLimit) {
    const Eigen::MatrixXd h = dense_real_matrix(grid, apply_h);
    const Eigen::MatrixXd sym = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("check_omega: dense eigensolve failed");
    out.lambda0_prime = es.eigenvalues()(0);
    out.dense = true;
  } else {
    const double shift =
        std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()) + 1.0;
    auto precondition = [&](const GridField& r) {
      return apply_symbol(r, problem.symbol(), [shift](double rho) { return 1.0 / (0.5 * rho + shift); });
    };
    GridField start(grid);
    for (std::size_t j = 0; j < v.size(); ++j) start[j] = std::exp(-v[j]);
    const EigenEstimate est = lowest_eigenpair(apply_h, precondition, std::move(start), 1e-10, 5000);
    out.lambda0_prime = est.value;
    out.iterations = est.iterations;
  }
  out.admissible = problem.omega() > -out.lambda0_prime;
  return out;
}

double alpha_min(const Problem& problem) {
  const auto v = problem.potential();
  const double vmax = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  return 0.5 * std::max(0.0, vmax + problem.omega()) + 0.5;
}

}  // namespace gfalm
