#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <gfalm/error.hpp>
#include <gfalm/functionals.hpp>
#include <gfalm/random_fields.hpp>
#include <gfalm/reference.hpp>

#include "dense_oracle.hpp"
#include "soliton_oracle.hpp"

using namespace gfalm;
using Catch::Approx;

namespace {

Problem trap(const GridSpec& g, std::vector<double> gamma, double omega = 1.0) {
  ProblemParams params;
  params.omega = omega;
  params.potential = PotentialSpec::harmonic(std::move(gamma));
  return Problem(g, params);
}

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("problem validation") {
  const GridSpec g = GridSpec::line(Axis{-4.0, 8.0, 16});
  ProblemParams params;
  params.beta = 1.0;
  CHECK_THROWS_AS(Problem(g, params), DomainError);
  params.beta = -1.0;
  params.p = 1.0;
  CHECK_THROWS_AS(Problem(g, params), DomainError);
  params.p = 3.0;
  params.potential = PotentialSpec::harmonic({1.0, 1.0});
  CHECK_THROWS_AS(Problem(g, params), DomainError);
  params.potential = PotentialSpec::sampled(GridField::constant(g, -1.0));
  CHECK_THROWS_AS(Problem(g, params), DomainError);
  params.potential = PotentialSpec::sampled(GridField::constant(g, Complex(1.0, 1.0)));
  CHECK_THROWS_AS(Problem(g, params), DomainError);
  params.potential = PotentialSpec::sampled(GridField::constant(g, 2.0));
  CHECK(Problem(g, params).potential()[3] == 2.0);
}

TEST_CASE("operators match the dense oracle") {
  std::mt19937_64 rng(21);
  for (const GridSpec& g : {GridSpec::line(Axis{-4.0, 8.0, 8}),
                            GridSpec::plane(Axis{-4.0, 8.0, 8}, Axis{-3.0, 6.0, 8})}) {
    const Problem problem = trap(g, std::vector<double>(static_cast<std::size_t>(g.dims()), 0.7));
    const auto dense = oracle::make_dense(g, to_vec(problem.potential()), 1.0, 3.0);
    const GridField u = random_field(g, rng);
    const auto uv = oracle::to_vector(u);
    const GridField au = oracle::to_field(g, dense.a().cast<Complex>() * uv);
    CHECK(max_norm(apply_A(u, problem) - au) <= 1e-11);
    CHECK(quadratic_energy(u, problem) == Approx(dense.q_energy(uv)).epsilon(1e-13));
    const double lt = dense.q_energy(uv) / dense.lp_pow(uv, 4.0);
    CHECK(lambda_tilde(u, problem) == Approx(lt).epsilon(1e-13));
    const double le = dense.inner_re(dense.a().cast<Complex>() * uv, dense.nonlinearity(uv)) /
                      dense.lp_pow(uv, 6.0);
    CHECK(lambda_exact(u, problem) == Approx(le).epsilon(1e-13));
    const oracle::Vector mu = dense.a().cast<Complex>() * uv - lt * dense.nonlinearity(uv);
    CHECK(max_norm(residual_mu(u, problem) - oracle::to_field(g, mu)) <= 1e-11);
  }
}

TEST_CASE("non-integer exponent nonlinearity") {
  const GridSpec g = GridSpec::line(Axis{0.0, 1.0, 8});
  GridField u(g);
  u[0] = Complex(3.0, 4.0);
  const GridField n = nonlinearity(u, 2.5);
  CHECK(std::abs(n[0] - std::pow(5.0, 1.5) * u[0]) < 1e-12);
  CHECK(n[1] == Complex(0.0));
}

TEST_CASE("constraint and multipliers on the unit sphere") {
  const GridSpec g = GridSpec::line(Axis{-32.0, 64.0, 512});
  const Problem problem(g, ProblemParams{});
  const GridField u = exact_soliton(1.0, g);
  CHECK(std::abs(constraint_G(u, 3.0)) < 1e-12);
  CHECK(lambda_tilde(u, problem) == Approx(oracle::soliton_q(1.0)).epsilon(1e-12));
  CHECK(lambda_exact(u, problem) == Approx(oracle::soliton_q(1.0)).epsilon(1e-10));
  CHECK(max_norm(residual_mu(u, problem)) < 1e-9);
  CHECK_THROWS_AS(lambda_tilde(GridField(g), problem), DomainError);
}

TEST_CASE("rescaling recovers the Nehari solution") {
  const GridSpec g = GridSpec::line(Axis{-32.0, 64.0, 512});
  const Problem problem(g, ProblemParams{});
  const GridField phi = rescale_to_phi(exact_soliton(1.0, g), problem);
  CHECK(phi[256].real() == Approx(std::numbers::sqrt2).epsilon(1e-10));
  const ActionValues av = action_functionals(phi, problem);
  CHECK(std::abs(av.nehari) < 1e-9);
  // On the Nehari manifold with p = 3: S = Q(phi) / 2 = ||phi||_4^4 / 2
  CHECK(av.action == Approx(0.5 * std::pow(oracle::soliton_l4(1.0), 4)).epsilon(1e-10));
  CHECK(av.action - av.energy == Approx(std::pow(oracle::soliton_l2(1.0), 2)).epsilon(1e-10));
}

TEST_CASE("alpha_min") {
  const GridSpec g2 = GridSpec::plane(Axis{-4.0, 8.0, 16}, Axis{-4.0, 8.0, 16});
  CHECK(alpha_min(trap(g2, {1.0, 1.0})) == Approx(0.5 * 17.0 + 0.5));
  const GridSpec g1 = GridSpec::line(Axis{-4.0, 8.0, 16});
  CHECK(alpha_min(Problem(g1, ProblemParams{})) == Approx(1.0));
  ProblemParams params;
  params.omega = -2.0;
  CHECK(alpha_min(Problem(g1, params)) == Approx(0.5));
}

TEST_CASE("omega admissibility from the lowest eigenvalue") {
  const OmegaCheck free = check_omega(Problem(GridSpec::line(Axis{-4.0, 8.0, 32}), ProblemParams{}));
  CHECK(std::abs(free.lambda0_prime) < 1e-12);
  CHECK(free.admissible);

  // -1/2 u'' + x^2/2 u has ground energy 1/2
  const OmegaCheck small = check_omega(trap(GridSpec::line(Axis{-8.0, 16.0, 64}), {1.0}));
  CHECK(small.dense);
  CHECK(small.lambda0_prime == Approx(0.5).margin(1e-8));

  const OmegaCheck large = check_omega(trap(GridSpec::line(Axis{-12.0, 24.0, 2048}), {1.0}));
  CHECK_FALSE(large.dense);
  CHECK(large.lambda0_prime == Approx(0.5).margin(1e-6));

  const OmegaCheck bad = check_omega(trap(GridSpec::line(Axis{-8.0, 16.0, 64}), {1.0}, -0.6));
  CHECK_FALSE(bad.admissible);
}
