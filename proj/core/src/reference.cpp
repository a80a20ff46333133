#include "gfalm/reference.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include "gfalm/error.hpp"
#include "gfalm/field_io.hpp"
#include "gfalm/spectral.hpp"

namespace gfalm {
namespace {

double soliton_profile(double omega, double x) {
  const double k = std::sqrt(2.0 * omega);
  return k / std::cosh(k * x);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double squared_distance(const GridSpec& grid, std::size_t j, const std::vector<double>& c) {
  double r2 = 0.0;
  for (int d = 0; d < grid.dims(); ++d) {
    const double x = grid.coordinate(j, d) - (static_cast<std::size_t>(d) < c.size() ? c[static_cast<std::size_t>(d)] : 0.0);
    r2 += x * x;
  }
  return r2;
}

GridField gaussian(const GridSpec& grid, const std::vector<double>& center, double width) {
  if (!center.empty() && center.size() != static_cast<std::size_t>(grid.dims()))
    throw DomainError("make_initial: center has the wrong number of components");
  if (!(width > 0.0)) throw DomainError("make_initial: Gaussian width must be positive");
  GridField u(grid);
  for (std::size_t j = 0; j < grid.size(); ++j)
    u[j] = std::exp(-squared_distance(grid, j, center) / (2.0 * width * width));
  return u;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

double soliton_lq_norm(double omega, double q) {
  if (!(omega > 0.0) || !(q >= 1.0)) throw DomainError("soliton_lq_norm: need omega > 0, q >= 1");
  auto f = [&](double x) { return std::pow(soliton_profile(omega, x), q); };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -64.0, 64.0, 20, 1e-13);
  return std::pow(integral, 1.0 / q);
}

GridField exact_soliton(double omega, const GridSpec& grid) {
  if (grid.dims() != 1) throw DomainError("exact_soliton: 1D grid required");
  if (!(omega > 0.0)) throw DomainError("exact_soliton: omega must be positive");
  const double scale = 1.0 / soliton_lq_norm(omega, 4.0);
  return GridField::sample(grid, [&](double x) { return Complex(scale * soliton_profile(omega, x)); });
}

GridField make_initial(const InitialDataSpec& spec, const GridSpec& grid, double p) {
  GridField u = std::visit(
      overloaded{
          [&](const initial::Gaussian& g) { return gaussian(grid, g.center, g.width); },
          [&](const initial::ShiftedGaussian& g) {
            if (g.offset.size() != static_cast<std::size_t>(grid.dims()))
              throw DomainError("make_initial: offset has the wrong number of components");
            return gaussian(grid, g.offset, 1.0);
          },
          [&](const initial::Vortex&) {
            if (grid.dims() != 2) throw DomainError("make_initial: vortex requires a 2D grid");
            GridField v = gaussian(grid, {}, 1.0);
            for (std::size_t j = 0; j < grid.size(); ++j)
              v[j] *= Complex(grid.coordinate(j, 0), grid.coordinate(j, 1));
            return v;
          },
          [&](const initial::SolitonExact& s) { return exact_soliton(s.omega, grid); },
          [&](const initial::Constant&) { return GridField::constant(grid, 1.0); },
          [&](const initial::FromFile& f) {
            GridField v = read_field(f.path);
            if (!(v.grid() == grid))
              throw DomainError("make_initial: field file grid does not match the run grid");
            return v;
          },
      },
      spec);
  return normalize_lp(u, p);
}

std::string reference_config_hash(const Problem& problem, const ReferenceConfig& config) {
  std::ostringstream s;
  s.precision(17);
  const GridSpec& grid = problem.grid();
  for (int d = 0; d < grid.dims(); ++d)
    s << grid.axis(d).x0 << ',' << grid.axis(d).length << ',' << grid.axis(d).points << ';';
  s << problem.omega() << ';' << problem.beta() << ';' << problem.p() << ';';
  for (double v : problem.potential()) s << v << ',';
  s << ';' << config.tau << ';' << config.steps << ';' << config.residual_tol;
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : s.str()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hex64(hash);
}

Reference make_reference_2d(const Problem& problem, const ReferenceConfig& config) {
  if (problem.grid().dims() != 2) throw DomainError("make_reference_2d: 2D problem required");
  SolverConfig sc;
  sc.tau = config.tau;
  sc.max_iters = config.steps;
  sc.tol_linf = std::numeric_limits<double>::denorm_min();  // run the full step budget
  sc.record_every = static_cast<int>(std::max<std::int64_t>(1, config.steps));
  GfalmSolver solver(problem, sc);
  SolveOutcome out = solver.run(make_initial(initial::Gaussian{}, problem.grid(), problem.p()));

  Reference ref{std::move(out.final_state), {}};
  ReferenceCertificate& c = ref.certificate;
  c.Q = quadratic_energy(ref.field, problem);
  c.lambda = lambda_exact(ref.field, problem);
  c.residual_linf = out.records.back().residual_linf;
  const GridField mu = residual_mu(ref.field, problem);
  c.residual_mu_linf = max_norm(mu);
  c.residual_hm1 = hm1_norm(mu);
  c.steps = out.iterations_used;
  c.config_hash = reference_config_hash(problem, config);
  c.valid = c.residual_linf <= config.residual_tol && ref.field.all_finite();
  return ref;
}

void save_reference(const std::filesystem::path& dir, const std::string& stem,
                    const Reference& ref) {
  std::filesystem::create_directories(dir);
  write_field(dir / (stem + ".field"), ref.field);
  const ReferenceCertificate& c = ref.certificate;
  nlohmann::ordered_json j{{"Q", c.Q},
                           {"lambda", c.lambda},
                           {"residual_linf", c.residual_linf},
                           {"residual_mu_linf", c.residual_mu_linf},
                           {"residual_hm1", c.residual_hm1},
                           {"steps", c.steps},
                           {"config_hash", c.config_hash},
                           {"valid", c.valid}};
  std::ofstream os(dir / (stem + ".json"));
  os << j.dump(2) << '\n';
  if (!os) throw DomainError("save_reference: could not write certificate");
}

Reference load_reference(const std::filesystem::path& dir, const std::string& stem) {
  Reference ref{read_field(dir / (stem + ".field")), {}};
  std::ifstream is(dir / (stem + ".json"));
  if (!is) throw DomainError("load_reference: certificate not found in " + dir.string());
  try {
    const auto j = nlohmann::json::parse(is);
    ReferenceCertificate& c = ref.certificate;
    c.Q = j.at("Q").get<double>();
    c.lambda = j.at("lambda").get<double>();
    c.residual_linf = j.at("residual_linf").get<double>();
    c.residual_mu_linf = j.at("residual_mu_linf").get<double>();
    c.residual_hm1 = j.at("residual_hm1").get<double>();
    c.steps = j.at("steps").get<std::int64_t>();
    c.config_hash = j.at("config_hash").get<std::string>();
    c.valid = j.at("valid").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("load_reference: malformed certificate: ") + e.what());
  }
  return ref;
}

}  // namespace gfalm
