#include "gfalm_app/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include <gfalm/error.hpp>
#include <gfalm/field_io.hpp>

namespace gfalm::app {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) { throw ConfigError("config: " + what); }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

std::int64_t integer(const json& obj, const char* key, std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) fail(std::string("'") + key + "' must be an integer");
  return obj[key].get<std::int64_t>();
}

std::vector<double> number_list(const json& obj, const char* key, std::size_t size) {
  if (!obj.contains(key)) return {};
  const json& arr = obj[key];
  if (!arr.is_array() || arr.size() != size)
    fail(std::string("'") + key + "' must be an array of " + std::to_string(size) + " numbers");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) fail(std::string("'") + key + "' must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

ordered_json vec_json(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

GridSpec RunConfig::grid() const { return GridSpec(std::span<const Axis>(axes)); }

Problem RunConfig::problem() const { return Problem(grid(), params); }

SolverConfig RunConfig::solver_config() const {
  SolverConfig c;
  c.tau = tau;
  c.alpha = alpha;
  c.tol_linf = tol_linf;
  c.max_iters = max_iters;
  c.record_every = record_every;
  return c;
}

std::optional<GridField> RunConfig::load_reference(const Problem& problem) const {
  if (reference == "none") return std::nullopt;
  if (reference == "exact_soliton") return exact_soliton(params.omega, problem.grid());
  GridField ref = read_field(std::filesystem::path(reference));
  problem.require_grid(ref);
  return ref;
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical.dump()); }

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) fail("top level must be an object");
  reject_unknown(doc,
                 {"dims", "domain", "potential", "omega", "beta", "p", "tau", "alpha", "tol_linf",
                  "max_iters", "initial", "record_every", "reference", "seed"},
                 "config");
  RunConfig cfg;
  ordered_json canon;

  const auto dims = integer(doc, "dims", 0);
  if (dims != 1 && dims != 2) fail("'dims' must be 1 or 2");
  if (!doc.contains("domain") || !doc["domain"].is_array() ||
      doc["domain"].size() != static_cast<std::size_t>(dims))
    fail("'domain' must list one {x0, L, M} object per axis");
  canon["dims"] = dims;
  canon["domain"] = ordered_json::array();
  for (const auto& ax : doc["domain"]) {
    if (!ax.is_object()) fail("domain entries must be objects");
    reject_unknown(ax, {"x0", "L", "M"}, "domain");
    if (!ax.contains("x0") || !ax.contains("L") || !ax.contains("M"))
      fail("domain entries need x0, L and M");
    Axis a{number(ax, "x0", 0.0), number(ax, "L", 0.0), static_cast<int>(integer(ax, "M", 0))};
    cfg.axes.push_back(a);
    canon["domain"].push_back({{"x0", a.x0}, {"L", a.length}, {"M", a.points}});
  }

  ordered_json pot = {{"type", "zero"}};
  if (doc.contains("potential")) {
    const json& pj = doc["potential"];
    if (!pj.is_object() || !pj.contains("type") || !pj["type"].is_string())
      fail("'potential' must be an object with a 'type'");
    const auto type = pj["type"].get<std::string>();
    if (type == "zero") {
      reject_unknown(pj, {"type"}, "potential");
    } else if (type == "harmonic") {
      reject_unknown(pj, {"type", "gamma"}, "potential");
      auto gamma = number_list(pj, "gamma", static_cast<std::size_t>(dims));
      if (gamma.empty()) gamma.assign(static_cast<std::size_t>(dims), 1.0);
      cfg.params.potential = PotentialSpec::harmonic(gamma);
      pot = {{"type", "harmonic"}, {"gamma", vec_json(gamma)}};
    } else {
      fail("unknown potential type '" + type + "'");
    }
  }
  canon["potential"] = pot;

  cfg.params.omega = number(doc, "omega", 1.0);
  cfg.params.beta = number(doc, "beta", -1.0);
  cfg.params.p = number(doc, "p", 3.0);
  cfg.tau = number(doc, "tau", 0.5);
  if (doc.contains("alpha")) {
    const json& a = doc["alpha"];
    if (a.is_string() && a.get<std::string>() == "auto")
      cfg.alpha.reset();
    else if (a.is_number())
      cfg.alpha = a.get<double>();
    else
      fail("'alpha' must be \"auto\" or a number");
  }
  cfg.tol_linf = number(doc, "tol_linf", 1e-11);
  cfg.max_iters = integer(doc, "max_iters", 100000);
  cfg.record_every = static_cast<int>(integer(doc, "record_every", 1));
  cfg.seed = static_cast<std::uint64_t>(integer(doc, "seed", 0));
  if (!(cfg.tau > 0.0)) fail("'tau' must be positive");
  if (!(cfg.tol_linf > 0.0)) fail("'tol_linf' must be positive");
  if (cfg.max_iters < 0) fail("'max_iters' must be non-negative");
  if (cfg.record_every < 1) fail("'record_every' must be >= 1");
  if (!(cfg.params.omega > 0.0)) fail("'omega' must be positive");
  canon["omega"] = cfg.params.omega;
  canon["beta"] = cfg.params.beta;
  canon["p"] = cfg.params.p;
  canon["tau"] = cfg.tau;
  canon["alpha"] = cfg.alpha ? ordered_json(*cfg.alpha) : ordered_json("auto");
  canon["tol_linf"] = cfg.tol_linf;
  canon["max_iters"] = cfg.max_iters;

  ordered_json init = {{"type", "gaussian"}};
  if (doc.contains("initial")) {
    const json& ij = doc["initial"];
    if (!ij.is_object() || !ij.contains("type") || !ij["type"].is_string())
      fail("'initial' must be an object with a 'type'");
    const auto type = ij["type"].get<std::string>();
    const auto d = static_cast<std::size_t>(dims);
    if (type == "gaussian") {
      reject_unknown(ij, {"type", "center", "width"}, "initial");
      initial::Gaussian g{number_list(ij, "center", d), number(ij, "width", 1.0)};
      init = {{"type", type}, {"center", vec_json(g.center)}, {"width", g.width}};
      cfg.initial = std::move(g);
    } else if (type == "shifted_gaussian") {
      reject_unknown(ij, {"type", "offset"}, "initial");
      auto offset = number_list(ij, "offset", d);
      if (offset.empty()) fail("shifted_gaussian needs 'offset'");
      init = {{"type", type}, {"offset", vec_json(offset)}};
      cfg.initial = initial::ShiftedGaussian{std::move(offset)};
    } else if (type == "vortex") {
      reject_unknown(ij, {"type"}, "initial");
      if (dims != 2) fail("vortex initial data needs dims = 2");
      init = {{"type", type}};
      cfg.initial = initial::Vortex{};
    } else if (type == "soliton_exact") {
      reject_unknown(ij, {"type", "omega"}, "initial");
      if (dims != 1) fail("soliton_exact initial data needs dims = 1");
      const double w = number(ij, "omega", cfg.params.omega);
      init = {{"type", type}, {"omega", w}};
      cfg.initial = initial::SolitonExact{w};
    } else if (type == "constant") {
      reject_unknown(ij, {"type"}, "initial");
      init = {{"type", type}};
      cfg.initial = initial::Constant{};
    } else if (type == "file") {
      reject_unknown(ij, {"type", "path"}, "initial");
      if (!ij.contains("path") || !ij["path"].is_string()) fail("file initial data needs 'path'");
      const auto path = resolve(base_dir, ij["path"].get<std::string>());
      init = {{"type", type}, {"path", path.string()}};
      cfg.initial = initial::FromFile{path};
    } else {
      fail("unknown initial type '" + type + "'");
    }
  }
  canon["initial"] = init;
  canon["record_every"] = cfg.record_every;

  if (doc.contains("reference")) {
    if (!doc["reference"].is_string()) fail("'reference' must be a string");
    const auto ref = doc["reference"].get<std::string>();
    cfg.reference =
        ref == "none" || ref == "exact_soliton" ? ref : resolve(base_dir, ref).string();
    if (ref == "exact_soliton" && dims != 1) fail("exact_soliton reference needs dims = 1");
  }
  canon["reference"] = cfg.reference;
  canon["seed"] = cfg.seed;
  cfg.canonical = std::move(canon);

  try {
    cfg.params.validate();
    const Problem problem = cfg.problem();
    if (cfg.alpha && *cfg.alpha < alpha_min(problem))
      fail("'alpha' = " + std::to_string(*cfg.alpha) + " is below alpha_min = " +
           std::to_string(alpha_min(problem)));
  } catch (const DomainError& e) {
    fail(e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: malformed JSON in " + path.string() + ": " + e.what());
  }
  return parse_run_config(doc, path.parent_path());
}

nlohmann::json soliton_config() {
  return {{"dims", 1},
          {"domain", {{{"x0", -32.0}, {"L", 64.0}, {"M", 512}}}},
          {"potential", {{"type", "zero"}}},
          {"omega", 1.0},
          {"beta", -1.0},
          {"p", 3.0},
          {"tau", 0.5},
          {"alpha", "auto"},
          {"tol_linf", 1e-11},
          {"max_iters", 100000},
          {"initial", {{"type", "gaussian"}}},
          {"record_every", 1},
          {"reference", "exact_soliton"},
          {"seed", 0}};
}

nlohmann::json harmonic_trap_config() {
  return {{"dims", 2},
          {"domain", {{{"x0", -4.0}, {"L", 8.0}, {"M", 128}}, {{"x0", -4.0}, {"L", 8.0}, {"M", 128}}}},
          {"potential", {{"type", "harmonic"}, {"gamma", {1.0, 1.0}}}},
          {"omega", 1.0},
          {"beta", -1.0},
          {"p", 3.0},
          {"tau", 0.1},
          {"alpha", "auto"},
          {"tol_linf", 1e-10},
          {"max_iters", 20000},
          {"initial", {{"type", "gaussian"}}},
          {"record_every", 1},
          {"reference", "none"},
          {"seed", 0}};
}

}  // namespace gfalm::app
