#include "anisorobin/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "anisorobin/fem_2d.hpp"
#include "anisorobin/io.hpp"
#include "anisorobin/planar_geometry.hpp"
#include "anisorobin/reduced_1d.hpp"
#include "anisorobin/verify_harness.hpp"

namespace anisorobin {

namespace {

using nlohmann::json;

constexpr const char* kCacheVersion = "anisorobin-cache-1";

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

void require_object(const json& j, const std::string& field) {
  if (!j.is_object()) config_error(field, "expected an object");
}

void reject_unknown(const json& j, const std::string& prefix, std::initializer_list<const char*> known) {
  for (const auto& item : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return item.key() == k; }))
      config_error(prefix.empty() ? item.key() : prefix + "." + item.key(), "unknown field");
  }
}

double get_number(const json& j, const char* key, const std::string& field, double fallback) {
  const json* v = find(j, key);
  if (v == nullptr) return fallback;
  if (!v->is_number()) config_error(field, "expected a number");
  const double x = v->get<double>();
  if (!std::isfinite(x)) config_error(field, "must be finite");
  return x;
}

int get_positive_int(const json& j, const char* key, const std::string& field, int fallback) {
  const json* v = find(j, key);
  if (v == nullptr) return fallback;
  if (!v->is_number_integer()) config_error(field, "expected an integer");
  const auto x = v->get<long long>();
  if (x <= 0 || x > 1'000'000'000) config_error(field, "must be a positive integer");
  return static_cast<int>(x);
}

std::string get_string(const json& j, const char* key, const std::string& field) {
  const json* v = find(j, key);
  if (v == nullptr) return {};
  if (!v->is_string()) config_error(field, "expected a string");
  return v->get<std::string>();
}

DomainConfig parse_domain(const json& j) {
  require_object(j, "domain");
  DomainConfig d;
  if (const json* w = find(j, "wulff")) {
    reject_unknown(j, "domain", {"wulff"});
    require_object(*w, "domain.wulff");
    reject_unknown(*w, "domain.wulff", {"radius"});
    d.kind = DomainConfig::Kind::wulff;
    if (find(*w, "radius") == nullptr) config_error("domain.wulff.radius", "missing");
    d.radius = get_number(*w, "radius", "domain.wulff.radius", 1.0);
    if (!(d.radius > 0.0)) config_error("domain.wulff.radius", "must be positive");
  } else if (const json* a = find(j, "annulus")) {
    reject_unknown(j, "domain", {"annulus"});
    require_object(*a, "domain.annulus");
    reject_unknown(*a, "domain.annulus", {"r1", "r2"});
    d.kind = DomainConfig::Kind::annulus;
    if (find(*a, "r1") == nullptr) config_error("domain.annulus.r1", "missing");
    if (find(*a, "r2") == nullptr) config_error("domain.annulus.r2", "missing");
    d.r1 = get_number(*a, "r1", "domain.annulus.r1", 0.0);
    d.r2 = get_number(*a, "r2", "domain.annulus.r2", 1.0);
    if (!(d.r1 >= 0.0)) config_error("domain.annulus.r1", "must be non-negative");
    if (!(d.r2 > d.r1)) config_error("domain.annulus.r2", "must exceed r1");
  } else if (find(j, "vertices") != nullptr) {
    reject_unknown(j, "domain", {"vertices"});
    d.kind = DomainConfig::Kind::polygon;
    try {
      d.vertices = polygon_from_json(j).vertices();
    } catch (const std::exception& e) {
      config_error("domain.vertices", e.what());
    }
  } else {
    config_error("domain", "expected one of vertices, wulff, annulus");
  }
  return d;
}

json serialize_domain(const DomainConfig& d) {
  switch (d.kind) {
    case DomainConfig::Kind::wulff:
      return json{{"wulff", {{"radius", d.radius}}}};
    case DomainConfig::Kind::annulus:
      return json{{"annulus", {{"r1", d.r1}, {"r2", d.r2}}}};
    case DomainConfig::Kind::polygon: {
      json verts = json::array();
      for (const auto& v : d.vertices) verts.push_back({v.x(), v.y()});
      return json{{"vertices", verts}};
    }
  }
  return {};
}

std::variant<double, AlphaSweep> parse_alpha(const json& j) {
  if (j.is_number()) {
    const double a = j.get<double>();
    if (!(a <= 0.0)) config_error("alpha", "must be non-positive");
    return a;
  }
  if (!j.is_object() || find(j, "sweep") == nullptr) config_error("alpha", "expected a number or {\"sweep\":{...}}");
  reject_unknown(j, "alpha", {"sweep"});
  const json& s = j.at("sweep");
  require_object(s, "alpha.sweep");
  reject_unknown(s, "alpha.sweep", {"from", "to", "n"});
  for (const char* k : {"from", "to", "n"})
    if (find(s, k) == nullptr) config_error(std::string("alpha.sweep.") + k, "missing");
  AlphaSweep sw;
  sw.from = get_number(s, "from", "alpha.sweep.from", 0.0);
  sw.to = get_number(s, "to", "alpha.sweep.to", 0.0);
  sw.n = get_positive_int(s, "n", "alpha.sweep.n", 1);
  if (!(sw.from <= 0.0)) config_error("alpha.sweep.from", "must be non-positive");
  if (!(sw.to <= 0.0)) config_error("alpha.sweep.to", "must be non-positive");
  return sw;
}

ConvexPolygon domain_polygon(const RunConfig& cfg) {
  switch (cfg.domain.kind) {
    case DomainConfig::Kind::polygon:
      return ConvexPolygon(cfg.domain.vertices);
    case DomainConfig::Kind::wulff:
      return wulff_polygon(cfg.norm, cfg.domain.radius, static_cast<std::size_t>(cfg.solver.wulff_boundary));
    case DomainConfig::Kind::annulus:
      break;
  }
  config_error("domain", "this command needs a polygon or Wulff domain");
}

// Radius of the Wulff shape with the domain's area.
double equal_area_radius(const RunConfig& cfg) {
  const double kappa = cfg.norm.wulff_area();
  switch (cfg.domain.kind) {
    case DomainConfig::Kind::wulff:
      return cfg.domain.radius;
    case DomainConfig::Kind::annulus:
      return std::sqrt(cfg.domain.r2 * cfg.domain.r2 - cfg.domain.r1 * cfg.domain.r1);
    case DomainConfig::Kind::polygon:
      break;
  }
  return std::sqrt(area(ConvexPolygon(cfg.domain.vertices)) / kappa);
}

RayleighOptions rayleigh_options(const RunConfig& cfg, bool parallel) {
  RayleighOptions o;
  o.max_iters = cfg.solver.max_iters;
  o.stagnation_tol = cfg.solver.stagnation_tol;
  o.parallel = parallel;
  return o;
}

HarnessOptions harness_options(const RunConfig& cfg) {
  HarnessOptions h;
  h.refinements = cfg.solver.refinements;
  h.tolerance = cfg.solver.tolerance;
  h.rayleigh = rayleigh_options(cfg, true);
  return h;
}

std::ofstream open_output(const std::string& path, const std::string& field) {
  std::ofstream f(path);
  if (!f) config_error(field, "cannot open '" + path + "' for writing");
  return f;
}

void emit_json(const json& j, const RunConfig& cfg, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (!cfg.output.summary.empty()) open_output(cfg.output.summary, "output.summary") << text;
  out << text;
}

}  // namespace

bool OutputConfig::any() const {
  return !(summary.empty() && eigenfunction.empty() && records.empty() && summary_csv.empty() && curves.empty() &&
           svg.empty() && profile.empty());
}

std::vector<double> RunConfig::alphas() const {
  if (const double* a = std::get_if<double>(&alpha)) return {*a};
  const AlphaSweep& s = std::get<AlphaSweep>(alpha);
  std::vector<double> out(static_cast<std::size_t>(s.n));
  for (int i = 0; i < s.n; ++i) out[i] = s.n == 1 ? s.from : s.from + (s.to - s.from) * i / (s.n - 1);
  if (s.n > 1) out.back() = s.to;
  return out;
}

RunConfig parse_config(const json& j) {
  require_object(j, "<root>");
  reject_unknown(j, "", {"norm", "domain", "alpha", "solver", "output", "epsilon", "hole_perimeter", "workers", "seed"});
  RunConfig cfg;
  if (const json* n = find(j, "norm")) {
    try {
      cfg.norm = n->get<FinslerNorm>();
    } catch (const std::exception& e) {
      config_error("norm", e.what());
    }
  }
  if (const json* d = find(j, "domain")) cfg.domain = parse_domain(*d);
  if (const json* a = find(j, "alpha")) cfg.alpha = parse_alpha(*a);
  if (const json* s = find(j, "solver")) {
    require_object(*s, "solver");
    reject_unknown(*s, "solver",
                   {"refinements", "n_nodes", "max_iters", "tolerance", "stagnation_tol", "wulff_boundary",
                    "profile_samples", "method"});
    SolverConfig& sc = cfg.solver;
    if (const json* r = find(*s, "refinements")) {
      if (!r->is_number_integer() || r->get<long long>() < 0 || r->get<long long>() > 10)
        config_error("solver.refinements", "expected an integer in [0, 10]");
      sc.refinements = r->get<int>();
    }
    sc.n_nodes = get_positive_int(*s, "n_nodes", "solver.n_nodes", sc.n_nodes);
    if (sc.n_nodes < 16) config_error("solver.n_nodes", "must be at least 16");
    sc.max_iters = get_positive_int(*s, "max_iters", "solver.max_iters", sc.max_iters);
    sc.tolerance = get_number(*s, "tolerance", "solver.tolerance", sc.tolerance);
    if (!(sc.tolerance >= 0.0)) config_error("solver.tolerance", "must be non-negative");
    sc.stagnation_tol = get_number(*s, "stagnation_tol", "solver.stagnation_tol", sc.stagnation_tol);
    if (!(sc.stagnation_tol > 0.0)) config_error("solver.stagnation_tol", "must be positive");
    sc.wulff_boundary = get_positive_int(*s, "wulff_boundary", "solver.wulff_boundary", sc.wulff_boundary);
    if (sc.wulff_boundary < 16) config_error("solver.wulff_boundary", "must be at least 16");
    sc.profile_samples = get_positive_int(*s, "profile_samples", "solver.profile_samples", sc.profile_samples);
    if (sc.profile_samples < 64) config_error("solver.profile_samples", "must be at least 64");
    if (find(*s, "method") != nullptr) {
      sc.method = get_string(*s, "method", "solver.method");
      if (sc.method != "auto" && sc.method != "fem") config_error("solver.method", "expected \"auto\" or \"fem\"");
    }
  }
  if (const json* o = find(j, "output")) {
    require_object(*o, "output");
    reject_unknown(*o, "output", {"summary", "eigenfunction", "records", "summary_csv", "curves", "svg", "profile"});
    OutputConfig& oc = cfg.output;
    oc.summary = get_string(*o, "summary", "output.summary");
    oc.eigenfunction = get_string(*o, "eigenfunction", "output.eigenfunction");
    oc.records = get_string(*o, "records", "output.records");
    oc.summary_csv = get_string(*o, "summary_csv", "output.summary_csv");
    oc.curves = get_string(*o, "curves", "output.curves");
    oc.svg = get_string(*o, "svg", "output.svg");
    oc.profile = get_string(*o, "profile", "output.profile");
  }
  cfg.epsilon = get_number(j, "epsilon", "epsilon", cfg.epsilon);
  if (!(cfg.epsilon > 0.0)) config_error("epsilon", "must be positive");
  cfg.hole_perimeter = get_number(j, "hole_perimeter", "hole_perimeter", cfg.hole_perimeter);
  if (!(cfg.hole_perimeter >= 0.0)) config_error("hole_perimeter", "must be non-negative");
  cfg.workers = get_positive_int(j, "workers", "workers", cfg.workers);
  if (const json* s = find(j, "seed")) {
    if (!s->is_number_unsigned()) config_error("seed", "expected a non-negative integer");
    cfg.seed = s->get<std::uint64_t>();
  }
  return cfg;
}

json serialize_config(const RunConfig& cfg) {
  json j;
  j["norm"] = cfg.norm;
  j["domain"] = serialize_domain(cfg.domain);
  if (const double* a = std::get_if<double>(&cfg.alpha))
    j["alpha"] = *a;
  else {
    const AlphaSweep& s = std::get<AlphaSweep>(cfg.alpha);
    j["alpha"] = {{"sweep", {{"from", s.from}, {"to", s.to}, {"n", s.n}}}};
  }
  const SolverConfig& sc = cfg.solver;
  j["solver"] = {{"refinements", sc.refinements},         {"n_nodes", sc.n_nodes},
                 {"max_iters", sc.max_iters},             {"tolerance", sc.tolerance},
                 {"stagnation_tol", sc.stagnation_tol},   {"wulff_boundary", sc.wulff_boundary},
                 {"profile_samples", sc.profile_samples}, {"method", sc.method}};
  json out = json::object();
  const OutputConfig& oc = cfg.output;
  for (const auto& [key, value] : {std::pair<const char*, const std::string&>{"summary", oc.summary},
                                   {"eigenfunction", oc.eigenfunction},
                                   {"records", oc.records},
                                   {"summary_csv", oc.summary_csv},
                                   {"curves", oc.curves},
                                   {"svg", oc.svg},
                                   {"profile", oc.profile}})
    if (!value.empty()) out[key] = value;
  j["output"] = out;
  j["epsilon"] = cfg.epsilon;
  j["hole_perimeter"] = cfg.hole_perimeter;
  j["workers"] = cfg.workers;
  j["seed"] = cfg.seed;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config file '" + path + "': cannot open");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return parse_config(j);
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

int cmd_eig(const RunConfig& cfg, std::ostream& out) {
  const std::vector<double> alphas = cfg.alphas();
  std::vector<json> results(alphas.size());
  const bool fem = cfg.domain.kind == DomainConfig::Kind::polygon || cfg.solver.method == "fem";
  if (cfg.domain.kind == DomainConfig::Kind::annulus && fem)
    config_error("solver.method", "annulus domains are solved by the radial methods only");

  if (!fem) {
    const bool wulff = cfg.domain.kind == DomainConfig::Kind::wulff;
    const double r1 = wulff ? 0.0 : cfg.domain.r1, r2 = wulff ? cfg.domain.radius : cfg.domain.r2;
    const double bound_factor = 2.0 * r2 / (r2 * r2 - r1 * r1);  // P_F / V for Wulff shapes and F-annuli
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      FemSolution s;
      s.alpha = alphas[i];
      s.lambda = annulus_eigenvalue(r1, r2, alphas[i]);
      json j = solution_summary(s, alphas[i] * bound_factor);
      j["method"] = "secular";
      results[i] = j;
    }
    if (!cfg.output.eigenfunction.empty()) {
      auto f = open_output(cfg.output.eigenfunction, "output.eigenfunction");
      const std::size_t n = static_cast<std::size_t>(cfg.solver.n_nodes);
      write_radial_csv(f, wulff ? radial_fd(r2, alphas.back(), n) : fd_annulus(AnnulusSpec{r1, r2}, alphas.back(), n));
    }
  } else {
    const bool wulff = cfg.domain.kind == DomainConfig::Kind::wulff;
    const TriMesh mesh = wulff ? mesh_wulff(cfg.norm, cfg.domain.radius, 16, cfg.solver.refinements)
                               : mesh_polygon(ConvexPolygon(cfg.domain.vertices), cfg.solver.refinements);
    const double pf_over_v = mesh.boundary_perimeter(cfg.norm) / mesh.area();
    std::vector<FemSolution> sols(alphas.size());
    std::exception_ptr failure;
    const bool sweep = alphas.size() > 1;
#pragma omp parallel for schedule(dynamic) if (sweep)
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      try {
        sols[i] = solve_rayleigh(mesh, cfg.norm, alphas[i], rayleigh_options(cfg, !sweep));
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      results[i] = solution_summary(sols[i], alphas[i] * pf_over_v);
      results[i]["method"] = "fem";
    }
    if (!cfg.output.eigenfunction.empty()) {
      auto f = open_output(cfg.output.eigenfunction, "output.eigenfunction");
      write_solution_csv(f, mesh, sols.back());
    }
  }
  emit_json(cfg.is_sweep() ? json{{"results", results}} : results.front(), cfg, out);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& which, std::ostream& out) {
  const std::vector<double> alphas = cfg.alphas();
  const HarnessOptions opts = harness_options(cfg);
  json summary{{"check", which}};
  std::vector<VerificationRecord> records;
  if (which == "asymptotics") {
    const double r3 = equal_area_radius(cfg);
    for (double a : alphas) {
      if (!(a < 0.0 && a >= -1e-2)) config_error("alpha", "asymptotics needs -1e-2 <= alpha < 0");
      records.push_back(asymptotics_check(r3, a, cfg.epsilon, cfg.solver.tolerance));
    }
  } else if (which == "area") {
    std::vector<double> grid = alphas;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    AreaSweep sweep = verify_area_theorem(domain_polygon(cfg), cfg.norm, grid, opts);
    records = std::move(sweep.records);
    summary["alpha_star_hat"] = sweep.alpha_star_hat ? json(*sweep.alpha_star_hat) : json(nullptr);
    summary["alpha_star_lower"] = sweep.alpha_star_lower ? json(*sweep.alpha_star_lower) : json(nullptr);
  } else if (which == "perimeter" || which == "parallel" || which == "chain") {
    const ConvexPolygon poly = domain_polygon(cfg);
    records.resize(alphas.size());
#pragma omp parallel for schedule(dynamic) if (alphas.size() > 1)
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      if (which == "perimeter")
        records[i] = verify_perimeter_theorem(poly, cfg.norm, alphas[i], opts);
      else if (which == "parallel")
        records[i] = parallel_bound(poly, cfg.norm, alphas[i], opts);
      else
        records[i] = chain_check(poly, cfg.norm, alphas[i], cfg.hole_perimeter, opts);
    }
  } else {
    throw ConfigError("verify: unknown check '" + which + "' (expected perimeter, area, parallel, asymptotics, chain)");
  }
  const bool all_pass =
      std::all_of(records.begin(), records.end(), [](const VerificationRecord& r) { return r.verdict == Verdict::pass; });
  summary["records"] = records;
  summary["all_pass"] = all_pass;
  if (!cfg.output.records.empty()) {
    auto f = open_output(cfg.output.records, "output.records");
    write_jsonl(f, records);
  }
  if (!cfg.output.summary_csv.empty()) {
    auto f = open_output(cfg.output.summary_csv, "output.summary_csv");
    write_summary_csv(f, records);
  }
  emit_json(summary, cfg, out);
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_curves(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.is_sweep()) config_error("alpha", "curves needs an alpha sweep");
  std::vector<double> grid = cfg.alphas();
  for (double a : grid)
    if (!(a < 0.0)) config_error("alpha.sweep", "curves needs strictly negative alpha values");
  const double r3 = equal_area_radius(cfg);
  const std::vector<GammaRow> rows = gamma_curves(r3, cfg.epsilon, grid);
  if (!cfg.output.curves.empty()) {
    auto f = open_output(cfg.output.curves, "output.curves");
    write_curves_csv(f, rows);
  } else {
    write_curves_csv(out, rows);
  }
  if (!cfg.output.svg.empty()) {
    auto f = open_output(cfg.output.svg, "output.svg");
    write_curves_svg(f, rows);
  }
  return kExitOk;
}

int cmd_geom(const RunConfig& cfg, std::ostream& out) {
  const ConvexPolygon poly = domain_polygon(cfg);
  const ParallelRadii radii = parallel_radii(poly, cfg.norm);
  json j{{"area", area(poly)},
         {"perimeter", poly.perimeter()},
         {"anis_perimeter", anis_perimeter(poly, cfg.norm)},
         {"kappa", cfg.norm.wulff_area()},
         {"inradius", inradius(poly, cfg.norm).r_f},
         {"isoperimetric_deficit", isoperimetric_deficit(poly, cfg.norm)},
         {"r1", radii.r1},
         {"r2", radii.r2},
         {"r3", radii.r3}};
  if (!cfg.output.profile.empty()) {
    auto f = open_output(cfg.output.profile, "output.profile");
    write_profile_csv(f, profile(poly, cfg.norm, static_cast<std::size_t>(cfg.solver.profile_samples)));
  }
  emit_json(j, cfg, out);
  return kExitOk;
}

int cmd_norm_check(const RunConfig& cfg, std::ostream& out) {
  const IdentityReport report = identity_suite(cfg.norm, 1000, cfg.seed);
  json j = report;
  j["norm"] = cfg.norm;
  j["wulff_area"] = cfg.norm.wulff_area();
  j["wulff_area_numeric"] = numeric_wulff_area(cfg.norm);
  emit_json(j, cfg, out);
  return report.passed() ? kExitOk : kExitCheckFailed;
}

int run_command(const std::string& command, const RunConfig& cfg, const std::string& which, std::ostream& out,
                std::ostream& err) {
  try {
    omp_set_num_threads(cfg.workers);
    std::filesystem::path cache_file;
    const char* cache_dir = std::getenv("ANISOROBIN_CACHE_DIR");
    if (cache_dir != nullptr && *cache_dir != '\0' && !cfg.output.any()) {
      const std::string key =
          std::string(kCacheVersion) + "|" + command + "|" + which + "|" + serialize_config(cfg).dump();
      char name[32];
      std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a(key)));
      cache_file = std::filesystem::path(cache_dir) / name;
      std::ifstream f(cache_file);
      if (f) {
        try {
          const json cached = json::parse(f);
          if (cached.at("key").get<std::string>() == key) {
            out << cached.at("stdout").get<std::string>();
            return cached.at("exit").get<int>();
          }
        } catch (const json::exception&) {
          // Unreadable entry: recompute and overwrite.
        }
      }
    }

    std::ostringstream buffer;
    int code = kExitOk;
    if (command == "eig")
      code = cmd_eig(cfg, buffer);
    else if (command == "verify")
      code = cmd_verify(cfg, which, buffer);
    else if (command == "curves")
      code = cmd_curves(cfg, buffer);
    else if (command == "geom")
      code = cmd_geom(cfg, buffer);
    else if (command == "norm-check")
      code = cmd_norm_check(cfg, buffer);
    else
      throw ConfigError("unknown command '" + command + "'");
    out << buffer.str();

    if (!cache_file.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(cache_file.parent_path(), ec);
      const std::string key =
          std::string(kCacheVersion) + "|" + command + "|" + which + "|" + serialize_config(cfg).dump();
      std::ofstream f(cache_file);
      if (f) f << json{{"key", key}, {"stdout", buffer.str()}, {"exit", code}}.dump();
    }
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidNormError& e) {
    err << "error: config field 'norm': " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidPolygonError& e) {
    err << "error: config field 'domain': " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"First Robin eigenvalues of anisotropic Laplacians on planar domains"};
  app.require_subcommand(1);
  std::string config_path;
  std::string summary_path;
  bool verbose = false;
  std::string which;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON run configuration")->required();
    sub->add_option("-o,--output", summary_path, "also write the JSON summary to this file");
    sub->add_flag("-v,--verbose", verbose, "print the parsed configuration to stderr");
  };
  add_common(app.add_subcommand("eig", "first eigenvalue for each alpha"));
  auto* verify = app.add_subcommand("verify", "run a verification check");
  verify->add_option("check", which, "perimeter, area, parallel, asymptotics or chain")
      ->required()
      ->check(CLI::IsMember({"perimeter", "area", "parallel", "asymptotics", "chain"}));
  add_common(verify);
  add_common(app.add_subcommand("curves", "annulus and Wulff eigenvalue curves over an alpha sweep"));
  add_common(app.add_subcommand("geom", "area, perimeters, radii and parallel-set profile"));
  add_common(app.add_subcommand("norm-check", "identity suite for the configured norm"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!summary_path.empty()) cfg.output.summary = summary_path;
  if (verbose) std::cerr << serialize_config(cfg).dump(2) << '\n';
  return run_command(command, cfg, which, std::cout, std::cerr);
}

}  // namespace anisorobin
