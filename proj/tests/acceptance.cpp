// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "anisorobin/bessel.hpp"
#include "anisorobin/fem_2d.hpp"
#include "anisorobin/finsler_norm.hpp"
#include "anisorobin/planar_geometry.hpp"
#include "anisorobin/reduced_1d.hpp"
#include "anisorobin/verify_harness.hpp"

using namespace anisorobin;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct NamedNorm {
  const char* name;
  FinslerNorm norm;
};

std::vector<NamedNorm> norm_families() {
  Mat2 m;
  m << 4.0, 0.0, 0.0, 1.0;
  return {{"euclidean", FinslerNorm::euclidean()}, {"quadratic", FinslerNorm::quadratic(m)}, {"lp4", FinslerNorm::lp(4.0)}};
}

struct NamedDomain {
  const char* name;
  ConvexPolygon poly;
};

std::vector<NamedDomain> test_domains() {
  return {{"square", unit_square()}, {"rect3:1", rectangle(3.0, 1.0)}, {"pentagon", regular_polygon(5, 1.0)}};
}

constexpr double kTheoremTol = 1e-5;
const std::vector<double> kTheoremAlphas = {-0.1, -1.0, -5.0};

// --- 1 ---------------------------------------------------------------------

Outcome norm_identities() {
  constexpr std::size_t kSamples = 1000;
  Outcome o{true, ""};
  for (const auto& [name, norm] : norm_families()) {
    const IdentityReport r = identity_suite(norm, kSamples, 2024);
    o.pass = o.pass && r.passed();
    o.detail += fmt("%s euler=%.1e duality=%.1e inversion=%.1e cs=%.1e bipolar=%.1e; ", name, r.euler, r.duality,
                    r.inversion, r.cauchy_schwarz, r.bipolar);
  }
  return o;
}

// --- 2 ---------------------------------------------------------------------

Outcome bessel_suite() {
  constexpr double kWronskianTol = 1e-11, kDerivTol = 1e-6, h = 1e-6;
  double worst_w = 0.0, worst_d = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = 1e-3 * std::pow(5e5, i / 999.0);  // [1e-3, 500]
    const double w = bessel::i0(x) * bessel::k1(x) + bessel::i1(x) * bessel::k0(x);
    worst_w = std::max(worst_w, std::abs(w * x - 1.0));
  }
  for (int i = 0; i < 200; ++i) {
    const double x = 0.1 + i * 0.15;  // [0.1, 29.95], across the series/asymptotic switch
    auto d = [&](double (*f)(double)) { return (f(x + h) - f(x - h)) / (2 * h); };
    worst_d = std::max({worst_d, rel(d(bessel::i0), bessel::i1(x)), rel(d(bessel::k0), -bessel::k1(x)),
                        rel(d(bessel::i1), bessel::i0(x) - bessel::i1(x) / x),
                        rel(d(bessel::k1), -bessel::k0(x) - bessel::k1(x) / x)});
  }
  return {worst_w <= kWronskianTol && worst_d <= kDerivTol,
          fmt("max |x W - 1| = %.2e over 1000 points, max derivative relation error = %.2e", worst_w, worst_d)};
}

// --- 3, 4 ------------------------------------------------------------------

struct GridCase {
  double r1, r2, alpha;
};

std::vector<GridCase> reduced_grid() {
  std::vector<GridCase> g;
  for (double r2 : {0.5, 1.0, 2.0, 3.0, 4.0})
    for (double f : {0.0, 0.25, 0.5, 0.75, 0.9})
      for (double a : {-0.1, -1.0, -5.0, -10.0, -20.0}) g.push_back({f == 0.0 ? 1e-3 : f * r2, r2, a});
  return g;
}

Outcome secular_vs_fd() {
  constexpr double kTol = 1e-6;
  constexpr std::size_t kNodes = 100000;
  const auto grid = reduced_grid();
  std::vector<double> err(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const AnnulusSpec ann{grid[i].r1, grid[i].r2};
    err[i] = rel(fd_annulus(ann, grid[i].alpha, kNodes).lambda, annulus_secular(ann, grid[i].alpha));
  }
  const auto worst = std::max_element(err.begin(), err.end());
  const GridCase& w = grid[worst - err.begin()];
  return {*worst <= kTol, fmt("%zu cases, max relative gap %.2e at (r1=%g, r2=%g, alpha=%g)", grid.size(), *worst,
                              w.r1, w.r2, w.alpha)};
}

Outcome annulus_below_wulff() {
  constexpr double kTol = 1e-9;
  const auto grid = reduced_grid();
  int violations = 0;
  double max_excess = -INFINITY;
  for (const auto& c : grid) {
    const double excess = annulus_secular({c.r1, c.r2}, c.alpha) - wulff_secular(c.r2, c.alpha);
    max_excess = std::max(max_excess, excess);
    if (excess > kTol) ++violations;
  }
  return {violations == 0, fmt("%d violations in %zu cases, max mu - lambda = %.3e", violations, grid.size(), max_excess)};
}

// --- 5, 6 ------------------------------------------------------------------

Outcome quadratic_reduction() {
  constexpr double kRelTol = 1e-2, kMinOrder = 1.8, alpha = -1.0;
  Mat2 m;
  m << 4.0, 0.0, 0.0, 1.0;
  const FinslerNorm norm = FinslerNorm::quadratic(m);
  const double exact = wulff_secular(1.0, alpha);
  std::vector<double> errs;
  for (int level = 3; level <= 5; ++level)
    errs.push_back(rel(solve_linear_quadratic(mesh_wulff(norm, 1.0, 16, level), m, alpha).lambda, exact));
  const double o34 = std::log2(errs[0] / errs[1]), o45 = std::log2(errs[1] / errs[2]);
  return {errs[2] <= kRelTol && o34 >= kMinOrder && o45 >= kMinOrder,
          fmt("rel errors %.2e %.2e %.2e (levels 3-5), orders %.3f %.3f", errs[0], errs[1], errs[2], o34, o45)};
}

Outcome disk_benchmark() {
  constexpr double kRelTol = 1e-2;
  const FinslerNorm norm = FinslerNorm::euclidean();
  const TriMesh mesh = mesh_wulff(norm, 1.0, 16, 5);
  Outcome o{true, "level 5:"};
  for (double a : {-0.1, -1.0, -5.0}) {
    const double fem = solve_rayleigh(mesh, norm, a).lambda;
    const double err = rel(fem, wulff_secular(1.0, a));
    o.pass = o.pass && err <= kRelTol;
    o.detail += fmt(" alpha=%g err=%.2e", a, err);
  }
  return o;
}

// --- 7, 9 ------------------------------------------------------------------

struct TheoremRun {
  std::vector<std::string> labels;
  std::vector<VerificationRecord> perimeter, chain;
};

const TheoremRun& theorem_run() {
  static const TheoremRun run = [] {
    TheoremRun r;
    HarnessOptions opts;
    opts.refinements = 5;
    opts.tolerance = kTheoremTol;
    for (const auto& d : test_domains())
      for (const auto& n : norm_families())
        for (double a : kTheoremAlphas) {
          r.labels.push_back(fmt("%s/%s/%g", d.name, n.name, a));
          r.perimeter.push_back(verify_perimeter_theorem(d.poly, n.norm, a, opts));
          r.chain.push_back(chain_check(d.poly, n.norm, a, 0.0, opts));
        }
    return r;
  }();
  return run;
}

Outcome summarize(const std::vector<VerificationRecord>& recs, const std::vector<std::string>& labels) {
  std::size_t worst = 0, passed = 0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].verdict == Verdict::pass) ++passed;
    if (!(std::isnan(recs[i].margin()) || recs[i].margin() >= recs[worst].margin())) worst = i;
  }
  return {passed == recs.size(), fmt("%zu/%zu pass, smallest margin %.3e (%s)", passed, recs.size(),
                                     recs[worst].margin(), labels[worst].c_str())};
}

Outcome perimeter_theorem() { return summarize(theorem_run().perimeter, theorem_run().labels); }

Outcome chain() {
  const TheoremRun& r = theorem_run();
  Outcome o = summarize(r.chain, r.labels);
  double fa = INFINITY, aw = INFINITY, wm = INFINITY;
  for (const auto& rec : r.chain) {
    fa = std::min(fa, rec.quantities.at("margin_fem_annulus"));
    aw = std::min(aw, rec.quantities.at("margin_annulus_wulff"));
    wm = std::min(wm, rec.quantities.at("margin_wulff_monotone"));
  }
  o.detail += fmt("; smallest gaps fem<=mu %.3e, mu<=wulff(r2) %.3e, wulff(r2)<=wulff(r3') %.3e", fa, aw, wm);
  return o;
}

// --- 8 ---------------------------------------------------------------------

Outcome area_theorem() {
  const std::vector<double> grid = {-20.0, -10.0, -5.0, -2.0, -1.0, -0.5, -0.2, -0.1, -0.05, -0.01};
  HarnessOptions opts;
  opts.refinements = 5;
  Outcome o{true, ""};
  double smallest = INFINITY;
  for (const auto& d : test_domains())
    for (const auto& n : norm_families()) {
      const AreaSweep s = verify_area_theorem(d.poly, n.norm, grid, opts);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < -0.05) continue;
        const double m = s.records[i].margin();
        smallest = std::min(smallest, m);
        o.pass = o.pass && m >= 0.0;  // false for NaN
      }
      o.detail += fmt("%s/%s alpha*_hat in [%s, %s]; ", d.name, n.name,
                      s.alpha_star_lower ? fmt("%g", *s.alpha_star_lower).c_str() : "below grid",
                      s.alpha_star_hat ? fmt("%g", *s.alpha_star_hat).c_str() : "none");
    }
  o.detail = fmt("smallest margin at alpha in {-0.05,-0.01}: %.3e; ", smallest) + o.detail;
  return o;
}

// --- 10 --------------------------------------------------------------------

Outcome asymptotics() {
  constexpr double kTol = 1e-5, r3 = 1.0, alpha = -1e-3, eps = 0.5;
  const double lam = wulff_secular(r3, alpha);
  const AnnulusSpec ann = gamma_annulus(r3, eps);
  const double mu = annulus_secular(ann, alpha);
  const double dl = std::abs(lam - 2 * alpha / r3), dm = std::abs(mu - 2 * alpha * ann.r2 / (r3 * r3));
  const VerificationRecord rec = asymptotics_check(r3, alpha, eps, kTol);
  return {dl <= kTol && dm <= kTol && rec.verdict == Verdict::pass,
          fmt("|lambda-2a|=%.2e |mu-2a r2|=%.2e ratio test %s (ratios %.4f %.4f)", dl, dm, to_string(rec.verdict),
              rec.quantities.at("ratio_wulff"), rec.quantities.at("ratio_annulus"))};
}

// --- 11 --------------------------------------------------------------------

Outcome derivative_formula() {
  constexpr double kFdTol = 1e-3, kZeroTol = 1e-8, h = 1e-3;
  constexpr int kLevel = 4;
  const auto norms = norm_families();
  const auto domains = test_domains();
  struct Case {
    int d, n;
    double alpha;
  };
  const std::vector<Case> cases = {{0, 0, -1.0}, {1, 1, -0.5}, {2, 2, -1.0}, {0, 2, -0.1}, {2, 1, -2.0}};
  Outcome o{true, ""};
  double worst_fd = 0.0, worst_zero = 0.0;
  for (const auto& c : cases) {
    const TriMesh mesh = mesh_polygon(domains[c.d].poly, kLevel);
    const FinslerNorm& norm = norms[c.n].norm;
    const FemSolution sol = solve_rayleigh(mesh, norm, c.alpha);
    const double fd =
        (solve_rayleigh(mesh, norm, c.alpha + h).lambda - solve_rayleigh(mesh, norm, c.alpha - h).lambda) / (2 * h);
    worst_fd = std::max(worst_fd, rel(eigen_derivative(sol, mesh, norm), fd));
  }
  for (const auto& d : domains)
    for (const auto& n : norms) {
      const TriMesh mesh = mesh_polygon(d.poly, kLevel);
      const double pv = anis_perimeter(d.poly, n.norm) / area(d.poly);
      worst_zero = std::max(worst_zero, rel(eigen_derivative(solve_rayleigh(mesh, n.norm, 0.0), mesh, n.norm), pv));
    }
  o.pass = worst_fd <= kFdTol && worst_zero <= kZeroTol;
  o.detail = fmt("max rel gap vs central differences %.2e (5 cases), at alpha=0 vs P_F/V %.2e (9 cases)", worst_fd,
                 worst_zero);
  return o;
}

// --- 12 --------------------------------------------------------------------

Outcome geometry_suite() {
  constexpr double kSlopeTol = 1e-6, kCoareaTol = 1e-3, kSteinerTol = 1e-3, kEikonalTol = 1e-4;
  const auto norms = norm_families();
  std::vector<ConvexPolygon> polys;
  for (const auto& d : test_domains()) polys.push_back(d.poly);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10; ++i) polys.push_back(random_convex_polygon(rng));

  double slope = 0.0, coarea = 0.0, steiner = 0.0, eikonal = 0.0;
  for (const auto& poly : polys)
    for (const auto& n : norms) {
      const ParallelProfile prof = profile(poly, n.norm, 256);
      const std::vector<double> r = r_transform(prof, prof.kappa);
      for (std::size_t i = 0; i + 1 < r.size(); ++i)
        slope = std::max(slope, std::abs(r[i + 1] - r[i]) / (prof.t[i + 1] - prof.t[i]));
      auto inner_area = [&](double t) {
        const auto in = inner_parallel(poly, n.norm, t);
        return in ? area(*in) : 0.0;
      };
      for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double t = s * prof.r_f, dt = 1e-6 * prof.r_f;
        const auto in = inner_parallel(poly, n.norm, t);
        if (!in) continue;
        const double da = (inner_area(t - dt) - inner_area(t + dt)) / (2 * dt);
        coarea = std::max(coarea, rel(da, anis_perimeter(*in, n.norm)));
      }
      for (double delta : {0.1, 0.5}) {
        const SteinerCheck sc = steiner_check(poly, n.norm, delta);
        steiner = std::max({steiner, rel(sc.v_measured, sc.v_formula), rel(sc.p_measured, sc.p_formula)});
      }
      eikonal = std::max(eikonal, eikonal_check(poly, n.norm, 1000, 3));
    }

  int negative = 0;
  double min_deficit = INFINITY;
  std::mt19937_64 rng2(11);
  for (int i = 0; i < 1000; ++i) {
    const ConvexPolygon poly = random_convex_polygon(rng2);
    for (const auto& n : norms) {
      const double d = isoperimetric_deficit(poly, n.norm);
      min_deficit = std::min(min_deficit, d);
      if (!(d >= 0.0)) ++negative;
    }
  }
  return {slope <= 1.0 + kSlopeTol && coarea <= kCoareaTol && steiner <= kSteinerTol && negative == 0 &&
              eikonal <= kEikonalTol,
          fmt("max |R'| %.9f, coarea %.2e, Steiner %.2e, negative deficits %d/3000 (min %.3e), eikonal %.2e", slope,
              coarea, steiner, negative, min_deficit, eikonal)};
}

// --- 13 --------------------------------------------------------------------

Outcome gamma_curves_check() {
  constexpr double r3 = 1.0;
  constexpr int kGrid = 200;
  Outcome o{true, ""};
  double min_abs = INFINITY;
  for (double eps : {1e-3, 1e-2, 0.1, 0.5, 1.0}) {
    const auto hit = intersection_alpha(r3, eps);
    // Without an intersection the ordering is checked out to alpha = -50.
    const double edge = hit ? hit->alpha : -50.0;
    std::vector<double> grid;
    for (int i = 0; i < kGrid; ++i) grid.push_back(edge * std::pow(10.0, -4.0 * (kGrid - 1 - i) / (kGrid - 1)) * 0.999);
    std::sort(grid.begin(), grid.end());
    const auto rows = gamma_curves(r3, eps, grid);
    const bool ordered = std::all_of(rows.begin(), rows.end(), [](const GammaRow& r) { return r.diff() < 0.0; });
    o.pass = o.pass && ordered;
    if (hit) min_abs = std::min(min_abs, std::abs(hit->alpha));
    o.detail += fmt("eps=%g alpha1=%s %s; ", eps, hit ? fmt("%.6g", hit->alpha).c_str() : "none",
                    ordered ? "ordered" : "NOT ordered");
  }
  o.pass = o.pass && min_abs > 0.0;
  o.detail = fmt("min |alpha1| = %.6g; ", min_abs) + o.detail;
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "norm identities", 5, norm_identities},
      {2, "Bessel suite", 2, bessel_suite},
      {3, "secular vs finite elements (1D)", 60, secular_vs_fd},
      {4, "annulus below Wulff of equal perimeter", 30, annulus_below_wulff},
      {5, "quadratic norm reduces to the disk", 300, quadratic_reduction},
      {6, "Euclidean disk benchmark", 300, disk_benchmark},
      {7, "perimeter inequality", 1200, perimeter_theorem},
      {8, "area inequality for small alpha", 600, area_theorem},
      {9, "parallel-coordinate chain", 1200, chain},
      {10, "small-alpha asymptotics", 5, asymptotics},
      {11, "eigenvalue derivative in alpha", 300, derivative_formula},
      {12, "geometry suite", 120, geometry_suite},
      {13, "Gamma-curve ordering", 120, gamma_curves_check},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.time_limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s %2d %s: %s [%.2f s of %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.time_limit_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
