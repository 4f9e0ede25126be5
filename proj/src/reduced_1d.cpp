#include "anisorobin/reduced_1d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "anisorobin/bessel.hpp"
#include "anisorobin/errors.hpp"

namespace anisorobin {

namespace {

constexpr double kRootRelTol = 1e-13;
constexpr double kEigRelTol = 1e-12;

// Root of f with f(0+) < 0 and f -> +inf. Bracket [lo, hi] is grown
// geometrically by 2 from 1/r_outer; then bisection.
double secular_root(const std::function<double(double)>& f, double r_outer, double k_cap) {
  double lo = 1e-8;
  while (f(lo) >= 0.0) {
    lo /= 16.0;
    if (lo < 1e-150) throw NoRootError("secular equation: no negative value near k = 0");
  }
  double hi = std::max(1.0 / r_outer, 2.0 * lo);
  try {
    while (f(hi) < 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > k_cap) throw NoRootError("secular equation: no sign change up to k_max");
    }
  } catch (const RangeError&) {
    throw NoRootError("secular equation: no sign change before the Bessel range limit");
  }
  for (int it = 0; it < 400 && hi - lo > kRootRelTol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void check_alpha(double alpha, const char* who) {
  if (!(alpha <= 0.0)) throw DomainError(std::string(who) + ": alpha must be non-positive");
}

// Symmetric tridiagonal pencils K - lambda M from weighted P1 elements.
struct Pencil {
  std::vector<double> grid;
  std::vector<double> kd, ko, md, mo;  // diagonals and off-diagonals

  std::size_t count_below(double lambda) const {
    std::size_t cnt = 0;
    double d = kd[0] - lambda * md[0];
    if (d < 0.0) ++cnt;
    for (std::size_t i = 1; i < kd.size(); ++i) {
      const double e = ko[i - 1] - lambda * mo[i - 1];
      if (d == 0.0) d = std::numeric_limits<double>::min();
      d = (kd[i] - lambda * md[i]) - e * e / d;
      if (d < 0.0) ++cnt;
    }
    return cnt;
  }

  // Solves (K - sigma M) x = b with an LDL^T sweep; K - sigma M must be SPD.
  std::vector<double> solve_shifted(double sigma, const std::vector<double>& b) const {
    const std::size_t n = kd.size();
    std::vector<double> d(n), l(n), x(b);
    d[0] = kd[0] - sigma * md[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double e = ko[i - 1] - sigma * mo[i - 1];
      l[i] = e / d[i - 1];
      d[i] = (kd[i] - sigma * md[i]) - l[i] * e;
    }
    for (std::size_t i = 1; i < n; ++i) x[i] -= l[i] * x[i - 1];
    for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= l[i + 1] * x[i + 1];
    return x;
  }

  std::vector<double> mass_times(const std::vector<double>& x) const {
    const std::size_t n = x.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = md[i] * x[i];
      if (i > 0) y[i] += mo[i - 1] * x[i - 1];
      if (i + 1 < n) y[i] += mo[i] * x[i + 1];
    }
    return y;
  }
};

Pencil assemble(const AnnulusSpec& ann, double alpha, std::size_t n) {
  if (n < 16) throw DomainError("radial FEM: need at least 16 nodes");
  if (!(ann.r1 >= 0.0 && ann.r2 > ann.r1)) throw DomainError("radial FEM: need 0 <= r1 < r2");
  Pencil p;
  p.grid.resize(n);
  p.kd.assign(n, 0.0);
  p.md.assign(n, 0.0);
  p.ko.assign(n - 1, 0.0);
  p.mo.assign(n - 1, 0.0);
  const double h = (ann.r2 - ann.r1) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) p.grid[i] = ann.r1 + h * static_cast<double>(i);
  p.grid[n - 1] = ann.r2;
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double a = p.grid[e], b = p.grid[e + 1];
    const double he = b - a;
    const double stiff = 0.5 * (a + b) / he;
    p.kd[e] += stiff;
    p.kd[e + 1] += stiff;
    p.ko[e] -= stiff;
    // Exact integrals of r * phi_i * phi_j on the element.
    p.md[e] += he * (3.0 * a + b) / 12.0;
    p.md[e + 1] += he * (a + 3.0 * b) / 12.0;
    p.mo[e] += he * (a + b) / 12.0;
  }
  p.kd[n - 1] += alpha * ann.r2;
  return p;
}

Eigenpair1D solve_pencil(const Pencil& p, const AnnulusSpec& ann, double alpha) {
  const std::size_t n = p.grid.size();
  Eigenpair1D out;
  out.alpha = alpha;
  out.grid = p.grid;
  if (alpha == 0.0) {
    out.lambda = 0.0;
    out.phi.assign(n, std::sqrt(2.0 / (ann.r2 * ann.r2 - ann.r1 * ann.r1)));
    return out;
  }
  // Rayleigh quotient of the constant bounds lambda_1 from above.
  double hi = 2.0 * alpha * ann.r2 / (ann.r2 * ann.r2 - ann.r1 * ann.r1);
  double width = std::max(1.0, std::abs(hi));
  double lo = hi - width;
  while (p.count_below(lo) > 0) {
    width *= 2.0;
    lo = hi - width;
  }
  for (int it = 0; it < 300 && hi - lo > kEigRelTol * std::abs(0.5 * (lo + hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (p.count_below(mid) > 0)
      hi = mid;
    else
      lo = mid;
  }
  out.lambda = 0.5 * (lo + hi);

  const double sigma = lo - 1e-8 * std::max(1.0, std::abs(lo));
  std::vector<double> x(n, 1.0);
  for (int it = 0; it < 4; ++it) {
    x = p.solve_shifted(sigma, p.mass_times(x));
    double nrm2 = 0.0;
    const std::vector<double> mx = p.mass_times(x);
    for (std::size_t i = 0; i < n; ++i) nrm2 += x[i] * mx[i];
    const double s = (x[n - 1] < 0.0 ? -1.0 : 1.0) / std::sqrt(nrm2);
    for (double& v : x) v *= s;
  }
  out.phi = std::move(x);
  return out;
}

}  // namespace

double wulff_residual(double k, double r3, double alpha) {
  const double x = k * r3;
  return k * bessel::i1(x) / bessel::i0(x) + alpha;
}

double annulus_residual(double k, const AnnulusSpec& ann, double alpha) {
  const double x1 = k * ann.r1, x2 = k * ann.r2;
  const double i0b = bessel::i0(x2);
  const double outer = (k * bessel::i1(x2) + alpha * i0b) / i0b;
  const double ratio = bessel::i1(x1) / bessel::k1(x1);
  return outer - ratio * (k * bessel::k1(x2) - alpha * bessel::k0(x2)) / i0b;
}

double wulff_secular(double r3, double alpha) {
  check_alpha(alpha, "wulff_secular");
  if (!(r3 > 0.0)) throw DomainError("wulff_secular: radius must be positive");
  if (alpha == 0.0) return 0.0;
  const double k = secular_root([&](double kk) { return wulff_residual(kk, r3, alpha); }, r3, 1e4 / r3);
  return -k * k;
}

double annulus_secular(const AnnulusSpec& ann, double alpha) {
  check_alpha(alpha, "annulus_secular");
  if (!(ann.r1 > 0.0 && ann.r2 > ann.r1)) throw DomainError("annulus_secular: need 0 < r1 < r2");
  if (alpha == 0.0) return 0.0;
  const double k = secular_root([&](double kk) { return annulus_residual(kk, ann, alpha); }, ann.r2, 1e4 / ann.r2);
  return -k * k;
}

Eigenpair1D fd_annulus(const AnnulusSpec& ann, double alpha, std::size_t n_nodes) {
  check_alpha(alpha, "fd_annulus");
  return solve_pencil(assemble(ann, alpha, n_nodes), ann, alpha);
}

Eigenpair1D radial_fd(double r3, double alpha, std::size_t n_nodes) {
  if (!(r3 > 0.0)) throw DomainError("radial_fd: radius must be positive");
  return fd_annulus({0.0, r3}, alpha, n_nodes);
}

std::size_t sturm_count(const AnnulusSpec& ann, double alpha, std::size_t n_nodes, double lambda) {
  return assemble(ann, alpha, n_nodes).count_below(lambda);
}

AnnulusSpec gamma_annulus(double r3, double epsilon) {
  if (!(r3 > 0.0 && epsilon > 0.0)) throw DomainError("gamma_annulus: need r3 > 0 and epsilon > 0");
  const AnnulusSpec ann{std::sqrt(2.0 * epsilon * r3 + epsilon * epsilon), r3 + epsilon};
  const double area_gap = (ann.r2 * ann.r2 - ann.r1 * ann.r1) - r3 * r3;
  if (std::abs(area_gap) > 1e-12 * ann.r2 * ann.r2) throw Error("gamma_annulus: annulus area differs from W_{r3}");
  return ann;
}

std::vector<GammaRow> gamma_curves(double r3, double epsilon, std::span<const double> alpha_grid) {
  const AnnulusSpec ann = gamma_annulus(r3, epsilon);
  for (double a : alpha_grid)
    if (!(a < 0.0)) throw DomainError("gamma_curves: alpha grid must be strictly negative");
  std::vector<GammaRow> rows(alpha_grid.size());
  const auto n = static_cast<long long>(alpha_grid.size());
  // Each row is independent; exceptions are collected and rethrown serially.
  std::vector<std::exception_ptr> errors(alpha_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      const double a = alpha_grid[i];
      rows[i] = {a, annulus_secular(ann, a), wulff_secular(r3, a)};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

double wulff_alpha_of_k(double k, double r3) { return -k * bessel::i1(k * r3) / bessel::i0(k * r3); }

std::optional<GammaIntersection> intersection_alpha(double r3, double epsilon) {
  const AnnulusSpec ann = gamma_annulus(r3, epsilon);
  const double k_lo = 1e-6;
  const double k_hi = std::min(1e3 / r3, 500.0 / ann.r2);
  auto g = [&](double k) { return annulus_residual(k, ann, wulff_alpha_of_k(k, r3)); };
  const int n_grid = 4000;
  const double ratio = std::pow(k_hi / k_lo, 1.0 / (n_grid - 1));
  double k_prev = k_lo;
  double g_prev = g(k_prev);
  for (int i = 1; i < n_grid; ++i) {
    const double k = k_lo * std::pow(ratio, i);
    const double gk = g(k);
    if ((g_prev < 0.0) != (gk < 0.0)) {
      double lo = k_prev, hi = k;
      const bool lo_negative = g_prev < 0.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) < 0.0) == lo_negative)
          lo = mid;
        else
          hi = mid;
      }
      GammaIntersection out;
      out.k = 0.5 * (lo + hi);
      out.alpha = wulff_alpha_of_k(out.k, r3);
      out.wulff_residual = wulff_residual(out.k, r3, out.alpha);
      out.annulus_residual = annulus_residual(out.k, ann, out.alpha);
      return out;
    }
    k_prev = k;
    g_prev = gk;
  }
  return std::nullopt;
}

double mu_derivative(const AnnulusSpec& ann, double alpha, std::size_t n_nodes) {
  const Eigenpair1D e = fd_annulus(ann, alpha, n_nodes);
  const double end = e.phi.back();
  return ann.r2 * end * end;
}

}  // namespace anisorobin
