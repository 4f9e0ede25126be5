#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>

#include "anisorobin/fem_2d.hpp"

namespace anisorobin {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

struct LinearParts {
  SpMat stiffness;  // sum_T |T| grad phi_i^T G grad phi_j
  SpMat boundary;   // sum_e F(nu_e) int_e phi_i phi_j
  SpMat mass;
};

LinearParts assemble_linear(const FemOperator& op, const Mat2& g) {
  const auto n = static_cast<Eigen::Index>(op.n_nodes);
  std::vector<Eigen::Triplet<double>> k, b, m;
  k.reserve(9 * op.triangles.size());
  m.reserve(9 * op.triangles.size());
  for (std::size_t t = 0; t < op.triangles.size(); ++t) {
    const auto& tri = op.triangles[t];
    const auto& bg = op.basis_grad[t];
    const double area = op.tri_area[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        k.emplace_back(tri[i], tri[j], area * bg[i].dot(g * bg[j]));
        m.emplace_back(tri[i], tri[j], area / 12.0 * (i == j ? 2.0 : 1.0));
      }
  }
  for (std::size_t e = 0; e < op.boundary.size(); ++e) {
    const int i = op.boundary[e][0], j = op.boundary[e][1];
    const double w = op.boundary_weight[e] / 6.0;
    b.emplace_back(i, i, 2.0 * w);
    b.emplace_back(j, j, 2.0 * w);
    b.emplace_back(i, j, w);
    b.emplace_back(j, i, w);
  }
  LinearParts p{SpMat(n, n), SpMat(n, n), SpMat(n, n)};
  p.stiffness.setFromTriplets(k.begin(), k.end());
  p.boundary.setFromTriplets(b.begin(), b.end());
  p.mass.setFromTriplets(m.begin(), m.end());
  return p;
}

bool has_nonpositive_pivot(const Eigen::SimplicialLDLT<SpMat>& ldlt) {
  return (ldlt.vectorD().array() <= 0.0).any();
}

// Factors A - sigma M, lowering sigma geometrically until the factorization
// has only positive pivots, i.e. sigma lies below every eigenvalue.
double certify_shift(const SpMat& a, const SpMat& m, double sigma, Eigen::SimplicialLDLT<SpMat>& ldlt) {
  for (int attempt = 0; attempt < 80; ++attempt) {
    ldlt.compute(a - sigma * m);
    if (ldlt.info() != Eigen::Success) throw SolverError("LDL^T factorization failed");
    if (!has_nonpositive_pivot(ldlt)) return sigma;
    sigma = sigma < 0.0 ? 2.0 * sigma : sigma - 1.0;
  }
  throw SolverError("could not find a shift below the first eigenvalue");
}

double mass_norm(const SpMat& m, const Vec& x) { return std::sqrt(x.dot(m * x)); }

void orient_positive(std::vector<double>& u) {
  double s = 0.0;
  for (double v : u) s += v;
  if (s < 0.0)
    for (double& v : u) v = -v;
}

}  // namespace

FemSolution solve_linear_quadratic(const TriMesh& mesh, const Mat2& m, double alpha) {
  if (!(alpha <= 0.0)) throw DomainError("solve_linear_quadratic: alpha must be non-positive");
  const FinslerNorm norm = FinslerNorm::quadratic(m);
  const FemOperator op = make_operator(mesh, norm, alpha);
  const LinearParts parts = assemble_linear(op, norm.matrix());
  const SpMat a = parts.stiffness + alpha * parts.boundary;
  const SpMat& mass = parts.mass;

  Eigen::SimplicialLDLT<SpMat> ldlt;
  double sigma = 2.0 * alpha * mesh.boundary_perimeter(norm) / mesh.area() - 1.0;
  sigma = certify_shift(a, mass, sigma, ldlt);

  Vec x = Vec::Ones(static_cast<Eigen::Index>(op.n_nodes));
  x /= mass_norm(mass, x);
  double lambda = x.dot(a * x);
  bool shift_refined = false;
  FemSolution sol;
  sol.alpha = alpha;
  for (int it = 1; it <= 5000; ++it) {
    Vec y = ldlt.solve(mass * x);
    if (ldlt.info() != Eigen::Success) throw SolverError("inverse iteration solve failed");
    y /= mass_norm(mass, y);
    if (y.sum() < 0.0) y = -y;
    const double lambda_new = y.dot(a * y);
    const double change = std::abs(lambda_new - lambda);
    const double step = mass_norm(mass, y - x);
    x = std::move(y);
    lambda = lambda_new;
    sol.iterations = it;
    sol.residual = change / std::max(std::abs(lambda), 1.0);
    if (!shift_refined && sol.residual < 1e-6) {
      // Move the shift just below the current estimate; keep the old one if
      // the inertia shows an eigenvalue below the new shift.
      Eigen::SimplicialLDLT<SpMat> closer;
      closer.compute(a - (lambda - 1e-2 * std::max(1.0, std::abs(lambda))) * mass);
      if (closer.info() == Eigen::Success && !has_nonpositive_pivot(closer)) {
        ldlt.compute(a - (lambda - 1e-2 * std::max(1.0, std::abs(lambda))) * mass);
      }
      shift_refined = true;
      continue;
    }
    if (change <= 1e-14 * std::max(std::abs(lambda), 1.0) && step <= 1e-10) break;
  }
  sol.lambda = lambda;
  sol.u.assign(x.data(), x.data() + x.size());
  orient_positive(sol.u);
  return sol;
}

FemSolution solve_rayleigh(const TriMesh& mesh, const FinslerNorm& norm, double alpha, const RayleighOptions& opts) {
  if (!(alpha <= 0.0)) throw DomainError("solve_rayleigh: alpha must be non-positive");
  const FemOperator op = make_operator(mesh, norm, alpha);
  const std::size_t n = op.n_nodes;
  auto eval = [&](std::span<const double> u, std::span<double> g) {
    return opts.parallel ? quotient_parallel(op, u, g) : quotient_serial(op, u, g);
  };
  auto normalize = [](std::vector<double>& u, std::vector<double>& g, double mass) {
    const double s = 1.0 / std::sqrt(mass);
    for (double& v : u) v *= s;
    for (double& v : g) v /= s;  // grad J is homogeneous of degree -1
  };

  FemSolution sol;
  sol.alpha = alpha;
  std::vector<double> u(n, 1.0), g(n);
  QuotientValue q = eval(u, g);
  normalize(u, g, q.mass);
  double j = q.quotient();
  auto finish = [&]() {
    sol.lambda = j;
    sol.u = u;
    orient_positive(sol.u);
    return sol;
  };
  double gmax = 0.0;
  for (double v : g) gmax = std::max(gmax, std::abs(v));
  if (gmax <= 1e-13 * (1.0 + std::abs(j))) return finish();

  // Fixed SPD preconditioner A_ref - sigma M, with A_ref the linear operator
  // of a quadratic norm spectrally close to F.
  Mat2 gmat = Mat2::Identity();
  if (norm.family() == NormFamily::quadratic) {
    gmat = norm.matrix();
  } else if (norm.family() == NormFamily::lp) {
    const NormBounds nb = norm.bounds();
    gmat *= 0.5 * (nb.a * nb.a + nb.b * nb.b);
  }
  const LinearParts parts = assemble_linear(op, gmat);
  const SpMat a_ref = parts.stiffness + alpha * parts.boundary;
  Eigen::SimplicialLDLT<SpMat> precond;
  certify_shift(a_ref, parts.mass, 2.0 * alpha * mesh.boundary_perimeter(norm) / mesh.area() - 1.0, precond);

  std::vector<double> u_try(n), g_try(n), u_alt(n), g_alt(n), d(n);
  double tau = 0.5;
  int small_steps = 0;
  bool converged = false;
  for (int it = 1; it <= opts.max_iters; ++it) {
    sol.iterations = it;
    const Vec dv = -precond.solve(Eigen::Map<const Vec>(g.data(), static_cast<Eigen::Index>(n)));
    std::copy(dv.data(), dv.data() + n, d.begin());
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) slope += g[i] * d[i];
    if (!(slope < 0.0)) {
      converged = true;
      sol.residual = 0.0;
      break;
    }
    bool accepted = false;
    QuotientValue q_try;
    for (int bt = 0; bt < 80; ++bt) {
      for (std::size_t i = 0; i < n; ++i) u_try[i] = u[i] + tau * d[i];
      q_try = eval(u_try, g_try);
      if (q_try.quotient() <= j + 1e-4 * tau * slope) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) {
      // No representable decrease left along the preconditioned gradient.
      converged = true;
      sol.residual = 0.0;
      break;
    }
    // One parabolic correction through J(0), J'(0) and J(tau); kept only if
    // it lowers the quotient further.
    const double curv = q_try.quotient() - j - slope * tau;
    if (curv > 0.0) {
      const double tau_fit = std::clamp(-slope * tau * tau / (2.0 * curv), 0.25 * tau, 4.0 * tau);
      for (std::size_t i = 0; i < n; ++i) u_alt[i] = u[i] + tau_fit * d[i];
      const QuotientValue q_alt = eval(u_alt, g_alt);
      if (q_alt.quotient() < q_try.quotient()) {
        std::swap(u_try, u_alt);
        std::swap(g_try, g_alt);
        q_try = q_alt;
        tau = tau_fit;
      }
    }
    normalize(u_try, g_try, q_try.mass);
    const double j_new = q_try.quotient();
    if (j_new > j) throw SolverError("solve_rayleigh: quotient increased");
    sol.residual = (j - j_new) / std::max(std::abs(j), 1e-300);
    std::swap(u, u_try);
    std::swap(g, g_try);
    j = j_new;
    tau = std::min(tau, 1e3);
    small_steps = sol.residual < opts.stagnation_tol ? small_steps + 1 : 0;
    if (small_steps >= opts.stagnation_count) {
      converged = true;
      break;
    }
  }
  finish();
  if (!converged && sol.residual > 1e-6)
    throw NonConvergenceError("solve_rayleigh: no convergence within max_iters", sol);
  return sol;
}

double eigen_derivative(const FemSolution& sol, const TriMesh& mesh, const FinslerNorm& norm) {
  const FemOperator op = make_operator(mesh, norm, sol.alpha);
  const QuotientValue q = quotient_serial(op, sol.u, {});
  return q.boundary / q.mass;
}

double PiecewiseLinear::operator()(double s) const {
  if (knots.empty()) return 0.0;
  if (s <= knots.front()) return values.front();
  if (s >= knots.back()) return values.back();
  const auto it = std::upper_bound(knots.begin(), knots.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - knots.begin());
  const double w = (s - knots[i - 1]) / (knots[i] - knots[i - 1]);
  return (1.0 - w) * values[i - 1] + w * values[i];
}

namespace {

// A_F(t) = area of {0 < d_F < t}.
double area_profile(const ConvexPolygon& poly, const FinslerNorm& norm, double a0, double t) {
  if (t <= 0.0) return 0.0;
  auto inner = inner_parallel(poly, norm, t);
  return inner ? a0 - area(*inner) : a0;
}

double perimeter_profile(const ConvexPolygon& poly, const FinslerNorm& norm, double t) {
  auto inner = inner_parallel(poly, norm, t);
  return inner ? anis_perimeter(*inner, norm) : 0.0;
}

}  // namespace

std::vector<double> pushforward_nodal(const TriMesh& mesh, const ConvexPolygon& poly, const FinslerNorm& norm,
                                      const PiecewiseLinear& phi) {
  const double a0 = area(poly);
  std::vector<double> u(mesh.vertices.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double rho = anis_distance(mesh.vertices[i], poly, norm);
    u[i] = phi(area_profile(poly, norm, a0, rho));
  }
  return u;
}

PushforwardResult pushforward_quotient(const ConvexPolygon& poly, const FinslerNorm& norm, const PiecewiseLinear& phi,
                                       double alpha, int refinements) {
  if (phi.knots.size() < 2 || phi.knots.size() != phi.values.size())
    throw DomainError("pushforward_quotient: phi needs matching knots and values");
  const TriMesh mesh = mesh_polygon(poly, refinements);
  const FemOperator op = make_operator(mesh, norm, alpha);
  const std::vector<double> u = pushforward_nodal(mesh, poly, norm, phi);
  PushforwardResult out;
  out.lhs = quotient_serial(op, u, {}).quotient();

  const double a0 = area(poly);
  const double l0 = anis_perimeter(poly, norm);
  const double r_f = inradius(poly, norm).r_f;
  // t with A_F(t) = s, by bisection on the monotone profile.
  auto t_of_s = [&](double s) {
    if (s <= 0.0) return 0.0;
    if (s >= a0) return r_f;
    double lo = 0.0, hi = r_f;
    for (int it = 0; it < 100 && hi - lo > 1e-15 * r_f; ++it) {
      const double mid = 0.5 * (lo + hi);
      (area_profile(poly, norm, a0, mid) < s ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  // 5-point Gauss-Legendre on each panel.
  static constexpr double kNodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                       0.9061798459386640};
  static constexpr double kWeights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                         0.4786286704993665, 0.2369268850561891};
  double stiffness = 0.0, mass = 0.0;
  for (std::size_t p = 0; p + 1 < phi.knots.size(); ++p) {
    const double s0 = std::clamp(phi.knots[p], 0.0, a0), s1 = std::clamp(phi.knots[p + 1], 0.0, a0);
    if (s1 <= s0) continue;
    const double v0 = phi(s0), v1 = phi(s1);
    const double slope = (v1 - v0) / (s1 - s0);
    mass += (s1 - s0) / 3.0 * (v0 * v0 + v0 * v1 + v1 * v1);
    const double t0 = t_of_s(s0), t1 = t_of_s(s1);
    const int panels = 256;
    const double ht = (t1 - t0) / panels;
    double integral = 0.0;
    for (int k = 0; k < panels; ++k) {
      const double c = t0 + (k + 0.5) * ht;
      for (int q = 0; q < 5; ++q) {
        const double l = perimeter_profile(poly, norm, c + 0.5 * ht * kNodes[q]);
        integral += 0.5 * ht * kWeights[q] * l * l * l;
      }
    }
    stiffness += slope * slope * integral;
  }
  const double phi0 = phi(0.0);
  out.rhs = (stiffness + alpha * phi0 * phi0 * l0) / mass;
  return out;
}

}  // namespace anisorobin
