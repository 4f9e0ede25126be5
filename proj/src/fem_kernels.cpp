#include <omp.h>

#include <algorithm>

#include "anisorobin/fem_2d.hpp"

namespace anisorobin {

FemOperator make_operator(const TriMesh& mesh, const FinslerNorm& norm, double alpha) {
  FemOperator op;
  op.n_nodes = mesh.vertices.size();
  op.triangles = mesh.triangles;
  op.norm = norm;
  op.alpha = alpha;
  op.tri_area.resize(mesh.triangles.size());
  op.basis_grad.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2& p0 = mesh.vertices[tri[0]];
    const Vec2& p1 = mesh.vertices[tri[1]];
    const Vec2& p2 = mesh.vertices[tri[2]];
    const double a2 = cross(p1 - p0, p2 - p0);
    op.tri_area[t] = 0.5 * a2;
    // grad phi_k = perp(opposite edge, rotated outward) / (2|T|)
    op.basis_grad[t] = {Vec2(p1.y() - p2.y(), p2.x() - p1.x()) / a2, Vec2(p2.y() - p0.y(), p0.x() - p2.x()) / a2,
                        Vec2(p0.y() - p1.y(), p1.x() - p0.x()) / a2};
  }
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    op.boundary.push_back({e.a, e.b});
    op.boundary_weight.push_back(norm.eval(e.normal) * e.length);
  }
  return op;
}

namespace {

struct TriangleTerms {
  double stiffness;
  double mass;
};

// Adds the triangle's contributions to the numerator/denominator gradients
// when gn/gd are non-null.
inline TriangleTerms triangle_terms(const FemOperator& op, std::size_t t, std::span<const double> u, double* gn,
                                    double* gd) {
  const auto& tri = op.triangles[t];
  const auto& g = op.basis_grad[t];
  const double area = op.tri_area[t];
  const double u0 = u[tri[0]], u1 = u[tri[1]], u2 = u[tri[2]];
  const Vec2 grad_u = u0 * g[0] + u1 * g[1] + u2 * g[2];
  const double f = op.norm.eval(grad_u);
  const double s = u0 + u1 + u2;
  const TriangleTerms out{area * f * f, area / 12.0 * (s * s + u0 * u0 + u1 * u1 + u2 * u2)};
  if (gn != nullptr) {
    // d/du_k of |T| F^2(grad u) = 2 |T| F DF(grad u) . grad phi_k; zero at grad u = 0.
    const double len = grad_u.norm();
    if (len > 0.0) {
      // DF is 0-homogeneous; evaluate on the unit vector so tiny gradients stay defined.
      const Vec2 w = 2.0 * area * f * op.norm.grad(grad_u / len);
      for (int k = 0; k < 3; ++k) gn[tri[k]] += w.dot(g[k]);
    }
    gd[tri[0]] += area / 6.0 * (s + u0);
    gd[tri[1]] += area / 6.0 * (s + u1);
    gd[tri[2]] += area / 6.0 * (s + u2);
  }
  return out;
}

double boundary_terms(const FemOperator& op, std::span<const double> u, double* gb) {
  double b = 0.0;
  for (std::size_t e = 0; e < op.boundary.size(); ++e) {
    const int i = op.boundary[e][0], j = op.boundary[e][1];
    const double w = op.boundary_weight[e];
    b += w * (u[i] * u[i] + u[i] * u[j] + u[j] * u[j]) / 3.0;
    if (gb != nullptr) {
      gb[i] += w * (2.0 * u[i] + u[j]) / 3.0;
      gb[j] += w * (2.0 * u[j] + u[i]) / 3.0;
    }
  }
  return b;
}

void combine_gradient(const QuotientValue& q, std::span<const double> gn, std::span<const double> gb,
                      std::span<const double> gd, std::span<double> grad) {
  const double j = q.quotient();
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = (gn[i] + q.alpha * gb[i] - j * gd[i]) / q.mass;
}

}  // namespace

QuotientValue quotient_serial(const FemOperator& op, std::span<const double> u, std::span<double> grad) {
  const bool want = !grad.empty();
  std::vector<double> gn(want ? op.n_nodes : 0), gd(want ? op.n_nodes : 0), gb(want ? op.n_nodes : 0);
  QuotientValue q;
  q.alpha = op.alpha;
  for (std::size_t t = 0; t < op.triangles.size(); ++t) {
    const TriangleTerms tt = triangle_terms(op, t, u, want ? gn.data() : nullptr, want ? gd.data() : nullptr);
    q.stiffness += tt.stiffness;
    q.mass += tt.mass;
  }
  q.boundary = boundary_terms(op, u, want ? gb.data() : nullptr);
  if (want) combine_gradient(q, gn, gb, gd, grad);
  return q;
}

QuotientValue quotient_parallel(const FemOperator& op, std::span<const double> u, std::span<double> grad) {
  const bool want = !grad.empty();
  const std::size_t n = op.n_nodes;
  const int n_threads = omp_get_max_threads();
  // Per-thread accumulation buffers: [gn | gd] per thread.
  std::vector<double> local(want ? 2 * n * static_cast<std::size_t>(n_threads) : 0, 0.0);
  double stiffness = 0.0, mass = 0.0;
  const auto n_tri = static_cast<long long>(op.triangles.size());
#pragma omp parallel num_threads(n_threads) reduction(+ : stiffness, mass)
  {
    double* gn = want ? local.data() + 2 * n * static_cast<std::size_t>(omp_get_thread_num()) : nullptr;
    double* gd = want ? gn + n : nullptr;
#pragma omp for schedule(static)
    for (long long t = 0; t < n_tri; ++t) {
      const TriangleTerms tt = triangle_terms(op, static_cast<std::size_t>(t), u, gn, gd);
      stiffness += tt.stiffness;
      mass += tt.mass;
    }
  }
  QuotientValue q;
  q.alpha = op.alpha;
  q.stiffness = stiffness;
  q.mass = mass;
  std::vector<double> gb(want ? n : 0);
  q.boundary = boundary_terms(op, u, want ? gb.data() : nullptr);
  if (want) {
    std::vector<double> gn(n, 0.0), gd(n, 0.0);
    const auto nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < nn; ++i) {
      for (int th = 0; th < n_threads; ++th) {
        gn[i] += local[2 * n * th + i];
        gd[i] += local[2 * n * th + n + i];
      }
    }
    combine_gradient(q, gn, gb, gd, grad);
  }
  return q;
}

}  // namespace anisorobin
