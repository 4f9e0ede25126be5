#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "json.hpp"

#include "anisorobin/errors.hpp"
#include "anisorobin/finsler_norm.hpp"
#include "anisorobin/planar_geometry.hpp"
#include "anisorobin/types.hpp"

namespace anisorobin {

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  Vec2 normal = Vec2::Zero();  // outward Euclidean unit normal
  double length = 0.0;
};

/// Triangle mesh with CCW triangles and its boundary loop(s).
struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;  // longest edge

  double area() const;
  /// sum_e F(nu_e) |e|
  double boundary_perimeter(const FinslerNorm& norm) const;
};

/// Builds boundary edges and h from vertices and triangles. Throws
/// InvalidPolygonError for a triangle with non-positive signed area or an
/// edge shared by more than two triangles.
TriMesh make_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

/// One round of 4-way subdivision. `project` (optional) moves new boundary
/// midpoints, e.g. onto a curved boundary.
TriMesh refine(const TriMesh& mesh, const std::function<Vec2(const Vec2&)>& project = {});

/// Fan from the area centroid, then `refinements` rounds of subdivision.
/// Boundary vertices stay on the polygon edges.
TriMesh mesh_polygon(const ConvexPolygon& poly, int refinements);

/// Fan from the origin over wulff_boundary(R, n_boundary); refinement moves
/// new boundary vertices radially onto {F° = R}. The final boundary has
/// n_boundary * 2^refinements vertices.
TriMesh mesh_wulff(const FinslerNorm& norm, double radius, std::size_t n_boundary, int refinements);

nlohmann::json mesh_to_json(const TriMesh& mesh);
TriMesh mesh_from_json(const nlohmann::json& j);

// --- discrete Rayleigh quotient ---------------------------------------------

/// Geometry and weights the quotient kernels need, precomputed once per
/// (mesh, norm, alpha).
struct FemOperator {
  std::size_t n_nodes = 0;
  std::vector<std::array<int, 3>> triangles;
  std::vector<double> tri_area;
  std::vector<std::array<Vec2, 3>> basis_grad;  // gradient of each hat function on the triangle
  std::vector<std::array<int, 2>> boundary;
  std::vector<double> boundary_weight;  // F(nu_e) |e|
  FinslerNorm norm;
  double alpha = 0.0;
};

FemOperator make_operator(const TriMesh& mesh, const FinslerNorm& norm, double alpha);

/// Parts of J(u) = (stiffness + alpha * boundary) / mass with
///   stiffness = sum_T |T| F^2(grad u_T)
///   boundary  = sum_e F(nu_e) |e| (u_i^2 + u_i u_j + u_j^2) / 3
///   mass      = int u^2 (exact P1 quadrature)
struct QuotientValue {
  double stiffness = 0.0;
  double boundary = 0.0;
  double mass = 0.0;
  double alpha = 0.0;
  double numerator() const { return stiffness + alpha * boundary; }
  double quotient() const { return numerator() / mass; }
};

/// Reference kernel: one pass over triangles and edges. If grad is
/// non-empty it receives dJ/du.
QuotientValue quotient_serial(const FemOperator& op, std::span<const double> u, std::span<double> grad);

/// OpenMP kernel: triangles split across threads with per-thread gradient
/// buffers merged at the end. Matches quotient_serial up to summation order.
QuotientValue quotient_parallel(const FemOperator& op, std::span<const double> u, std::span<double> grad);

// --- solvers -----------------------------------------------------------------

struct FemSolution {
  std::vector<double> u;  // unit discrete L2 norm, positive sum
  double lambda = 0.0;
  double alpha = 0.0;
  int iterations = 0;
  double residual = 0.0;  // last relative quotient change
};

/// Thrown by solve_rayleigh when max_iters is reached with residual > 1e-6.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, FemSolution last) : Error(what), last_(std::move(last)) {}
  const FemSolution& last_iterate() const { return last_; }

 private:
  FemSolution last_;
};

struct RayleighOptions {
  int max_iters = 20000;
  double stagnation_tol = 1e-10;  // relative quotient decrease
  int stagnation_count = 5;       // consecutive iterations below stagnation_tol
  bool parallel = true;           // OpenMP kernel vs serial reference
};

/// Minimizes the discrete quotient by preconditioned gradient descent from
/// the constant function, with Armijo backtracking (halving, sufficient
/// decrease 1e-4). The quotient sequence is non-increasing.
FemSolution solve_rayleigh(const TriMesh& mesh, const FinslerNorm& norm, double alpha,
                           const RayleighOptions& opts = {});

/// Quadratic norms only: the problem is linear, (K_M + alpha B) u = lambda M u.
/// Smallest eigenpair by shifted inverse iteration; the shift is certified
/// below lambda_1 by the inertia of an LDL^T factorization.
FemSolution solve_linear_quadratic(const TriMesh& mesh, const Mat2& m, double alpha);

/// sum_e F(nu_e) int_e u^2 for an L2-normalized u: d lambda / d alpha.
double eigen_derivative(const FemSolution& sol, const TriMesh& mesh, const FinslerNorm& norm);

/// Piecewise-linear function on [knots.front(), knots.back()].
struct PiecewiseLinear {
  std::vector<double> knots;
  std::vector<double> values;
  double operator()(double s) const;
};

struct PushforwardResult {
  double lhs = 0.0;  // discrete J of u = phi(A_F(rho_F(x))) on the mesh
  double rhs = 0.0;  // one-dimensional expression through the profile
};

/// Compares the 2D quotient of the parallel-coordinate test function with
/// its reduced 1D form. phi is defined on [0, A0].
PushforwardResult pushforward_quotient(const ConvexPolygon& poly, const FinslerNorm& norm, const PiecewiseLinear& phi,
                                       double alpha, int refinements = 5);

/// Nodal values of phi(A_F(rho_F(x))).
std::vector<double> pushforward_nodal(const TriMesh& mesh, const ConvexPolygon& poly, const FinslerNorm& norm,
                                      const PiecewiseLinear& phi);

}  // namespace anisorobin
