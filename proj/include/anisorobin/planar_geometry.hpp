#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "json.hpp"

#include "anisorobin/finsler_norm.hpp"
#include "anisorobin/types.hpp"

namespace anisorobin {

/// Closed half-plane {x : <x, normal> <= offset}, normal of unit length.
struct HalfPlane {
  Vec2 normal;
  double offset = 0.0;
};

/// Convex polygon with CCW vertices and cached per-edge data. Edge i runs
/// from vertex i to vertex i+1 and lies on {<x, normal(i)> = offset(i)}.
class ConvexPolygon {
 public:
  /// Validates: >= 3 vertices, no repeated points within 1e-12, strictly
  /// positive turn at every vertex. Throws InvalidPolygonError.
  explicit ConvexPolygon(std::vector<Vec2> vertices);

  /// Skips validation; used for inner parallel sets and Minkowski sums that
  /// are convex by construction but may be nearly degenerate.
  static ConvexPolygon from_trusted(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Vec2& normal(std::size_t i) const { return normals_[i]; }
  double edge_length(std::size_t i) const { return lengths_[i]; }
  double offset(std::size_t i) const { return offsets_[i]; }
  std::vector<HalfPlane> half_planes() const;

  /// Area centroid.
  Vec2 centroid() const;
  double perimeter() const;

 private:
  ConvexPolygon() = default;
  void compute_edges();

  std::vector<Vec2> vertices_;
  std::vector<Vec2> normals_;
  std::vector<double> lengths_;
  std::vector<double> offsets_;
};

/// Shoelace area.
double area(const ConvexPolygon& poly);
/// Signed shoelace area of an arbitrary closed chain.
double signed_area(std::span<const Vec2> chain);

/// P_F = sum_i F(nu_i) |e_i|.
double anis_perimeter(const ConvexPolygon& poly, const FinslerNorm& norm);

/// d_F(x, boundary) = min_i (c_i - <x, nu_i>) / F(nu_i). Throws
/// OutsideDomainError when x lies outside by more than 1e-12.
double anis_distance(const Vec2& x, const ConvexPolygon& poly, const FinslerNorm& norm);

/// Intersection of half-planes, sorted by angle and reduced with a deque.
/// Returns the CCW vertex chain, or nullopt when the intersection is empty
/// or has non-positive area.
std::optional<std::vector<Vec2>> intersect_half_planes(std::span<const HalfPlane> planes);

/// {x in poly : d_F(x, boundary) > t} as the intersection of the inward
/// offsets {<x, nu_i> <= c_i - t F(nu_i)}.
std::optional<ConvexPolygon> inner_parallel(const ConvexPolygon& poly, const FinslerNorm& norm, double t);

struct Inradius {
  double r_f = 0.0;
  Vec2 center = Vec2::Zero();  // a point where d_F attains r_f (within tolerance)
};

/// Anisotropic inradius by bisection on non-emptiness of inner_parallel,
/// absolute tolerance 1e-10.
Inradius inradius(const ConvexPolygon& poly, const FinslerNorm& norm);

/// Parallel-coordinate profile sampled on a uniform t grid over [0, r_F].
struct ParallelProfile {
  std::vector<double> t;
  std::vector<double> A;  // area of {0 < d_F < t}
  std::vector<double> L;  // P_F of the inner parallel set
  std::vector<double> R;  // sqrt(L0^2 - 4 kappa A) / (2 kappa)
  double L0 = 0.0;
  double A0 = 0.0;
  double r_f = 0.0;
  double kappa = 0.0;
};

ParallelProfile profile(const ConvexPolygon& poly, const FinslerNorm& norm, std::size_t n_samples);

/// R(t) for each sample. Radicands down to -1e-9 (relative to L0^2) are
/// clamped to zero; below that IsoperimetricViolationError is thrown.
std::vector<double> r_transform(const ParallelProfile& prof, double kappa);

struct ParallelRadii {
  double r1 = 0.0;  // inner radius of the equal-area F-annulus
  double r2 = 0.0;  // L0 / (2 kappa): Wulff shape with the same P_F
  double r3 = 0.0;  // sqrt(A0 / kappa): Wulff shape with the same area
};

ParallelRadii parallel_radii(const ConvexPolygon& poly, const FinslerNorm& norm);

/// poly + delta * W with the Wulff arcs at each vertex approximated by the
/// directions of an n_wulff-point wulff_boundary.
ConvexPolygon minkowski_sum_wulff(const ConvexPolygon& poly, const FinslerNorm& norm, double delta,
                                  std::size_t n_wulff);

struct SteinerCheck {
  double v_measured = 0.0;
  double v_formula = 0.0;
  double p_measured = 0.0;
  double p_formula = 0.0;
};

SteinerCheck steiner_check(const ConvexPolygon& poly, const FinslerNorm& norm, double delta,
                           std::size_t n_wulff = 4096);

/// P_F^2 - 4 kappa V.
double isoperimetric_deficit(const ConvexPolygon& poly, const FinslerNorm& norm);

/// Max |F(grad d_F) - 1| over n_points random interior points, skipping
/// points whose minimizing edge is ambiguous within 1e-6. Gradients by
/// central differences.
double eikonal_check(const ConvexPolygon& poly, const FinslerNorm& norm, std::size_t n_points,
                     std::uint64_t seed = 1);

// Constructors for test and benchmark domains.
ConvexPolygon unit_square();
ConvexPolygon rectangle(double width, double height);
ConvexPolygon regular_polygon(std::size_t n, double circumradius);
/// Polygonal Wulff shape: vertices of wulff_boundary(radius, n).
ConvexPolygon wulff_polygon(const FinslerNorm& norm, double radius, std::size_t n);
/// Convex hull of n_points uniform points in the unit disk, rejecting
/// hulls with fewer than 3 vertices.
ConvexPolygon random_convex_polygon(std::mt19937_64& rng, std::size_t n_points = 12);

void to_json(nlohmann::json& j, const ConvexPolygon& poly);
ConvexPolygon polygon_from_json(const nlohmann::json& j);

}  // namespace anisorobin
