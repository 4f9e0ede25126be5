#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "anisorobin/types.hpp"

namespace anisorobin {

enum class NormFamily { euclidean, quadratic, lp };

/// Boundary samples of the Wulff shape {F° < R}.
struct WulffApprox {
  double radius = 0.0;
  std::vector<Vec2> vertices;  // CCW
  std::size_t n_vertices() const { return vertices.size(); }
};

/// Extremes of F on the Euclidean unit circle: a|x| <= F(x) <= b|x|.
struct NormBounds {
  double a = 0.0;
  double b = 0.0;
};

/// A smooth, strictly convex, even, 1-homogeneous norm on the plane.
///
/// Three families are supported:
///   euclidean   F(x) = |x|
///   quadratic   F(x) = sqrt(x^T M x), M symmetric positive definite
///   lp          F(x) = (|x1|^p + |x2|^p)^(1/p), 1 < p < inf
///
/// Each has a closed-form polar (the dual norm), so the polar and its
/// gradient are exact. The Wulff shape of radius R is {F° < R}; its boundary
/// point with outward normal u is R * grad F(u).
class FinslerNorm {
 public:
  FinslerNorm() = default;  // euclidean

  static FinslerNorm euclidean();
  /// Throws InvalidNormError unless m is symmetric with positive eigenvalues.
  static FinslerNorm quadratic(const Mat2& m);
  /// Throws InvalidNormError unless 1 < p < inf.
  static FinslerNorm lp(double p);

  NormFamily family() const { return family_; }
  const Mat2& matrix() const { return m_; }
  double exponent() const { return p_; }
  /// Dual exponent q with 1/p + 1/q = 1 (lp only).
  double dual_exponent() const { return q_; }

  double eval(const Vec2& xi) const;
  /// Throws DomainError for |xi| < 1e-14.
  Vec2 grad(const Vec2& xi) const;
  double polar(const Vec2& v) const;
  /// Throws DomainError for |v| < 1e-14.
  Vec2 polar_grad(const Vec2& v) const;

  /// kappa = area of the unit Wulff shape {F° < 1}.
  double wulff_area() const;
  /// n points R * grad F(u_j) for equally spaced unit directions u_j.
  WulffApprox wulff_boundary(double radius, std::size_t n) const;
  NormBounds bounds() const;

  friend bool operator==(const FinslerNorm& a, const FinslerNorm& b);

 private:
  NormFamily family_ = NormFamily::euclidean;
  Mat2 m_ = Mat2::Identity();
  Mat2 m_inv_ = Mat2::Identity();
  double p_ = 2.0;
  double q_ = 2.0;
};

/// sup over unit directions of <xi, v> / F(xi), by 4096 angular samples and
/// golden-section refinement of the best bracket. Independent of the closed
/// form in FinslerNorm::polar.
double numeric_polar(const FinslerNorm& norm, const Vec2& v);

/// Same construction applied to the closed-form polar: recovers F.
double numeric_bipolar(const FinslerNorm& norm, const Vec2& xi);

/// Shoelace area of a WulffApprox with n >= 4096 vertices.
double numeric_wulff_area(const FinslerNorm& norm, std::size_t n = 8192);

/// Worst deviations over random inputs for the identities every supported
/// norm satisfies. Relative unless noted.
struct IdentityReport {
  std::size_t samples = 0;
  double homogeneity = 0.0;     // |F(t x) - |t| F(x)| / (1 + F(t x))
  double euler = 0.0;           // <grad F(x), x> vs F(x)
  double euler_polar = 0.0;     // <grad F°(v), v> vs F°(v)
  double duality = 0.0;         // max of |F°(grad F) - 1|, |F(grad F°) - 1| (absolute)
  double inversion = 0.0;       // F°(x) grad F(grad F°(x)) vs x
  double cauchy_schwarz = 0.0;  // max of |<x, v>| / (F(x) F°(v)) - 1
  double bipolar = 0.0;         // numeric polar of F° vs F (absolute, unit-scale inputs)
  double gradient_fd = 0.0;     // grad F and grad F° vs central differences, step 1e-6 (absolute)

  /// Tolerances: 1e-12, 1e-8, 1e-8, 1e-8, 1e-7, 1e-12, 1e-8, 1e-5.
  bool passed() const;
};

IdentityReport identity_suite(const FinslerNorm& norm, std::size_t samples, std::uint64_t seed);

void to_json(nlohmann::json& j, const IdentityReport& r);

void to_json(nlohmann::json& j, const FinslerNorm& norm);
void from_json(const nlohmann::json& j, FinslerNorm& norm);

}  // namespace anisorobin
