#pragma once

#include <cmath>

#include <Eigen/Core>
#include <Eigen/LU>

namespace anisorobin {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kPi = 3.14159265358979323846;

/// z-component of the planar cross product.
inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Rotation by +90 degrees.
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

inline Vec2 unit_direction(double theta) { return {std::cos(theta), std::sin(theta)}; }

}  // namespace anisorobin
