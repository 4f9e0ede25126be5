#pragma once

namespace anisorobin::bessel {

/// Modified Bessel functions of integer order 0 and 1.
///
/// I0, I1 need x >= 0; K0, K1 need x > 0 (DomainError otherwise). All four
/// raise RangeError past x = 600, where the unscaled values approach the
/// double overflow threshold.
double i0(double x);
double i1(double x);
double k0(double x);
double k1(double x);

/// Below this the ascending series is used for I; above it the Hankel
/// asymptotic expansion.
inline constexpr double kSeriesCrossover = 25.0;
inline constexpr double kMaxArgument = 600.0;

}  // namespace anisorobin::bessel
