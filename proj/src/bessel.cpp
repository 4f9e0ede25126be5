#include "anisorobin/bessel.hpp"

#include <cmath>
#include <string>

#include "anisorobin/errors.hpp"
#include "anisorobin/types.hpp"

namespace anisorobin::bessel {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kEps = 1e-17;
// Small-argument series for K, Steed's continued fraction up to the
// asymptotic switch.
constexpr double kKSeriesLimit = 2.0;

void check_range(double x, bool strictly_positive, const char* name) {
  if (std::isnan(x) || (strictly_positive ? x <= 0.0 : x < 0.0))
    throw DomainError(std::string(name) + ": argument outside domain");
  if (x > kMaxArgument) throw RangeError(std::string(name) + ": argument beyond 600");
}

// sum_k (x^2/4)^k / (k! (k+nu)!) * (x/2)^nu, nu in {0, 1}. All terms positive.
double i_series(double x, int nu) {
  const double q = 0.25 * x * x;
  double term = (nu == 0) ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + nu));
    sum += term;
    if (term < kEps * sum && k >= 30) break;
  }
  return sum;
}

// e^x / sqrt(2 pi x) * sum_k (-1)^k a_k(nu) / x^k  (I)  or
// sqrt(pi / 2x) e^{-x} * sum_k a_k(nu) / x^k       (K)
double hankel_sum(double x, int nu, double sign) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= sign * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(term) > std::abs(prev)) break;  // divergent tail
    sum += term;
    prev = term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  return sum;
}

double i_asymptotic(double x, int nu) { return std::exp(x) / std::sqrt(2.0 * kPi * x) * hankel_sum(x, nu, -1.0); }

double k_asymptotic(double x, int nu) { return std::sqrt(kPi / (2.0 * x)) * std::exp(-x) * hankel_sum(x, nu, 1.0); }

// A&S 9.6.13 / 9.6.11 with psi(k+1) = -gamma + H_k.
double k0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double harmonic = 0.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    sum += term * harmonic;
    if (term * harmonic < kEps * std::abs(sum)) break;
  }
  return -(std::log(0.5 * x) + kEulerGamma) * i_series(x, 0) + sum;
}

double k1_series(double x) {
  const double q = 0.25 * x * x;
  // sum_k (psi(k+1) + psi(k+2)) q^k / (k! (k+1)!)
  double term = 1.0;
  double psi_k1 = -kEulerGamma;
  double psi_k2 = 1.0 - kEulerGamma;
  double sum = psi_k1 + psi_k2;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + 1));
    psi_k1 += 1.0 / k;
    psi_k2 += 1.0 / (k + 1);
    const double t = term * (psi_k1 + psi_k2);
    sum += t;
    if (std::abs(t) < kEps * std::abs(sum)) break;
  }
  return 1.0 / x + std::log(0.5 * x) * i_series(x, 1) - 0.25 * x * sum;
}

struct KPair {
  double k0;
  double k1;
};

// Steed's algorithm for the CF2 continued fraction (Temme 1975), order 0.
KPair k_continued_fraction(double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 10000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  const double k0 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
  return {k0, k0 * (x + 0.5 - h) / x};
}

}  // namespace

double i0(double x) {
  check_range(x, false, "bessel_i0");
  return x <= kSeriesCrossover ? i_series(x, 0) : i_asymptotic(x, 0);
}

double i1(double x) {
  check_range(x, false, "bessel_i1");
  return x <= kSeriesCrossover ? i_series(x, 1) : i_asymptotic(x, 1);
}

double k0(double x) {
  check_range(x, true, "bessel_k0");
  if (x <= kKSeriesLimit) return k0_series(x);
  if (x <= kSeriesCrossover) return k_continued_fraction(x).k0;
  return k_asymptotic(x, 0);
}

double k1(double x) {
  check_range(x, true, "bessel_k1");
  if (x <= kKSeriesLimit) return k1_series(x);
  if (x <= kSeriesCrossover) return k_continued_fraction(x).k1;
  return k_asymptotic(x, 1);
}

}  // namespace anisorobin::bessel
