#include "anisorobin/finsler_norm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "anisorobin/errors.hpp"

namespace anisorobin {

namespace {

constexpr double kZeroVector = 1e-14;
constexpr int kAngularSamples = 4096;
constexpr int kGoldenSteps = 60;

double lp_value(const Vec2& x, double p) {
  const double s = std::max(std::abs(x.x()), std::abs(x.y()));
  if (s == 0.0) return 0.0;
  const double a = std::abs(x.x()) / s;
  const double b = std::abs(x.y()) / s;
  return s * std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
}

Vec2 lp_gradient(const Vec2& x, double p) {
  const double f = lp_value(x, p);
  auto comp = [&](double c) { return std::copysign(std::pow(std::abs(c) / f, p - 1.0), c); };
  return {comp(x.x()), comp(x.y())};
}

void require_nonzero(const Vec2& v, const char* what) {
  if (v.norm() < kZeroVector) throw DomainError(std::string(what) + ": gradient undefined at the origin");
}

// Golden-section search for the maximum of f on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi, int steps) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < steps; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return std::max({fc, fd, f(0.5 * (a + b))});
}

// Max over the unit circle of f(theta): dense sampling then golden refinement.
double circle_max(const std::function<double(double)>& f) {
  const double dtheta = 2.0 * kPi / kAngularSamples;
  int best = 0;
  double best_val = f(0.0);
  for (int j = 1; j < kAngularSamples; ++j) {
    const double val = f(j * dtheta);
    if (val > best_val) {
      best_val = val;
      best = j;
    }
  }
  const double refined = golden_max(f, (best - 1) * dtheta, (best + 1) * dtheta, kGoldenSteps);
  return std::max(best_val, refined);
}

}  // namespace

FinslerNorm FinslerNorm::euclidean() { return FinslerNorm{}; }

FinslerNorm FinslerNorm::quadratic(const Mat2& m) {
  if (!m.allFinite()) throw InvalidNormError("quadratic norm: matrix has non-finite entries");
  if (std::abs(m(0, 1) - m(1, 0)) > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff()))
    throw InvalidNormError("quadratic norm: matrix is not symmetric");
  const double tr = m(0, 0) + m(1, 1);
  const double det = m.determinant();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  if (tr / 2.0 - disc <= 0.0) throw InvalidNormError("quadratic norm: matrix is not positive definite");
  FinslerNorm n;
  n.family_ = NormFamily::quadratic;
  n.m_ = m;
  n.m_(1, 0) = n.m_(0, 1);
  n.m_inv_ = n.m_.inverse();
  return n;
}

FinslerNorm FinslerNorm::lp(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidNormError("lp norm: exponent must satisfy 1 < p < inf");
  FinslerNorm n;
  n.family_ = NormFamily::lp;
  n.p_ = p;
  n.q_ = p / (p - 1.0);
  return n;
}

double FinslerNorm::eval(const Vec2& xi) const {
  switch (family_) {
    case NormFamily::euclidean:
      return xi.norm();
    case NormFamily::quadratic:
      return std::sqrt(std::max(0.0, xi.dot(m_ * xi)));
    case NormFamily::lp:
      return lp_value(xi, p_);
  }
  return 0.0;
}

Vec2 FinslerNorm::grad(const Vec2& xi) const {
  require_nonzero(xi, "grad");
  switch (family_) {
    case NormFamily::euclidean:
      return xi / xi.norm();
    case NormFamily::quadratic:
      return m_ * xi / eval(xi);
    case NormFamily::lp:
      return lp_gradient(xi, p_);
  }
  return Vec2::Zero();
}

double FinslerNorm::polar(const Vec2& v) const {
  switch (family_) {
    case NormFamily::euclidean:
      return v.norm();
    case NormFamily::quadratic:
      return std::sqrt(std::max(0.0, v.dot(m_inv_ * v)));
    case NormFamily::lp:
      return lp_value(v, q_);
  }
  return 0.0;
}

Vec2 FinslerNorm::polar_grad(const Vec2& v) const {
  require_nonzero(v, "polar_grad");
  switch (family_) {
    case NormFamily::euclidean:
      return v / v.norm();
    case NormFamily::quadratic:
      return m_inv_ * v / polar(v);
    case NormFamily::lp:
      return lp_gradient(v, q_);
  }
  return Vec2::Zero();
}

double FinslerNorm::wulff_area() const {
  switch (family_) {
    case NormFamily::euclidean:
      return kPi;
    case NormFamily::quadratic:
      // {v^T M^{-1} v < 1} is M^{1/2} applied to the unit disk.
      return kPi * std::sqrt(m_.determinant());
    case NormFamily::lp: {
      // Unit ball of the dual l^q norm.
      const double g = std::tgamma(1.0 + 1.0 / q_);
      return 4.0 * g * g / std::tgamma(1.0 + 2.0 / q_);
    }
  }
  return 0.0;
}

WulffApprox FinslerNorm::wulff_boundary(double radius, std::size_t n) const {
  if (!(radius > 0.0)) throw DomainError("wulff_boundary: radius must be positive");
  if (n < 4) throw DomainError("wulff_boundary: need at least 4 vertices");
  WulffApprox w;
  w.radius = radius;
  w.vertices.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    w.vertices.push_back(radius * grad(unit_direction(theta)));
  }
  return w;
}

NormBounds FinslerNorm::bounds() const {
  auto f = [this](double t) { return eval(unit_direction(t)); };
  return {-circle_max([&](double t) { return -f(t); }), circle_max(f)};
}

bool operator==(const FinslerNorm& a, const FinslerNorm& b) {
  if (a.family_ != b.family_) return false;
  switch (a.family_) {
    case NormFamily::euclidean:
      return true;
    case NormFamily::quadratic:
      return a.m_ == b.m_;
    case NormFamily::lp:
      return a.p_ == b.p_;
  }
  return false;
}

double numeric_polar(const FinslerNorm& norm, const Vec2& v) {
  if (v.norm() == 0.0) return 0.0;
  return circle_max([&](double t) {
    const Vec2 u = unit_direction(t);
    return u.dot(v) / norm.eval(u);
  });
}

double numeric_bipolar(const FinslerNorm& norm, const Vec2& xi) {
  if (xi.norm() == 0.0) return 0.0;
  return circle_max([&](double t) {
    const Vec2 u = unit_direction(t);
    return u.dot(xi) / norm.polar(u);
  });
}

double numeric_wulff_area(const FinslerNorm& norm, std::size_t n) {
  const WulffApprox w = norm.wulff_boundary(1.0, std::max<std::size_t>(n, 4096));
  double twice = 0.0;
  for (std::size_t i = 0; i < w.vertices.size(); ++i) {
    const Vec2& a = w.vertices[i];
    const Vec2& b = w.vertices[(i + 1) % w.vertices.size()];
    twice += cross(a, b);
  }
  return 0.5 * twice;
}

void to_json(nlohmann::json& j, const FinslerNorm& norm) {
  switch (norm.family()) {
    case NormFamily::euclidean:
      j = {{"family", "euclidean"}};
      break;
    case NormFamily::quadratic: {
      const Mat2& m = norm.matrix();
      j = {{"family", "quadratic"}, {"m", {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}}};
      break;
    }
    case NormFamily::lp:
      j = {{"family", "lp"}, {"p", norm.exponent()}};
      break;
  }
}

void from_json(const nlohmann::json& j, FinslerNorm& norm) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw InvalidNormError("norm: missing string field 'family'");
  const std::string family = j.at("family").get<std::string>();
  if (family == "euclidean") {
    norm = FinslerNorm::euclidean();
  } else if (family == "quadratic") {
    if (!j.contains("m")) throw InvalidNormError("norm: quadratic family requires field 'm'");
    const auto& m = j.at("m");
    if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() || m[0].size() != 2 ||
        m[1].size() != 2)
      throw InvalidNormError("norm: field 'm' must be a 2x2 array");
    Mat2 mat;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        if (!m[r][c].is_number()) throw InvalidNormError("norm: field 'm' must hold numbers");
        mat(r, c) = m[r][c].get<double>();
      }
    norm = FinslerNorm::quadratic(mat);
  } else if (family == "lp") {
    if (!j.contains("p") || !j.at("p").is_number()) throw InvalidNormError("norm: lp family requires numeric field 'p'");
    norm = FinslerNorm::lp(j.at("p").get<double>());
  } else {
    throw InvalidNormError("norm: unknown family '" + family + "'");
  }
}

bool IdentityReport::passed() const {
  return homogeneity <= 1e-12 && euler <= 1e-8 && euler_polar <= 1e-8 && duality <= 1e-8 && inversion <= 1e-7 &&
         cauchy_schwarz <= 1e-12 && bipolar <= 1e-8 && gradient_fd <= 1e-5;
}

IdentityReport identity_suite(const FinslerNorm& norm, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> log_scale(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> factor(-10.0, 10.0);
  auto random_vector = [&]() -> Vec2 { return std::exp(log_scale(rng)) * unit_direction(angle(rng)); };
  auto fd_grad = [](const auto& f, const Vec2& x) -> Vec2 {
    const double h = 1e-6;
    return Vec2((f(x + Vec2(h, 0.0)) - f(x - Vec2(h, 0.0))) / (2.0 * h),
                (f(x + Vec2(0.0, h)) - f(x - Vec2(0.0, h))) / (2.0 * h));
  };
  auto eval = [&](const Vec2& x) { return norm.eval(x); };
  auto polar = [&](const Vec2& x) { return norm.polar(x); };

  IdentityReport r;
  r.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec2 x = random_vector(), v = random_vector();
    const double t = factor(rng);
    const double fx = norm.eval(x), pv = norm.polar(v);
    r.homogeneity = std::max(r.homogeneity, std::abs(norm.eval(t * x) - std::abs(t) * fx) / (1.0 + norm.eval(t * x)));
    const Vec2 gx = norm.grad(x), gv = norm.polar_grad(v);
    r.euler = std::max(r.euler, std::abs(gx.dot(x) - fx) / fx);
    r.euler_polar = std::max(r.euler_polar, std::abs(gv.dot(v) - pv) / pv);
    r.duality = std::max({r.duality, std::abs(norm.polar(gx) - 1.0), std::abs(norm.eval(gv) - 1.0)});
    r.inversion = std::max(r.inversion, (norm.polar(x) * norm.grad(norm.polar_grad(x)) - x).norm() / x.norm());
    r.cauchy_schwarz = std::max(r.cauchy_schwarz, std::abs(x.dot(v)) / (fx * pv) - 1.0);
    const Vec2 unit = x / x.norm();
    r.bipolar = std::max(r.bipolar, std::abs(numeric_bipolar(norm, unit) - norm.eval(unit)));
    r.gradient_fd = std::max({r.gradient_fd, (fd_grad(eval, x) - gx).cwiseAbs().maxCoeff(),
                              (fd_grad(polar, v) - gv).cwiseAbs().maxCoeff()});
  }
  return r;
}

void to_json(nlohmann::json& j, const IdentityReport& r) {
  j = nlohmann::json{{"samples", r.samples},         {"homogeneity", r.homogeneity}, {"euler", r.euler},
                     {"euler_polar", r.euler_polar}, {"duality", r.duality},         {"inversion", r.inversion},
                     {"cauchy_schwarz", r.cauchy_schwarz}, {"bipolar", r.bipolar}, {"gradient_fd", r.gradient_fd},
                     {"passed", r.passed()}};
}

}  // namespace anisorobin
