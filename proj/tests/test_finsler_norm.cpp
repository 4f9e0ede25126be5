#include <cmath>
#include <random>

#include "doctest.h"

#include "anisorobin/errors.hpp"
#include "anisorobin/finsler_norm.hpp"
#include "anisorobin/planar_geometry.hpp"

using namespace anisorobin;

namespace {

Mat2 diag41() {
  Mat2 m;
  m << 4.0, 0.0, 0.0, 1.0;
  return m;
}

Mat2 tilted() {
  Mat2 m;
  m << 2.0, 0.7, 0.7, 1.0;
  return m;
}

std::vector<FinslerNorm> all_norms() {
  return {FinslerNorm::euclidean(), FinslerNorm::quadratic(diag41()), FinslerNorm::quadratic(tilted()),
          FinslerNorm::lp(4.0), FinslerNorm::lp(1.5)};
}

Vec2 central_difference(const std::function<double(const Vec2&)>& f, const Vec2& x, double h) {
  return {(f(x + Vec2(h, 0)) - f(x - Vec2(h, 0))) / (2 * h), (f(x + Vec2(0, h)) - f(x - Vec2(0, h))) / (2 * h)};
}

}  // namespace

TEST_CASE("eval examples") {
  CHECK(FinslerNorm::euclidean().eval({3, 4}) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(FinslerNorm::quadratic(diag41()).eval({1, 0}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(FinslerNorm::lp(4).eval({1, 1}) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
  for (const auto& n : all_norms()) CHECK(n.eval({0, 0}) == 0.0);
}

TEST_CASE("grad examples") {
  const Vec2 ge = FinslerNorm::euclidean().grad({0, 2});
  CHECK(ge.x() == doctest::Approx(0.0));
  CHECK(ge.y() == doctest::Approx(1.0));
  const Vec2 gq = FinslerNorm::quadratic(diag41()).grad({1, 0});
  CHECK(gq.x() == doctest::Approx(2.0));
  CHECK(gq.y() == doctest::Approx(0.0));
  // Finite-difference oracle for the lp gradient.
  const auto lp4 = FinslerNorm::lp(4);
  const Vec2 g = lp4.grad({1, 1});
  const Vec2 fd = central_difference([&](const Vec2& x) { return lp4.eval(x); }, {1, 1}, 1e-6);
  CHECK(g.x() == doctest::Approx(std::pow(2.0, 0.25) / 2).epsilon(1e-14));
  CHECK(g.y() == doctest::Approx(std::pow(2.0, 0.25) / 2).epsilon(1e-14));
  CHECK((g - fd).norm() < 1e-8);
  for (const auto& n : all_norms()) {
    CHECK_THROWS_AS(n.grad({0, 0}), DomainError);
    CHECK_THROWS_AS(n.polar_grad({1e-15, 0}), DomainError);
  }
}

TEST_CASE("polar examples") {
  CHECK(FinslerNorm::quadratic(diag41()).polar({2, 0}) == doctest::Approx(1.0));
  CHECK(FinslerNorm::lp(4).polar({1, 0}) == doctest::Approx(1.0));
  CHECK(FinslerNorm::euclidean().polar({3, 4}) == doctest::Approx(5.0));
  CHECK(FinslerNorm::lp(4).dual_exponent() == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("polar_grad examples") {
  const Vec2 e = FinslerNorm::euclidean().polar_grad({1, 0});
  CHECK(e.x() == doctest::Approx(1.0));
  CHECK(e.y() == doctest::Approx(0.0));
  const Vec2 q = FinslerNorm::quadratic(diag41()).polar_grad({0, 1});
  CHECK(q.x() == doctest::Approx(0.0));
  CHECK(q.y() == doctest::Approx(1.0));
  // lp p=4: polar is the l^{4/3} norm, whose gradient at (1,1) is 2^{-1/4} per component.
  const auto lp4 = FinslerNorm::lp(4);
  const Vec2 g = lp4.polar_grad({1, 1});
  const Vec2 fd = central_difference([&](const Vec2& x) { return lp4.polar(x); }, {1, 1}, 1e-6);
  CHECK((g - fd).norm() < 1e-8);
  CHECK(g.x() == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-14));
}

TEST_CASE("numeric polar agrees with closed forms") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0, 2 * kPi);
  for (const auto& n : all_norms()) {
    for (int i = 0; i < 50; ++i) {
      const Vec2 v = unit_direction(angle(rng));
      CHECK(std::abs(numeric_polar(n, v) - n.polar(v)) <= 1e-8);
    }
  }
}

TEST_CASE("wulff_area closed forms and quadrature") {
  CHECK(FinslerNorm::euclidean().wulff_area() == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(FinslerNorm::quadratic(diag41()).wulff_area() == doctest::Approx(2 * kPi).epsilon(1e-15));
  // Adaptive quadrature of the l^{4/3} unit ball, 40 digits.
  CHECK(FinslerNorm::lp(4).wulff_area() == doctest::Approx(2.5416392543819372598).epsilon(1e-14));
  for (const auto& n : all_norms()) CHECK(numeric_wulff_area(n, 4096) == doctest::Approx(n.wulff_area()).epsilon(1e-6));
}

TEST_CASE("wulff_boundary") {
  const auto e = FinslerNorm::euclidean().wulff_boundary(1.0, 4);
  REQUIRE(e.n_vertices() == 4);
  for (const auto& v : e.vertices) CHECK(v.norm() == doctest::Approx(1.0));
  for (const auto& v : FinslerNorm::quadratic(diag41()).wulff_boundary(1.0, 64).vertices)
    CHECK(v.x() * v.x() / 4 + v.y() * v.y() == doctest::Approx(1.0).epsilon(1e-12));
  const auto lp4 = FinslerNorm::lp(4);
  const auto w = lp4.wulff_boundary(2.0, 1024);
  for (const auto& v : w.vertices) CHECK(std::abs(lp4.polar(v) - 2.0) <= 1e-8);
  // Convex and CCW: ConvexPolygon validates both.
  CHECK_NOTHROW(ConvexPolygon(w.vertices));
  CHECK_THROWS_AS(lp4.wulff_boundary(0.0, 32), DomainError);
}

TEST_CASE("norm bounds") {
  const auto e = FinslerNorm::euclidean().bounds();
  CHECK(e.a == doctest::Approx(1.0));
  CHECK(e.b == doctest::Approx(1.0));
  const auto q = FinslerNorm::quadratic(diag41()).bounds();
  CHECK(q.a == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(q.b == doctest::Approx(2.0).epsilon(1e-10));
  const auto l = FinslerNorm::lp(4).bounds();
  CHECK(l.a == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-10));
  CHECK(l.b == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("identity suite over random inputs") {
  for (const auto& n : all_norms()) {
    const IdentityReport r = identity_suite(n, 300, 5);
    CHECK(r.homogeneity <= 1e-12);
    CHECK(r.euler <= 1e-8);
    CHECK(r.euler_polar <= 1e-8);
    CHECK(r.duality <= 1e-8);
    CHECK(r.inversion <= 1e-7);
    CHECK(r.cauchy_schwarz <= 1e-12);
    CHECK(r.bipolar <= 1e-8);
    CHECK(r.gradient_fd <= 1e-5);
    CHECK(r.passed());
  }
}

TEST_CASE("invalid norms are rejected") {
  Mat2 asym;
  asym << 1, 0.5, 0.2, 1;
  Mat2 indefinite;
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(FinslerNorm::quadratic(asym), InvalidNormError);
  CHECK_THROWS_AS(FinslerNorm::quadratic(indefinite), InvalidNormError);
  CHECK_THROWS_AS(FinslerNorm::lp(1.0), InvalidNormError);
  CHECK_THROWS_AS(FinslerNorm::lp(INFINITY), InvalidNormError);
  CHECK_THROWS_AS(FinslerNorm::lp(0.5), InvalidNormError);
}

TEST_CASE("json round trip") {
  for (const auto& n : all_norms()) {
    const nlohmann::json j = n;
    CHECK(j.get<FinslerNorm>() == n);
  }
  CHECK(nlohmann::json(FinslerNorm::lp(4)).dump() == R"({"family":"lp","p":4.0})");
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"family":"hex"})").get<FinslerNorm>(), InvalidNormError);
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"family":"lp"})").get<FinslerNorm>(), InvalidNormError);
}
