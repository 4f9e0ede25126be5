#include <cmath>
#include <vector>

#include "doctest.h"

#include "anisorobin/bessel.hpp"
#include "anisorobin/errors.hpp"

using namespace anisorobin;

namespace {

struct Reference {
  double x, i0, i1, k0, k1;
};

// 40-digit values from an arbitrary-precision library.
const std::vector<Reference> kReference = {
    {1e-8, 1.000000000000000025, 5.0000000000000000625e-9, 18.536612259610778409, 99999999.999999904817},
    {1e-3, 1.000000250000015625, 0.00050000006250000260417, 7.0236888005623813436, 999.99623815608557428},
    {0.5, 1.0634833707413235193, 0.25789430539089631636, 0.92441907122766586178, 1.6564411200033008937},
    {1, 1.2660658777520083356, 0.56515910399248502721, 0.42102443824070833334, 0.60190723019723457474},
    {2, 2.2795853023360672674, 1.5906368546373290634, 0.11389387274953343565, 0.13986588181652242728},
    {2.5, 3.2898391440501230357, 2.5167162452886984415, 0.062347553200366186029, 0.073890816347747063649},
    {5, 27.239871823604446895, 24.335642142450527199, 0.0036910983340425942747, 0.0040446134454521642084},
    {10, 2815.7166284662544715, 2670.9883037012546543, 0.000017780062316167651811, 0.000018648773453825584597},
    {12, 18948.925349296308861, 18141.348781638831601, 2.2008253973114914005e-6, 2.2907574647671878159e-6},
    {20, 43558282.559553533272, 42454973.385127770181, 5.7412378153365242927e-10, 5.8830579695570381777e-10},
    {25, 5774560606.4663103158, 5657865129.8787013531, 3.4641615622131143554e-12, 3.5327780731999337702e-12},
    {30, 781672297823.97748972, 768532038938.95699949, 2.1324774964630563712e-14, 2.1677320018915494249e-14},
    {50, 2.9325537838493363267e+20, 2.9030785901035567968e+20, 3.4101677497894955139e-23, 3.4441022267175556126e-23},
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("values at zero") {
  CHECK(bessel::i0(0.0) == 1.0);
  CHECK(bessel::i1(0.0) == 0.0);
}

TEST_CASE("reference values within 1e-12 relative") {
  for (const auto& r : kReference) {
    CAPTURE(r.x);
    CHECK(rel(bessel::i0(r.x), r.i0) <= 1e-12);
    CHECK(rel(bessel::i1(r.x), r.i1) <= 1e-12);
    CHECK(rel(bessel::k0(r.x), r.k0) <= 1e-12);
    CHECK(rel(bessel::k1(r.x), r.k1) <= 1e-12);
  }
}

TEST_CASE("I0(1) against a 60-term extended precision series") {
  CHECK(rel(bessel::i0(1.0), 1.266065877752008335598245) <= 1e-13);
}

TEST_CASE("Wronskian") {
  for (double x : {0.5, 1.0, 5.0, 20.0}) {
    const double w = bessel::i0(x) * bessel::k1(x) + bessel::i1(x) * bessel::k0(x);
    CHECK(std::abs(w * x - 1.0) <= 1e-11);
  }
  for (int i = 0; i < 1000; ++i) {
    const double x = 1e-3 * std::pow(5e4, i / 999.0);
    const double w = bessel::i0(x) * bessel::k1(x) + bessel::i1(x) * bessel::k0(x);
    CHECK(std::abs(w * x - 1.0) <= 1e-11);
  }
}

TEST_CASE("derivative relations") {
  const double h = 1e-6;
  for (double x = 0.1; x <= 20.0; x += 0.37) {
    const double di0 = (bessel::i0(x + h) - bessel::i0(x - h)) / (2 * h);
    const double dk0 = (bessel::k0(x + h) - bessel::k0(x - h)) / (2 * h);
    CHECK(rel(di0, bessel::i1(x)) <= 1e-6);
    CHECK(rel(dk0, -bessel::k1(x)) <= 1e-6);
  }
}

TEST_CASE("monotonicity and sign") {
  double pi0 = bessel::i0(0.0), pi1 = bessel::i1(0.0), pk0 = INFINITY, pk1 = INFINITY;
  for (double x = 0.01; x <= 50.0; x += 0.01) {
    const double a = bessel::i0(x), b = bessel::i1(x), c = bessel::k0(x), d = bessel::k1(x);
    CHECK(a >= pi0);
    CHECK(b >= pi1);
    CHECK(c < pk0);
    CHECK(d < pk1);
    CHECK(a >= 1.0);
    CHECK(c > 0.0);
    pi0 = a, pi1 = b, pk0 = c, pk1 = d;
  }
}

TEST_CASE("continuity across internal crossovers") {
  // Jump across x after removing the slope over the 2e-12 x step.
  for (double x : {2.0, bessel::kSeriesCrossover}) {
    const double d = 2e-12 * x;
    const double lo_x = x * (1 - 1e-12), hi_x = x * (1 + 1e-12);
    const double jumps[] = {
        bessel::i0(hi_x) - bessel::i0(lo_x) - d * bessel::i1(x),
        bessel::i1(hi_x) - bessel::i1(lo_x) - d * (bessel::i0(x) - bessel::i1(x) / x),
        bessel::k0(hi_x) - bessel::k0(lo_x) + d * bessel::k1(x),
        bessel::k1(hi_x) - bessel::k1(lo_x) + d * (bessel::k0(x) + bessel::k1(x) / x),
    };
    const double values[] = {bessel::i0(x), bessel::i1(x), bessel::k0(x), bessel::k1(x)};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(jumps[i]) <= 1e-11 * values[i]);
  }
}

TEST_CASE("domain and range errors") {
  CHECK_THROWS_AS(bessel::k0(0.0), DomainError);
  CHECK_THROWS_AS(bessel::k1(-1.0), DomainError);
  CHECK_THROWS_AS(bessel::i0(-1.0), DomainError);
  CHECK_THROWS_AS(bessel::i0(700.0), RangeError);
  CHECK_THROWS_AS(bessel::k1(700.0), RangeError);
}
