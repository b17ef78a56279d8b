#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mhdci/wave_cone.hpp"

using namespace mhdci;

namespace {
double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }
Vec3 rand3(std::mt19937_64& rng) {
  return {2 * u01(rng) - 1, 2 * u01(rng) - 1, 2 * u01(rng) - 1};
}
}  // namespace

TEST_CASE("findXi certificates satisfy the defining equations") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    Vec3 u = rand3(rng), B = rand3(rng);
    // force B·E = 0: E = B×w
    Vec3 E = cross(B, rand3(rng));
    WaveVector xi = findXi(u, B, E);
    REQUIRE(norm(xi.xiX) > 0);
    CHECK(std::abs(dot(xi.xiX, B)) < 1e-11 * (1.0 + norm(xi.xiX) * norm(B)));
    Vec3 faraday = B * xi.xiT + cross(xi.xiX, E);
    CHECK(norm(faraday) < 1e-11 * (1.0 + norm(xi.vec()) * (norm(B) + norm(E))));
  }
}

TEST_CASE("findXi rejects B.E != 0") {
  std::mt19937_64 rng(22);
  int rejected = 0;
  for (int i = 0; i < 500; ++i) {
    Vec3 B = rand3(rng);
    Vec3 E = rand3(rng);
    if (std::abs(dot(B, E)) < 1e-3) continue;
    CHECK_THROWS_AS(findXi(rand3(rng), B, E), NotInCone);
    ++rejected;
  }
  CHECK(rejected > 100);
}

TEST_CASE("inLambda certificates satisfy all three cone conditions") {
  std::mt19937_64 rng(23);
  int found = 0;
  for (int i = 0; i < 500; ++i) {
    // build a direction inside the cone: pick xi first, then a compatible state
    Vec3 xiX = normalized(rand3(rng));
    double xiT = 2 * u01(rng) - 1;
    Vec3 u = cross(xiX, rand3(rng));  // ⊥ xiX
    Vec3 B = cross(xiX, rand3(rng));
    // momentum: S xiX = −xiT u with S symmetric
    Mat3 S = solveMatrixEq(xiX, -u * xiT);
    // faraday: xiT B + xiX × E = 0; E = xiT (xiX×B)/|xiX|² + μ xiX works
    Vec3 E = cross(xiX, B) * xiT + xiX * (2 * u01(rng) - 1);
    State15 dir{u, S, B, E};
    REQUIRE(coneResiduals(dir, {xiX, xiT}).total() < 1e-10);
    auto cert = inLambda(dir);
    REQUIRE(cert.has_value());
    CHECK(coneResiduals(dir, *cert).total() < 1e-10 * (1.0 + norm(dir)));
    ++found;
  }
  CHECK(found == 500);
  // a generic direction with B·E ≠ 0 has no certificate
  State15 off{{}, Mat3::zero(), {1, 0, 0}, {1, 0, 0}};
  CHECK(!inLambda(off).has_value());
}

TEST_CASE("potential condition solve is robust near degeneracy") {
  Vec4 v0{1, 0, 0, 0}, w0{0, 1, 0, 0};
  SUBCASE("well conditioned") {
    Vec4 xi{0, 0, 1, 0.25};
    Bivector om = wedge(v0 * 2.0 - w0 * 3.0, xi);
    auto sol = solvePotentialCondition(v0, w0, xi, om);
    CHECK(sol.c2 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sol.c1 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(sol.residual < 1e-13);
  }
  SUBCASE("xi almost inside span{v0,w0}") {
    // the two columns v0∧ξ, w0∧ξ become nearly parallel; the residual must
    // stay at rounding level, not grow like 1/ε
    for (double eps : {1e-4, 1e-6, 1e-8}) {
      Vec4 xi{1.0, 0.7, eps, 0.0};
      Bivector om = wedge(v0 * 1.8 - w0 * 1.1, xi);
      auto sol = solvePotentialCondition(v0, w0, xi, om);
      CHECK(sol.residual < 1e-12 * (1.0 + norm(om)));
    }
  }
  SUBCASE("unsolvable right side") {
    Vec4 xi{0, 0, 1, 0};
    Bivector om = wedge(Vec4{0, 0, 0, 1}, Vec4{1, 1, 0, 0});  // no ξ factor
    auto sol = solvePotentialCondition(v0, w0, xi, om);
    CHECK(sol.residual > 0.5);
  }
}

TEST_CASE("classifySegment hits each good case") {
  Vec4 v0{1, 0, 0, 0}, w0{0, 1, 0, 0};
  Bivector om0 = wedge(v0, w0);
  State15 base{{}, Mat3::zero(), om0.b, om0.e};
  WaveVector xi{{0, 0, 1}, 0.25};

  SUBCASE("zero Maxwell part is Good1") {
    Vec3 u = cross(xi.xiX, Vec3{0.3, 0.4, 0.5});
    State15 dir{u, solveMatrixEq(xi.xiX, -u * xi.xiT), {}, {}};
    auto v = classifySegment({base, dir, 0.4, xi});
    CHECK(v.kind == GoodnessVerdict::Kind::Good1);
  }
  SUBCASE("potential condition solvable is Good2") {
    Bivector om = wedge(v0 * 2.0 - w0, xi.vec());
    State15 dir{{}, Mat3::zero(), om.b, om.e};
    auto v = classifySegment({base, dir, 0.4, xi});
    CHECK(v.kind == GoodnessVerdict::Kind::Good2);
    REQUIRE(v.c1.has_value());
    // the coefficients refer to the classifier's own factorization of ω₀
    auto [a, b] = factorize(om0);
    Bivector rebuilt = wedge(a * (*v.c2) - b * (*v.c1), xi.vec());
    CHECK(norm(rebuilt - om) < 1e-10 * (1.0 + norm(om)));
  }
  SUBCASE("proportional directions are Good3 away from the forbidden ratios") {
    // base with ω₀ decomposable against ξ: ω₀ = v∧ξ
    Bivector omP = wedge(v0, xi.vec());
    State15 baseP{{}, Mat3::zero(), omP.b, omP.e};
    State15 dir{{}, Mat3::zero(), omP.b * 1.7, omP.e * 1.7};
    auto v = classifySegment({baseP, dir, 0.4, xi});
    CHECK(v.kind == GoodnessVerdict::Kind::Good3);
    REQUIRE(v.k.has_value());
    CHECK(*v.k == doctest::Approx(1.7).epsilon(1e-12));
    // λ with 1/(1−λ) = 1.7 is forbidden
    double lamBad = 1.0 - 1.0 / 1.7;
    auto vb = classifySegment({baseP, dir, lamBad, xi});
    CHECK(vb.kind == GoodnessVerdict::Kind::Bad);
  }
  SUBCASE("vanishing base Maxwell part with pure oscillation is Good4") {
    State15 zeroBase{};
    Bivector om = wedge(v0, xi.vec());
    State15 dir{{}, Mat3::zero(), om.b, om.e};
    auto v = classifySegment({zeroBase, dir, 0.5, xi});
    CHECK(v.kind == GoodnessVerdict::Kind::Good4);
  }
}

TEST_CASE("realignFactors preserves the bivector exactly") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 200; ++i) {
    Vec4 a{2 * u01(rng) - 1, 2 * u01(rng) - 1, 2 * u01(rng) - 1, 2 * u01(rng) - 1};
    Vec4 b{2 * u01(rng) - 1, 2 * u01(rng) - 1, 2 * u01(rng) - 1, 2 * u01(rng) - 1};
    Bivector om = wedge(a, b);
    if (norm(om) < 1e-3) continue;
    auto [v2, w2] = factorize(om);
    Vec4 v1{1, 0, 0, 0};
    auto [v2r, w2r] = realignFactors(v1, Vec4{0, 1, 0, 0}, v2, w2);
    CHECK(norm(wedge(v2r, w2r) - om) < 1e-11 * (1.0 + norm(om)));
  }
}

TEST_CASE("solveMatrixEq property") {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 200; ++i) {
    Vec3 x = rand3(rng), y = rand3(rng);
    if (norm(x) < 1e-3) continue;
    Mat3 S = solveMatrixEq(x, y);
    CHECK(frobenius(S - S.transpose()) < 1e-15);
    CHECK(norm(S * x - y) < 1e-12 * (1.0 + norm(y)));
    CHECK(operatorNorm(S) <= 3.0 * norm(y) / norm(x) + 1e-12);
  }
}

TEST_CASE("rigidity of good segments with constitutive endpoints") {
  std::mt19937_64 rng(26);
  int checked = 0;
  while (checked < 300) {
    // collinear constitutive endpoints kState(u, b± B, Π) give a proportional
    // Maxwell direction; ξ_x ⊥ B with ξ_t = −u·ξ_x certifies it
    Vec3 u = rand3(rng), B = rand3(rng);
    if (norm(B) < 0.1) continue;
    double lam = 0.2 + 0.6 * u01(rng);
    double c = (u01(rng) < 0.5 ? -1.0 : 1.0) * (0.1 + 0.4 * u01(rng));
    double Pi = 2 * u01(rng) - 1;
    State15 vp = kState(u, B * (1.0 + lam * c), Pi);
    State15 vm = kState(u, B * (1.0 - (1.0 - lam) * c), Pi);
    State15 dir = vp - vm;
    Vec3 xiX = cross(B, rand3(rng));
    if (norm(xiX) < 1e-3) continue;
    xiX = normalized(xiX);
    WaveVector xi{xiX, -dot(u, xiX)};
    SegmentSpec seg{vp * (1.0 - lam) + vm * lam, dir, lam, xi};
    if (coneResiduals(dir, xi).total() > 1e-10 * (1.0 + norm(dir))) continue;
    GoodnessVerdict v = classifySegment(seg);
    if (v.kind == GoodnessVerdict::Kind::Bad) continue;
    CHECK(rigidityCheck(seg));
    const State15& b0 = seg.base;
    CHECK(norm(b0.E - cross(b0.B, b0.u)) < 1e-10 * (1.0 + norm(b0)));
    ++checked;
  }
}
