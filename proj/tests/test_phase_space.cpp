#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mhdci/phase_space.hpp"

using namespace mhdci;

namespace {
double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }
Vec3 rand3(std::mt19937_64& rng) {
  return {2 * u01(rng) - 1, 2 * u01(rng) - 1, 2 * u01(rng) - 1};
}
Vec4 rand4(std::mt19937_64& rng) {
  return {2 * u01(rng) - 1, 2 * u01(rng) - 1, 2 * u01(rng) - 1, 2 * u01(rng) - 1};
}
}  // namespace

TEST_CASE("wedge square equals twice the scalar pairing") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Bivector w{rand3(rng), rand3(rng)};
    CHECK(std::abs(wedgeSquare(w) - 2.0 * dot(w.b, w.e)) < 1e-15);
    // simple forms are null
    Bivector simple = wedge(rand4(rng), rand4(rng));
    CHECK(std::abs(wedgeSquare(simple)) < 1e-13);
  }
}

TEST_CASE("bivectorMatrix reproduces the wedge pairing") {
  std::mt19937_64 rng(12);
  Vec4 v = rand4(rng), w = rand4(rng);
  Bivector om = wedge(v, w);
  Mat4 Om = bivectorMatrix(om);
  for (int i = 0; i < 50; ++i) {
    Vec4 f = rand4(rng), g = rand4(rng);
    double viaMatrix = dot(f, Om * g);
    CHECK(viaMatrix == doctest::Approx(apply(om, f, g)).epsilon(1e-12));
    // ω(f,g) = (f·v)(g·w) − (f·w)(g·v) for ω = v∧w
    double direct = dot(f, v) * dot(g, w) - dot(f, w) * dot(g, v);
    CHECK(viaMatrix == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("factorize inverts wedge") {
  std::mt19937_64 rng(13);
  int done = 0;
  while (done < 300) {
    Vec4 v = rand4(rng), w = rand4(rng);
    Bivector om = wedge(v, w);
    if (norm(om) < 1e-3) continue;
    ++done;
    auto [a, b] = factorize(om);
    CHECK(norm(wedge(a, b) - om) < 1e-12 * (1.0 + norm(om)));
  }
  // a non-degenerate form has no factorization
  Bivector bad{{1, 0, 0}, {1, 0, 0}};  // ω∧ω = 2 ≠ 0
  CHECK_THROWS_AS(factorize(bad), NotSimple);
}

TEST_CASE("comass of orthogonal plane sums") {
  // e1∧e2 + c e3∧e4 has singular values 1 and |c|
  for (double c : {0.25, 1.0, 3.0}) {
    Bivector w{{0, 0, 1}, {0, 0, c}};
    CHECK(comass(w) == doctest::Approx(std::max(1.0, c)).epsilon(1e-12));
  }
  // simple forms: comass equals the parallelogram area
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    Vec4 v = rand4(rng), w4 = rand4(rng);
    double area2 = dot(v, v) * dot(w4, w4) - dot(v, w4) * dot(v, w4);
    CHECK(comass(wedge(v, w4)) == doctest::Approx(std::sqrt(std::max(area2, 0.0)))
                                      .epsilon(1e-10));
  }
}

TEST_CASE("Elsasser map round trips and linearizes K") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 100; ++i) {
    State15 v{rand3(rng), sym(outer(rand3(rng), rand3(rng))), rand3(rng), rand3(rng)};
    State15 back = fromElsasser(toElsasser(v));
    CHECK(norm(back - v) < 1e-13 * (1.0 + norm(v)));
  }
  for (int i = 0; i < 100; ++i) {
    Vec3 u = rand3(rng), B = rand3(rng);
    double Pi = 2 * u01(rng) - 1;
    ElsasserState e = toElsasser(kState(u, B, Pi));
    CHECK(norm(e.zPlus - (u + B)) < 1e-14);
    CHECK(norm(e.zMinus - (u - B)) < 1e-14);
    Mat3 want = outer(e.zPlus, e.zMinus) + Mat3::identity() * Pi;
    CHECK(frobenius(e.M - want) < 1e-12 * (1.0 + frobenius(want)));
  }
}

TEST_CASE("distanceToK vanishes exactly on constitutive states") {
  ConstraintParams p{2.0, 1.0};
  std::mt19937_64 rng(16);
  for (int i = 0; i < 200; ++i) {
    Vec3 zp = normalized(rand3(rng)) * p.r;
    Vec3 zm = normalized(rand3(rng)) * p.s;
    double Pi = (2 * u01(rng) - 1) * p.pressureBound();
    State15 v = kState((zp + zm) * 0.5, (zp - zm) * 0.5, Pi);
    CHECK(distanceToK(v, p) < 1e-12);
    CHECK(inM(v));
  }
  CHECK(distanceToK(State15{}, p) > 0.4);
}
