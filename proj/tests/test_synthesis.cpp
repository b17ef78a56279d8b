#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mhdci/flatten.hpp"
#include "mhdci/improve.hpp"
#include "mhdci/wave_synthesis.hpp"

using namespace mhdci;

namespace {
double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

SegmentSpec referenceSegment(double lambda) {
  Vec4 v0{1, 0, 0, 0}, w0{0, 1, 0, 0};
  WaveVector xi{{0, 0, 1}, 0.25};
  Bivector om0 = wedge(v0, w0);
  Bivector om = wedge(v0 * 2.0 - w0, xi.vec());
  return {State15{{}, Mat3::zero(), om0.b, om0.e},
          State15{{}, Mat3::zero(), om.b, om.e}, lambda, xi};
}
}  // namespace

TEST_CASE("sawtooth profile") {
  SawtoothProfile saw = buildSawtooth(0.3, 0.05);
  SUBCASE("plateau values and mean") {
    CHECK(saw.hpp(saw.plateauInterval(+1).mid()) == 0.3);
    CHECK(saw.hpp(saw.plateauInterval(-1).mid()) == -0.7);
    // zero mean of h'' over a period is exactly the periodicity of h'
    CHECK(std::abs(saw.hp(1.0) - saw.hp(0.0)) < 1e-13);
    double mean = 0;
    int N = 20000;
    for (int i = 0; i < N; ++i) mean += saw.hpp((i + 0.5) / N);
    CHECK(std::abs(mean / N) < 1e-5);
  }
  SUBCASE("h and h' integrate h''") {
    for (double s : {0.11, 0.37, 0.52, 0.83, 0.96}) {
      double d = 1e-6;
      CHECK(std::abs((saw.h(s + d) - saw.h(s - d)) / (2 * d) - saw.hp(s)) < 1e-8);
      CHECK(std::abs((saw.hp(s + d) - saw.hp(s - d)) / (2 * d) - saw.hpp(s)) < 1e-8);
    }
  }
  SUBCASE("periodic up to the linear drift of h") {
    double drift = saw.h(1.25) - saw.h(0.25);
    CHECK(std::abs(saw.h(2.25) - saw.h(1.25) - drift) < 1e-12);
    CHECK(saw.hp(1.33) == doctest::Approx(saw.hp(0.33)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(buildSawtooth(0.0, 0.05), BadParams);
  CHECK_THROWS_AS(buildSawtooth(0.5, 3.0), BadParams);
}

TEST_CASE("cutoff cube") {
  CubeSpec q = makeCube({0.5, -1.0, 0.0, 2.0}, 2.0, 0.1);
  SUBCASE("indicator regions") {
    CHECK(q.chi(q.center) == 1.0);
    CHECK(q.insideInner(q.center));
    Vec4 outside = q.global({0.51, 0, 0, 0});
    CHECK(q.chi(outside) == 0.0);
    CHECK(!q.insideSupport(outside));
    CHECK(norm(q.gradChi(q.center)) == 0.0);
  }
  SUBCASE("gradient consistency by finite differences") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
      Vec4 y{u01(rng) - 0.5, u01(rng) - 0.5, u01(rng) - 0.5, u01(rng) - 0.5};
      Vec4 p = q.global(y * 0.98);
      Vec4 g = q.gradChi(p);
      for (int j = 0; j < 4; ++j) {
        Vec4 dp = p, dm = p;
        dp[j] += 1e-6;
        dm[j] -= 1e-6;
        double fd = (q.chi(dp) - q.chi(dm)) / 2e-6;
        CHECK(std::abs(fd - g[j]) < 1e-6 * (1.0 + q.gradBound()));
      }
    }
  }
  SUBCASE("gradient bound holds") {
    std::mt19937_64 rng(42);
    double worst = 0;
    for (int i = 0; i < 2000; ++i) {
      Vec4 y{u01(rng) - 0.5, u01(rng) - 0.5, u01(rng) - 0.5, u01(rng) - 0.5};
      worst = std::max(worst, norm(q.gradChi(q.global(y))));
    }
    CHECK(worst <= q.gradBound() * (1.0 + 1e-12));
  }
}

TEST_CASE("coverDomain tiles a box") {
  Box4 box{{0, 0, 0, 0}, {1, 1, 1, 1}};
  auto cubes = coverDomain(box, [](const CubeSpec&) { return true; }, 0.05, 4);
  CHECK(cubes.size() == 1);
  int calls = 0;
  auto refined = coverDomain(box, [&](const CubeSpec& q) {
    ++calls;
    return q.side <= 0.5;
  }, 0.05, 4);
  CHECK(refined.size() == 16);
  double vol = 0;
  for (const CubeSpec& q : refined) vol += q.side * q.side * q.side * q.side;
  CHECK(vol == doctest::Approx(1.0));
  CHECK_THROWS_AS(coverDomain(box, [](const CubeSpec& q) { return q.side < 1e-6; },
                              0.05, 3),
                  ResolutionExceeded);
}

TEST_CASE("fluid potential") {
  Vec3 xiX = normalized(Vec3{1.0, 2.0, -0.5});
  WaveVector xi{xiX, 0.7};
  Vec3 u = cross(xiX, Vec3{0.2, -1.0, 0.4});
  Mat3 S = solveMatrixEq(xiX, -u * xi.xiT);
  Mat4 U = spaceTimeFlux(u, S);
  FluidPotential P(U, xi);
  SUBCASE("reproduces the target on the plane-wave Hessian") {
    Mat4 H = outer4(xi.vec(), xi.vec());
    CHECK(frobenius(P.apply(H) - U) < 1e-10 * (1.0 + frobenius(U)));
  }
  SUBCASE("output is space-time divergence free for any Hessian") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 50; ++i) {
      Vec4 a{u01(rng), u01(rng), u01(rng), u01(rng)};
      Mat4 H = outer4(a, a);
      Mat4 out = P.apply(H);
      // row 4 stays zero and the matrix is symmetric with zero corner
      CHECK(std::abs(out(3, 3)) < 1e-12);
      CHECK(frobenius(out - out.transpose()) < 1e-11);
      Vec3 uo;
      Mat3 So;
      splitFlux(out, uo, So);
      Mat4 rebuilt = spaceTimeFlux(uo, So);
      CHECK(frobenius(rebuilt - out) < 1e-11);
    }
  }
  SUBCASE("rejects data off the kernel") {
    Mat4 badU = spaceTimeFlux(u + xiX, S);  // breaks U ξ = 0
    CHECK_THROWS_AS(FluidPotential(badU, xi), NotInKernel);
  }
}

TEST_CASE("synthesized wave is exact outside its cube") {
  SegmentSpec seg = referenceSegment(0.4);
  CubeSpec cube = makeCube({0, 0, 0, 0}, 1.0, 0.05);
  State17 W0{{}, {}, {1, 0, 0, 0}, {0, 1, 0, 0}};
  LocalizedWave wave = synthesizeWave(W0, seg, cube, 16.0);
  std::mt19937_64 rng(44);
  for (int i = 0; i < 200; ++i) {
    Vec4 y{2 * u01(rng) - 1, 2 * u01(rng) - 1, 2 * u01(rng) - 1, 2 * u01(rng) - 1};
    Vec4 p = cube.global(y * 3.0);
    if (cube.insideSupport(p)) continue;
    CHECK(norm(wave.eval(p) - seg.base) == 0.0);  // bitwise: cutoff is exactly 0
  }
}

TEST_CASE("wave plateaus reproduce the segment endpoints") {
  double lambda = 0.4;
  SegmentSpec seg = referenceSegment(lambda);
  CubeSpec cube = makeCube({0, 0, 0, 0}, 1.0, 0.05);
  State17 W0{{}, {}, {1, 0, 0, 0}, {0, 1, 0, 0}};
  LocalizedWave wave = synthesizeWave(W0, seg, cube, 16.0);
  REQUIRE(wave.atomCount() == 2);
  State15 ep = endpointPlus(seg), em = endpointMinus(seg);
  CHECK(norm(wave.atomStates()[0] - ep) < 1e-10);
  CHECK(norm(wave.atomStates()[1] - em) < 1e-10);
  std::mt19937_64 rng(45);
  int hits = 0;
  for (int i = 0; i < 5000; ++i) {
    Vec4 y{u01(rng) - 0.5, u01(rng) - 0.5, u01(rng) - 0.5, u01(rng) - 0.5};
    LocalizedWave::PointInfo info = wave.evalInfo(cube.global(y));
    if (info.atom < 0) continue;
    ++hits;
    const State15& want = info.atom == 0 ? ep : em;
    CHECK(norm(project(info.W) - want) < 1e-10);
  }
  CHECK(hits > 3000);
  PlateauReport pr = measurePlateaus(wave, 20000, 3);
  REQUIRE(pr.fraction.size() == 2);
  CHECK(std::abs(pr.fraction[0] - (1.0 - lambda)) < 0.05);
  CHECK(std::abs(pr.fraction[1] - lambda) < 0.05);
}

TEST_CASE("cancellation error halves with the frequency") {
  SegmentSpec seg = referenceSegment(0.4);
  CubeSpec cube = makeCube({0, 0, 0, 0}, 1.0, 0.05);
  State17 W0{{}, {}, {1, 0, 0, 0}, {0, 1, 0, 0}};
  double e16 = cancellationError(synthesizeWave(W0, seg, cube, 16.0), 4000, 7);
  double e32 = cancellationError(synthesizeWave(W0, seg, cube, 32.0), 4000, 7);
  double ratio = e16 / e32;
  CHECK(ratio > 1.5);
  CHECK(ratio < 2.7);
}

TEST_CASE("laminate synthesis reaches every atom") {
  HullParams hpDec{{1.9, 0.95}, 0.9};
  HullParams hpGood{{2.0, 1.0}, 0.95};
  Laminate lam = decomposeFull(State15{}, hpDec);
  Laminate good = goodify(lam, hpGood);
  CubeSpec cube = makeCube({0, 0, 0, 0}, 1.0, 0.05);
  std::vector<double> sched(good.depth(), 16.0);
  LocalizedWave wave = synthesizeLaminate(State17{}, good, cube, sched);
  CHECK(wave.atomCount() == int(good.atoms().size()));
  double wsum = 0;
  for (double w : wave.atomWeights()) wsum += w;
  CHECK(wsum == doctest::Approx(1.0));
  auto atoms = good.atoms();
  for (int i = 0; i < wave.atomCount(); ++i)
    CHECK(norm(wave.atomStates()[i] - atoms[i].state) < 1e-9);
}

TEST_CASE("flatten zeroes degenerate Clebsch factors at cube centers") {
  // constant field with parallel factors: degenerate but nonvanishing
  State17 W{{}, {}, {1, 0, 0, 0}, {2, 0, 0, 0}};
  WField f = [&](const Vec4&) { return W; };
  Box4 box{{0, 0, 0, 0}, {1, 1, 1, 1}};
  auto cover = coverDomain(box, [](const CubeSpec&) { return true; }, 0.1, 2);
  FlattenResult res = flattenClebsch(f, cover, 0.1);
  CHECK(res.modified == int(cover.size()));
  for (const CubeSpec& q : res.patches) {
    State17 at = res.field(q.center);
    CHECK(norm(at.v) < 1e-12);
    CHECK(norm(at.w) < 1e-12);
  }
}

TEST_CASE("improveStep raises the energy of the zero field") {
  ImproveOptions opt;
  opt.samples = 2000;
  opt.certifySamples = 100;
  opt.ell = 128;
  Box4 dom{{0, 0, 0, 0}, {1, 1, 1, 1}};
  auto [field, rep] = improveStep([](const Vec4&) { return State15{}; }, dom, opt);
  CHECK(rep.gain > 0);
  CHECK(rep.certifyFailures == 0);
  CHECK(rep.deficit == doctest::Approx(2.5));
  // deterministic under a fixed seed
  auto [field2, rep2] = improveStep([](const Vec4&) { return State15{}; }, dom, opt);
  CHECK(rep.gain == rep2.gain);
  CHECK(rep.weakDistance == rep2.weakDistance);

  State15 big = kState({1.6, 0, 0}, {0, 1.2, 0});
  CHECK_THROWS_AS(improveStep([&](const Vec4&) { return big; }, dom, opt),
                  NotSubsolution);
}
