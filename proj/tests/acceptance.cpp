// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the binary exits nonzero if any check fails. Tolerances are fixed here,
// not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "mhdci/evolve2d.hpp"
#include "mhdci/conserved.hpp"
#include "mhdci/improve.hpp"

using namespace mhdci;

namespace {

int g_failures = 0;

#define CHECK_MSG(cond, ...)                                     \
  do {                                                           \
    if (!(cond)) {                                               \
      std::printf("  [FAIL] %s:%d ", __FILE__, __LINE__);        \
      std::printf(__VA_ARGS__);                                  \
      std::printf("\n");                                         \
      ++g_failures;                                              \
    }                                                            \
  } while (0)

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int num, const char* what, const Timer& t, int failsBefore, double budget) {
  double sec = t.seconds();
  if (budget > 0 && sec > budget) {
    std::printf("  [FAIL] criterion %d exceeded its time budget: %.1fs > %.0fs\n", num,
                sec, budget);
    ++g_failures;
  }
  std::printf("[%s] %d %s (%.2fs)\n", g_failures == failsBefore ? "PASS" : "FAIL", num,
              what, sec);
}

double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }
Vec3 rand3(std::mt19937_64& rng) {
  return {2 * u01(rng) - 1, 2 * u01(rng) - 1, 2 * u01(rng) - 1};
}
Vec4 rand4(std::mt19937_64& rng) {
  return {2 * u01(rng) - 1, 2 * u01(rng) - 1, 2 * u01(rng) - 1, 2 * u01(rng) - 1};
}

// bivector algebra: null form identity and factorization round trip
void criterion1() {
  Timer t;
  int before = g_failures;
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 10000; ++i) {
    Bivector w{rand3(rng), rand3(rng)};
    CHECK_MSG(std::abs(wedgeSquare(w) - 2.0 * dot(w.b, w.e)) < 1e-13,
              "wedge square identity off at i=%d", i);
    Vec4 a = rand4(rng), b = rand4(rng);
    Bivector om = wedge(a, b);
    if (norm(om) < 1e-6) continue;
    auto [v, w2] = factorize(om);
    double err = norm(wedge(v, w2) - om);
    CHECK_MSG(err < 1e-12 * (1.0 + norm(om)), "factorize error %.3e at i=%d", err, i);
  }
  report(1, "bivector algebra and factorization", t, before, 1.0);
}

// wave-cone certificates: residuals and rejection of B·E != 0
void criterion2() {
  Timer t;
  int before = g_failures;
  std::mt19937_64 rng(1002);
  for (int i = 0; i < 10000; ++i) {
    Vec3 u = rand3(rng), B = rand3(rng);
    Vec3 E = cross(B, rand3(rng));
    WaveVector xi = findXi(u, B, E);
    double scale = 1.0 + norm(xi.vec()) * (norm(B) + norm(E));
    CHECK_MSG(std::abs(dot(xi.xiX, B)) <= 1e-11 * scale, "xi not orthogonal to B, i=%d", i);
    CHECK_MSG(norm(B * xi.xiT + cross(xi.xiX, E)) <= 1e-11 * scale,
              "faraday residual too large, i=%d", i);
  }
  for (int i = 0; i < 10000; ++i) {
    Vec3 xiX = normalized(rand3(rng));
    double xiT = 2 * u01(rng) - 1;
    Vec3 u = cross(xiX, rand3(rng));
    Vec3 B = cross(xiX, rand3(rng));
    Mat3 S = solveMatrixEq(xiX, -u * xiT);
    Vec3 E = cross(xiX, B) * xiT + xiX * (2 * u01(rng) - 1);
    State15 dir{u, S, B, E};
    auto cert = inLambda(dir);
    CHECK_MSG(cert.has_value(), "cone direction not recognized, i=%d", i);
    if (cert)
      CHECK_MSG(coneResiduals(dir, *cert).total() <= 1e-11 * (1.0 + norm(dir)),
                "certificate residual too large, i=%d", i);
  }
  int rejected = 0;
  for (int i = 0; i < 10000; ++i) {
    Vec3 u = rand3(rng), B = rand3(rng), E = rand3(rng);
    if (std::abs(dot(B, E)) < 1e-8) continue;
    ++rejected;
    bool threw = false;
    try {
      findXi(u, B, E);
    } catch (const NotInCone&) {
      threw = true;
    }
    CHECK_MSG(threw, "B.E != 0 accepted by findXi, i=%d", i);
    CHECK_MSG(!inLambda(State15{u, Mat3::zero(), B, E}).has_value(),
              "B.E != 0 accepted by inLambda, i=%d", i);
  }
  CHECK_MSG(rejected > 9000, "rejection sample degenerated");
  report(2, "wave-cone certificates", t, before, 5.0);
}

// hull decomposition onto the constitutive set
void criterion3() {
  Timer t;
  int before = g_failures;
  ConstraintParams p{2.0, 1.0};
  for (double tau : {0.5, 0.9}) {
    HullParams hp{{p.r, p.s}, tau};
    std::mt19937_64 rng(1003);
    for (int i = 0; i < 1000; ++i) {
      State15 v = sampleRelaxedState(rng, hp);
      Laminate lam = decomposeFull(v, hp);
      double bc = norm(lam.barycenter() - v);
      CHECK_MSG(bc <= 1e-10 * (1.0 + norm(v)), "barycenter drift %.3e (tau=%g i=%d)",
                bc, tau, i);
      for (const Atom& a : lam.atoms()) {
        double d = distanceToK(a.state, p);
        CHECK_MSG(d < 1e-9 * (1.0 + norm(a.state)), "atom %.3e from K (tau=%g i=%d)", d,
                  tau, i);
      }
      // every split direction must carry a valid wave-cone certificate;
      // goodness of the splits is the repair pass's job, tested separately
      CertifyReport rep = certify(lam);
      CHECK_MSG(rep.ok, "split certification failed (tau=%g i=%d)", tau, i);
      if (tau == 0.9)
        CHECK_MSG(energyEstimateHolds(v, lam, p), "energy estimate failed (i=%d)", i);
    }
  }
  report(3, "hull decomposition", t, before, 30.0);
}

// rigidity: good segments with constitutive endpoints force E = B x u
void criterion4() {
  Timer t;
  int before = g_failures;
  std::mt19937_64 rng(1004);
  int checked = 0;
  while (checked < 1000) {
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
    if (classifySegment(seg).kind == GoodnessVerdict::Kind::Bad) continue;
    ++checked;
    CHECK_MSG(rigidityCheck(seg), "rigidity check failed at %d", checked);
    double err = norm(seg.base.E - cross(seg.base.B, seg.base.u));
    CHECK_MSG(err <= 1e-10 * (1.0 + norm(seg.base)), "constitutive law off by %.3e", err);
  }
  report(4, "rigidity of good segments", t, before, 0);
}

// goodify removes seeded bad splits without moving the barycenter
void criterion5() {
  Timer t;
  int before = g_failures;
  std::mt19937_64 rng(1005);
  int done = 0;
  while (done < 100) {
    // bad split: base and direction both decomposable against the same xi but
    // along independent lines, so no goodness case applies
    Vec3 xiX = normalized(rand3(rng));
    WaveVector xi{xiX, 0.3 * (2 * u01(rng) - 1)};
    Vec4 v0 = rand4(rng), w0 = rand4(rng);
    Bivector om0 = wedge(v0, xi.vec());
    Bivector om = wedge(w0, xi.vec());
    if (norm(om0) < 0.1 || norm(om) < 0.1) continue;
    State15 base{{}, Mat3::zero(), om0.b, om0.e};
    State15 dir{{}, Mat3::zero(), om.b, om.e};
    double lambda = 0.3 + 0.4 * u01(rng);
    Laminate lam{makeSplit(base, lambda, dir, xi,
                           makeLeaf(base + dir * lambda),
                           makeLeaf(base - dir * (1.0 - lambda)))};
    if (certify(lam).badVerdicts != 1) continue;
    ++done;
    HullParams hp{{4.0, 4.0}, 0.5};
    hp.epsTauOverride = 8.0;
    Laminate good = goodify(lam, hp);
    CertifyReport rep = certify(good);
    CHECK_MSG(rep.ok, "repaired laminate fails certification (case %d)", done);
    CHECK_MSG(rep.badVerdicts == 0, "%d bad verdicts remain (case %d)", rep.badVerdicts,
              done);
    double bc = norm(good.barycenter() - lam.barycenter());
    CHECK_MSG(bc <= 1e-10 * (1.0 + norm(lam.barycenter())), "barycenter moved %.3e", bc);
  }
  report(5, "laminate repair", t, before, 0);
}

// cancellation error decays like 1/ell; plateau fractions match the weights
void criterion6() {
  Timer t;
  int before = g_failures;
  double lambda = 0.4;
  Vec4 v0{1, 0, 0, 0}, w0{0, 1, 0, 0};
  WaveVector xi{{0, 0, 1}, 0.25};
  Bivector om0 = wedge(v0, w0);
  Bivector om = wedge(v0 * 2.0 - w0, xi.vec());
  SegmentSpec seg{State15{{}, Mat3::zero(), om0.b, om0.e},
                  State15{{}, Mat3::zero(), om.b, om.e}, lambda, xi};
  CubeSpec cube = makeCube({0, 0, 0, 0}, 1.0, 0.05);
  State17 W0{{}, {}, v0, w0};
  std::vector<double> ells{8, 16, 32, 64};
  std::vector<double> errs;
  LocalizedWave finest = synthesizeWave(W0, seg, cube, ells.back());
  for (double ell : ells)
    errs.push_back(cancellationError(synthesizeWave(W0, seg, cube, ell), 20000, 9));
  // least-squares slope of log(err) against log(ell)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ells.size(); ++i) {
    double x = std::log(ells[i]), y = std::log(errs[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  double nPts = double(ells.size());
  double slope = (nPts * sxy - sx * sy) / (nPts * sxx - sx * sx);
  CHECK_MSG(std::abs(slope + 1.0) <= 0.2, "decay slope %.3f not within -1 +/- 0.2", slope);
  PlateauReport pr = measurePlateaus(finest, 40000, 10);
  CHECK_MSG(pr.fraction.size() == 2, "unexpected plateau count");
  if (pr.fraction.size() == 2) {
    CHECK_MSG(std::abs(pr.fraction[0] - (1.0 - lambda)) <= 0.05,
              "plus plateau fraction %.3f vs %.3f", pr.fraction[0], 1.0 - lambda);
    CHECK_MSG(std::abs(pr.fraction[1] - lambda) <= 0.05,
              "minus plateau fraction %.3f vs %.3f", pr.fraction[1], lambda);
  }
  report(6, "cancellation decay and plateau fractions", t, before, 120.0);
}

// one improvement step on the zero field
void criterion7() {
  Timer t;
  int before = g_failures;
  ImproveOptions opt;  // (r,s) = (2,1), tau = 0.9
  opt.certifySamples = 1000;
  Box4 dom{{0, 0, 0, 0}, {1, 1, 1, 1}};
  auto [field, rep] = improveStep([](const Vec4&) { return State15{}; }, dom, opt);
  CHECK_MSG(rep.gain > 0, "energy gain %.3e not positive", rep.gain);
  CHECK_MSG(rep.certified == opt.certifySamples && rep.certifyFailures == 0,
            "%d of %d sample points failed decomposition", rep.certifyFailures,
            opt.certifySamples);
  std::printf("  gain %.3e, measured constant %.3e, cubes %d\n", rep.gain, rep.cHat,
              rep.cubes);
  report(7, "improvement step", t, before, 300.0);
}

// magnetic helicity: exact value and drift bound
void criterion8() {
  Timer t;
  int before = g_failures;
  double twoPiCubed = 8.0 * M_PI * M_PI * M_PI;
  VecField3 B = sampleField(64, beltramiSample);
  double H = magneticHelicity(B);
  CHECK_MSG(std::abs(H - twoPiCubed) <= 1e-6, "Beltrami helicity off by %.3e",
            std::abs(H - twoPiCubed));
  HelicityDriftReport rep = maxwellHelicityDrift(32, 0.02, 1.0);
  CHECK_MSG(rep.drift <= rep.bound, "helicity drift %.3e exceeds bound %.3e", rep.drift,
            rep.bound);
  report(8, "magnetic helicity", t, before, 60.0);
}

// 2-d evolution: flux-integral conservation order and the energy floor
void criterion9() {
  Timer t;
  int before = g_failures;
  double floorB = 0, minB = 0, consErr = 0;
  auto run = [&](double dt, bool track) {
    Evolve2DSolver s(256);
    s.setInitial(shearedVortexInit);
    double p0 = s.psiL2();
    if (track) {
      floorB = p0;
      minB = s.magneticEnergy();
    }
    int steps = int(std::lround(1.0 / dt));
    for (int i = 0; i < steps; ++i) {
      s.step(dt);
      if (track) minB = std::min(minB, s.magneticEnergy());
    }
    return std::abs(s.psiL2() - p0);
  };
  double eCoarse = run(8e-3, true);
  consErr = eCoarse;
  double eFine = run(4e-3, false);
  CHECK_MSG(eCoarse / eFine >= 8.0, "conservation ratio %.2f below 8 (%.3e / %.3e)",
            eCoarse / eFine, eCoarse, eFine);
  CHECK_MSG(minB >= floorB - consErr - 1e-9 * floorB,
            "magnetic energy %.6f fell below the floor %.6f", minB, floorB);
  report(9, "2-d conservation and energy floor", t, before, 120.0);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (g_failures) {
    std::printf("%d check(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
