#include "mhdci/improve.hpp"

#include <cmath>
#include <random>

#include "mhdci/hull.hpp"

namespace mhdci {

namespace {

double unit01(std::mt19937_64& rng) { return (double)(rng() >> 11) * 0x1.0p-53; }

State17 liftState(const State15& v) {
  Bivector om = maxwellForm(v);
  if (norm(om) <= 1e-12 * (1.0 + norm(v))) return {v.u, v.S, {}, {}};
  auto [a, b] = factorize(om);
  return {v.u, v.S, a, b};
}

double energy(const State15& v) { return norm2(v.u) + norm2(v.B); }

}  // namespace

State15 ImprovedField::eval(const Vec4& p) const {
  for (const auto& w : waves_)
    if (w.cube().insideSupport(p))
      return base_(p) + (w.eval(p) - project(w.base()));
  return base_(p);
}

std::pair<ImprovedField, ImproveReport> improveStep(const VField& V, const Box4& domain,
                                                    const ImproveOptions& opt) {
  const double r = opt.hull.base.r, s = opt.hull.base.s;
  const double eBound = 0.5 * (r * r + s * s);
  const double tau2 = opt.tau2 > 0 ? opt.tau2 : 0.5 * (1.0 + opt.hull.tau);
  Vec4 ext = domain.extent();

  // probe the deficit before covering
  double minDeficit = eBound;
  for (int m = 0; m < 17; ++m) {
    Vec4 y;
    for (int j = 0; j < 4; ++j)
      y[j] = (m == 16) ? 0.5 : (((m >> j) & 1) ? 0.95 : 0.05);
    Vec4 p = domain.lo;
    for (int j = 0; j < 4; ++j) p[j] += y[j] * ext[j];
    minDeficit = std::min(minDeficit, eBound - energy(V(p)));
  }
  if (minDeficit <= 0)
    throw NotSubsolution("field has no energy deficit");
  double gamma = opt.gamma > 0 ? opt.gamma : std::sqrt(minDeficit / 10.0);

  auto fineEnough = [&](const CubeSpec& q) {
    State15 vc = V(q.center);
    double budget = gamma * std::max(eBound - energy(vc), 0.0);
    for (int m = 0; m < 16; ++m) {
      Vec4 y;
      for (int j = 0; j < 4; ++j) y[j] = ((m >> j) & 1) ? 0.45 : -0.45;
      if (norm(V(q.global(y)) - vc) > budget) return false;
    }
    return true;
  };
  std::vector<CubeSpec> cover;
  try {
    cover = coverDomain(domain, fineEnough, opt.eps, opt.coverDepth);
  } catch (const ResolutionExceeded& e) {
    throw CoverFailure(std::string("cover refinement failed: ") + e.what());
  }

  ImprovedField field;
  field.base_ = V;
  HullParams hpDec;
  hpDec.base = {tau2 * r, tau2 * s};
  hpDec.tau = opt.hull.tau;
  HullParams hpGood;
  hpGood.base = opt.hull.base;
  hpGood.tau = tau2;
  GoodifyOptions gopt;
  gopt.classify = opt.synth.classify;

  for (const CubeSpec& q : cover) {
    State15 vc = V(q.center);
    Laminate lam;
    try {
      lam = decomposeFull(vc, hpDec);
    } catch (const NotInRelaxedSet& e) {
      throw NotSubsolution(std::string("cube value is not decomposable: ") + e.what());
    }
    Laminate good = goodify(lam, hpGood, gopt);
    Laminate trunc = truncated(good, opt.truncateDepth);
    if (!trunc.root || trunc.root->leaf()) continue;
    std::vector<double> sched(std::max(1, trunc.depth()), opt.ell);
    SynthesisOptions sopt = opt.synth;
    sopt.eps = opt.eps;
    field.waves_.push_back(synthesizeLaminate(liftState(vc), trunc, q, sched, sopt));
  }

  ImproveReport rep;
  rep.gamma = gamma;
  rep.cubes = (int)cover.size();

  std::mt19937_64 rng(opt.seed);
  auto samplePoint = [&]() {
    Vec4 p = domain.lo;
    for (int j = 0; j < 4; ++j) p[j] += unit01(rng) * ext[j];
    return p;
  };
  double defAcc = 0, gainAcc = 0;
  State15 weakAcc{};
  for (int i = 0; i < opt.samples; ++i) {
    Vec4 p = samplePoint();
    State15 vOld = V(p), vNew = field.eval(p);
    defAcc += eBound - energy(vOld);
    gainAcc += energy(vNew) - energy(vOld);
    double g = 1.0;
    for (int j = 0; j < 4; ++j) g *= std::sin(M_PI * (p[j] - domain.lo[j]) / ext[j]);
    weakAcc = weakAcc + (vNew - vOld) * g;
  }
  rep.deficit = defAcc / opt.samples;
  rep.gain = gainAcc / opt.samples;
  rep.cHat = rep.deficit != 0 ? rep.gain / rep.deficit : 0.0;
  rep.weakDistance = norm(weakAcc * (1.0 / opt.samples));

  // decomposability of the improved field on a retry grid of scales
  const double taus[3] = {tau2, opt.hull.tau, 0.5 * (tau2 + 1.0)};
  for (int i = 0; i < opt.certifySamples; ++i) {
    State15 vNew = field.eval(samplePoint());
    bool ok = false;
    for (double t : taus) {
      HullParams hp;
      hp.base = opt.hull.base;
      hp.tau = t;
      try {
        decomposeFull(vNew, hp);
        ok = true;
        break;
      } catch (const std::exception&) {
      }
    }
    if (ok)
      ++rep.certified;
    else
      ++rep.certifyFailures;
  }

  // finite-difference residual of the space-time conservation laws
  double h = opt.fdStep;
  for (int i = 0; i < 24; ++i) {
    Vec4 p = samplePoint();
    for (int j = 0; j < 4; ++j)
      p[j] = std::min(std::max(p[j], domain.lo[j] + 2 * h), domain.hi[j] - 2 * h);
    State15 dp[4], dm[4];
    for (int j = 0; j < 4; ++j) {
      Vec4 qp = p, qm = p;
      qp[j] += h;
      qm[j] -= h;
      dp[j] = field.eval(qp);
      dm[j] = field.eval(qm);
    }
    auto d = [&](int j) { return (dp[j] - dm[j]) * (0.5 / h); };
    double divU = d(0).u.x + d(1).u.y + d(2).u.z;
    double divB = d(0).B.x + d(1).B.y + d(2).B.z;
    Vec3 mom = d(3).u;
    for (int j = 0; j < 3; ++j) {
      State15 dj = d(j);
      mom += {dj.S(0, j), dj.S(1, j), dj.S(2, j)};
    }
    Vec3 far = d(3).B + Vec3{d(1).E.z - d(2).E.y, d(2).E.x - d(0).E.z,
                             d(0).E.y - d(1).E.x};
    rep.maxResidual = std::max({rep.maxResidual, std::abs(divU), std::abs(divB),
                                norm(mom), norm(far)});
  }
  return {std::move(field), rep};
}

}  // namespace mhdci
