#include "mhdci/wave_synthesis.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <random>

namespace mhdci {

State15 project(const State17& w) {
  Bivector om = wedge(w.v, w.w);
  return {w.u, w.S, om.b, om.e};
}

struct LocalizedWave::Cell {
  enum class Mode { Clebsch, TwoDir };
  Mode mode = Mode::Clebsch;
  CubeSpec tpl;  // center is set per lattice site at evaluation time
  double ell = 16;
  SawtoothProfile saw;
  State15 dirV;  // segment direction, for the leading-order profile

  // Clebsch oscillation along ξ
  Vec4 xi;
  double c1 = 0, c2 = 0;
  std::optional<FluidPotential> fluid;

  // two-direction oscillation for type-4 segments
  Vec4 vbar, wbar;

  struct Branch {
    State17 delta;  // exact plateau increment
    std::shared_ptr<const Cell> child;
    int atom = -1;  // leaf atom index (−1 when a child cell continues)
    SawtoothProfile::Interval win, win2;
  };
  // Clebsch: {plus, minus}; TwoDir: quadrants (+,+), (+,−), (−,+), (−,−)
  std::vector<Branch> branches;
};

namespace {

using Cell = LocalizedWave::Cell;

constexpr double kLeafTol = 1e-6;

struct Slab {
  Vec4 dir;     // phase covector, already scaled: value = dir·(q − ref)
  Vec4 ref;
  double lo = 0, hi = 0;
};

// Lattice subcube of the child template containing p, provided the whole
// subcube sits inside the parent plateau region (χ = 1 and all slabs).
bool findSubcube(const CubeSpec& parent, const CubeSpec& childTpl, const Vec4& anchor,
                 const std::vector<Slab>& slabs, const Vec4& p, Vec4& outCenter) {
  double pitch = childTpl.side;
  Vec4 c = anchor;
  for (int j = 0; j < 4; ++j) {
    double y = dot(childTpl.frame[j], p - anchor);
    c += childTpl.frame[j] * (std::floor(y / pitch + 0.5) * pitch);
  }
  double h = childTpl.side / 2;
  for (int m = 0; m < 16; ++m) {
    Vec4 q = c;
    for (int j = 0; j < 4; ++j) q += childTpl.frame[j] * (((m >> j) & 1) ? h : -h);
    if (!parent.insideInner(q)) return false;
    for (const Slab& s : slabs) {
      double v = dot(s.dir, q - s.ref);
      if (v < s.lo || v > s.hi) return false;
    }
  }
  outCenter = c;
  return true;
}

struct EvalOut {
  State17 W;
  int atom = -1;
};

EvalOut evalCell(const Cell& c, const State17& Wb, const Vec4& center, const Vec4& p) {
  CubeSpec cube = c.tpl;
  cube.center = center;
  if (!cube.insideSupport(p)) return {Wb, -1};

  State17 W = Wb;
  double chi = cube.chi(p);
  Vec4 g = cube.gradChi(p);
  bool inner = cube.insideInner(p);

  if (c.mode == Cell::Mode::Clebsch) {
    double kap = c.ell / (cube.side * norm(c.xi));
    double s = kap * dot(c.xi, p - center);
    double hppv = c.saw.hpp(s);
    Vec4 pert = g * (c.saw.hp(s) / kap) + c.xi * (chi * hppv);
    W.v += pert * c.c1;
    W.w += pert * c.c2;
    if (c.fluid) {
      Mat4 H = cube.hessChi(p) * (c.saw.h(s) / (kap * kap));
      Mat4 xg = outer4(g, c.xi);
      H += (xg + xg.transpose()) * (c.saw.hp(s) / kap);
      H += outer4(c.xi, c.xi) * (chi * hppv);
      Mat4 P = c.fluid->apply(H);
      Vec3 du;
      Mat3 dS;
      splitFlux(P, du, dS);
      W.u += du;
      W.S += dS;
    }
    int pl = inner ? c.saw.plateau(s) : 0;
    if (pl != 0) {
      const Cell::Branch& br = c.branches[pl > 0 ? 0 : 1];
      if (!br.child) return {Wb + br.delta, br.atom};
      double k = std::floor(s);
      Vec4 anchor = center + c.xi * ((k + br.win.mid()) / (kap * dot(c.xi, c.xi)));
      std::vector<Slab> slabs{{c.xi * kap, center, k + br.win.lo, k + br.win.hi}};
      Vec4 sub;
      if (findSubcube(cube, br.child->tpl, anchor, slabs, p, sub))
        return evalCell(*br.child, Wb + br.delta, sub, p);
      return {Wb + br.delta, -1};
    }
    return {W, -1};
  }

  // two-direction mode
  double kv = c.ell / (cube.side * norm(c.vbar));
  double kw = c.ell / (cube.side * norm(c.wbar));
  double sv = kv * dot(c.vbar, p - center);
  double sw = kw * dot(c.wbar, p - center);
  W.v += g * (c.saw.hp(sv) / kv) + c.vbar * (chi * c.saw.hpp(sv));
  W.w += (g * (c.saw.hp(sw) / kw) + c.wbar * (chi * c.saw.hpp(sw))) * 2.0;
  int pv = inner ? c.saw.plateau(sv) : 0;
  int pw = inner ? c.saw.plateau(sw) : 0;
  if (pv != 0 && pw != 0) {
    int q = (pv < 0 ? 2 : 0) + (pw < 0 ? 1 : 0);
    const Cell::Branch& br = c.branches[q];
    if (!br.child) return {Wb + br.delta, br.atom};
    double iv = std::floor(sv), iw = std::floor(sw);
    Vec4 anchor = center + c.vbar * ((iv + br.win.mid()) / (kv * dot(c.vbar, c.vbar))) +
                  c.wbar * ((iw + br.win2.mid()) / (kw * dot(c.wbar, c.wbar)));
    std::vector<Slab> slabs{{c.vbar * kv, center, iv + br.win.lo, iv + br.win.hi},
                            {c.wbar * kw, center, iw + br.win2.lo, iw + br.win2.hi}};
    Vec4 sub;
    if (findSubcube(cube, br.child->tpl, anchor, slabs, p, sub))
      return evalCell(*br.child, Wb + br.delta, sub, p);
    return {Wb + br.delta, -1};
  }
  return {W, -1};
}

struct Builder {
  SynthesisOptions opt;
  std::vector<double> sched;
  std::map<const LaminateNode*, int> atomIndex;
  std::vector<State15> atomStates;
  std::vector<double> atomWeights;

  double ellAt(int level) const {
    if (sched.empty()) return 16.0;
    return sched[std::min<size_t>(level, sched.size() - 1)];
  }

  int registerLeaf(const LaminateNode* leaf, const State17& W, double weight) {
    double scale = 1.0 + norm(leaf->state);
    if (norm(project(W) - leaf->state) > kLeafTol * scale)
      throw BadSegment("laminate atom is not reproduced by the potentials");
    auto [it, fresh] = atomIndex.try_emplace(leaf, (int)atomStates.size());
    if (fresh) {
      atomStates.push_back(leaf->state);
      atomWeights.push_back(0.0);
    }
    atomWeights[it->second] += weight;
    return it->second;
  }

  std::shared_ptr<Cell> buildNode(const State17& Wb, const LaminateNode& n,
                                  double side, int level, double weight);
  std::shared_ptr<Cell> buildClebsch(const State17& Wb, const State15& dir,
                                     double lambda, const WaveVector& cert,
                                     const LaminateNode* plus, const LaminateNode* minus,
                                     double side, int level, double weight);
  std::shared_ptr<Cell> buildTwoDir(const State17& Wb, const LaminateNode& n,
                                    double side, int level, double weight);

  void attach(Cell::Branch& br, const State17& Wchild, const LaminateNode* node,
              double plateauLen, const Cell& parent, double side, int level,
              double weight) {
    if (node->leaf()) {
      br.atom = registerLeaf(node, Wchild, weight);
      return;
    }
    double thickness = plateauLen * side / parent.ell;
    br.child = buildNode(Wchild, *node, thickness / opt.subRefine, level + 1, weight);
  }
};

std::shared_ptr<Cell> Builder::buildClebsch(const State17& Wb, const State15& dir,
                                            double lambda, const WaveVector& cert,
                                            const LaminateNode* plus,
                                            const LaminateNode* minus, double side,
                                            int level, double weight) {
  auto c = std::make_shared<Cell>();
  c->mode = Cell::Mode::Clebsch;
  c->ell = ellAt(level);
  if (c->ell < opt.minEll) throw FrequencyTooLow("oscillation count below the minimum");
  c->xi = cert.vec();
  c->saw = buildSawtooth(lambda, opt.eps);
  c->dirV = dir;
  c->tpl = makeCube({}, side, opt.eps, normalized(c->xi));

  Bivector omBar = maxwellForm(dir);
  double dscale = 1.0 + norm(dir);
  if (norm(omBar) > 1e-14 * dscale) {
    // ω̄∧ξ = 0 makes ω̄ = z∧ξ with z = Ω̄ξ/|ξ|²; expressing z over the
    // normalized factors and ξ avoids squaring the conditioning when the
    // factors drift apart in norm across levels
    Vec4 z = (bivectorMatrix(omBar) * c->xi) / dot(c->xi, c->xi);
    if (norm(wedge(z, c->xi) + omBar) < norm(wedge(z, c->xi) - omBar)) z = -z;
    double nv = norm(Wb.v), nw = norm(Wb.w), nx = norm(c->xi);
    if (nv <= 1e-14 * (1.0 + norm(Wb)) || nw <= 1e-14 * (1.0 + norm(Wb)))
      throw BadSegment("potential condition has no solution for this base");
    std::vector<std::vector<double>> A(4, std::vector<double>(3));
    std::vector<double> rhs(4);
    for (int i = 0; i < 4; ++i) {
      A[i][0] = Wb.v[i] / nv;
      A[i][1] = Wb.w[i] / nw;
      A[i][2] = c->xi[i] / nx;
      rhs[i] = z[i];
    }
    auto sol = leastSquares(A, rhs);
    c->c2 = sol[0] / nv;
    c->c1 = -sol[1] / nw;
    double res = norm(wedge(Wb.v * c->c2 - Wb.w * c->c1, c->xi) - omBar);
    if (res > 1e-7 * (1.0 + norm(omBar)))
      throw BadSegment("potential condition has no solution for this base (residual " +
                       std::to_string(res) + ")");
  }
  if (norm(dir.u) + frobenius(dir.S) > 1e-14 * dscale)
    c->fluid.emplace(spaceTimeFlux(dir.u, dir.S), cert);

  c->branches.resize(2);
  const double fac[2] = {lambda, -(1.0 - lambda)};
  const LaminateNode* kids[2] = {plus, minus};
  const double share[2] = {1.0 - lambda, lambda};
  for (int i = 0; i < 2; ++i) {
    Cell::Branch& br = c->branches[i];
    br.delta = State17{dir.u * fac[i], dir.S * fac[i], c->xi * (c->c1 * fac[i]),
                       c->xi * (c->c2 * fac[i])};
    br.win = c->saw.plateauInterval(i == 0 ? +1 : -1);
    attach(br, Wb + br.delta, kids[i], br.win.length(), *c, side, level,
           weight * share[i]);
  }
  return c;
}

std::shared_ptr<Cell> Builder::buildTwoDir(const State17& Wb, const LaminateNode& n,
                                           double side, int level, double weight) {
  double scale = 1.0 + norm(Wb);
  if (norm(Wb.v) + norm(Wb.w) > 1e-8 * scale)
    throw BadSegment("nonzero Clebsch factors at the base of a type-4 segment");
  auto c = std::make_shared<Cell>();
  c->mode = Cell::Mode::TwoDir;
  c->ell = ellAt(level);
  if (c->ell < opt.minEll) throw FrequencyTooLow("oscillation count below the minimum");
  c->saw = buildSawtooth(0.5, opt.eps);
  c->dirV = n.direction;

  double lambda = n.lambda;
  bool half = std::abs(lambda - 0.5) < 1e-12;
  double delta = half ? 0.5 : std::min(lambda, 1.0 - lambda) / 2.0;

  Bivector omBar = maxwellForm(n.direction);
  auto [f1, f2] = factorize(omBar);
  Vec4 w2 = f2 - f1 * (dot(f1, f2) / dot(f1, f1));
  double n1 = norm(f1), n2 = norm(w2);
  if (n2 <= 0) throw BadSegment("degenerate direction bivector");
  c->vbar = f1 * std::sqrt(2.0 * delta * n2 / n1);
  c->wbar = w2 * std::sqrt(2.0 * delta * n1 / n2);
  c->tpl = makeCube({}, side, opt.eps, normalized(c->vbar), normalized(c->wbar));

  SawtoothProfile::Interval wins[2] = {c->saw.plateauInterval(+1),
                                       c->saw.plateauInterval(-1)};
  c->branches.resize(4);
  for (int q = 0; q < 4; ++q) {
    int pv = (q & 2) ? -1 : +1, pw = (q & 1) ? -1 : +1;
    Cell::Branch& br = c->branches[q];
    br.delta = State17{{}, {}, c->vbar * (0.5 * pv), c->wbar * (double)pw};
    br.win = wins[pv > 0 ? 0 : 1];
    br.win2 = wins[pw > 0 ? 0 : 1];
    double plateauLen = std::min(br.win.length(), br.win2.length());
    State17 Wq = Wb + br.delta;
    if (half) {
      const LaminateNode* kid = (pv * pw > 0) ? n.plus.get() : n.minus.get();
      attach(br, Wq, kid, plateauLen, *c, side, level, weight * 0.25);
    } else {
      // bump to ±δ V̄ first, then finish along V̄ with the shifted weight
      double lam2 = (pv * pw > 0) ? lambda - delta : lambda + delta;
      double thickness = plateauLen * side / c->ell;
      br.child = buildClebsch(Wq, n.direction, lam2, n.certificate, n.plus.get(),
                              n.minus.get(), thickness / opt.subRefine, level + 1,
                              weight * 0.25);
    }
  }
  return c;
}

std::shared_ptr<Cell> Builder::buildNode(const State17& Wb, const LaminateNode& n,
                                         double side, int level, double weight) {
  double scale = 1.0 + norm(n.state);
  if (norm(project(Wb) - n.state) > kLeafTol * scale)
    throw BadSegment("lifted base does not project onto the laminate state");
  using K = GoodnessVerdict::Kind;
  switch (n.verdict.kind) {
    case K::Good1:
    case K::Good2:
    case K::Good3:
      return buildClebsch(Wb, n.direction, n.lambda, n.certificate, n.plus.get(),
                          n.minus.get(), side, level, weight);
    case K::Good4:
      return buildTwoDir(Wb, n, side, level, weight);
    case K::Bad:
      throw BadSegment("laminate contains a bad split");
  }
  throw BadSegment("unknown verdict");
}

double unitSample(std::mt19937_64& rng) {
  return (double)(rng() >> 11) * 0x1.0p-53 - 0.5;
}

}  // namespace

State17 LocalizedWave::evalW(const Vec4& p) const {
  if (!root_) return base_;
  return evalCell(*root_, base_, cube_.center, p).W;
}

State15 LocalizedWave::eval(const Vec4& p) const { return project(evalW(p)); }

LocalizedWave::PointInfo LocalizedWave::evalInfo(const Vec4& p) const {
  if (!root_) return {base_, -1};
  EvalOut e = evalCell(*root_, base_, cube_.center, p);
  return {e.W, e.atom};
}

State15 LocalizedWave::leadingOrder(const Vec4& p) const {
  State15 V0 = project(base_);
  if (!root_) return V0;
  const Cell& c = *root_;
  CubeSpec cube = c.tpl;
  cube.center = cube_.center;
  if (!cube.insideSupport(p)) return V0;
  double chi = cube.chi(p);
  if (c.mode == Cell::Mode::Clebsch) {
    double kap = c.ell / (cube.side * norm(c.xi));
    double s = kap * dot(c.xi, p - cube.center);
    return V0 + c.dirV * (chi * c.saw.hpp(s));
  }
  double kv = c.ell / (cube.side * norm(c.vbar));
  double kw = c.ell / (cube.side * norm(c.wbar));
  Vec4 dphi = c.vbar * (chi * c.saw.hpp(kv * dot(c.vbar, p - cube.center)));
  Vec4 dpsi = c.wbar * (2.0 * chi * c.saw.hpp(kw * dot(c.wbar, p - cube.center)));
  Bivector om = wedge(base_.v + dphi, base_.w + dpsi);
  return {V0.u, V0.S, om.b, om.e};
}

LocalizedWave synthesizeLaminate(const State17& W0, const Laminate& lam,
                                 const CubeSpec& cube,
                                 const std::vector<double>& ellSchedule,
                                 const SynthesisOptions& opt) {
  if (!lam.root) throw BadSegment("empty laminate");
  if (lam.depth() > kMaxSplitDepth) throw DepthExceeded("laminate too deep");
  if ((int)ellSchedule.size() < lam.depth())
    throw DepthExceeded("frequency schedule shorter than the laminate depth");
  LocalizedWave w;
  w.base_ = W0;
  if (lam.root->leaf()) {
    double scale = 1.0 + norm(lam.root->state);
    if (norm(project(W0) - lam.root->state) > kLeafTol * scale)
      throw BadSegment("lifted base does not project onto the laminate state");
    w.cube_ = cube;
    w.atomStates_ = {lam.root->state};
    w.atomWeights_ = {1.0};
    return w;
  }
  Builder b;
  b.opt = opt;
  b.sched = ellSchedule;
  auto root = b.buildNode(W0, *lam.root, cube.side, 0, 1.0);
  w.cube_ = root->tpl;
  w.cube_.center = cube.center;
  w.root_ = root;
  w.atomStates_ = std::move(b.atomStates);
  w.atomWeights_ = std::move(b.atomWeights);
  return w;
}

LocalizedWave synthesizeWave(const State17& W0, const SegmentSpec& seg,
                             const CubeSpec& cube, double ell,
                             const SynthesisOptions& opt) {
  WaveVector cert;
  if (seg.certificate) {
    cert = *seg.certificate;
  } else {
    auto xi = inLambda(seg.direction, opt.classify.tol);
    if (!xi) throw BadSegment("direction is not in the wave cone");
    cert = *xi;
  }
  Laminate lam;
  try {
    lam.root = makeSplit(seg.base, seg.lambda, seg.direction, cert,
                         makeLeaf(endpointPlus(seg)), makeLeaf(endpointMinus(seg)),
                         opt.classify);
  } catch (const std::exception& e) {
    throw BadSegment(std::string("invalid segment: ") + e.what());
  }
  return synthesizeLaminate(W0, lam, cube, {ell}, opt);
}

PlateauReport measurePlateaus(const LocalizedWave& w, int samples, std::uint64_t seed) {
  PlateauReport rep;
  rep.fraction.assign(w.atomCount(), 0.0);
  std::mt19937_64 rng(seed);
  const CubeSpec& q = w.cube();
  for (int i = 0; i < samples; ++i) {
    Vec4 y{unitSample(rng), unitSample(rng), unitSample(rng), unitSample(rng)};
    auto info = w.evalInfo(q.global(y));
    if (info.atom >= 0)
      rep.fraction[info.atom] += 1.0;
    else
      rep.offPlateau += 1.0;
  }
  for (double& f : rep.fraction) f /= samples;
  rep.offPlateau /= samples;
  return rep;
}

double cancellationError(const LocalizedWave& w, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const CubeSpec& q = w.cube();
  double a = q.innerHalf();
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    Vec4 y{unitSample(rng), unitSample(rng), unitSample(rng), unitSample(rng)};
    if (i % 2 == 1) {
      // stratify into the thin cutoff transition where the error peaks
      int j = (int)(rng() % 4);
      double t = (unitSample(rng) + 0.5);
      double band = a + t * (0.5 - a);
      y[j] = (rng() & 1) ? band : -band;
    }
    Vec4 p = q.global(y);
    worst = std::max(worst, norm(w.eval(p) - w.leadingOrder(p)));
  }
  return worst;
}

}  // namespace mhdci
