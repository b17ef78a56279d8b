#include "mhdci/hull.hpp"

#include <algorithm>

namespace mhdci {

namespace {

State15 elsasser(const Vec3& zp, const Vec3& zm, const Mat3& M) {
  return fromElsasser({zp, zm, M});
}

// certificate orthogonal to both a and b (either may be zero or parallel);
// built by Gram-Schmidt so the answer stays accurate for tiny vectors, where
// an absolute threshold on the cross product would misread a genuine angle
// as parallelism
Vec3 orthogonalToPair(const Vec3& a, const Vec3& b) {
  double na = norm(a), nb = norm(b);
  if (na == 0.0 && nb == 0.0) return {0, 0, 1};
  Vec3 ph = (na >= nb ? a : b) / std::max(na, nb);
  Vec3 q = na >= nb ? b : a;
  Vec3 q2 = q - ph * dot(ph, q);
  q2 = q2 - ph * dot(ph, q2);
  double nq2 = norm(q2);
  if (nq2 <= 1e-12 * std::min(na, nb) || nq2 == 0.0) return anyOrthogonal(ph);
  return normalized(cross(ph, q2 / nq2));
}

}  // namespace

Laminate relaxNormalization(const Vec3& zPlus, const Vec3& zMinus, double Pi,
                            const ConstraintParams& p) {
  double tp = norm(zPlus), tm = norm(zMinus);
  if (tp >= p.r) throw OutOfRange("|z+| >= r");
  if (tm >= p.s) throw OutOfRange("|z-| >= s");
  if (std::abs(Pi) > p.pressureBound()) throw OutOfRange("|Pi| > rs");

  double tiny = 1e-14 * (1.0 + tp + tm + p.r + p.s);
  Vec3 ahat = tp > tiny ? zPlus / tp
                        : (tm > tiny ? anyOrthogonal(zMinus) : Vec3{1, 0, 0});
  double lam1 = 0.5 * (1.0 - tp / p.r);
  State15 v0 = elsasser(zPlus, zMinus, outer(zPlus, zMinus) + Mat3::identity() * Pi);
  State15 dir1 = elsasser(ahat * (2.0 * p.r), Vec3{}, outer(ahat, zMinus) * (2.0 * p.r));
  WaveVector cert1{orthogonalToPair(ahat, zMinus), 0.0};

  auto stageTwo = [&](const State15& child, const Vec3& w) {
    Vec3 bhat = tm > tiny ? zMinus / tm : anyOrthogonal(w);
    double lam2 = 0.5 * (1.0 - tm / p.s);
    State15 dir2 = elsasser(Vec3{}, bhat * (2.0 * p.s), outer(w, bhat) * (2.0 * p.s));
    WaveVector cert2{orthogonalToPair(w, bhat), 0.0};
    return makeSplit(child, lam2, dir2, cert2,
                     makeLeaf(child + dir2 * lam2),
                     makeLeaf(child - dir2 * (1.0 - lam2)));
  };

  State15 cPlus = v0 + dir1 * lam1;
  State15 cMinus = v0 - dir1 * (1.0 - lam1);
  auto root = makeSplit(v0, lam1, dir1, cert1,
                        stageTwo(cPlus, ahat * p.r), stageTwo(cMinus, -ahat * p.r));
  return Laminate{std::move(root)};
}

namespace {

// shared by addRankOne and the positive branch of relaxFluid: split off one
// +e⊗e stress term; residual symmetric defect Srest rides along to the children
std::unique_ptr<LaminateNode> rankOneSplit(const Vec3& u, const Vec3& B, const Vec3& e,
                                           const Mat3& Srest, double Pi,
                                           const ConstraintParams& p) {
  State15 v0{u, stress(u, B) + outer(e, e) + Srest + Mat3::identity() * Pi,
             B, cross(B, u)};
  State15 dir{e * 2.0, symOuter(u, e) * 2.0, Vec3{}, cross(B, e) * 2.0};
  Vec3 n = cross(B, e);
  WaveVector cert;
  if (norm(n) > 1e-12 * (1.0 + norm(B)) * (1.0 + norm(e))) {
    double nn = norm(n);
    cert = {n / nn, -dot(u, n) / nn};
  } else {
    cert = {orthogonalToPair(u, e), 0.0};
  }
  Laminate lp = relaxFluid(u + e, B, Srest, Pi, p);
  Laminate lm = relaxFluid(u - e, B, Srest, Pi, p);
  return makeSplit(v0, 0.5, dir, cert, std::move(lp.root), std::move(lm.root));
}

}  // namespace

Laminate addRankOne(const Vec3& u, const Vec3& B, const Vec3& e, double Pi,
                    const ConstraintParams& p) {
  if (norm(e) <= 1e-14 * (1.0 + norm(u) + norm(B)))
    return relaxNormalization(u + B, u - B, Pi, p);
  return Laminate{rankOneSplit(u, B, e, Mat3::zero(), Pi, p)};
}

std::vector<RankOneTerm> symmetricRankOneDecomposition(const Mat3& S) {
  auto eig = eigenSym3(sym(S));
  double scale = std::max({std::abs(eig.values[0]), std::abs(eig.values[2]), 1e-300});
  std::vector<RankOneTerm> out;
  for (int i = 0; i < 3; ++i)
    if (std::abs(eig.values[i]) > 1e-15 * scale)
      out.push_back({eig.values[i], eig.vectors[i]});
  return out;
}

Laminate relaxFluid(const Vec3& u, const Vec3& B, const Mat3& S, double Pi,
                    const ConstraintParams& p) {
  Mat3 Ssym = sym(S);
  auto eig = eigenSym3(Ssym);
  int top = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(eig.values[i]) > std::abs(eig.values[top])) top = i;
  double lam = eig.values[top];
  double scale = 1.0 + norm(u) + norm(B) + std::abs(Pi);
  if (std::abs(lam) <= 1e-13 * scale)
    return relaxNormalization(u + B, u - B, Pi, p);

  Vec3 q = eig.vectors[top];
  if (lam > 0) {
    Vec3 e = q * std::sqrt(lam);
    Mat3 rest = Ssym - outer(q, q) * lam;
    return Laminate{rankOneSplit(u, B, e, rest, Pi, p)};
  }
  // -e⊗e = f⊗f + g⊗g - |e|² I with {q,f̂,ĝ} orthonormal; the -|e|² I is
  // absorbed into the pressure
  double h2 = -lam;
  Vec3 fhat = anyOrthogonal(q);
  Vec3 ghat = cross(q, fhat);
  double PiNew = Pi - h2;
  if (std::abs(PiNew) > p.pressureBound()) throw OutOfRange("pressure range exhausted");
  Mat3 rest = Ssym - outer(q, q) * lam;
  Mat3 ff = outer(fhat, fhat) * h2, gg = outer(ghat, ghat) * h2;
  State15 v0{u, stress(u, B) + Ssym + Mat3::identity() * Pi, B, cross(B, u)};
  State15 dir{Vec3{}, (ff - gg) * 2.0, Vec3{}, Vec3{}};
  WaveVector cert{q, 0.0};
  Laminate lp = relaxFluid(u, B, rest + ff * 2.0, PiNew, p);
  Laminate lm = relaxFluid(u, B, rest + gg * 2.0, PiNew, p);
  return Laminate{makeSplit(v0, 0.5, dir, cert, std::move(lp.root), std::move(lm.root))};
}

Laminate relaxMagnetic(const Vec3& u, const Vec3& B, const Mat3& S, const Vec3& vIn,
                       double Pi, const ConstraintParams& p) {
  double nB = norm(B);
  double scale = 1.0 + norm(u) + nB + norm(vIn);
  if (nB <= 1e-14 * scale) return relaxFluid(u, B, S, Pi, p);
  Vec3 v = vIn - B * (dot(B, vIn) / (nB * nB));  // the lemma assumes B·v = 0
  if (norm(cross(B, v)) <= 1e-14 * scale * scale)
    return relaxFluid(u, B, S, Pi, p);

  double c = std::sqrt(nB / norm(v));
  Vec3 cv = v * c;
  Vec3 Bc = B * (1.0 / c);
  State15 v0{u, stress(u, B) + sym(S) + Mat3::identity() * Pi, B,
             cross(B, u) + cross(B, v)};
  State15 dir{cv * 2.0,
              (symOuter(u, cv) - outer(B, B) * (2.0 / c)) * 2.0,
              Bc * 2.0,
              (cross(B, cv) + cross(Bc, u)) * 2.0};
  Vec3 n = cross(B, v);
  double nn = norm(n);
  WaveVector cert{n / nn, -dot(u, n) / nn};

  Mat3 Stil = sym(S) - (outer(cv, cv) - outer(Bc, Bc));
  Laminate lp = relaxFluid(u + cv, B + Bc, Stil, Pi, p);
  Laminate lm = relaxFluid(u - cv, B - Bc, Stil, Pi, p);
  return Laminate{makeSplit(v0, 0.5, dir, cert, std::move(lp.root), std::move(lm.root))};
}

Laminate relaxZeroB(const Vec3& u, const Mat3& S, const Vec3& E, double Pi,
                    const ConstraintParams& p) {
  double nE = norm(E);
  if (nE <= 1e-14 * (1.0 + norm(u))) return relaxFluid(u, Vec3{}, S, Pi, p);

  Vec3 Ehat = E / nE;
  Vec3 ehat = anyOrthogonal(E);
  Vec3 fhat = cross(Ehat, ehat);  // ê×f̂ = Ê
  double h = std::sqrt(nE);
  Vec3 e = ehat * h, f = fhat * h;

  State15 v0{u, outer(u, u) + sym(S) + Mat3::identity() * Pi, Vec3{}, E};
  State15 dir{E * 2.0, symOuter(u, E) * 2.0, e * 2.0, cross(e, u + E) * 2.0};
  WaveVector cert{fhat, -dot(u, fhat)};

  Mat3 Stil = sym(S) - outer(E, E) + outer(e, e);
  Laminate lp = relaxMagnetic(u + E, e, Stil, f, Pi, p);
  Laminate lm = relaxMagnetic(u - E, -e, Stil, -f + E * 2.0, Pi, p);
  return Laminate{makeSplit(v0, 0.5, dir, cert, std::move(lp.root), std::move(lm.root))};
}

State15 sampleRelaxedState(std::mt19937_64& rng, const HullParams& hp) {
  auto u01 = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };
  auto unitVec = [&] {
    while (true) {
      Vec3 v{2.0 * u01() - 1.0, 2.0 * u01() - 1.0, 2.0 * u01() - 1.0};
      double n = norm(v);
      if (n > 1e-3 && n <= 1.0) return v / n;
    }
  };
  double r = hp.base.r, s = hp.base.s, tau = hp.tau, eps = hp.epsTau();
  Vec3 zp = unitVec() * (tau * r * std::cbrt(u01()));
  Vec3 zm = unitVec() * (tau * s * std::cbrt(u01()));
  Vec3 u = (zp + zm) * 0.5;
  Vec3 B = (zp - zm) * 0.5;
  double Pi = (2.0 * u01() - 1.0) * tau * tau * r * s;
  // Defects must stay inside the eps-ball, but the decomposition also moves
  // the Elsässer variables by about the square root of the defect size, so
  // the draw is additionally capped by the square of the normalization
  // margin (1-tau)·min(r,s); otherwise corner states fail to decompose.
  double margin = (1.0 - tau) * std::min(r, s);
  double cap = std::min(0.9 * eps, margin * margin / 64.0);
  // traceless symmetric defect
  Vec3 d1 = unitVec(), d2 = unitVec();
  Mat3 D = symOuter(d1, d2);
  D = D - Mat3::identity() * (D.trace() / 3.0);
  double dn = frobenius(D);
  if (dn > 1e-12) D = D * (cap * u01() / dn);
  Mat3 S = stress(u, B) + Mat3::identity() * Pi + D;
  Vec3 delta = norm(B) > 1e-12 ? cross(B, unitVec()) : unitVec();
  if (norm(delta) > 1e-12) delta = delta * (cap * u01() / norm(delta));
  State15 out{u, S, B, cross(B, u) + delta};
  if (const char* viol = relaxedSetViolation(out, hp))
    throw OutOfRange(std::string("sampled state left the relaxed set: ") + viol);
  return out;
}

const char* relaxedSetViolation(const State15& v, const HullParams& hp) {
  double r = hp.base.r, s = hp.base.s, tau = hp.tau, eps = hp.epsTau();
  if (!(norm(v.u + v.B) < tau * r + eps)) return "|u+B| >= tau r + eps";
  if (!(norm(v.u - v.B) < tau * s + eps)) return "|u-B| >= tau s + eps";
  Mat3 dev = sym(v.S) - stress(v.u, v.B);
  double Pi = dev.trace() / 3.0;
  if (!(std::abs(Pi) < tau * tau * r * s + eps)) return "|Pi| >= tau^2 rs + eps";
  if (!(frobenius(dev - Mat3::identity() * Pi) < eps)) return "|S - S_{u,B} - Pi I| >= eps";
  if (!(norm(v.E - cross(v.B, v.u)) < eps)) return "|E - B x u| >= eps";
  if (!inM(v)) return "B . E != 0";
  return nullptr;
}

Laminate decomposeFull(const State15& v, const HullParams& hp) {
  if (const char* viol = relaxedSetViolation(v, hp)) throw NotInRelaxedSet(viol);
  const ConstraintParams& p = hp.base;
  Mat3 dev = sym(v.S) - stress(v.u, v.B);
  double Pi = dev.trace() / 3.0;
  Mat3 Stil = dev - Mat3::identity() * Pi;
  double scale = 1.0 + norm(v);
  if (norm(v.B) > 1e-13 * scale) {
    Vec3 d = v.E - cross(v.B, v.u);
    Vec3 w = cross(d, v.B) / norm2(v.B);
    return relaxMagnetic(v.u, v.B, Stil, w, Pi, p);
  }
  return relaxZeroB(v.u, Stil, v.E, Pi, p);
}

Laminate scaleHull(const State15& v, double mu, const ConstraintParams& p) {
  if (!(mu > 0.0 && mu < 1.0)) throw NotScaledK("mu outside (0,1)");
  if (distanceToK(v * (1.0 / mu), p) > 1e-9 * (1.0 + norm(v) / mu))
    throw NotScaledK("v/mu is not in K_{r,s}");
  ElsasserState es = toElsasser(v * (1.0 / mu));
  double rt = std::sqrt(mu);
  double lam = 0.5 * (1.0 - rt);  // the +endpoint carries weight (1+sqrt(mu))/2
  State15 dir = elsasser(es.zPlus * (2.0 * rt), es.zMinus * (2.0 * rt), Mat3::zero());
  WaveVector cert{orthogonalToPair(es.zPlus, es.zMinus), 0.0};
  return Laminate{makeSplit(v, lam, dir, cert,
                            makeLeaf(v + dir * lam),
                            makeLeaf(v - dir * (1.0 - lam)))};
}

bool energyEstimateHolds(const State15& v, const Laminate& lam,
                         const ConstraintParams& p, double slack) {
  double e0 = norm2(v.u) + norm2(v.B);
  double target = 0.5 * (p.r * p.r + p.s * p.s) - e0;
  for (const auto& a : lam.atoms()) {
    double gain = norm2(a.state.u) + norm2(a.state.B) - e0;
    if (target > 2.0 * gain + slack) return false;
  }
  return true;
}

}  // namespace mhdci
