#include "mhdci/sawtooth.hpp"

#include <cmath>

namespace mhdci {

namespace {

// odd quintic step: sigma(±1) = ±1, sigma' = sigma'' = 0 at ±1
constexpr std::array<double, 8> kSigma = {0, 15.0 / 8, 0, -10.0 / 8, 0, 3.0 / 8, 0, 0};

double polyEval(const std::array<double, 8>& c, double x) {
  double v = 0;
  for (int k = 7; k >= 0; --k) v = v * x + c[k];
  return v;
}

// formal antiderivative in the local variable, zero constant term
std::array<double, 8> polyInt(const std::array<double, 8>& c) {
  std::array<double, 8> r{};
  for (int k = 0; k < 7; ++k) r[k + 1] = c[k] / (k + 1);
  return r;
}

}  // namespace

double SawtoothProfile::evalPiece(const Piece& p, double s) {
  return polyEval(p.c, (s - p.xc) / p.xs);
}

double SawtoothProfile::evalPeriodic(const std::array<Piece, 5>& pieces, double u) const {
  for (const Piece& p : pieces)
    if (u <= p.s1) return evalPiece(p, u);
  return evalPiece(pieces[4], u);
}

SawtoothProfile::SawtoothProfile(double lambda, double eps) : lambda_(lambda), eps_(eps) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw BadParams("sawtooth lambda outside (0,1)");
  if (!(eps > 0.0 && eps < 1.0)) throw BadParams("sawtooth eps outside (0,1)");
  rho_ = eps * std::min(lambda, 1.0 - lambda) / 4.0;
  const double mid = lambda - 0.5, amp = 0.5;

  auto transition = [&](double center, double sgn) {
    Piece p;
    p.xc = center;
    p.xs = rho_;
    for (int k = 0; k < 8; ++k) p.c[k] = sgn * amp * kSigma[k];
    p.c[0] += mid;
    return p;
  };
  auto plateau = [&](double value) {
    Piece p;
    p.c[0] = value;
    return p;
  };

  d2_[0] = transition(0.0, +1.0);
  d2_[1] = plateau(lambda);
  d2_[2] = transition(1.0 - lambda, -1.0);
  d2_[3] = plateau(-(1.0 - lambda));
  d2_[4] = transition(1.0, +1.0);
  const double br[6] = {0.0, rho_, 1.0 - lambda - rho_, 1.0 - lambda + rho_, 1.0 - rho_, 1.0};
  for (int i = 0; i < 5; ++i) {
    d2_[i].s0 = br[i];
    d2_[i].s1 = br[i + 1];
    if (i == 1 || i == 3) d2_[i].xc = br[i];
  }

  // integrate piecewise with a running constant; the local variable scales
  // the antiderivative by xs
  auto integrate = [](const std::array<Piece, 5>& in, std::array<Piece, 5>& out) {
    double running = 0.0;
    for (int i = 0; i < 5; ++i) {
      Piece p = in[i];
      auto ad = polyInt(p.c);
      for (double& c : ad) c *= p.xs;
      double x0 = (p.s0 - p.xc) / p.xs;
      double at0 = polyEval(ad, x0);
      p.c = ad;
      p.c[0] += running - at0;
      double x1 = (p.s1 - p.xc) / p.xs;
      running = polyEval(p.c, x1);
      out[i] = p;
    }
    return running;  // value at s = 1 (value at 0 is 0)
  };
  integrate(d2_, d1_);    // ∫h'' over a period vanishes by symmetry
  drift_ = integrate(d1_, d0_);
}

double SawtoothProfile::hpp(double s) const { return evalPeriodic(d2_, s - std::floor(s)); }
double SawtoothProfile::hp(double s) const { return evalPeriodic(d1_, s - std::floor(s)); }
double SawtoothProfile::h(double s) const {
  double k = std::floor(s);
  return evalPeriodic(d0_, s - k) + drift_ * k;
}

int SawtoothProfile::plateau(double s) const {
  double u = s - std::floor(s);
  if (u >= d2_[1].s0 && u <= d2_[1].s1) return +1;
  if (u >= d2_[3].s0 && u <= d2_[3].s1) return -1;
  return 0;
}

SawtoothProfile::Interval SawtoothProfile::plateauInterval(int sign) const {
  const Piece& p = sign > 0 ? d2_[1] : d2_[3];
  return {p.s0, p.s1};
}

SawtoothProfile buildSawtooth(double lambda, double eps) {
  return SawtoothProfile(lambda, eps);
}

}  // namespace mhdci
