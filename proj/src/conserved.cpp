#include "mhdci/conserved.hpp"

#include <cmath>

namespace mhdci {

Vec3 beltramiSample(const Vec3& p) { return {std::cos(p.z), -std::sin(p.z), 0.0}; }

MaxwellPair circularMaxwellPair() {
  MaxwellPair mp;
  mp.B = [](const Vec3& p, double t) -> Vec3 {
    double zt = p.z - t;
    return {-std::sin(zt), std::cos(zt), 0.0};
  };
  mp.E = [](const Vec3& p, double t) -> Vec3 {
    double zt = p.z - t;
    return {std::cos(zt), std::sin(zt), 0.0};
  };
  return mp;
}

VecField3 faradayEvolve(const VecField3& B0, const TimeField& E, double t0, double dt,
                        int steps) {
  VecField3 B = B0;
  auto rhs = [&](double t) {
    VecField3 Et = sampleField(B0.n, [&](const Vec3& p) { return E(p, t); });
    VecField3 c = curl(Et);
    for (std::size_t i = 0; i < c.size(); ++i) {
      c.x[i] = -c.x[i];
      c.y[i] = -c.y[i];
      c.z[i] = -c.z[i];
    }
    return c;
  };
  for (int s = 0; s < steps; ++s) {
    double t = t0 + s * dt;
    VecField3 k1 = rhs(t);
    VecField3 k2 = rhs(t + 0.5 * dt);  // the right side does not depend on B,
    VecField3 k4 = rhs(t + dt);        // so RK4 collapses to Simpson quadrature
    for (std::size_t i = 0; i < B.size(); ++i) {
      B.x[i] += dt / 6.0 * (k1.x[i] + 4.0 * k2.x[i] + k4.x[i]);
      B.y[i] += dt / 6.0 * (k1.y[i] + 4.0 * k2.y[i] + k4.y[i]);
      B.z[i] += dt / 6.0 * (k1.z[i] + 4.0 * k2.z[i] + k4.z[i]);
    }
  }
  return B;
}

HelicityDriftReport maxwellHelicityDrift(int n, double dt, double tEnd) {
  MaxwellPair mp = circularMaxwellPair();
  VecField3 B0 = sampleField(n, [&](const Vec3& p) { return mp.B(p, 0.0); });
  HelicityDriftReport rep;
  rep.steps = std::max(1, int(std::ceil(tEnd / dt)));
  double step = tEnd / rep.steps;
  rep.initial = magneticHelicity(B0);
  VecField3 B = faradayEvolve(B0, mp.E, 0.0, step, rep.steps);
  rep.final_ = magneticHelicity(B);
  rep.drift = std::abs(rep.final_ - rep.initial);
  rep.bound = 10.0 * (step * step + 1.0 / (double(n) * n)) * std::abs(rep.initial);
  return rep;
}

}  // namespace mhdci
