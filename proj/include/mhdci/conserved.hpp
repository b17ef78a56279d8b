#pragma once
// Helicity experiments: reference fields with known invariants and a Faraday
// integrator used to measure the drift of ∫A·B under prescribed electric
// fields with E·B = 0.

#include <functional>

#include "mhdci/fields.hpp"

namespace mhdci {

using TimeField = std::function<Vec3(const Vec3&, double)>;

// curl B = B, so A = B and ∫A·B = ∫|B|² = (2π)³
Vec3 beltramiSample(const Vec3& p);

// circularly polarized pair solving ∂t B + ∇×E = 0 with B·E = 0 pointwise
struct MaxwellPair {
  TimeField B, E;
};
MaxwellPair circularMaxwellPair();

// classical RK4 for ∂t B = −∇×E(·,t) with spectral curl
VecField3 faradayEvolve(const VecField3& B0, const TimeField& E, double t0, double dt,
                        int steps);

struct HelicityDriftReport {
  double initial = 0;
  double final_ = 0;
  double drift = 0;
  double bound = 0;  // 10 (Δt² + n⁻²) |H(0)|
  int steps = 0;
};
HelicityDriftReport maxwellHelicityDrift(int n, double dt, double tEnd);

}  // namespace mhdci
