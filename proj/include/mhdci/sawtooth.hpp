#pragma once
// Mollified sawtooth profiles: 1-periodic h'' with plateau values λ and
// −(1−λ), zero mean, and closed-form piecewise-polynomial antiderivatives
// h' and h. Transitions are odd quintic steps of half-width rho, so the
// mean stays exactly zero and h is C⁴.

#include <array>
#include <stdexcept>

namespace mhdci {

struct BadParams : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SawtoothProfile {
 public:
  SawtoothProfile() = default;
  SawtoothProfile(double lambda, double eps);

  double lambda() const { return lambda_; }
  double eps() const { return eps_; }
  double rho() const { return rho_; }

  double h(double s) const;
  double hp(double s) const;   // h'
  double hpp(double s) const;  // h''

  // +1 on {h''=λ}, −1 on {h''=−(1−λ)}, 0 on transitions
  int plateau(double s) const;

  struct Interval {
    double lo = 0, hi = 0;
    double mid() const { return 0.5 * (lo + hi); }
    double length() const { return hi - lo; }
  };
  // plateau position within one period [0,1); sign = +1 or −1
  Interval plateauInterval(int sign) const;

 private:
  struct Piece {
    double s0 = 0, s1 = 0;
    double xc = 0, xs = 1;  // local variable x = (s − xc) / xs
    std::array<double, 8> c{};
  };
  static double evalPiece(const Piece& p, double s);
  double evalPeriodic(const std::array<Piece, 5>& pieces, double u) const;

  double lambda_ = 0.5, eps_ = 0.1, rho_ = 0;
  std::array<Piece, 5> d2_{}, d1_{}, d0_{};
  double drift_ = 0;  // h(s+1) = h(s) + drift
};

SawtoothProfile buildSawtooth(double lambda, double eps);

}  // namespace mhdci
