#include "mhdci/cube.hpp"

#include <cmath>

namespace mhdci {

namespace {

// 7th-order smoothstep: S(0)=0, S(1)=1, three vanishing derivatives at both
// ends, max |S'| = 35/16 at t = 1/2
double smooth7(double t) { return ((( -20 * t + 70) * t - 84) * t + 35) * t * t * t * t; }
double smooth7d(double t) {
  double u = 1.0 - t;
  return 140.0 * t * t * t * u * u * u;
}
double smooth7dd(double t) {
  double u = 1.0 - t;
  return 420.0 * t * t * u * u * (u - t);
}

struct Bump1 {
  double v = 1, d = 0, dd = 0;  // value and derivatives w.r.t. the local coord
};

Bump1 bump1(double y, double a) {
  double w = 0.5 - a;
  double ay = std::abs(y);
  if (ay <= a) return {1, 0, 0};
  if (ay >= 0.5) return {0, 0, 0};
  double t = (ay - a) / w;
  double sgn = y >= 0 ? 1.0 : -1.0;
  return {1.0 - smooth7(t), -sgn * smooth7d(t) / w, -smooth7dd(t) / (w * w)};
}

}  // namespace

Vec4 CubeSpec::local(const Vec4& p) const {
  Vec4 d = p - center, y;
  for (int j = 0; j < 4; ++j) y[j] = dot(frame[j], d) / side;
  return y;
}

Vec4 CubeSpec::global(const Vec4& y) const {
  Vec4 p = center;
  for (int j = 0; j < 4; ++j) p += frame[j] * (y[j] * side);
  return p;
}

double CubeSpec::innerHalf() const { return 0.5 * std::pow(1.0 - eps / 3.0, 0.25); }

double CubeSpec::chi(const Vec4& p) const {
  Vec4 y = local(p);
  double a = innerHalf(), v = 1;
  for (int j = 0; j < 4; ++j) v *= bump1(y[j], a).v;
  return v;
}

Vec4 CubeSpec::gradChi(const Vec4& p) const {
  Vec4 y = local(p);
  double a = innerHalf();
  Bump1 b[4];
  for (int j = 0; j < 4; ++j) b[j] = bump1(y[j], a);
  Vec4 g{};
  for (int j = 0; j < 4; ++j) {
    double prod = b[j].d;
    for (int k = 0; k < 4; ++k)
      if (k != j) prod *= b[k].v;
    g += frame[j] * (prod / side);
  }
  return g;
}

Mat4 CubeSpec::hessChi(const Vec4& p) const {
  Vec4 y = local(p);
  double a = innerHalf();
  Bump1 b[4];
  for (int j = 0; j < 4; ++j) b[j] = bump1(y[j], a);
  Mat4 h = Mat4::zero();
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      double prod = (j == k) ? b[j].dd : b[j].d * b[k].d;
      for (int l = 0; l < 4; ++l)
        if (l != j && l != k) prod *= b[l].v;
      h += outer4(frame[j], frame[k]) * (prod / (side * side));
    }
  return h;
}

bool CubeSpec::insideInner(const Vec4& p) const {
  Vec4 y = local(p);
  double a = innerHalf();
  for (int j = 0; j < 4; ++j)
    if (std::abs(y[j]) > a) return false;
  return true;
}

bool CubeSpec::insideSupport(const Vec4& p) const {
  Vec4 y = local(p);
  for (int j = 0; j < 4; ++j)
    if (std::abs(y[j]) >= 0.5) return false;
  return true;
}

double CubeSpec::gradBound() const {
  return (35.0 / 16.0) / ((0.5 - innerHalf()) * side);
}

CubeSpec makeCube(const Vec4& center, double side, double eps,
                  const Vec4& axis1, const Vec4& axis2) {
  CubeSpec c;
  c.center = center;
  c.side = side;
  c.eps = eps;
  std::vector<Vec4> seeds;
  if (norm(axis1) > 0) seeds.push_back(axis1);
  if (norm(axis2) > 0) seeds.push_back(axis2);
  seeds.push_back({1, 0, 0, 0});
  seeds.push_back({0, 1, 0, 0});
  seeds.push_back({0, 0, 1, 0});
  seeds.push_back({0, 0, 0, 1});
  int got = 0;
  for (const Vec4& s : seeds) {
    Vec4 v = s;
    for (int j = 0; j < got; ++j) v = v - c.frame[j] * dot(c.frame[j], v);
    double n = norm(v);
    if (n > 1e-10 * (1.0 + norm(s))) {
      c.frame[got++] = v / n;
      if (got == 4) break;
    }
  }
  if (got < 4) throw CoverFailure("degenerate cube axes");
  return c;
}

namespace {

void refine(const CubeSpec& q, const std::function<bool(const CubeSpec&)>& ok,
            int depth, int maxDepth, std::vector<CubeSpec>& out) {
  if (ok(q)) {
    out.push_back(q);
    return;
  }
  if (depth >= maxDepth)
    throw ResolutionExceeded("cover refinement limit reached");
  for (int m = 0; m < 16; ++m) {
    CubeSpec child = q;
    child.side = q.side / 2;
    Vec4 off;
    for (int j = 0; j < 4; ++j) off[j] = ((m >> j) & 1) ? 0.25 : -0.25;
    child.center = q.global(off);
    refine(child, ok, depth + 1, maxDepth, out);
  }
}

}  // namespace

std::vector<CubeSpec> coverDomain(const Box4& domain,
                                  const std::function<bool(const CubeSpec&)>& fineEnough,
                                  double eps, int maxDepth) {
  Vec4 ext = domain.extent();
  double h0 = ext[0];
  for (int j = 1; j < 4; ++j) h0 = std::min(h0, ext[j]);
  if (!(h0 > 0)) throw ResolutionExceeded("empty domain");
  int n[4];
  for (int j = 0; j < 4; ++j) {
    n[j] = (int)std::lround(ext[j] / h0);
    if (std::abs(n[j] * h0 - ext[j]) > 1e-9 * ext[j])
      throw ResolutionExceeded("domain extents are not commensurate");
  }
  std::vector<CubeSpec> out;
  for (int i0 = 0; i0 < n[0]; ++i0)
    for (int i1 = 0; i1 < n[1]; ++i1)
      for (int i2 = 0; i2 < n[2]; ++i2)
        for (int i3 = 0; i3 < n[3]; ++i3) {
          CubeSpec q = makeCube({domain.lo.x + (i0 + 0.5) * h0,
                                 domain.lo.y + (i1 + 0.5) * h0,
                                 domain.lo.z + (i2 + 0.5) * h0,
                                 domain.lo.t + (i3 + 0.5) * h0},
                                h0, eps);
          refine(q, fineEnough, 0, maxDepth, out);
        }
  return out;
}

}  // namespace mhdci
