#include "mhdci/flatten.hpp"

#include <cmath>
#include <memory>

namespace mhdci {

FlattenResult flattenClebsch(const WField& f, const std::vector<CubeSpec>& cover,
                             double eps, double degenerateTol) {
  FlattenResult out;
  for (const CubeSpec& q : cover) {
    State17 Wc = f(q.center);
    double fn = norm(Wc.v) + norm(Wc.w);
    double scale = 1.0 + norm(Wc);
    if (fn <= degenerateTol * scale) continue;
    if (norm(wedge(Wc.v, Wc.w)) > degenerateTol * (1.0 + fn * fn)) continue;
    // degenerate but nonvanishing factors: flatten this cube
    Vec4 corner = q.global({0.45, 0.45, 0.45, 0.45});
    State17 Wcor = f(corner);
    if (norm(Wcor - Wc) > 0.5 * scale)
      throw CoverFailure("field oscillates too much across a cube that needs flattening");
    CubeSpec patch = q;
    patch.eps = 1.5 * eps;  // plateau volume (1 − eps/2)
    out.patches.push_back(patch);
    ++out.modified;
  }
  auto patches = std::make_shared<std::vector<CubeSpec>>(out.patches);
  WField base = f;
  out.field = [base, patches](const Vec4& p) -> State17 {
    for (const CubeSpec& q : *patches) {
      if (!q.insideSupport(p)) continue;
      double chi = q.chi(p);
      Vec4 g = q.gradChi(p);
      Vec4 shift = q.center - p;
      Vec4 gp = p + shift * chi;
      State17 W = base(gp);
      State17 Wp = base(p);
      // pullback by Dg = (1 − χ)I + shift ⊗ ∇χ; only the factors transform
      auto pull = [&](const Vec4& v) {
        Vec4 r = v * (1.0 - chi);
        return r + g * dot(shift, v);
      };
      return {Wp.u, Wp.S, pull(W.v), pull(W.w)};
    }
    return base(p);
  };
  return out;
}

}  // namespace mhdci
