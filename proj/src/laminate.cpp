#include "mhdci/laminate.hpp"

#include <algorithm>

namespace mhdci {

std::unique_ptr<LaminateNode> makeLeaf(const State15& v) {
  auto n = std::make_unique<LaminateNode>();
  n->state = v;
  return n;
}

std::unique_ptr<LaminateNode> makeSplit(const State15& v, double lambda,
                                        const State15& direction,
                                        const WaveVector& certificate,
                                        std::unique_ptr<LaminateNode> plusChild,
                                        std::unique_ptr<LaminateNode> minusChild,
                                        const ClassifyOptions& opt) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw InvalidSegment("lambda outside (0,1)");
  double scale = 1.0 + norm(v) + norm(direction);
  State15 ep = v + direction * lambda;
  State15 em = v - direction * (1.0 - lambda);
  if (norm(ep - plusChild->state) > 1e-9 * scale ||
      norm(em - minusChild->state) > 1e-9 * scale)
    throw InvalidSegment("children do not sit at the segment endpoints");
  if (!inM(ep, opt.tol) || !inM(em, opt.tol))
    throw SegmentNotInM("segment endpoint leaves M");
  if (norm(certificate.xiX) == 0.0)
    throw BadCertificate("certificate has xi_x = 0");
  if (coneResiduals(direction, certificate).total() > opt.tol.abs + opt.tol.rel * scale)
    throw BadCertificate("certificate fails the cone conditions");
  auto n = std::make_unique<LaminateNode>();
  n->state = v;
  n->lambda = lambda;
  n->direction = direction;
  n->certificate = certificate;
  SegmentSpec seg{v, direction, lambda, certificate};
  n->verdict = classifySegment(seg, opt);
  n->plus = std::move(plusChild);
  n->minus = std::move(minusChild);
  return n;
}

std::unique_ptr<LaminateNode> cloneNode(const LaminateNode& n) {
  auto c = std::make_unique<LaminateNode>();
  c->state = n.state;
  c->lambda = n.lambda;
  c->direction = n.direction;
  c->certificate = n.certificate;
  c->verdict = n.verdict;
  if (n.plus) c->plus = cloneNode(*n.plus);
  if (n.minus) c->minus = cloneNode(*n.minus);
  return c;
}

namespace {

void collectAtoms(const LaminateNode& n, double w, std::vector<Atom>& out) {
  if (n.leaf()) {
    out.push_back({w, n.state});
    return;
  }
  collectAtoms(*n.plus, w * (1.0 - n.lambda), out);
  collectAtoms(*n.minus, w * n.lambda, out);
}

int nodeDepth(const LaminateNode& n) {
  if (n.leaf()) return 0;
  return 1 + std::max(nodeDepth(*n.plus), nodeDepth(*n.minus));
}

}  // namespace

std::vector<Atom> Laminate::atoms() const {
  std::vector<Atom> out;
  if (root) collectAtoms(*root, 1.0, out);
  return out;
}

State15 Laminate::barycenter() const {
  State15 b;
  for (const auto& a : atoms()) b = b + a.state * a.weight;
  return b;
}

int Laminate::depth() const { return root ? nodeDepth(*root) : 0; }

int Laminate::splitCount() const {
  int c = 0;
  forEachSplit([&](const LaminateNode&) { ++c; });
  return c;
}

void Laminate::forEachSplit(const std::function<void(const LaminateNode&)>& f) const {
  std::function<void(const LaminateNode&)> walk = [&](const LaminateNode& n) {
    if (n.leaf()) return;
    f(n);
    walk(*n.plus);
    walk(*n.minus);
  };
  if (root) walk(*root);
}

namespace {

bool splitLeaf(LaminateNode& n, int& index, double lambda, const State15& dir,
               const WaveVector& cert, const ClassifyOptions& opt) {
  if (n.leaf()) {
    if (index-- == 0) {
      auto replacement = makeSplit(n.state, lambda, dir, cert,
                                   makeLeaf(n.state + dir * lambda),
                                   makeLeaf(n.state - dir * (1.0 - lambda)), opt);
      n = std::move(*replacement);
      return true;
    }
    return false;
  }
  return splitLeaf(*n.plus, index, lambda, dir, cert, opt) ||
         splitLeaf(*n.minus, index, lambda, dir, cert, opt);
}

}  // namespace

Laminate split(const Laminate& lam, int atomIndex, double lambda,
               const State15& direction, const WaveVector& certificate,
               const ClassifyOptions& opt) {
  Laminate out = lam.clone();
  if (!out.root) throw InvalidSegment("empty laminate");
  int idx = atomIndex;
  if (!splitLeaf(*out.root, idx, lambda, direction, certificate, opt))
    throw InvalidSegment("atom index out of range");
  return out;
}

namespace {

std::unique_ptr<LaminateNode> truncateNode(const LaminateNode& n, int depthLeft) {
  if (n.leaf() || depthLeft <= 0) return makeLeaf(n.state);
  auto c = std::make_unique<LaminateNode>();
  c->state = n.state;
  c->lambda = n.lambda;
  c->direction = n.direction;
  c->certificate = n.certificate;
  c->verdict = n.verdict;
  c->plus = truncateNode(*n.plus, depthLeft - 1);
  c->minus = truncateNode(*n.minus, depthLeft - 1);
  return c;
}

}  // namespace

Laminate truncated(const Laminate& lam, int maxDepth) {
  if (!lam.root) return {};
  return Laminate{truncateNode(*lam.root, maxDepth)};
}

CertifyReport certify(const Laminate& lam, const ClassifyOptions& opt) {
  CertifyReport rep;
  if (!lam.root) {
    rep.ok = false;
    rep.failures.push_back("empty laminate");
    return rep;
  }
  double wsum = 0;
  for (const auto& a : lam.atoms()) wsum += a.weight;
  rep.weightError = std::abs(wsum - 1.0);
  if (rep.weightError > 1e-12) {
    rep.ok = false;
    rep.failures.push_back("weights do not sum to 1");
  }
  std::function<void(const LaminateNode&)> walk = [&](const LaminateNode& n) {
    if (n.leaf()) return;
    double scale = 1.0 + norm(n.state) + norm(n.direction);
    State15 ep = n.state + n.direction * n.lambda;
    State15 em = n.state - n.direction * (1.0 - n.lambda);
    double be = std::max(norm(ep - n.plus->state), norm(em - n.minus->state)) / scale;
    rep.barycenterError = std::max(rep.barycenterError, be);
    if (be > 1e-10) {
      rep.ok = false;
      rep.failures.push_back("internal node barycenter mismatch");
    }
    if (!inM(ep, opt.tol) || !inM(em, opt.tol)) {
      rep.ok = false;
      rep.failures.push_back("endpoint leaves M");
    }
    double res = coneResiduals(n.direction, n.certificate).total();
    rep.worstResidual = std::max(rep.worstResidual, res);
    if (norm(n.certificate.xiX) == 0.0 || res > opt.tol.abs + opt.tol.rel * scale) {
      rep.ok = false;
      rep.failures.push_back("certificate fails");
    }
    if (n.verdict.kind == GoodnessVerdict::Kind::Bad) ++rep.badVerdicts;
    walk(*n.plus);
    walk(*n.minus);
  };
  walk(*lam.root);
  double rootScale = 1.0 + norm(lam.root->state);
  double bErr = norm(lam.barycenter() - lam.root->state) / rootScale;
  if (bErr > 1e-10) {
    rep.ok = false;
    rep.failures.push_back("global barycenter mismatch");
  }
  rep.barycenterError = std::max(rep.barycenterError, bErr);
  return rep;
}

}  // namespace mhdci
