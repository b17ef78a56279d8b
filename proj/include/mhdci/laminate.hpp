#pragma once
// Finite-order laminates: atomic probability measures with their binary
// splitting tree. Every internal node records the split data (λ, direction,
// wave-cone certificate, goodness verdict).

#include <functional>
#include <memory>
#include <vector>

#include "mhdci/wave_cone.hpp"

namespace mhdci {

struct SegmentNotInM : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadCertificate : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DepthExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxSplitDepth = 64;

struct LaminateNode {
  State15 state;
  // split data (internal nodes only): children sit at state+λ·dir (weight
  // share 1−λ) and state−(1−λ)·dir (weight share λ)
  double lambda = 0.5;
  State15 direction;
  WaveVector certificate;
  GoodnessVerdict verdict;
  std::unique_ptr<LaminateNode> plus, minus;

  bool leaf() const { return !plus; }
};

std::unique_ptr<LaminateNode> makeLeaf(const State15& v);
// Builds an internal node; validates that the children's states coincide with
// the segment endpoints and that the certificate satisfies the cone
// conditions. The verdict is computed via classifySegment unless supplied.
std::unique_ptr<LaminateNode> makeSplit(const State15& v, double lambda,
                                        const State15& direction,
                                        const WaveVector& certificate,
                                        std::unique_ptr<LaminateNode> plusChild,
                                        std::unique_ptr<LaminateNode> minusChild,
                                        const ClassifyOptions& opt = {});

std::unique_ptr<LaminateNode> cloneNode(const LaminateNode& n);

struct Atom {
  double weight = 1.0;
  State15 state;
};

struct Laminate {
  std::unique_ptr<LaminateNode> root;

  Laminate() = default;
  explicit Laminate(std::unique_ptr<LaminateNode> r) : root(std::move(r)) {}
  Laminate clone() const { return Laminate{root ? cloneNode(*root) : nullptr}; }

  std::vector<Atom> atoms() const;
  State15 barycenter() const;  // Σ μ_j V_j over atoms
  int depth() const;
  int splitCount() const;
  void forEachSplit(const std::function<void(const LaminateNode&)>& f) const;
};

// Replace the atomIndex-th leaf (left-to-right order) by a split along the
// given Λ-direction; barycenter is preserved exactly.
Laminate split(const Laminate& lam, int atomIndex, double lambda,
               const State15& direction, const WaveVector& certificate,
               const ClassifyOptions& opt = {});

// Cut the tree below the given depth; removed subtrees collapse into their
// node state, so barycenter and all remaining splits are unchanged.
Laminate truncated(const Laminate& lam, int maxDepth);

struct CertifyReport {
  bool ok = true;
  double weightError = 0;      // |Σ μ_j − 1|
  double barycenterError = 0;  // per node, relative to scale
  double worstResidual = 0;    // certificate cone residual
  int badVerdicts = 0;
  std::vector<std::string> failures;
};
CertifyReport certify(const Laminate& lam, const ClassifyOptions& opt = {});

}  // namespace mhdci
