#pragma once
//
// Entropic quantities, all in bits (base-2 logarithms).
//
// Relative entropy S(rho || sigma) = Tr{rho (log2 rho - log2 sigma)} is
// computed on eigen-supports; when rho's support leaks outside sigma's the
// value is INFINITE, which is a first-class result here, not an error.  For
// Bell-product-diagonal states the same quantity reduces exactly to the
// classical KL divergence of their label distributions.

#include "qdistill/linalg.hpp"
#include "qdistill/mixtures.hpp"

#include <optional>
#include <string>

namespace qdistill {

struct EntropyResult {
  enum class Method { Dense, Label };

  double value_bits = 0.0;       // meaningful only when !infinite
  bool infinite = false;
  Method method = Method::Dense;
  bool support_contained = true; // invariant: infinite == !support_contained

  static EntropyResult finite(double bits, Method method);
  static EntropyResult unbounded(Method method);
};

/// Von Neumann entropy of a density operator, in bits.  Throws
/// std::domain_error if the operator is not PSD within kPsdTol.
double von_neumann_entropy(const DensityOperator& rho,
                           double support_threshold = kSupportThreshold);

/// Quantum relative entropy S(rho || sigma) in bits; INFINITE on support
/// leakage beyond the threshold.
EntropyResult relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                               double support_threshold = kSupportThreshold);

/// Classical KL divergence of label distributions, in bits; INFINITE when p
/// puts weight on a string outside q's support.  Requires equal d and
/// biparty count.
EntropyResult kl_label(const LabelDistribution& p, const LabelDistribution& q);

/// Support-containment check with a concrete witness on failure.
struct SupportWitness {
  bool contained = true;
  double leakage = 0.0;                          // total weight escaping the support
  std::optional<LabelString> violating_string;   // label-space witness
  std::optional<CVector> leaked_vector;          // dense-space witness
};

SupportWitness support_contained(const LabelDistribution& p, const LabelDistribution& q);
SupportWitness support_contained(const DensityOperator& rho, const DensityOperator& sigma,
                                 double support_threshold = kSupportThreshold);

/// log2(|supp q| / |supp p|) for distributions uniform over their supports.
/// Throws std::invalid_argument when either is non-uniform (1e-9).
double formal_count_bound(const LabelDistribution& p, const LabelDistribution& q);

/// Relative-entropy candidate evaluation: KL of target against candidate in
/// label space, the formal counting bound, and (optionally) the labeled
/// halving step used when the target is a two-fold tensor power standing in
/// for a single odd-copy state.
struct ErCandidateReport {
  std::string target;
  std::string candidate;
  EntropyResult kl;                 // raw label-space KL (may be INFINITE)
  double formal_count_raw_bits = 0.0;
  bool halving_applied = false;
  // Effective values after the (optional) halving step:
  bool bound_infinite = false;
  double bound_bits = 0.0;
  double formal_count_bits = 0.0;
  std::optional<LabelString> witness;  // set when the KL is INFINITE
  std::string method = "label";
};

ErCandidateReport er_candidate_report(const StateDescriptor& target,
                                      const StateDescriptor& candidate,
                                      bool apply_halving = false);

}  // namespace qdistill
