#pragma once
//
// Bell-diagonal mixture builders: the four-party correlated mixture, the
// uniform mixture over all d^2 Bell states, n-copy mixtures, and pairing
// products.  Every builder returns both a dense form (when the dimension
// fits under the dense cap) and an exact label-space form: a classical
// distribution over strings of Bell labels, one label per biparty.

#include "qdistill/linalg.hpp"
#include "qdistill/qudit_states.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qdistill {

using LabelString = std::vector<BellLabel>;

std::string label_string_repr(const LabelString& s);  // e.g. "(0,1)(1,0)"

/// Probability distribution over strings of Bell labels.  This is the exact
/// fast-path representation of any mixture of products of Bell states: the
/// dense operator is sum_s p(s) (x)_k |psi_{s_k}><psi_{s_k}|.
struct LabelDistribution {
  int d = 2;
  int num_biparties = 1;
  std::map<LabelString, double> support;  // ordered => deterministic iteration

  /// Verifies shapes, non-negativity and normalisation (1e-12).
  void validate() const;
  /// Shannon entropy of the distribution, in bits.
  double entropy_bits() const;
  bool is_uniform(double tol = 1e-12) const;
  /// Product distribution on the concatenated biparties.
  LabelDistribution tensor(const LabelDistribution& other) const;
  /// Tensor power (power >= 1).
  LabelDistribution power(int k) const;
};

/// A builder result: the exact label form, plus the dense operator when the
/// total dimension fits under the dense cap.
struct MixtureState {
  LabelDistribution labels;
  std::optional<DensityOperator> dense;
  std::string dense_omitted_reason;  // non-empty iff dense is absent
};

/// Descriptor of the four-party mixture: biparties AB and CD each hold the
/// same hidden member of a d-member family, uniformly at random.
struct FourPartyDescriptor {
  int d = 2;
  MesFamily family = MesFamily::phase(2, 0);

  static FourPartyDescriptor standard(int d);  // default phase family {psi_{n,0}}
};

/// rho = (1/d) sum_i |Psi_i><Psi_i|_AB (x) |Psi_i><Psi_i|_CD over the family.
/// Layout (A, B, C, D); label form has 2 biparties with equal labels.
MixtureState four_party_state(const FourPartyDescriptor& desc);

/// rho_S = (1/d^2) sum over all d^2 Bell labels, same shape as above.
MixtureState uniform_full_mixture(int d);

/// rho_n = (1/d^2) sum_i (|Psi_i><Psi_i|)^{(x) n} over all d^2 labels,
/// on n biparties.
MixtureState multi_copy_state(int d, int n);

/// Product of independent two-biparty uniform correlated mixtures along a
/// perfect matching of biparty indices: each pair (a, b) carries equal labels
/// uniform over the d^2 possibilities.  pairing must cover 0..2p-1 exactly.
LabelDistribution pairing_product(int d, const std::vector<std::pair<int, int>>& pairing);

/// Expand a label distribution to its dense operator (throws std::length_error
/// above the dense cap).  The default layout is biparties(d, n).
DensityOperator label_to_dense(const LabelDistribution& dist);
DensityOperator label_to_dense(const LabelDistribution& dist, const SubsystemLayout& layout);

/// Diagonal of a density operator in the product Bell basis: the coefficient
/// <B_s| rho |B_s> for every label string s.  Exact inverse of label_to_dense
/// on Bell-diagonal states.
std::map<LabelString, double> bell_basis_diagonal(const DensityOperator& rho);

/// All perfect matchings of {0, ..., 2p-1}, deterministic order.
std::vector<std::vector<std::pair<int, int>>> perfect_matchings(int num_elements);

/// Consecutive pairing {(0,1), (2,3), ...} of 2p elements.
std::vector<std::pair<int, int>> consecutive_pairing(int num_elements);

/// A buildable state, resolvable to label (always) and dense (under the cap)
/// forms.  This is the input vocabulary of the relative-entropy candidate
/// machinery and of the CLI state dumps.
struct StateDescriptor {
  enum class Kind { FourParty, FullMixture, MultiCopy, PairingProduct };

  Kind kind = Kind::FullMixture;
  int d = 2;
  int copies = 1;       // MultiCopy: the n of rho_n
  int tensor_power = 1; // applied to the resolved label form (rho_n^{(x) k})
  std::optional<MesFamily> family;              // FourParty only
  std::vector<std::pair<int, int>> pairing;     // PairingProduct only

  static StateDescriptor four_party(int d, std::optional<MesFamily> family = std::nullopt);
  static StateDescriptor full_mixture(int d);
  static StateDescriptor multi_copy(int d, int n, int power = 1);
  static StateDescriptor pairing_product_of(int d, std::vector<std::pair<int, int>> pairing);

  LabelDistribution resolve_labels() const;
  /// Dense form, or nullopt (with reason) if the dimension exceeds the cap.
  std::optional<DensityOperator> resolve_dense(std::string* omitted_reason = nullptr) const;
  std::string describe() const;  // e.g. "multi_copy(d=2,n=3)^2"
};

}  // namespace qdistill
