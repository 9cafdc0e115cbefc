#pragma once
//
// Distillation protocols over Bell-state mixtures and the summary reports
// tying together protocol yield (lower bound), relative-entropy candidate
// (upper bound), the formal counting bound, and the closed-form target value.
//
// Four-party protocol: biparty CD discriminates its copy of the hidden family
// member with the one-copy LOCC protocol and broadcasts the label;  party B
// applies the Weyl correction W^dagger, leaving AB in |psi_00>.  Yield:
// log2(d) ebits.
//
// n-copy protocol (n >= 3): biparties 1 and 2 sacrifice their copies to the
// two-copy discrimination protocol (computational + Fourier) and broadcast
// the label (n, m); each surviving biparty applies W_nm^dagger on its B side.
// Yield: (n-2) log2(d) ebits.  For n in {1, 2} the mixture is separable and
// the yield is zero.

#include "qdistill/entropy.hpp"
#include "qdistill/linalg.hpp"
#include "qdistill/mixtures.hpp"
#include "qdistill/qudit_states.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qdistill {

struct DistillationReport {
  std::string kind;       // "four_party" or "multi_copy"
  int d = 2;
  int n = 1;              // number of copies; 1 marks the four-party case
  std::uint64_t seed = 0;

  // Protocol side (lower bound).
  double yield_bits = 0.0;
  int surviving_biparties = 0;
  std::vector<double> per_biparty_fidelity;  // worst-case fidelity per survivor
  bool protocol_exact = false;  // every branch of every hidden label inferred correctly
  long branches_checked = 0;

  // Entropy side (upper bound).
  std::string candidate;        // descriptor of the closest-mixture candidate
  bool upper_infinite = false;
  double upper_bound_bits = 0.0;
  bool halving_applied = false;
  double formal_count_bits = 0.0;
  std::optional<LabelString> witness;  // support-violation witness when INFINITE

  // Summary.
  double lower_bound_bits = 0.0;
  double closed_form_bits = 0.0;  // closed-form target value
  bool agreement = false;         // lower_bound_bits == closed_form_bits within 1e-9
  std::string reason;             // e.g. "separable (n <= 2)"
  std::string family;             // four-party: family descriptor
};

/// Closed-form target value: log2(d) for the four-party mixture;
/// (n-2) log2(d) for n >= 3 copies; 0 for the separable n in {1, 2}.
double closed_form_value_bits(int d, std::optional<int> copies);

DistillationReport distill_four_party(int d, const MesFamily& family, std::uint64_t seed);
DistillationReport distill_four_party(int d, std::uint64_t seed);  // default phase family

DistillationReport distill_multi_copy(int d, int n, std::uint64_t seed);

/// Dispatcher: copies == nullopt means the four-party case.
DistillationReport ed_summary(int d, std::optional<int> copies, std::uint64_t seed,
                              std::optional<MesFamily> family = std::nullopt);

}  // namespace qdistill
