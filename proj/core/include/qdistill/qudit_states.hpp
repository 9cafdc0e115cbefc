#pragma once
//
// Generalized Bell states in d (x) d, Weyl shift/clock operators, and the
// discrete Fourier measurement basis.
//
// Conventions (frozen):
//   |psi_nm> = (1/sqrt d) sum_j exp(2 pi i j n / d) |j> (x) |(j+m) mod d>
//   X|j> = |(j+1) mod d>,   Z|j> = exp(2 pi i j / d) |j>
//   W_nm = X^m Z^n, acting on the SECOND qudit:  (I (x) W_nm)|psi_00> = |psi_nm>
//   |f_a> = (1/sqrt d) sum_j exp(-2 pi i j a / d) |j>

#include "qdistill/linalg.hpp"

#include <compare>
#include <string>
#include <vector>

namespace qdistill {

/// Normalised pure state over the qudits of a layout.
struct Ket {
  CVector amps;
  SubsystemLayout layout;
};

/// Validating constructor: dimension matches layout, norm 1 within 1e-12.
Ket make_ket(CVector amps, SubsystemLayout layout);

/// Label (n, m) of a generalized Bell state in dimension d.
struct BellLabel {
  int n = 0;  // phase index, 0..d-1
  int m = 0;  // shift index, 0..d-1
  int d = 2;  // qudit dimension, >= 2

  auto operator<=>(const BellLabel&) const = default;
};

/// Throws std::out_of_range unless 0 <= n,m < d and d >= 2.
void validate_label(const BellLabel& label);

/// |psi_nm> on a bipartite layout (parties "A", "B" by default).
Ket bell_state(const BellLabel& label);
Ket bell_state(const BellLabel& label, const SubsystemLayout& layout);

/// The d x d Weyl operator W_nm = X^m Z^n.
Matrix weyl_operator(const BellLabel& label);
/// Building blocks: X and Z.
Matrix shift_x(int d);
Matrix clock_z(int d);

/// The d Fourier vectors |f_a> as single-qudit kets, a = 0..d-1.
std::vector<Ket> fourier_basis(int d);
/// Computational basis |j> as single-qudit kets.
std::vector<Ket> computational_basis(int d);
/// All d^2 Bell states ordered by index n*d + m, on a bipartite layout.
std::vector<Ket> bell_basis(int d);

double fidelity(const Ket& a, const Ket& b);

struct MaxEntWitness {
  bool maximal = false;
  double max_deviation = 0.0;  // max-entry distance of a reduction from I/d
};

/// Checks both single-qudit reductions against I/d (tolerance 1e-10).
/// Requires a two-qudit ket with equal local dimensions.
MaxEntWitness is_maximally_entangled(const Ket& psi);

/// A d-member family of pairwise-orthogonal maximally entangled states:
/// either the shift family {psi_{n0, m} : m} (fixed phase index) or the
/// phase family {psi_{n, m0} : n} (fixed shift index).  Local Weyl twists of
/// a canonical family are again canonical families (the Weyl operators close
/// under multiplication up to phase), so these two kinds with arbitrary
/// fixed index exhaust the supported families; arbitrary d-member label
/// subsets are rejected by construction.
struct MesFamily {
  enum class Kind { Shift, Phase };

  Kind kind = Kind::Phase;
  int fixed_index = 0;
  int d = 2;

  int size() const { return d; }
  BellLabel member(int k) const;
  bool contains(const BellLabel& label) const;
  /// Index of a label within the family; throws std::invalid_argument if the
  /// label is not a member.
  int index_of(const BellLabel& label) const;
  std::string describe() const;  // e.g. "phase(m=0,d=3)"

  static MesFamily shift(int d, int fixed_n = 0);
  static MesFamily phase(int d, int fixed_m = 0);
};

}  // namespace qdistill
