#pragma once
//
// LOCC protocol simulation: local projective measurements with auditable
// transcripts, single- and two-copy discrimination of maximally entangled
// states, and d-dimensional teleportation.
//
// Every protocol exists in two flavours: a seeded sampled run (Born-rule
// branch selection, full transcript) and an exhaustive verification that
// walks every outcome branch above the pruning threshold and checks the
// protocol's claim on each.

#include "qdistill/linalg.hpp"
#include "qdistill/qudit_states.hpp"
#include "qdistill/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qdistill {

struct TranscriptEvent {
  enum class Kind { Measurement, Broadcast };

  Kind kind = Kind::Measurement;
  std::string party;                           // actor
  std::string basis;                           // measurement: basis descriptor
  int outcome = -1;                            // measurement: sampled outcome index
  double probability = 0.0;                    // measurement: Born probability of outcome
  std::vector<double> outcome_probabilities;   // measurement: full Born vector
  std::string message;                         // broadcast: classical payload
};

/// Ordered log of local measurements and classical broadcasts; the auditable
/// record that a protocol used only local operations and classical
/// communication.
struct LoccTranscript {
  std::uint64_t seed = 0;
  std::vector<TranscriptEvent> events;

  void add_measurement(const std::string& party, const std::string& basis, int outcome,
                       double probability, std::vector<double> all_probabilities);
  void add_broadcast(const std::string& party, const std::string& message);

  /// Locality audit: every measurement names exactly one party, carries a
  /// complete Born vector summing to 1 within 1e-12, and its sampled outcome
  /// is consistent with that vector.  Returns a diagnosis of the first
  /// violation, or the empty string if the transcript is clean.
  std::string audit() const;
};

struct MeasurementOutcome {
  int outcome = -1;
  double probability = 0.0;
  Ket post_state;  // normalised full-system state after the projection
};

/// All measurement branches (probability > kBranchPruneProb) of measuring the
/// given party's qudits in the given orthonormal local basis.  The basis kets
/// must live on exactly the party's qudits (in ascending qudit order) and be
/// orthonormal within 1e-10.
std::vector<MeasurementOutcome> measurement_branches(const Ket& state, const std::string& party,
                                                     const std::vector<Ket>& basis);

/// Sampled local measurement; appends one measurement event to the transcript.
MeasurementOutcome measure_local(const Ket& state, const std::string& party,
                                 const std::vector<Ket>& basis, const std::string& basis_name,
                                 Rng& rng, LoccTranscript& transcript);

/// The normalised state of the remaining qudits after the given party's
/// qudits have been projected onto basis_ket (which must have non-vanishing
/// overlap).
Ket collapse_remainder(const Ket& state, const std::string& party, const Ket& basis_ket);

/// Apply a single-qudit unitary to one qudit of a multi-qudit ket.
Ket apply_local_unitary(const Ket& state, int qudit, const Matrix& u);

// --- discrimination protocols ------------------------------------------------

/// Classical post-processing of the discrimination measurements:
/// computational outcomes (a, b) on one copy give the shift index
/// m = (b - a) mod d; Fourier outcomes give the phase index
/// n = (-(a + b)) mod d (the Fourier vectors carry e^{-2 pi i j a / d}, so
/// the joint amplitude vanishes unless n + a + b = 0 mod d).
int infer_shift_index(int a, int b, int d);
int infer_phase_index(int a, int b, int d);
/// The family member consistent with one copy's outcomes (a, b).
BellLabel infer_family_member(const MesFamily& family, int a, int b);

struct DiscriminationResult {
  BellLabel inferred;
  bool correct = false;
  LoccTranscript transcript;
};

/// One-copy discrimination within a shift or phase family.  Shift family:
/// both parties measure the computational basis and the shift index is
/// m = (b - a) mod d.  Phase family: both parties measure the Fourier basis
/// {|f_a>}; the outcomes obey a + b = -n (mod d), so the phase index is
/// n = (-(a+b)) mod d.  Hidden label must belong to the family.
DiscriminationResult discriminate_single_copy(const MesFamily& family, const BellLabel& hidden,
                                              std::uint64_t seed);

/// Two-copy discrimination of an arbitrary label: copy 1 is measured in the
/// computational basis by both holders (yields m), copy 2 in the Fourier
/// basis (yields n as above).
DiscriminationResult discriminate_two_copy(const BellLabel& hidden, std::uint64_t seed);

/// Exhaustive branch check of a protocol's claim.
struct ExhaustiveCheck {
  bool all_correct = true;
  long branches_checked = 0;
  std::string diagnostic;  // first failure, if any
};

/// Verifies single-copy discrimination on every outcome branch of every
/// hidden member of the family.
ExhaustiveCheck verify_single_copy_exhaustive(const MesFamily& family);
/// Verifies two-copy discrimination on every branch of every hidden label.
ExhaustiveCheck verify_two_copy_exhaustive(int d);

// --- teleportation -----------------------------------------------------------

struct TeleportResult {
  Ket output;              // receiver's single-qudit state after correction
  BellLabel measured;      // sender's Bell-basis outcome
  LoccTranscript transcript;
};

/// Teleport `input` (single qudit) through the channel |psi_channel>.  The
/// sender measures her input qudit and channel half in the generalized Bell
/// basis and broadcasts the outcome (a, b); the receiver applies the
/// correction (W_{n'm'} X^b Z^{-a})^dagger appropriate for an assumed channel
/// label (n', m') = corrections_for.  When corrections_for equals the true
/// channel label the output reproduces the input exactly; otherwise the
/// output is W_{n-n', m-m'} applied to the input, up to global phase,
/// independent of the measurement outcome.
TeleportResult teleport(const Ket& input, const BellLabel& channel,
                        const BellLabel& corrections_for, std::uint64_t seed);

/// Exhaustively verifies the outcome-independent Weyl-twist claim for one
/// channel/corrections pair against a fixed input state.
ExhaustiveCheck verify_teleport_exhaustive(const Ket& input, const BellLabel& channel,
                                           const BellLabel& corrections_for);

}  // namespace qdistill
