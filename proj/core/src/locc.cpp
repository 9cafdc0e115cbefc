#include "qdistill/locc.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qdistill {

void LoccTranscript::add_measurement(const std::string& party, const std::string& basis,
                                     int outcome, double probability,
                                     std::vector<double> all_probabilities) {
  TranscriptEvent e;
  e.kind = TranscriptEvent::Kind::Measurement;
  e.party = party;
  e.basis = basis;
  e.outcome = outcome;
  e.probability = probability;
  e.outcome_probabilities = std::move(all_probabilities);
  events.push_back(std::move(e));
}

void LoccTranscript::add_broadcast(const std::string& party, const std::string& message) {
  TranscriptEvent e;
  e.kind = TranscriptEvent::Kind::Broadcast;
  e.party = party;
  e.message = message;
  events.push_back(std::move(e));
}

std::string LoccTranscript::audit() const {
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    std::ostringstream where;
    where << "event " << i << " (" << e.party << "): ";
    if (e.kind == TranscriptEvent::Kind::Measurement) {
      if (e.party.empty()) return where.str() + "measurement without a party";
      if (e.basis.empty()) return where.str() + "measurement without a basis descriptor";
      double total = 0.0;
      for (double p : e.outcome_probabilities) {
        if (p < -1e-15) return where.str() + "negative outcome probability";
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-12) {
        return where.str() + "outcome probabilities sum to " + std::to_string(total);
      }
      if (e.outcome < 0 || e.outcome >= static_cast<int>(e.outcome_probabilities.size())) {
        return where.str() + "sampled outcome outside the Born vector";
      }
      if (e.outcome_probabilities[e.outcome] <= 0.0) {
        return where.str() + "sampled outcome has zero probability";
      }
      if (std::abs(e.outcome_probabilities[e.outcome] - e.probability) > 1e-12) {
        return where.str() + "recorded probability disagrees with the Born vector";
      }
    } else {
      if (e.party.empty()) return where.str() + "broadcast without a sender";
      if (e.message.empty()) return where.str() + "broadcast without a message";
    }
  }
  return "";
}

namespace {

struct LocalIndexMaps {
  std::vector<int> qudits;        // the party's qudits, ascending
  std::vector<int> rest;          // everybody else's qudits, ascending
  std::vector<long> local_off;    // full-index offsets of local configurations
  std::vector<long> rest_off;     // full-index offsets of the rest
};

LocalIndexMaps local_maps(const SubsystemLayout& layout, const std::string& party) {
  LocalIndexMaps maps;
  maps.qudits = layout.qudits_of(party);
  if (maps.qudits.empty()) {
    throw std::invalid_argument("measure_local: party '" + party + "' holds no qudit");
  }
  std::size_t j = 0;
  for (int k = 0; k < layout.num_qudits(); ++k) {
    if (j < maps.qudits.size() && maps.qudits[j] == k) {
      ++j;
    } else {
      maps.rest.push_back(k);
    }
  }
  maps.local_off = subset_offsets(layout.dims, maps.qudits);
  maps.rest_off = subset_offsets(layout.dims, maps.rest);
  return maps;
}

void check_basis(const std::vector<Ket>& basis, long local_dim) {
  if (static_cast<long>(basis.size()) != local_dim) {
    throw std::invalid_argument("measure_local: basis does not span the party's local space");
  }
  for (const auto& b : basis) {
    if (b.amps.size() != local_dim) {
      throw std::invalid_argument("measure_local: basis ket dimension mismatch");
    }
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t k = i; k < basis.size(); ++k) {
      const Complex g = basis[i].amps.dot(basis[k].amps);
      const double expected = (i == k) ? 1.0 : 0.0;
      if (std::abs(g - expected) > 1e-10) {
        throw std::invalid_argument("measure_local: basis not orthonormal within 1e-10");
      }
    }
  }
}

}  // namespace

std::vector<MeasurementOutcome> measurement_branches(const Ket& state, const std::string& party,
                                                     const std::vector<Ket>& basis) {
  const auto maps = local_maps(state.layout, party);
  const long L = static_cast<long>(maps.local_off.size());
  const long R = static_cast<long>(maps.rest_off.size());
  check_basis(basis, L);

  std::vector<MeasurementOutcome> out;
  for (long k = 0; k < L; ++k) {
    // Residual amplitudes on the rest after projecting the local part on b_k.
    CVector residual = CVector::Zero(R);
    for (long r = 0; r < R; ++r) {
      Complex acc = 0.0;
      for (long q = 0; q < L; ++q) {
        acc += std::conj(basis[k].amps(q)) * state.amps(maps.local_off[q] + maps.rest_off[r]);
      }
      residual(r) = acc;
    }
    const double prob = residual.squaredNorm();
    if (prob <= kBranchPruneProb) continue;

    CVector post = CVector::Zero(state.amps.size());
    const double scale = 1.0 / std::sqrt(prob);
    for (long r = 0; r < R; ++r) {
      for (long q = 0; q < L; ++q) {
        post(maps.local_off[q] + maps.rest_off[r]) = basis[k].amps(q) * residual(r) * scale;
      }
    }
    out.push_back({static_cast<int>(k), prob, Ket{std::move(post), state.layout}});
  }
  return out;
}

MeasurementOutcome measure_local(const Ket& state, const std::string& party,
                                 const std::vector<Ket>& basis, const std::string& basis_name,
                                 Rng& rng, LoccTranscript& transcript) {
  auto branches = measurement_branches(state, party, basis);
  if (branches.empty()) {
    throw std::logic_error("measure_local: state has no branch with non-vanishing probability");
  }
  std::vector<double> born(basis.size(), 0.0);
  std::vector<double> weights;
  weights.reserve(branches.size());
  for (const auto& b : branches) {
    born[b.outcome] = b.probability;
    weights.push_back(b.probability);
  }
  const int pick = rng.pick_weighted(weights);
  MeasurementOutcome chosen = std::move(branches[pick]);
  transcript.add_measurement(party, basis_name, chosen.outcome, chosen.probability,
                             std::move(born));
  return chosen;
}

Ket collapse_remainder(const Ket& state, const std::string& party, const Ket& basis_ket) {
  const auto maps = local_maps(state.layout, party);
  const long L = static_cast<long>(maps.local_off.size());
  const long R = static_cast<long>(maps.rest_off.size());
  if (basis_ket.amps.size() != L) {
    throw std::invalid_argument("collapse_remainder: basis ket dimension mismatch");
  }
  if (maps.rest.empty()) {
    throw std::invalid_argument("collapse_remainder: party holds every qudit");
  }
  CVector residual = CVector::Zero(R);
  for (long r = 0; r < R; ++r) {
    Complex acc = 0.0;
    for (long q = 0; q < L; ++q) {
      acc += std::conj(basis_ket.amps(q)) * state.amps(maps.local_off[q] + maps.rest_off[r]);
    }
    residual(r) = acc;
  }
  const double prob = residual.squaredNorm();
  if (prob <= kBranchPruneProb) {
    throw std::logic_error("collapse_remainder: branch has vanishing probability");
  }
  residual /= std::sqrt(prob);
  return {std::move(residual), state.layout.restricted_to(maps.rest)};
}

Ket apply_local_unitary(const Ket& state, int qudit, const Matrix& u) {
  if (qudit < 0 || qudit >= state.layout.num_qudits()) {
    throw std::out_of_range("apply_local_unitary: qudit index out of range");
  }
  const int d = state.layout.dims[qudit];
  if (u.rows() != d || u.cols() != d) {
    throw std::invalid_argument("apply_local_unitary: operator dimension mismatch");
  }
  if (((u * u.adjoint()) - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("apply_local_unitary: operator not unitary within 1e-10");
  }
  const auto target_off = subset_offsets(state.layout.dims, {qudit});
  std::vector<int> rest;
  for (int k = 0; k < state.layout.num_qudits(); ++k) {
    if (k != qudit) rest.push_back(k);
  }
  const auto rest_off = subset_offsets(state.layout.dims, rest);

  CVector out = CVector::Zero(state.amps.size());
  CVector column(d);
  for (long r : rest_off) {
    for (int j = 0; j < d; ++j) column(j) = state.amps(target_off[j] + r);
    const CVector rotated = u * column;
    for (int j = 0; j < d; ++j) out(target_off[j] + r) = rotated(j);
  }
  return {std::move(out), state.layout};
}

namespace {

/// Measurement plan of a discrimination protocol: which basis each end
/// measures, with its descriptor.
struct BasisPlan {
  std::vector<Ket> kets;
  std::string name;
};

BasisPlan computational_plan(int d) {
  return {computational_basis(d), "computational(d=" + std::to_string(d) + ")"};
}

BasisPlan fourier_plan(int d) {
  return {fourier_basis(d), "fourier(d=" + std::to_string(d) + ")"};
}

}  // namespace

int infer_shift_index(int a, int b, int d) { return ((b - a) % d + d) % d; }
int infer_phase_index(int a, int b, int d) { return ((-(a + b)) % d + d) % d; }

BellLabel infer_family_member(const MesFamily& family, int a, int b) {
  const int d = family.d;
  if (family.kind == MesFamily::Kind::Shift) {
    return {family.fixed_index, infer_shift_index(a, b, d), d};
  }
  return {infer_phase_index(a, b, d), family.fixed_index, d};
}

DiscriminationResult discriminate_single_copy(const MesFamily& family, const BellLabel& hidden,
                                              std::uint64_t seed) {
  if (!family.contains(hidden)) {
    throw std::invalid_argument(
        "discriminate_single_copy: hidden label (" + std::to_string(hidden.n) + "," +
        std::to_string(hidden.m) + ") is not a member of " + family.describe() +
        "; only shift/phase families are supported (arbitrary label subsets rejected)");
  }
  const int d = family.d;
  const Ket state = bell_state(hidden);
  const BasisPlan plan =
      family.kind == MesFamily::Kind::Shift ? computational_plan(d) : fourier_plan(d);

  Rng rng(seed);
  DiscriminationResult result;
  result.transcript.seed = seed;

  const auto a_out = measure_local(state, "A", plan.kets, plan.name, rng, result.transcript);
  result.transcript.add_broadcast("A", "outcome=" + std::to_string(a_out.outcome));
  const auto b_out =
      measure_local(a_out.post_state, "B", plan.kets, plan.name, rng, result.transcript);
  result.transcript.add_broadcast("B", "outcome=" + std::to_string(b_out.outcome));

  result.inferred = infer_family_member(family, a_out.outcome, b_out.outcome);
  result.correct = result.inferred == hidden;
  return result;
}

DiscriminationResult discriminate_two_copy(const BellLabel& hidden, std::uint64_t seed) {
  validate_label(hidden);
  const int d = hidden.d;
  const auto layout = SubsystemLayout::biparties(d, 2);
  const Ket copy = bell_state(hidden);
  const Ket state = {tensor_product(copy.amps, copy.amps), layout};

  const BasisPlan comp = computational_plan(d);
  const BasisPlan four = fourier_plan(d);

  Rng rng(seed);
  DiscriminationResult result;
  result.transcript.seed = seed;

  // Copy 1 (parties A1, B1): computational basis -> shift index m.
  const auto a1 = measure_local(state, "A1", comp.kets, comp.name, rng, result.transcript);
  result.transcript.add_broadcast("A1", "outcome=" + std::to_string(a1.outcome));
  const auto b1 =
      measure_local(a1.post_state, "B1", comp.kets, comp.name, rng, result.transcript);
  result.transcript.add_broadcast("B1", "outcome=" + std::to_string(b1.outcome));

  // Copy 2 (parties A2, B2): Fourier basis -> phase index n.
  const auto a2 =
      measure_local(b1.post_state, "A2", four.kets, four.name, rng, result.transcript);
  result.transcript.add_broadcast("A2", "outcome=" + std::to_string(a2.outcome));
  const auto b2 =
      measure_local(a2.post_state, "B2", four.kets, four.name, rng, result.transcript);
  result.transcript.add_broadcast("B2", "outcome=" + std::to_string(b2.outcome));

  result.inferred = {infer_phase_index(a2.outcome, b2.outcome, d),
                     infer_shift_index(a1.outcome, b1.outcome, d), d};
  result.correct = result.inferred == hidden;
  return result;
}

ExhaustiveCheck verify_single_copy_exhaustive(const MesFamily& family) {
  const int d = family.d;
  const BasisPlan plan =
      family.kind == MesFamily::Kind::Shift ? computational_plan(d) : fourier_plan(d);

  ExhaustiveCheck check;
  for (int k = 0; k < family.size(); ++k) {
    const BellLabel hidden = family.member(k);
    const Ket state = bell_state(hidden);
    for (const auto& a_branch : measurement_branches(state, "A", plan.kets)) {
      for (const auto& b_branch :
           measurement_branches(a_branch.post_state, "B", plan.kets)) {
        ++check.branches_checked;
        const BellLabel inferred =
            infer_family_member(family, a_branch.outcome, b_branch.outcome);
        if (!(inferred == hidden)) {
          check.all_correct = false;
          if (check.diagnostic.empty()) {
            std::ostringstream msg;
            msg << family.describe() << " hidden=(" << hidden.n << "," << hidden.m
                << ") outcomes=(" << a_branch.outcome << "," << b_branch.outcome
                << ") inferred=(" << inferred.n << "," << inferred.m << ")";
            check.diagnostic = msg.str();
          }
        }
      }
    }
  }
  return check;
}

ExhaustiveCheck verify_two_copy_exhaustive(int d) {
  if (d < 2) throw std::invalid_argument("verify_two_copy_exhaustive: dimension must be >= 2");
  const auto layout = SubsystemLayout::biparties(d, 2);
  const BasisPlan comp = computational_plan(d);
  const BasisPlan four = fourier_plan(d);

  ExhaustiveCheck check;
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      const BellLabel hidden{n, m, d};
      const Ket copy = bell_state(hidden);
      const Ket state = {tensor_product(copy.amps, copy.amps), layout};
      for (const auto& a1 : measurement_branches(state, "A1", comp.kets)) {
        for (const auto& b1 : measurement_branches(a1.post_state, "B1", comp.kets)) {
          for (const auto& a2 : measurement_branches(b1.post_state, "A2", four.kets)) {
            for (const auto& b2 : measurement_branches(a2.post_state, "B2", four.kets)) {
              ++check.branches_checked;
              const BellLabel inferred{infer_phase_index(a2.outcome, b2.outcome, d),
                                       infer_shift_index(a1.outcome, b1.outcome, d), d};
              if (!(inferred == hidden)) {
                check.all_correct = false;
                if (check.diagnostic.empty()) {
                  std::ostringstream msg;
                  msg << "two-copy d=" << d << " hidden=(" << n << "," << m << ") outcomes=("
                      << a1.outcome << "," << b1.outcome << "," << a2.outcome << ","
                      << b2.outcome << ") inferred=(" << inferred.n << "," << inferred.m << ")";
                  check.diagnostic = msg.str();
                }
              }
            }
          }
        }
      }
    }
  }
  return check;
}

namespace {

/// Layout of a teleportation instance: sender holds the input qudit S and
/// channel half M; receiver holds channel half R.
SubsystemLayout teleport_layout(int d) {
  return {{d, d, d}, {"sender", "sender", "receiver"}};
}

/// Bell basis on the sender's two qudits, outcome index n*d + m.
std::vector<Ket> sender_bell_basis(int d) {
  std::vector<Ket> basis = bell_basis(d);
  const SubsystemLayout local{{d, d}, {"sender", "sender"}};
  for (auto& b : basis) b.layout = local;
  return basis;
}

/// Receiver correction for outcome (a, b), assuming channel label (n', m'):
/// (W_{n'm'} X^b Z^{-a})^dagger.
Matrix teleport_correction(const BellLabel& corrections_for, int a, int b) {
  const int d = corrections_for.d;
  const Matrix believed_twist =
      weyl_operator(corrections_for) *
      weyl_operator({((-a) % d + d) % d, b % d, d});  // X^b Z^{-a} = W_{-a mod d, b}
  return believed_twist.adjoint();
}

}  // namespace

TeleportResult teleport(const Ket& input, const BellLabel& channel,
                        const BellLabel& corrections_for, std::uint64_t seed) {
  validate_label(channel);
  validate_label(corrections_for);
  const int d = channel.d;
  if (corrections_for.d != d) {
    throw std::invalid_argument("teleport: channel and corrections_for dimensions differ");
  }
  if (input.layout.num_qudits() != 1 || input.layout.dims[0] != d) {
    throw std::invalid_argument("teleport: input must be a single qudit of the channel dimension");
  }

  const auto layout = teleport_layout(d);
  const Ket full = {tensor_product(input.amps, bell_state(channel).amps), layout};
  const auto basis = sender_bell_basis(d);

  Rng rng(seed);
  TeleportResult result;
  result.transcript.seed = seed;

  const auto outcome = measure_local(full, "sender", basis,
                                     "bell(d=" + std::to_string(d) + ")", rng,
                                     result.transcript);
  const int a = outcome.outcome / d;
  const int b = outcome.outcome % d;
  result.measured = {a, b, d};
  result.transcript.add_broadcast(
      "sender", "outcome n=" + std::to_string(a) + " m=" + std::to_string(b));

  Ket receiver = collapse_remainder(outcome.post_state, "sender", basis[outcome.outcome]);
  const Matrix correction = teleport_correction(corrections_for, a, b);
  receiver = apply_local_unitary(receiver, 0, correction);
  result.output = std::move(receiver);
  return result;
}

ExhaustiveCheck verify_teleport_exhaustive(const Ket& input, const BellLabel& channel,
                                           const BellLabel& corrections_for) {
  const int d = channel.d;
  const auto layout = teleport_layout(d);
  const Ket full = {tensor_product(input.amps, bell_state(channel).amps), layout};
  const auto basis = sender_bell_basis(d);

  // Expected outcome-independent twist: W_{n - n', m - m'} applied to the input.
  const BellLabel delta{((channel.n - corrections_for.n) % d + d) % d,
                        ((channel.m - corrections_for.m) % d + d) % d, d};
  const Ket expected = {(weyl_operator(delta) * input.amps).eval(),
                        SubsystemLayout::single_qudit(d, "receiver")};

  ExhaustiveCheck check;
  for (const auto& branch : measurement_branches(full, "sender", basis)) {
    ++check.branches_checked;
    Ket receiver = collapse_remainder(branch.post_state, "sender", basis[branch.outcome]);
    const int a = branch.outcome / d;
    const int b = branch.outcome % d;
    receiver = apply_local_unitary(receiver, 0, teleport_correction(corrections_for, a, b));
    const double f = fidelity(receiver, expected);
    if (f < 1.0 - 1e-10) {
      check.all_correct = false;
      if (check.diagnostic.empty()) {
        std::ostringstream msg;
        msg << "teleport channel=(" << channel.n << "," << channel.m << ") corrections=("
            << corrections_for.n << "," << corrections_for.m << ") outcome=(" << a << "," << b
            << ") fidelity with the expected twist = " << f;
        check.diagnostic = msg.str();
      }
    }
  }
  return check;
}

}  // namespace qdistill
