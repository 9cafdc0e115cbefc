#include "qdistill/mixtures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qdistill {

std::string label_string_repr(const LabelString& s) {
  std::ostringstream out;
  for (const auto& lab : s) out << "(" << lab.n << "," << lab.m << ")";
  return out.str();
}

void LabelDistribution::validate() const {
  if (d < 2) throw std::invalid_argument("LabelDistribution: dimension must be >= 2");
  if (num_biparties < 1) {
    throw std::invalid_argument("LabelDistribution: need at least one biparty");
  }
  double total = 0.0;
  for (const auto& [s, p] : support) {
    if (static_cast<int>(s.size()) != num_biparties) {
      throw std::invalid_argument("LabelDistribution: label string length mismatch");
    }
    for (const auto& lab : s) {
      if (lab.d != d) throw std::invalid_argument("LabelDistribution: label dimension mismatch");
      validate_label(lab);
    }
    if (p < 0.0) throw std::invalid_argument("LabelDistribution: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("LabelDistribution: probabilities must sum to 1 within 1e-12");
  }
}

double LabelDistribution::entropy_bits() const {
  double h = 0.0;
  for (const auto& [s, p] : support) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

bool LabelDistribution::is_uniform(double tol) const {
  if (support.empty()) return false;
  const double expected = 1.0 / static_cast<double>(support.size());
  for (const auto& [s, p] : support) {
    if (std::abs(p - expected) > tol) return false;
  }
  return true;
}

LabelDistribution LabelDistribution::tensor(const LabelDistribution& other) const {
  if (other.d != d) throw std::invalid_argument("LabelDistribution::tensor: dimension mismatch");
  LabelDistribution out;
  out.d = d;
  out.num_biparties = num_biparties + other.num_biparties;
  for (const auto& [s1, p1] : support) {
    for (const auto& [s2, p2] : other.support) {
      LabelString s = s1;
      s.insert(s.end(), s2.begin(), s2.end());
      out.support[std::move(s)] = p1 * p2;
    }
  }
  return out;
}

LabelDistribution LabelDistribution::power(int k) const {
  if (k < 1) throw std::invalid_argument("LabelDistribution::power: power must be >= 1");
  LabelDistribution out = *this;
  for (int i = 1; i < k; ++i) out = out.tensor(*this);
  return out;
}

FourPartyDescriptor FourPartyDescriptor::standard(int d) {
  return {d, MesFamily::phase(d, 0)};
}

namespace {

/// All d^2 labels in (n, m) lexicographic order.
std::vector<BellLabel> all_labels(int d) {
  std::vector<BellLabel> out;
  out.reserve(static_cast<std::size_t>(d) * d);
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) out.push_back({n, m, d});
  }
  return out;
}

/// Uniform correlated mixture over a set of labels: every biparty carries the
/// same label, drawn uniformly from `members`.
LabelDistribution correlated_uniform(int d, int num_biparties,
                                     const std::vector<BellLabel>& members) {
  LabelDistribution out;
  out.d = d;
  out.num_biparties = num_biparties;
  const double p = 1.0 / static_cast<double>(members.size());
  for (const auto& lab : members) {
    out.support[LabelString(num_biparties, lab)] = p;
  }
  return out;
}

MixtureState build_correlated(int d, int num_biparties, const std::vector<BellLabel>& members,
                              const SubsystemLayout& layout) {
  MixtureState out;
  out.labels = correlated_uniform(d, num_biparties, members);
  const long dim = layout.total_dim();
  if (dim <= dense_cap()) {
    out.dense = label_to_dense(out.labels, layout);
  } else {
    std::ostringstream why;
    why << "dense form omitted: dimension " << dim << " exceeds the dense cap " << dense_cap()
        << " (label form is exact; raise QDISTILL_DENSE_CAP to force)";
    out.dense_omitted_reason = why.str();
  }
  return out;
}

}  // namespace

MixtureState four_party_state(const FourPartyDescriptor& desc) {
  if (desc.family.d != desc.d) {
    throw std::invalid_argument("four_party_state: family dimension does not match d");
  }
  std::vector<BellLabel> members;
  for (int k = 0; k < desc.family.size(); ++k) members.push_back(desc.family.member(k));
  return build_correlated(desc.d, 2, members, SubsystemLayout::four_party(desc.d));
}

MixtureState uniform_full_mixture(int d) {
  if (d < 2) throw std::invalid_argument("uniform_full_mixture: dimension must be >= 2");
  return build_correlated(d, 2, all_labels(d), SubsystemLayout::four_party(d));
}

MixtureState multi_copy_state(int d, int n) {
  if (d < 2) throw std::invalid_argument("multi_copy_state: dimension must be >= 2");
  if (n < 1) throw std::invalid_argument("multi_copy_state: need at least one copy");
  return build_correlated(d, n, all_labels(d), SubsystemLayout::biparties(d, n));
}

LabelDistribution pairing_product(int d, const std::vector<std::pair<int, int>>& pairing) {
  if (d < 2) throw std::invalid_argument("pairing_product: dimension must be >= 2");
  if (pairing.empty()) throw std::invalid_argument("pairing_product: empty pairing");
  const int n = 2 * static_cast<int>(pairing.size());
  std::vector<bool> seen(n, false);
  for (const auto& [a, b] : pairing) {
    if (a < 0 || a >= n || b < 0 || b >= n || a == b || seen[a] || seen[b]) {
      throw std::invalid_argument(
          "pairing_product: pairing must be a perfect matching of 0..2p-1");
    }
    seen[a] = seen[b] = true;
  }

  const auto labels = all_labels(d);
  const int pairs = static_cast<int>(pairing.size());
  const double p = std::pow(static_cast<double>(d) * d, -pairs);

  LabelDistribution out;
  out.d = d;
  out.num_biparties = n;
  // Enumerate one label choice per pair; both ends of a pair carry it.
  std::vector<int> choice(pairs, 0);
  const int base = d * d;
  while (true) {
    LabelString s(n, BellLabel{0, 0, d});
    for (int j = 0; j < pairs; ++j) {
      s[pairing[j].first] = labels[choice[j]];
      s[pairing[j].second] = labels[choice[j]];
    }
    out.support[std::move(s)] = p;
    int j = pairs - 1;
    while (j >= 0 && choice[j] == base - 1) {
      choice[j] = 0;
      --j;
    }
    if (j < 0) break;
    ++choice[j];
  }
  return out;
}

DensityOperator label_to_dense(const LabelDistribution& dist) {
  return label_to_dense(dist, SubsystemLayout::biparties(dist.d, dist.num_biparties));
}

DensityOperator label_to_dense(const LabelDistribution& dist, const SubsystemLayout& layout) {
  dist.validate();
  if (layout.num_qudits() != 2 * dist.num_biparties) {
    throw std::invalid_argument("label_to_dense: layout must have two qudits per biparty");
  }
  const long dim = layout.total_dim();
  if (dim > dense_cap()) {
    std::ostringstream msg;
    msg << "label_to_dense: dimension " << dim << " exceeds the dense cap " << dense_cap()
        << "; stay in label space (or raise QDISTILL_DENSE_CAP)";
    throw std::length_error(msg.str());
  }

  Matrix acc = Matrix::Zero(dim, dim);
  for (const auto& [s, p] : dist.support) {
    if (p == 0.0) continue;
    CVector v = bell_state(s[0]).amps;
    for (std::size_t k = 1; k < s.size(); ++k) {
      v = tensor_product(v, bell_state(s[k]).amps);
    }
    acc.noalias() += p * (v * v.adjoint());
  }
  return {std::move(acc), layout};
}

std::map<LabelString, double> bell_basis_diagonal(const DensityOperator& rho) {
  const int nq = rho.layout.num_qudits();
  if (nq % 2 != 0) {
    throw std::invalid_argument("bell_basis_diagonal: need an even number of qudits");
  }
  const int d = rho.layout.dims[0];
  for (int dd : rho.layout.dims) {
    if (dd != d) throw std::invalid_argument("bell_basis_diagonal: qudit dimensions must agree");
  }
  const int biparties = nq / 2;
  const auto labels = all_labels(d);
  const int base = d * d;

  std::map<LabelString, double> out;
  std::vector<int> choice(biparties, 0);
  while (true) {
    LabelString s;
    s.reserve(biparties);
    for (int k = 0; k < biparties; ++k) s.push_back(labels[choice[k]]);
    CVector v = bell_state(s[0]).amps;
    for (int k = 1; k < biparties; ++k) v = tensor_product(v, bell_state(s[k]).amps);
    out[s] = std::real(v.dot(rho.mat * v));

    int j = biparties - 1;
    while (j >= 0 && choice[j] == base - 1) {
      choice[j] = 0;
      --j;
    }
    if (j < 0) break;
    ++choice[j];
  }
  return out;
}

std::vector<std::vector<std::pair<int, int>>> perfect_matchings(int num_elements) {
  if (num_elements <= 0 || num_elements % 2 != 0) {
    throw std::invalid_argument("perfect_matchings: need a positive even element count");
  }
  std::vector<std::vector<std::pair<int, int>>> out;
  std::vector<int> elems(num_elements);
  for (int i = 0; i < num_elements; ++i) elems[i] = i;

  // Recursively pair the smallest remaining element with each other element.
  struct Rec {
    std::vector<std::vector<std::pair<int, int>>>& out;
    void operator()(std::vector<int>& rest, std::vector<std::pair<int, int>>& acc) {
      if (rest.empty()) {
        out.push_back(acc);
        return;
      }
      const int first = rest.front();
      for (std::size_t j = 1; j < rest.size(); ++j) {
        std::vector<int> next;
        for (std::size_t k = 1; k < rest.size(); ++k) {
          if (k != j) next.push_back(rest[k]);
        }
        acc.emplace_back(first, rest[j]);
        (*this)(next, acc);
        acc.pop_back();
      }
    }
  } rec{out};
  std::vector<std::pair<int, int>> acc;
  rec(elems, acc);
  return out;
}

std::vector<std::pair<int, int>> consecutive_pairing(int num_elements) {
  if (num_elements <= 0 || num_elements % 2 != 0) {
    throw std::invalid_argument("consecutive_pairing: need a positive even element count");
  }
  std::vector<std::pair<int, int>> out;
  for (int k = 0; k < num_elements; k += 2) out.emplace_back(k, k + 1);
  return out;
}

StateDescriptor StateDescriptor::four_party(int d, std::optional<MesFamily> family) {
  StateDescriptor out;
  out.kind = Kind::FourParty;
  out.d = d;
  out.family = family ? *family : MesFamily::phase(d, 0);
  return out;
}

StateDescriptor StateDescriptor::full_mixture(int d) {
  StateDescriptor out;
  out.kind = Kind::FullMixture;
  out.d = d;
  return out;
}

StateDescriptor StateDescriptor::multi_copy(int d, int n, int power) {
  StateDescriptor out;
  out.kind = Kind::MultiCopy;
  out.d = d;
  out.copies = n;
  out.tensor_power = power;
  return out;
}

StateDescriptor StateDescriptor::pairing_product_of(int d,
                                                    std::vector<std::pair<int, int>> pairing) {
  StateDescriptor out;
  out.kind = Kind::PairingProduct;
  out.d = d;
  out.pairing = std::move(pairing);
  return out;
}

LabelDistribution StateDescriptor::resolve_labels() const {
  LabelDistribution base;
  switch (kind) {
    case Kind::FourParty:
      base = four_party_state({d, family ? *family : MesFamily::phase(d, 0)}).labels;
      break;
    case Kind::FullMixture:
      base = uniform_full_mixture(d).labels;
      break;
    case Kind::MultiCopy:
      base = multi_copy_state(d, copies).labels;
      break;
    case Kind::PairingProduct:
      base = pairing_product(d, pairing);
      break;
  }
  return tensor_power > 1 ? base.power(tensor_power) : base;
}

std::optional<DensityOperator> StateDescriptor::resolve_dense(std::string* omitted_reason) const {
  const auto labels = resolve_labels();
  const long dim = [&] {
    long n = 1;
    for (int k = 0; k < 2 * labels.num_biparties; ++k) n *= d;
    return n;
  }();
  if (dim > dense_cap()) {
    if (omitted_reason) {
      std::ostringstream why;
      why << "dense form omitted: dimension " << dim << " exceeds the dense cap "
          << dense_cap();
      *omitted_reason = why.str();
    }
    return std::nullopt;
  }
  return label_to_dense(labels);
}

std::string StateDescriptor::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::FourParty:
      out << "four_party(d=" << d << ",family=" << (family ? family->describe() : "phase(m=0)")
          << ")";
      break;
    case Kind::FullMixture:
      out << "full_mixture(d=" << d << ")";
      break;
    case Kind::MultiCopy:
      out << "multi_copy(d=" << d << ",n=" << copies << ")";
      break;
    case Kind::PairingProduct: {
      out << "pairing_product(d=" << d << ",pairs=";
      for (const auto& [a, b] : pairing) out << "(" << a << "," << b << ")";
      out << ")";
      break;
    }
  }
  if (tensor_power > 1) out << "^" << tensor_power;
  return out.str();
}

}  // namespace qdistill
