#include "qdistill/separability.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qdistill {

namespace {

std::string join_parties(const std::vector<std::string>& names) {
  bool all_single_char = true;
  for (const auto& p : names) {
    if (p.size() != 1) {
      all_single_char = false;
      break;
    }
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0 && !all_single_char) out << ",";
    out << names[i];
  }
  return out.str();
}

}  // namespace

std::string Cut::name() const { return join_parties(left) + "|" + join_parties(right); }

void Cut::validate_against(const SubsystemLayout& layout) const {
  const auto parties = layout.parties();
  std::set<std::string> expected(parties.begin(), parties.end());
  std::set<std::string> got;
  for (const auto& p : left) got.insert(p);
  for (const auto& p : right) got.insert(p);
  if (left.empty() || right.empty() || got != expected ||
      got.size() != left.size() + right.size()) {
    throw std::invalid_argument("Cut: left/right must partition the layout's parties (cut " +
                                name() + ")");
  }
}

Cut Cut::between(std::vector<std::string> left, std::vector<std::string> right) {
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  Cut out;
  out.left = std::move(left);
  out.right = std::move(right);
  return out;
}

std::vector<double> partial_transpose_spectrum(const DensityOperator& rho, const Cut& cut) {
  cut.validate_against(rho.layout);
  const auto side = rho.layout.qudits_of(cut.right);
  const Matrix pt = partial_transpose(rho.mat, rho.layout, side);
  const auto eig = spectral_decompose(pt);
  return {eig.eigenvalues.data(), eig.eigenvalues.data() + eig.eigenvalues.size()};
}

PptReport ppt_check(const DensityOperator& rho, const Cut& cut) {
  const auto spectrum = partial_transpose_spectrum(rho, cut);
  PptReport out;
  out.cut = cut;
  out.min_eigenvalue = spectrum.back();
  out.ppt = out.min_eigenvalue >= -kPsdTol;
  for (double lam : spectrum) {
    if (lam < -kPsdTol) out.negativity += -lam;
  }
  return out;
}

double negativity(const DensityOperator& rho, const Cut& cut) {
  return ppt_check(rho, cut).negativity;
}

std::vector<Cut> enumerate_cuts(const SubsystemLayout& layout) {
  const auto parties = layout.parties();
  const int P = static_cast<int>(parties.size());
  if (P < 2) throw std::invalid_argument("enumerate_cuts: need at least two parties");
  if (P > 8) {
    throw std::invalid_argument(
        "enumerate_cuts: refusing to enumerate cuts of more than eight parties (" +
        std::to_string(P) + " found); pass explicit cuts instead");
  }
  std::vector<Cut> out;
  // Subsets containing parties[0] (kills left/right symmetry), excluding the
  // full set; bitmask order makes the result deterministic.
  for (unsigned mask = 1; mask < (1u << P) - 1; mask += 2) {
    Cut cut;
    for (int k = 0; k < P; ++k) {
      if (mask & (1u << k)) {
        cut.left.push_back(parties[k]);
      } else {
        cut.right.push_back(parties[k]);
      }
    }
    std::sort(cut.left.begin(), cut.left.end());
    std::sort(cut.right.begin(), cut.right.end());
    cut.balanced_two_party = (P == 4 && cut.left.size() == 2);
    out.push_back(std::move(cut));
  }
  return out;
}

Cut biparty_cut(const SubsystemLayout& layout) {
  std::vector<std::string> left, right;
  for (const auto& p : layout.parties()) {
    if (!p.empty() && p.front() == 'A') {
      left.push_back(p);
    } else {
      right.push_back(p);
    }
  }
  if (left.empty() || right.empty()) {
    throw std::invalid_argument("biparty_cut: layout has no A*/B* party split");
  }
  return Cut::between(std::move(left), std::move(right));
}

}  // namespace qdistill
