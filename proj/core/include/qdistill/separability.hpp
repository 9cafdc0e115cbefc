#pragma once
//
// PPT criterion and negativity across party cuts.
//
// A Cut splits the parties of a layout into two blocks; the check partially
// transposes the qudits of the right block and inspects the spectrum.  The
// verdict tolerance is kPsdTol: eigenvalues above -1e-10 count as
// non-negative, and negativity sums only eigenvalues beyond that tolerance,
// so "negativity = 0 iff PPT" holds exactly.

#include "qdistill/linalg.hpp"

#include <string>
#include <vector>

namespace qdistill {

struct Cut {
  std::vector<std::string> left;   // sorted party names
  std::vector<std::string> right;  // sorted party names
  bool balanced_two_party = false;    // balanced 2-vs-2 cut of a four-party system

  std::string name() const;  // e.g. "AC|BD" or "A1,A2|B1,B2"
  /// Throws std::invalid_argument unless left/right partition the layout's
  /// parties exactly.
  void validate_against(const SubsystemLayout& layout) const;

  static Cut between(std::vector<std::string> left, std::vector<std::string> right);
};

struct PptReport {
  Cut cut;
  double min_eigenvalue = 0.0;  // smallest eigenvalue of the partial transpose
  bool ppt = false;             // min_eigenvalue >= -kPsdTol
  double negativity = 0.0;      // sum of |eigenvalues| below -kPsdTol
};

/// Spectrum of the partial transpose across the cut (descending).
std::vector<double> partial_transpose_spectrum(const DensityOperator& rho, const Cut& cut);

PptReport ppt_check(const DensityOperator& rho, const Cut& cut);
double negativity(const DensityOperator& rho, const Cut& cut);

/// All bipartitions of the layout's parties up to left/right symmetry
/// (2^{P-1} - 1 cuts).  For exactly four parties the balanced 2-vs-2 cuts are
/// flagged as the two-party cuts of interest.  Refuses layouts with more than
/// eight parties; pass explicit cuts instead.
std::vector<Cut> enumerate_cuts(const SubsystemLayout& layout);

/// The {all A* parties} vs {all B* parties} cut of an n-biparty layout.
Cut biparty_cut(const SubsystemLayout& layout);

}  // namespace qdistill
