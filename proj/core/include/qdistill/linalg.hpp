#pragma once
//
// Dense complex linear algebra over composite qudit systems.
//
// Storage and Hermitian eigensolves are delegated to Eigen; everything that
// is specific to multi-qudit index bookkeeping lives here: the composite
// index convention, tensor products, partial trace / partial transpose over
// arbitrary qudit subsets, and qudit permutations.
//
// Composite index convention (frozen): row-major with qudit 0 most
// significant.  For dims (d0, d1, ..., dk) the basis ket |i0, i1, ..., ik>
// sits at index i0*(d1*...*dk) + i1*(d2*...*dk) + ... + ik.

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace qdistill {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Frozen numerical tolerances.
inline constexpr double kHermitianTolConstruct = 1e-12;  // on construction
inline constexpr double kHermitianTolDerived = 1e-10;    // after arithmetic
inline constexpr double kPsdTol = 1e-10;                 // eigenvalue >= -kPsdTol
inline constexpr double kSupportThreshold = 1e-10;       // relative to largest eigenvalue
inline constexpr double kBranchPruneProb = 1e-14;        // measurement branch pruning
inline constexpr int kDefaultDenseCap = 4096;            // max dense matrix dimension

/// Dense-dimension cap: kDefaultDenseCap unless overridden by the
/// QDISTILL_DENSE_CAP environment variable (read once per process).
int dense_cap();

/// Which qudit belongs to which party, and how large each qudit is.
struct SubsystemLayout {
  std::vector<int> dims;                 // dims[k] = dimension of qudit k
  std::vector<std::string> party_of;     // party_of[k] = party holding qudit k

  int num_qudits() const { return static_cast<int>(dims.size()); }
  long total_dim() const;

  /// Distinct parties in order of first appearance.
  std::vector<std::string> parties() const;
  /// Sorted indices of the qudits a party holds (may be empty).
  std::vector<int> qudits_of(const std::string& party) const;
  /// Sorted union of the qudits held by any of the given parties.
  std::vector<int> qudits_of(const std::vector<std::string>& parties) const;
  /// Layout restricted to the given (sorted) qudit indices.
  SubsystemLayout restricted_to(const std::vector<int>& kept) const;

  static SubsystemLayout single_qudit(int d, const std::string& party = "A");
  static SubsystemLayout bipartite(int d, const std::string& first = "A",
                                   const std::string& second = "B");
  /// Four qudits of dimension d held by parties A, B, C, D.
  static SubsystemLayout four_party(int d);
  /// n biparties; biparty k occupies qudits (2k, 2k+1), held by parties
  /// "A{k+1}" and "B{k+1}".
  static SubsystemLayout biparties(int d, int n);

  bool operator==(const SubsystemLayout&) const = default;
};

// --- composite index helpers -------------------------------------------------

/// Row-major strides: strides[k] = product of dims[k+1..].
std::vector<long> row_major_strides(const std::vector<int>& dims);
/// Digits of a composite index (most significant first).
std::vector<int> decompose_index(long index, const std::vector<int>& dims);
long compose_index(const std::vector<int>& digits, const std::vector<long>& strides);

/// For a sorted subset S of qudits, the additive full-index contribution of
/// each local configuration of S (local configurations enumerated row-major
/// over dims[S]).  full_index = subset_offset[s] + complement_offset[c].
std::vector<long> subset_offsets(const std::vector<int>& dims, const std::vector<int>& subset);

// --- basic operations --------------------------------------------------------

bool is_hermitian(const Matrix& m, double tol);

/// Kronecker product honoring the composite index convention
/// (a indexes the more significant qudits).
Matrix tensor_product(const Matrix& a, const Matrix& b);
CVector tensor_product(const CVector& a, const CVector& b);

/// Dense Hermitian, PSD (checked where consumed), trace-one operator with its
/// subsystem layout.
struct DensityOperator {
  Matrix mat;
  SubsystemLayout layout;
};

/// Validating constructor: square matrix, dimension = layout product,
/// Hermitian within kHermitianTolConstruct, trace 1 within 1e-12, and
/// dimension within the dense cap.
DensityOperator make_density(Matrix m, SubsystemLayout layout);

/// Trace out every qudit not listed in keep; the result's layout is the
/// original restricted to the kept qudits (ascending order).
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);

/// Transpose the indices of the given qudit subset only.  Returns a bare
/// matrix: the result of a partial transpose need not be PSD.
Matrix partial_transpose(const Matrix& m, const SubsystemLayout& layout,
                         const std::vector<int>& side);

/// Reorder qudits: perm[k] = old position of the qudit placed at new slot k.
Matrix permute_qudits(const Matrix& m, const SubsystemLayout& layout,
                      const std::vector<int>& perm);
CVector permute_qudits(const CVector& v, const SubsystemLayout& layout,
                       const std::vector<int>& perm);
SubsystemLayout permute_layout(const SubsystemLayout& layout, const std::vector<int>& perm);

/// Eigensystem of a Hermitian matrix, eigenvalues descending, eigenvectors as
/// matching orthonormal columns.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;
};

/// Throws std::invalid_argument if m is not Hermitian within
/// kHermitianTolDerived.
Spectrum spectral_decompose(const Matrix& m);

}  // namespace qdistill
