#include "qdistill/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qdistill {

int dense_cap() {
  static const int cap = [] {
    if (const char* env = std::getenv("QDISTILL_DENSE_CAP")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return kDefaultDenseCap;
  }();
  return cap;
}

long SubsystemLayout::total_dim() const {
  long n = 1;
  for (int d : dims) {
    if (d < 2) throw std::invalid_argument("SubsystemLayout: qudit dimension must be >= 2");
    n *= d;
  }
  return n;
}

std::vector<std::string> SubsystemLayout::parties() const {
  std::vector<std::string> out;
  for (const auto& p : party_of) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

std::vector<int> SubsystemLayout::qudits_of(const std::string& party) const {
  std::vector<int> out;
  for (int k = 0; k < num_qudits(); ++k) {
    if (party_of[k] == party) out.push_back(k);
  }
  return out;
}

std::vector<int> SubsystemLayout::qudits_of(const std::vector<std::string>& names) const {
  std::set<int> acc;
  for (const auto& p : names) {
    for (int q : qudits_of(p)) acc.insert(q);
  }
  return {acc.begin(), acc.end()};
}

SubsystemLayout SubsystemLayout::restricted_to(const std::vector<int>& kept) const {
  SubsystemLayout out;
  for (int k : kept) {
    if (k < 0 || k >= num_qudits()) {
      throw std::out_of_range("SubsystemLayout::restricted_to: qudit index out of range");
    }
    out.dims.push_back(dims[k]);
    out.party_of.push_back(party_of[k]);
  }
  return out;
}

SubsystemLayout SubsystemLayout::single_qudit(int d, const std::string& party) {
  if (d < 2) throw std::invalid_argument("single_qudit: dimension must be >= 2");
  return {{d}, {party}};
}

SubsystemLayout SubsystemLayout::bipartite(int d, const std::string& first,
                                           const std::string& second) {
  if (d < 2) throw std::invalid_argument("bipartite: dimension must be >= 2");
  return {{d, d}, {first, second}};
}

SubsystemLayout SubsystemLayout::four_party(int d) {
  if (d < 2) throw std::invalid_argument("four_party: dimension must be >= 2");
  return {{d, d, d, d}, {"A", "B", "C", "D"}};
}

SubsystemLayout SubsystemLayout::biparties(int d, int n) {
  if (d < 2) throw std::invalid_argument("biparties: dimension must be >= 2");
  if (n < 1) throw std::invalid_argument("biparties: need at least one biparty");
  SubsystemLayout out;
  for (int k = 0; k < n; ++k) {
    out.dims.push_back(d);
    out.dims.push_back(d);
    out.party_of.push_back("A" + std::to_string(k + 1));
    out.party_of.push_back("B" + std::to_string(k + 1));
  }
  return out;
}

std::vector<long> row_major_strides(const std::vector<int>& dims) {
  std::vector<long> strides(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) {
    strides[k] = strides[k + 1] * dims[k + 1];
  }
  return strides;
}

std::vector<int> decompose_index(long index, const std::vector<int>& dims) {
  std::vector<int> digits(dims.size(), 0);
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    digits[k] = static_cast<int>(index % dims[k]);
    index /= dims[k];
  }
  return digits;
}

long compose_index(const std::vector<int>& digits, const std::vector<long>& strides) {
  long index = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) index += digits[k] * strides[k];
  return index;
}

namespace {

// Validate a qudit subset: in-range, duplicate-free; returns it sorted.
std::vector<int> checked_subset(const std::vector<int>& subset, int num_qudits,
                                const char* where) {
  std::vector<int> s = subset;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= num_qudits) {
      throw std::out_of_range(std::string(where) + ": qudit index out of range");
    }
    if (i > 0 && s[i] == s[i - 1]) {
      throw std::invalid_argument(std::string(where) + ": duplicate qudit index");
    }
  }
  return s;
}

std::vector<int> complement_of(const std::vector<int>& sorted_subset, int num_qudits) {
  std::vector<int> out;
  std::size_t j = 0;
  for (int k = 0; k < num_qudits; ++k) {
    if (j < sorted_subset.size() && sorted_subset[j] == k) {
      ++j;
    } else {
      out.push_back(k);
    }
  }
  return out;
}

}  // namespace

std::vector<long> subset_offsets(const std::vector<int>& dims, const std::vector<int>& subset) {
  const auto strides = row_major_strides(dims);
  long count = 1;
  for (int k : subset) count *= dims[k];
  std::vector<long> offsets(count);
  for (long local = 0; local < count; ++local) {
    long rem = local;
    long off = 0;
    for (int j = static_cast<int>(subset.size()) - 1; j >= 0; --j) {
      const int q = subset[j];
      off += (rem % dims[q]) * strides[q];
      rem /= dims[q];
    }
    offsets[local] = off;
  }
  return offsets;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  const long rows = a.rows() * b.rows();
  const long cols = a.cols() * b.cols();
  const int cap = dense_cap();
  if (rows > cap && cols > cap) {
    std::ostringstream msg;
    msg << "tensor_product: result " << rows << "x" << cols << " exceeds the dense cap "
        << cap << "; use the label-space path (or raise QDISTILL_DENSE_CAP)";
    throw std::length_error(msg.str());
  }
  Matrix out(rows, cols);
  for (long i = 0; i < a.rows(); ++i) {
    for (long j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector tensor_product(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (long i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

DensityOperator make_density(Matrix m, SubsystemLayout layout) {
  const long dim = layout.total_dim();
  if (m.rows() != m.cols()) throw std::invalid_argument("make_density: matrix not square");
  if (m.rows() != dim) {
    throw std::invalid_argument("make_density: matrix dimension does not match layout");
  }
  if (dim > dense_cap()) {
    std::ostringstream msg;
    msg << "make_density: dimension " << dim << " exceeds the dense cap " << dense_cap()
        << "; use the label-space path (or raise QDISTILL_DENSE_CAP)";
    throw std::length_error(msg.str());
  }
  if (!is_hermitian(m, kHermitianTolConstruct)) {
    throw std::invalid_argument("make_density: matrix not Hermitian within 1e-12");
  }
  if (std::abs(m.trace().real() - 1.0) > 1e-12 || std::abs(m.trace().imag()) > 1e-12) {
    throw std::invalid_argument("make_density: trace must be 1 within 1e-12");
  }
  return {std::move(m), std::move(layout)};
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
  const auto& dims = rho.layout.dims;
  const auto kept = checked_subset(keep, rho.layout.num_qudits(), "partial_trace");
  if (kept.empty()) throw std::invalid_argument("partial_trace: keep set must be non-empty");
  const auto traced = complement_of(kept, rho.layout.num_qudits());

  const auto keep_off = subset_offsets(dims, kept);
  const auto trace_off = subset_offsets(dims, traced);
  const long K = static_cast<long>(keep_off.size());

  Matrix out = Matrix::Zero(K, K);
  for (long r = 0; r < K; ++r) {
    for (long c = 0; c < K; ++c) {
      Complex acc = 0.0;
      for (long t : trace_off) acc += rho.mat(keep_off[r] + t, keep_off[c] + t);
      out(r, c) = acc;
    }
  }
  return {std::move(out), rho.layout.restricted_to(kept)};
}

Matrix partial_transpose(const Matrix& m, const SubsystemLayout& layout,
                         const std::vector<int>& side) {
  const long N = layout.total_dim();
  if (m.rows() != N || m.cols() != N) {
    throw std::invalid_argument("partial_transpose: matrix dimension does not match layout");
  }
  const auto s = checked_subset(side, layout.num_qudits(), "partial_transpose");

  // side_part[i]: the additive contribution of the side qudits to index i.
  std::vector<long> side_part(N, 0);
  const auto strides = row_major_strides(layout.dims);
  for (long i = 0; i < N; ++i) {
    const auto digits = decompose_index(i, layout.dims);
    long off = 0;
    for (int q : s) off += digits[q] * strides[q];
    side_part[i] = off;
  }

  Matrix out(N, N);
  for (long r = 0; r < N; ++r) {
    for (long c = 0; c < N; ++c) {
      const long rr = r - side_part[r] + side_part[c];
      const long cc = c - side_part[c] + side_part[r];
      out(rr, cc) = m(r, c);
    }
  }
  return out;
}

SubsystemLayout permute_layout(const SubsystemLayout& layout, const std::vector<int>& perm) {
  if (perm.size() != layout.dims.size()) {
    throw std::invalid_argument("permute_layout: permutation length mismatch");
  }
  std::vector<bool> seen(perm.size(), false);
  SubsystemLayout out;
  for (int old : perm) {
    if (old < 0 || old >= layout.num_qudits() || seen[old]) {
      throw std::invalid_argument("permute_layout: not a permutation");
    }
    seen[old] = true;
    out.dims.push_back(layout.dims[old]);
    out.party_of.push_back(layout.party_of[old]);
  }
  return out;
}

namespace {

// index_map[i] = index of basis ket i after qudit reordering.
std::vector<long> permutation_index_map(const SubsystemLayout& layout,
                                        const std::vector<int>& perm) {
  const auto new_layout = permute_layout(layout, perm);
  const auto new_strides = row_major_strides(new_layout.dims);
  const long N = layout.total_dim();
  std::vector<long> map(N);
  for (long i = 0; i < N; ++i) {
    const auto digits = decompose_index(i, layout.dims);
    long j = 0;
    for (std::size_t k = 0; k < perm.size(); ++k) j += digits[perm[k]] * new_strides[k];
    map[i] = j;
  }
  return map;
}

}  // namespace

Matrix permute_qudits(const Matrix& m, const SubsystemLayout& layout,
                      const std::vector<int>& perm) {
  const long N = layout.total_dim();
  if (m.rows() != N || m.cols() != N) {
    throw std::invalid_argument("permute_qudits: matrix dimension does not match layout");
  }
  const auto map = permutation_index_map(layout, perm);
  Matrix out(N, N);
  for (long r = 0; r < N; ++r) {
    for (long c = 0; c < N; ++c) out(map[r], map[c]) = m(r, c);
  }
  return out;
}

CVector permute_qudits(const CVector& v, const SubsystemLayout& layout,
                       const std::vector<int>& perm) {
  const long N = layout.total_dim();
  if (v.size() != N) {
    throw std::invalid_argument("permute_qudits: vector dimension does not match layout");
  }
  const auto map = permutation_index_map(layout, perm);
  CVector out(N);
  for (long i = 0; i < N; ++i) out(map[i]) = v(i);
  return out;
}

Spectrum spectral_decompose(const Matrix& m) {
  if (!is_hermitian(m, kHermitianTolDerived)) {
    throw std::invalid_argument("spectral_decompose: matrix not Hermitian within 1e-10");
  }
  // Symmetrise before solving so arithmetic noise below the tolerance cannot
  // leak into the spectrum.
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectral_decompose: eigensolver failed to converge");
  }
  const long n = h.rows();
  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  // Eigen returns ascending order; flip to descending.
  for (long k = 0; k < n; ++k) {
    out.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
    out.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

}  // namespace qdistill
