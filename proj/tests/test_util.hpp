#pragma once
//
// Shared helpers for the unit suites: entrywise matrix comparison, seeded
// random inputs (independent of the library's Rng so tests never share a
// random stream with the code under test), and small hand-rolled oracles.

#include "qdistill/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace testutil {

using qdistill::Complex;
using qdistill::CVector;
using qdistill::Matrix;

// Accepts any pair of Eigen expressions of matching shape (matrix or vector).
template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return (a.derived() - b.derived()).cwiseAbs().maxCoeff();
}

// Deterministic random complex matrix with entries in the unit square.
inline Matrix random_matrix(int rows, int cols, std::mt19937& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(u(gen), u(gen));
  return m;
}

inline Matrix random_hermitian(int dim, std::mt19937& gen) {
  Matrix m = random_matrix(dim, dim, gen);
  return (m + m.adjoint()) / 2.0;
}

// Random density operator: normalised Gram matrix AA^dagger / tr.
inline Matrix random_density_matrix(int dim, std::mt19937& gen) {
  Matrix a = random_matrix(dim, dim, gen);
  Matrix g = a * a.adjoint();
  return g / g.trace().real();
}

inline CVector random_unit_vector(int dim, std::mt19937& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CVector v(dim);
  double norm2 = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v(i) = Complex(u(gen), u(gen));
    norm2 = v.squaredNorm();
  } while (norm2 < 1e-6);
  return v / std::sqrt(norm2);
}

// Independent Kronecker product (plain quadruple loop; no shared code with
// the library implementation).
inline Matrix kron_oracle(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return r;
}

// Elementary symmetric polynomials e1..e_n of the eigenvalues of a Hermitian
// matrix, computed from power sums p_k = tr(M^k) via Newton's identities —
// an eigensolver-free characteristic-polynomial oracle.
inline std::vector<double> newton_elementary_symmetric(const Matrix& m, int count) {
  std::vector<double> p(count + 1, 0.0);  // p[k] = tr(M^k)
  Matrix acc = Matrix::Identity(m.rows(), m.cols());
  for (int k = 1; k <= count; ++k) {
    acc = acc * m;
    p[k] = acc.trace().real();
  }
  std::vector<double> e(count + 1, 0.0);
  e[0] = 1.0;
  for (int k = 1; k <= count; ++k) {
    double sum = 0.0;
    for (int i = 1; i <= k; ++i) sum += (i % 2 == 1 ? 1.0 : -1.0) * e[k - i] * p[i];
    e[k] = sum / k;
  }
  return {e.begin() + 1, e.end()};
}

// Sorted-descending comparison of a spectrum against expected values.
inline double max_spectrum_diff(std::vector<double> got, std::vector<double> expected) {
  std::sort(got.rbegin(), got.rend());
  std::sort(expected.rbegin(), expected.rend());
  if (got.size() != expected.size()) return 1e300;
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i)
    worst = std::max(worst, std::abs(got[i] - expected[i]));
  return worst;
}

}  // namespace testutil
