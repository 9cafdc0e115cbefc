#include "qdistill/qudit_states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qdistill {

namespace {

/// exp(2 pi i k / d)
Complex omega(int d, long k) {
  // Reduce first so the angle stays small and phases for equal k mod d are
  // bitwise identical.
  const long r = ((k % d) + d) % d;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / d);
}

}  // namespace

Ket make_ket(CVector amps, SubsystemLayout layout) {
  if (amps.size() != layout.total_dim()) {
    throw std::invalid_argument("make_ket: amplitude count does not match layout");
  }
  if (std::abs(amps.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("make_ket: state not normalised within 1e-12");
  }
  return {std::move(amps), std::move(layout)};
}

void validate_label(const BellLabel& label) {
  if (label.d < 2) throw std::out_of_range("BellLabel: dimension must be >= 2");
  if (label.n < 0 || label.n >= label.d || label.m < 0 || label.m >= label.d) {
    std::ostringstream msg;
    msg << "BellLabel: (n=" << label.n << ", m=" << label.m << ") out of range for d="
        << label.d;
    throw std::out_of_range(msg.str());
  }
}

Ket bell_state(const BellLabel& label) {
  return bell_state(label, SubsystemLayout::bipartite(label.d));
}

Ket bell_state(const BellLabel& label, const SubsystemLayout& layout) {
  validate_label(label);
  const int d = label.d;
  if (layout.dims != std::vector<int>{d, d}) {
    throw std::invalid_argument("bell_state: layout must be two qudits of dimension d");
  }
  CVector amps = CVector::Zero(static_cast<long>(d) * d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    amps(static_cast<long>(j) * d + (j + label.m) % d) =
        scale * omega(d, static_cast<long>(j) * label.n);
  }
  return {std::move(amps), layout};
}

Matrix shift_x(int d) {
  if (d < 2) throw std::invalid_argument("shift_x: dimension must be >= 2");
  Matrix x = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
  return x;
}

Matrix clock_z(int d) {
  if (d < 2) throw std::invalid_argument("clock_z: dimension must be >= 2");
  Matrix z = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) z(j, j) = omega(d, j);
  return z;
}

Matrix weyl_operator(const BellLabel& label) {
  validate_label(label);
  const int d = label.d;
  // W_nm = X^m Z^n maps |j> to omega^{jn} |(j+m) mod d>.
  Matrix w = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    w((j + label.m) % d, j) = omega(d, static_cast<long>(j) * label.n);
  }
  return w;
}

std::vector<Ket> fourier_basis(int d) {
  if (d < 2) throw std::invalid_argument("fourier_basis: dimension must be >= 2");
  const auto layout = SubsystemLayout::single_qudit(d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<Ket> basis;
  basis.reserve(d);
  for (int a = 0; a < d; ++a) {
    CVector f(d);
    for (int j = 0; j < d; ++j) {
      f(j) = scale * omega(d, -static_cast<long>(j) * a);
    }
    basis.push_back({std::move(f), layout});
  }
  return basis;
}

std::vector<Ket> computational_basis(int d) {
  if (d < 2) throw std::invalid_argument("computational_basis: dimension must be >= 2");
  const auto layout = SubsystemLayout::single_qudit(d);
  std::vector<Ket> basis;
  basis.reserve(d);
  for (int j = 0; j < d; ++j) {
    CVector e = CVector::Zero(d);
    e(j) = 1.0;
    basis.push_back({std::move(e), layout});
  }
  return basis;
}

std::vector<Ket> bell_basis(int d) {
  std::vector<Ket> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) basis.push_back(bell_state({n, m, d}));
  }
  return basis;
}

double fidelity(const Ket& a, const Ket& b) {
  if (a.amps.size() != b.amps.size()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  return std::norm(a.amps.dot(b.amps));  // Eigen's dot conjugates the left factor
}

MaxEntWitness is_maximally_entangled(const Ket& psi) {
  if (psi.layout.num_qudits() != 2 || psi.layout.dims[0] != psi.layout.dims[1]) {
    throw std::invalid_argument(
        "is_maximally_entangled: need a two-qudit state with equal local dimensions");
  }
  const int d = psi.layout.dims[0];
  const DensityOperator rho{psi.amps * psi.amps.adjoint(), psi.layout};
  const Matrix eye_over_d = Matrix::Identity(d, d) / static_cast<double>(d);
  double dev = 0.0;
  for (int q : {0, 1}) {
    const auto red = partial_trace(rho, {q});
    dev = std::max(dev, (red.mat - eye_over_d).cwiseAbs().maxCoeff());
  }
  return {dev <= 1e-10, dev};
}

BellLabel MesFamily::member(int k) const {
  if (k < 0 || k >= d) throw std::out_of_range("MesFamily::member: index out of range");
  return kind == Kind::Shift ? BellLabel{fixed_index, k, d} : BellLabel{k, fixed_index, d};
}

bool MesFamily::contains(const BellLabel& label) const {
  if (label.d != d) return false;
  return kind == Kind::Shift ? label.n == fixed_index : label.m == fixed_index;
}

int MesFamily::index_of(const BellLabel& label) const {
  if (!contains(label)) {
    throw std::invalid_argument("MesFamily::index_of: label " + std::to_string(label.n) +
                                "," + std::to_string(label.m) + " is not a member of " +
                                describe() +
                                " (only shift/phase families are supported; arbitrary "
                                "label subsets are rejected)");
  }
  return kind == Kind::Shift ? label.m : label.n;
}

std::string MesFamily::describe() const {
  std::ostringstream out;
  if (kind == Kind::Shift) {
    out << "shift(n=" << fixed_index << ",d=" << d << ")";
  } else {
    out << "phase(m=" << fixed_index << ",d=" << d << ")";
  }
  return out.str();
}

MesFamily MesFamily::shift(int d, int fixed_n) {
  validate_label({fixed_n, 0, d});
  return {Kind::Shift, fixed_n, d};
}

MesFamily MesFamily::phase(int d, int fixed_m) {
  validate_label({0, fixed_m, d});
  return {Kind::Phase, fixed_m, d};
}

}  // namespace qdistill
