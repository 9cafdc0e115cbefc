#include "qdistill/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace qdistill {

EntropyResult EntropyResult::finite(double bits, Method method) {
  EntropyResult out;
  out.value_bits = bits;
  out.infinite = false;
  out.method = method;
  out.support_contained = true;
  return out;
}

EntropyResult EntropyResult::unbounded(Method method) {
  EntropyResult out;
  out.value_bits = 0.0;
  out.infinite = true;
  out.method = method;
  out.support_contained = false;
  return out;
}

namespace {

struct CheckedSpectrum {
  Eigen::VectorXd eigenvalues;  // descending
  Matrix eigenvectors;
  double lambda_max = 0.0;
  double cutoff = 0.0;  // support threshold scaled by lambda_max
};

CheckedSpectrum checked_density_spectrum(const DensityOperator& rho, double support_threshold,
                                         const char* where) {
  if (!is_hermitian(rho.mat, kHermitianTolDerived)) {
    throw std::invalid_argument(std::string(where) + ": operator not Hermitian within 1e-10");
  }
  const double tr = rho.mat.trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw std::invalid_argument(std::string(where) + ": operator trace must be 1");
  }
  auto eig = spectral_decompose(rho.mat);
  const long n = eig.eigenvalues.size();
  if (eig.eigenvalues(n - 1) < -kPsdTol) {
    throw std::domain_error(std::string(where) + ": operator not PSD within tolerance (min eig " +
                            std::to_string(eig.eigenvalues(n - 1)) + ")");
  }
  CheckedSpectrum out;
  out.lambda_max = eig.eigenvalues(0);
  out.cutoff = support_threshold * out.lambda_max;
  out.eigenvalues = std::move(eig.eigenvalues);
  out.eigenvectors = std::move(eig.eigenvectors);
  return out;
}

}  // namespace

double von_neumann_entropy(const DensityOperator& rho, double support_threshold) {
  const auto eig = checked_density_spectrum(rho, support_threshold, "von_neumann_entropy");
  double h = 0.0;
  for (long k = 0; k < eig.eigenvalues.size(); ++k) {
    const double lam = eig.eigenvalues(k);
    if (lam > eig.cutoff) h -= lam * std::log2(lam);
  }
  return h;
}

EntropyResult relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                               double support_threshold) {
  if (rho.mat.rows() != sigma.mat.rows()) {
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  }
  const auto rs = checked_density_spectrum(rho, support_threshold, "relative_entropy(rho)");
  const auto ss = checked_density_spectrum(sigma, support_threshold, "relative_entropy(sigma)");

  // Leakage of rho through the orthocomplement of sigma's support.
  double leakage = 0.0;
  for (long k = 0; k < ss.eigenvalues.size(); ++k) {
    if (ss.eigenvalues(k) <= ss.cutoff) {
      const CVector v = ss.eigenvectors.col(k);
      leakage += std::real(v.dot(rho.mat * v));
    }
  }
  if (leakage > support_threshold) {
    return EntropyResult::unbounded(EntropyResult::Method::Dense);
  }

  // Tr rho log2 rho from rho's own spectrum.
  double tr_rho_log_rho = 0.0;
  for (long k = 0; k < rs.eigenvalues.size(); ++k) {
    const double lam = rs.eigenvalues(k);
    if (lam > rs.cutoff) tr_rho_log_rho += lam * std::log2(lam);
  }
  // Tr rho log2 sigma over sigma's support.
  double tr_rho_log_sigma = 0.0;
  for (long k = 0; k < ss.eigenvalues.size(); ++k) {
    const double mu = ss.eigenvalues(k);
    if (mu > ss.cutoff) {
      const CVector v = ss.eigenvectors.col(k);
      tr_rho_log_sigma += std::log2(mu) * std::real(v.dot(rho.mat * v));
    }
  }
  return EntropyResult::finite(tr_rho_log_rho - tr_rho_log_sigma,
                               EntropyResult::Method::Dense);
}

EntropyResult kl_label(const LabelDistribution& p, const LabelDistribution& q) {
  p.validate();
  q.validate();
  if (p.d != q.d || p.num_biparties != q.num_biparties) {
    throw std::invalid_argument("kl_label: distributions must share d and biparty count");
  }
  double acc = 0.0;
  for (const auto& [s, ps] : p.support) {
    if (ps == 0.0) continue;
    const auto it = q.support.find(s);
    if (it == q.support.end() || it->second == 0.0) {
      return EntropyResult::unbounded(EntropyResult::Method::Label);
    }
    acc += ps * std::log2(ps / it->second);
  }
  return EntropyResult::finite(acc, EntropyResult::Method::Label);
}

SupportWitness support_contained(const LabelDistribution& p, const LabelDistribution& q) {
  p.validate();
  q.validate();
  if (p.d != q.d || p.num_biparties != q.num_biparties) {
    throw std::invalid_argument("support_contained: distributions must share d and biparty count");
  }
  SupportWitness out;
  for (const auto& [s, ps] : p.support) {
    if (ps == 0.0) continue;
    const auto it = q.support.find(s);
    if (it == q.support.end() || it->second == 0.0) {
      out.leakage += ps;
      if (!out.violating_string) out.violating_string = s;
    }
  }
  out.contained = out.leakage == 0.0;
  return out;
}

SupportWitness support_contained(const DensityOperator& rho, const DensityOperator& sigma,
                                 double support_threshold) {
  if (rho.mat.rows() != sigma.mat.rows()) {
    throw std::invalid_argument("support_contained: dimension mismatch");
  }
  const auto rs = checked_density_spectrum(rho, support_threshold, "support_contained(rho)");
  const auto ss = checked_density_spectrum(sigma, support_threshold, "support_contained(sigma)");

  // Projector onto sigma's support.
  Matrix proj = Matrix::Zero(sigma.mat.rows(), sigma.mat.cols());
  for (long k = 0; k < ss.eigenvalues.size(); ++k) {
    if (ss.eigenvalues(k) > ss.cutoff) {
      const CVector v = ss.eigenvectors.col(k);
      proj.noalias() += v * v.adjoint();
    }
  }

  SupportWitness out;
  double worst = 0.0;
  for (long k = 0; k < rs.eigenvalues.size(); ++k) {
    const double lam = rs.eigenvalues(k);
    if (lam <= rs.cutoff) continue;
    const CVector v = rs.eigenvectors.col(k);
    const double escaped = 1.0 - std::real(v.dot(proj * v));  // |(1 - P) v|^2
    out.leakage += lam * escaped;
    if (escaped > worst) {
      worst = escaped;
      if (escaped > support_threshold) out.leaked_vector = v;
    }
  }
  out.contained = out.leakage <= support_threshold;
  if (out.contained) out.leaked_vector.reset();
  return out;
}

double formal_count_bound(const LabelDistribution& p, const LabelDistribution& q) {
  p.validate();
  q.validate();
  if (!p.is_uniform(1e-9) || !q.is_uniform(1e-9)) {
    throw std::invalid_argument(
        "formal_count_bound: both distributions must be uniform over their supports");
  }
  return std::log2(static_cast<double>(q.support.size()) /
                   static_cast<double>(p.support.size()));
}

ErCandidateReport er_candidate_report(const StateDescriptor& target,
                                      const StateDescriptor& candidate, bool apply_halving) {
  const auto p = target.resolve_labels();
  const auto q = candidate.resolve_labels();

  ErCandidateReport out;
  out.target = target.describe();
  out.candidate = candidate.describe();
  out.kl = kl_label(p, q);
  out.formal_count_raw_bits = formal_count_bound(p, q);
  out.halving_applied = apply_halving;

  const double factor = apply_halving ? 0.5 : 1.0;
  out.bound_infinite = out.kl.infinite;
  out.bound_bits = out.kl.infinite ? 0.0 : factor * out.kl.value_bits;
  out.formal_count_bits = factor * out.formal_count_raw_bits;
  if (out.kl.infinite) {
    out.witness = support_contained(p, q).violating_string;
  }
  return out;
}

}  // namespace qdistill
