#include "lindbladkit/states.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lindbladkit/errors.hpp"
#include "lindbladkit/linalg.hpp"

namespace lindbladkit {

ValidationReport validate_density(const ComplexMatrix& m, const DensityTolerance& tol) {
  if (!m.is_square()) throw Error(ErrorCode::NotSquare, "density matrix must be square");
  ValidationReport report;
  if (!m.all_finite()) {
    report.hermiticity_defect = report.trace_defect = std::numeric_limits<double>::infinity();
    report.min_eigenvalue = -std::numeric_limits<double>::infinity();
    report.reasons.emplace_back("non-finite entries");
    return report;
  }
  report.hermiticity_defect = hermiticity_defect(m);
  report.trace_defect = std::abs(m.trace() - Complex{1.0});
  // Positivity is judged on the Hermitian part so that all three defects are
  // reported independently.
  const ComplexMatrix h = hermitian_part(m);
  const auto eigenvalues = hermitian_eigenvalues(h, std::numeric_limits<double>::infinity());
  report.min_eigenvalue = eigenvalues.empty() ? 0.0 : eigenvalues.front();

  auto fmt = [](double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
  };
  if (report.hermiticity_defect > tol.hermiticity) {
    report.reasons.push_back("not hermitian (defect " + fmt(report.hermiticity_defect) + ")");
  }
  if (report.trace_defect > tol.trace) {
    report.reasons.push_back("trace differs from 1 by " + fmt(report.trace_defect));
  }
  if (report.min_eigenvalue < -tol.positivity) {
    report.reasons.push_back("negative eigenvalue " + fmt(report.min_eigenvalue));
  }
  return report;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, const DensityTolerance& tol) : m_(std::move(m)) {
  const auto report = validate_density(m_, tol);
  if (!report.valid()) {
    std::string why;
    for (const auto& r : report.reasons) why += (why.empty() ? "" : "; ") + r;
    throw Error(ErrorCode::InvalidDensity, why, report.min_eigenvalue);
  }
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> psi) { return DensityMatrix(outer(psi)); }

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n) {
  ComplexMatrix m = ComplexMatrix::identity(n);
  m *= 1.0 / static_cast<double>(n);
  return DensityMatrix(std::move(m));
}

std::vector<DensityMatrix> basis_density_matrices(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::BadDimension, "density-matrix basis needs n >= 2");
  std::vector<DensityMatrix> basis;
  basis.reserve(n * n);
  for (std::size_t k = 0; k < n; ++k) basis.emplace_back(ComplexMatrix::unit(n, k, k));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      ComplexMatrix m(n, n);
      m(k, k) = m(l, l) = m(k, l) = m(l, k) = 0.5;
      basis.emplace_back(std::move(m));
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      ComplexMatrix m(n, n);
      m(k, k) = m(l, l) = 0.5;
      m(k, l) = -0.5 * kI;
      m(l, k) = 0.5 * kI;
      basis.emplace_back(std::move(m));
    }
  }
  return basis;
}

ComplexMatrix functional_nullity_witness(const MatrixFunctional& f, std::size_t n) {
  const auto basis = basis_density_matrices(n);
  ComplexMatrix b(n, n);
  // Tr(Bρ) = Σ_rs B_sr ρ_rs, so the projector |k><k| reads B_kk, the real
  // pair reads (B_kk + B_ll + B_kl + B_lk)/2 and the imaginary pair reads
  // (B_kk + B_ll)/2 + i(B_kl - B_lk)/2.
  for (std::size_t k = 0; k < n; ++k) b(k, k) = f(basis[k].matrix());
  const std::size_t pairs = n * (n - 1) / 2;
  std::size_t idx = 0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l, ++idx) {
      const Complex diag = b(k, k) + b(l, l);
      const Complex sum = 2.0 * f(basis[n + idx].matrix()) - diag;
      const Complex diff = -kI * (2.0 * f(basis[n + pairs + idx].matrix()) - diag);
      b(k, l) = 0.5 * (sum + diff);
      b(l, k) = 0.5 * (sum - diff);
    }
  }
  return b;
}

}  // namespace lindbladkit
