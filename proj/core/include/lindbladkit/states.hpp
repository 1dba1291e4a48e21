#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "lindbladkit/matrix.hpp"

namespace lindbladkit {

inline constexpr double kDensityTol = 1e-10;

struct DensityTolerance {
  double hermiticity = kDensityTol;
  double trace = kDensityTol;
  double positivity = kDensityTol;  // min eigenvalue must be >= -positivity

  static constexpr DensityTolerance uniform(double tol) { return {tol, tol, tol}; }
};

// Tolerance used for states produced by numerical time integration.
inline constexpr DensityTolerance kTrajectoryTolerance{kDensityTol, kDensityTol, 1e-8};

struct ValidationReport {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;
  std::vector<std::string> reasons;  // empty iff valid

  bool valid() const noexcept { return reasons.empty(); }
};

// Reports all three defects; never fails fast. Throws NotSquare.
ValidationReport validate_density(const ComplexMatrix& m, const DensityTolerance& tol);
inline ValidationReport validate_density(const ComplexMatrix& m, double tol = kDensityTol) {
  return validate_density(m, DensityTolerance::uniform(tol));
}

// A Hermitian, unit-trace, positive matrix. Construction validates and
// throws InvalidDensity on failure.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, const DensityTolerance& tol = {});

  static DensityMatrix pure(std::span<const Complex> psi);
  static DensityMatrix maximally_mixed(std::size_t n);

  std::size_t dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  ComplexMatrix m_;
};

/// The N² density matrices used to turn "for all ρ" statements into operator
/// identities. Order: the N projectors |k><k| (k ascending), then for each
/// pair k<l (lexicographic) the real-pair matrix ρ_kk=ρ_ll=ρ_kl=ρ_lk=1/2,
/// then for each pair k<l the imaginary-pair matrix ρ_kk=ρ_ll=1/2,
/// ρ_kl=-i/2, ρ_lk=i/2. Throws BadDimension for n < 2.
std::vector<DensityMatrix> basis_density_matrices(std::size_t n);

using MatrixFunctional = std::function<Complex(const ComplexMatrix&)>;

// The unique B with f(ρ) = Tr(Bρ), recovered from f on the density-matrix
// basis. f must be linear; that is not checked.
ComplexMatrix functional_nullity_witness(const MatrixFunctional& f, std::size_t n);

}  // namespace lindbladkit
