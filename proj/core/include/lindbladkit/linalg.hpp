#pragma once

#include <functional>
#include <vector>

#include "lindbladkit/matrix.hpp"

namespace lindbladkit {

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k belongs to values[k]
};

inline constexpr double kDefaultHermitianTol = 1e-10;
inline constexpr int kMaxJacobiSweeps = 100;

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Throws NotSquare, NotHermitian when ‖m − m†‖_max exceeds `tol`, and
/// NoConvergence when the off-diagonal mass has not vanished after
/// kMaxJacobiSweeps sweeps. Within a degenerate cluster the returned basis is
/// arbitrary.
EigenDecomposition hermitian_eig(const ComplexMatrix& m, double tol = kDefaultHermitianTol);

// Eigenvalues only (ascending).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double tol = kDefaultHermitianTol);

// f(m) for Hermitian m, through its eigendecomposition.
ComplexMatrix hermitian_function(const ComplexMatrix& m, const std::function<double(double)>& f,
                                 double tol = kDefaultHermitianTol);

/// Matrix exponential by scaling and squaring with a degree-12 Taylor
/// polynomial; the scaling exponent s is chosen so that ‖m / 2^s‖₁ ≤ 1/2.
ComplexMatrix expm(const ComplexMatrix& m);

// Tr(a b†) = Σ a_ij conj(b_ij).
Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace lindbladkit
