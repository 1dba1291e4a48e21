#pragma once

#include <functional>
#include <vector>

#include "lindbladkit/matrix.hpp"

namespace lindbladkit {

// A linear map on N×N matrices, given by its action.
using LinearMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

inline constexpr double kLinearityTol = 1e-8;
inline constexpr double kCpTol = 1e-9;

/// The N²×N² coefficient matrix A of a linear map, ρ'_ij = Σ_rs A_{ir,js} ρ_rs.
/// Row (i, r) is stored at i·N + r and column (j, s) at j·N + s. For a
/// hermiticity-preserving map A is Hermitian.
struct SuperoperatorMatrix {
  std::size_t dim = 0;
  ComplexMatrix a;

  // ρ' by index contraction.
  ComplexMatrix apply(const ComplexMatrix& rho) const;
  // Matrix acting on vec(ρ) with vec(ρ)[i·N + j] = ρ_ij; it composes under
  // multiplication, unlike `a`.
  ComplexMatrix liouville() const;
  LinearMap as_map() const;
};

SuperoperatorMatrix superoperator_from_liouville(const ComplexMatrix& liouville);

// ρ ↦ Σ_α λ^α E^α ρ E^α†, with Tr E^α E^β† = δ^αβ.
struct SpectralChannel {
  std::size_t dim = 0;
  std::vector<double> eigenvalues;     // ascending when built by spectral_decompose
  std::vector<ComplexMatrix> eigenops;  // N×N each

  ComplexMatrix apply(const ComplexMatrix& rho) const;
  double eigenvalue_sum() const;
  LinearMap as_map() const;
};

// Choi matrix over the product basis |φ_m>|χ_n>, index m·N + n.
struct ChoiMatrix {
  std::size_t dim = 0;
  ComplexMatrix c;
};

struct CpVerdict {
  bool completely_positive = false;
  double min_eigenvalue = 0.0;
  std::vector<double> eigenvalues;  // ascending Choi spectrum
};

/// A_{ir,js} = <φ_i| apply(|φ_r><φ_s|) |φ_j>, probed on matrix units.
/// Throws NotLinear when the action on a pseudo-random probe differs from the
/// contraction of A by more than kLinearityTol (relative to the probe scale).
SuperoperatorMatrix superop_from_action(const LinearMap& apply, std::size_t n);

/// Diagonalizes A and reshapes eigenvector α into E^α (E_ir = v[i·N + r]).
/// Throws NotHermitian when A is not Hermitian within 1e-10·max(1, ‖A‖_max).
SpectralChannel spectral_decompose(const SuperoperatorMatrix& s);

// ‖Σ λ^α E^α† E^α − 1‖_max.
double trace_constraint_defect(const SpectralChannel& sc);

// (apply ⊗ id)(R) for R an N²×N² operator on system ⊗ ancilla (index m·N + n).
ComplexMatrix extend_with_identity(const LinearMap& apply, const ComplexMatrix& r, std::size_t n);

// The unnormalized maximally entangled vector |w> = Σ_r |φ_r>|χ_r>.
std::vector<Complex> entangled_vector(std::size_t n);

/// (apply ⊗ id)(|w><w|). Tr c = N for trace-preserving maps. Throws NotLinear.
ChoiMatrix choi_matrix(const LinearMap& apply, std::size_t n);

// Completely positive iff the smallest Choi eigenvalue is ≥ −tol.
CpVerdict cp_check(const LinearMap& apply, std::size_t n, double tol = kCpTol);

/// Positivity certificate by probing every member of the density-matrix basis:
/// true iff each image is Hermitian within tol with smallest eigenvalue ≥ −tol.
/// Throws NotTracePreserving when some image's trace differs from 1 by more
/// than tol.
bool positive_on_basis(const LinearMap& apply, std::size_t n, double tol = kCpTol);

/// The two-level map ½ Σ λ^α σ^α ρ σ^α with σ^4 = 1, i.e. the spectral channel
/// with the Pauli+1 eigenoperators σ^α/√2 and eigenvalues (l1, l2, l3, l4).
SpectralChannel pauli_channel(double l1, double l2, double l3, double l4);

}  // namespace lindbladkit
