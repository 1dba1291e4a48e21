#pragma once

#include <vector>

#include "lindbladkit/matrix.hpp"
#include "lindbladkit/states.hpp"
#include "lindbladkit/superop.hpp"

namespace lindbladkit {

inline constexpr double kCompletenessTol = 1e-9;
inline constexpr double kKrausDropCutoff = 1e-12;

// ρ' = Σ_α M^α ρ M^α†. The operators need not be orthogonal.
struct KrausChannel {
  std::size_t dim = 0;
  std::vector<ComplexMatrix> ops;

  // Throws DimensionMismatch if an operator is not dim×dim or the list is empty.
  void check_shape() const;
  ComplexMatrix act(const ComplexMatrix& rho) const;
  LinearMap as_map() const;
};

// ‖Σ M^α† M^α − 1‖_max.
double completeness_defect(const KrausChannel& k);

/// Applies a complete Kraus channel to a density matrix. Throws
/// IncompleteKraus when the completeness defect exceeds `completeness_tol`,
/// DimensionMismatch on shape errors, and InvalidDensity if the result fails
/// validation at `out_tol`.
DensityMatrix apply_kraus(const KrausChannel& k, const DensityMatrix& rho,
                          double completeness_tol = kCompletenessTol, const DensityTolerance& out_tol = {});

/// M^α = √λ^α E^α for every λ^α > kKrausDropCutoff. Throws
/// NotCompletelyPositive (value = min λ) when some λ^α < −tol.
KrausChannel spectral_to_kraus(const SpectralChannel& sc, double tol = kCpTol);

// Spectral form of the Kraus map, always N² eigenvalues.
SpectralChannel kraus_to_spectral(const KrausChannel& k);

}  // namespace lindbladkit
