#pragma once

#include <vector>

#include "lindbladkit/channels.hpp"
#include "lindbladkit/matrix.hpp"
#include "lindbladkit/states.hpp"
#include "lindbladkit/superop.hpp"

namespace lindbladkit {

inline constexpr double kStabilityBound = 0.1;
inline constexpr double kGramCutoff = 1e-12;

/// dρ/dt = −i[H, ρ] − ½ Σ_α (L^α† L^α ρ + ρ L^α† L^α − 2 L^α ρ L^α†), ħ = 1.
///
/// H must be Hermitian within 1e-10 (NotHermitian otherwise); every operator
/// must match its dimension (DimensionMismatch). Any number of Lindblad
/// operators, including none.
class LindbladGenerator {
 public:
  LindbladGenerator(ComplexMatrix hamiltonian, std::vector<ComplexMatrix> lindblad_ops);

  std::size_t dim() const noexcept { return hamiltonian_.rows(); }
  const ComplexMatrix& hamiltonian() const noexcept { return hamiltonian_; }
  const std::vector<ComplexMatrix>& lindblad_ops() const noexcept { return ops_; }

  // ‖H‖₂ + Σ ‖L^α‖₂², the rate scale used by the step-size guard.
  double rate_scale() const;

 private:
  ComplexMatrix hamiltonian_;
  std::vector<ComplexMatrix> ops_;
};

// dρ/dt. Throws DimensionMismatch.
ComplexMatrix apply_generator(const LindbladGenerator& g, const ComplexMatrix& rho);

// The generator as a superoperator (A layout) and as the Liouville matrix on
// vec(ρ).
SuperoperatorMatrix generator_superoperator(const LindbladGenerator& g);
ComplexMatrix liouvillian(const LindbladGenerator& g);

/// Fixed-step classical RK4. Returns steps + 1 states starting with rho0; every
/// state is revalidated with kTrajectoryTolerance. Throws StepTooLarge when
/// dt·rate_scale() > kStabilityBound or dt ≤ 0, ValidationFailure (value = step
/// index) if a state fails validation.
std::vector<DensityMatrix> evolve_rk4(const LindbladGenerator& g, const DensityMatrix& rho0, double dt,
                                      std::size_t steps);

// ρ(t) = unvec(expm(t·Λ) vec ρ0), Λ = liouvillian(g). Reuses Λ across calls.
class ExactPropagator {
 public:
  explicit ExactPropagator(const LindbladGenerator& g);

  std::size_t dim() const noexcept { return dim_; }
  // Liouville matrix of the flow map at time t.
  ComplexMatrix propagator(double t) const;
  ComplexMatrix evolve(const ComplexMatrix& rho0, double t) const;
  // ρ0 ↦ ρ(t) as a linear map (expm evaluated once).
  LinearMap flow_map(double t) const;

 private:
  std::size_t dim_;
  ComplexMatrix liouville_;
};

// Throws InvalidSpec for t < 0 and InvalidDensity if the result fails
// kTrajectoryTolerance.
DensityMatrix evolve_exact(const LindbladGenerator& g, const DensityMatrix& rho0, double t);

// Lindblad form with orthonormal traceless operators K̃^β and rates c̃^β:
// L̃^β = √c̃^β K̃^β.
struct CanonicalGenerator {
  std::size_t dim = 0;
  ComplexMatrix hamiltonian;
  std::vector<double> rates;
  std::vector<ComplexMatrix> ops;

  LindbladGenerator to_generator() const;
};

/// Reduces an arbitrary operator set to at most N² − 1 orthonormal traceless
/// operators without changing the generator's superoperator.
///
/// Each L^α is split as L'^α + k^α·1 with k^α = Tr L^α / N; the resulting
/// commutator term is absorbed as H += (i/2)(k^α* L'^α − k^α L'^α†). The Gram
/// matrix Tr L'^α L'^α'† is then diagonalized and directions whose eigenvalue
/// is ≤ tol·(largest eigenvalue) are discarded.
CanonicalGenerator canonicalize(const LindbladGenerator& g, double tol = kGramCutoff);

/// Kraus factorization of one step: M⁰ = 1 − dt(iH + ½ Σ L^α† L^α),
/// M^α = √dt L^α. Completeness holds to O(dt²). Throws StepTooLarge under the
/// same guard as evolve_rk4.
KrausChannel dt_kraus(const LindbladGenerator& g, double dt);

}  // namespace lindbladkit
