#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lindbladkit/lindblad.hpp"
#include "lindbladkit/matrix.hpp"
#include "lindbladkit/states.hpp"

namespace lindbladkit {

enum class ModelKind { RandomPhases, UnitaryJump, RandomUnitary, StateExchange, StateTransitions };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);

// Parameters of one of the five solvable example channels. H = 0 throughout.
struct ModelSpec {
  ModelKind kind = ModelKind::StateExchange;
  std::size_t dim = 2;
  double rate = 0.0;           // λ
  double rate1 = 0.0;          // λ₁ (random_phases)
  double rate2 = 0.0;          // λ₂ (random_phases)
  ComplexMatrix g;             // Hermitian G (unitary_jump, random_unitary)
  std::vector<double> p;       // target populations (state_transitions)

  static ModelSpec random_phases(double lambda1, double lambda2);
  static ModelSpec unitary_jump(double lambda, ComplexMatrix g);
  static ModelSpec random_unitary(double lambda, ComplexMatrix g);
  static ModelSpec state_exchange(double lambda);
  static ModelSpec state_transitions(double lambda, std::vector<double> p);
};

// Throws InvalidSpec describing the first violated invariant.
void validate_spec(const ModelSpec& spec);

/// Lindblad operators per kind:
///   random_phases      √((λ₁+λ₂)/2) Q_i,  Q_i = |i><i|, N = 2
///   unitary_jump       √λ exp(−iG)
///   random_unitary     √λ G
///   state_exchange     √λ σ¹, N = 2
///   state_transitions  √(λ p_m) |m><n| for all N² pairs (m, n)
/// These reproduce the closed forms of analytic_solution.
LindbladGenerator build_generator(const ModelSpec& spec);

/// Closed-form ρ(t). For unitary_jump and random_unitary G must be diagonal
/// (NonDiagonalG otherwise).
DensityMatrix analytic_solution(const ModelSpec& spec, const DensityMatrix& rho0, double t);

// Total jump (or diffusion) rate bounded by the sampler's step guard.
double total_rate(const ModelSpec& spec);

struct NamedModel {
  std::string name;
  ModelSpec spec;
};

// One representative parameter set per kind, used by the regression suites.
std::vector<NamedModel> bundled_models();

inline constexpr double kSamplerStepBound = 1e-2;

struct TrajectoryEnsemble {
  ModelSpec model;
  std::size_t trajectories = 0;
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<DensityMatrix> mean_density;
  // standard_error[k][i·N + j]: standard error of the mean of ρ_ij at times[k],
  // from the per-trajectory variance of the complex value.
  std::vector<std::vector<double>> standard_error;
};

/// Monte Carlo unraveling: M pure-state trajectories stepped with dt, averaged
/// at `times` (each a multiple of dt). Trajectory i draws from its own
/// generator seeded from (seed, i), and the reduction runs in fixed blocks, so the
/// result is bit-identical for any worker count.
///
/// Throws InvalidState (ψ0 not normalized within 1e-12 or wrong size),
/// StepTooLarge (dt·total_rate > 1e-2 or dt ≤ 0), InvalidSpec (bad times or
/// spec).
TrajectoryEnsemble sample_ensemble(const ModelSpec& spec, std::span<const Complex> psi0, std::span<const double> times,
                                   double dt, std::size_t trajectories, std::uint64_t seed, unsigned threads = 0);

}  // namespace lindbladkit
