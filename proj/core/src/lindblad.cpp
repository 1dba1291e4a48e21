#include "lindbladkit/lindblad.hpp"

#include <algorithm>
#include <cmath>

#include "lindbladkit/errors.hpp"
#include "lindbladkit/linalg.hpp"

namespace lindbladkit {

LindbladGenerator::LindbladGenerator(ComplexMatrix hamiltonian, std::vector<ComplexMatrix> lindblad_ops)
    : hamiltonian_(std::move(hamiltonian)), ops_(std::move(lindblad_ops)) {
  if (!hamiltonian_.is_square() || hamiltonian_.rows() == 0) {
    throw Error(ErrorCode::NotSquare, "hamiltonian must be a non-empty square matrix");
  }
  const double defect = hermiticity_defect(hamiltonian_);
  if (!(defect <= kDensityTol)) {
    throw Error(ErrorCode::NotHermitian, "hamiltonian deviates from its adjoint by " + std::to_string(defect));
  }
  for (const auto& l : ops_) {
    if (l.rows() != dim() || l.cols() != dim()) {
      throw Error(ErrorCode::DimensionMismatch, "Lindblad operator does not match the hamiltonian dimension");
    }
  }
}

double LindbladGenerator::rate_scale() const {
  const auto h = hermitian_eigenvalues(hamiltonian_);
  double scale = std::max(std::abs(h.front()), std::abs(h.back()));
  for (const auto& l : ops_) {
    const auto ll = hermitian_eigenvalues(hermitian_part(l.adjoint() * l), 1e-8 * std::max(1.0, l.max_abs()));
    scale += std::max(0.0, ll.back());
  }
  return scale;
}

ComplexMatrix apply_generator(const LindbladGenerator& g, const ComplexMatrix& rho) {
  const std::size_t n = g.dim();
  if (rho.rows() != n || rho.cols() != n) throw Error(ErrorCode::DimensionMismatch, "generator input");
  const ComplexMatrix& h = g.hamiltonian();
  ComplexMatrix out = h * rho - rho * h;
  out *= -kI;
  ComplexMatrix anti(n, n);
  for (const auto& l : g.lindblad_ops()) {
    const ComplexMatrix ld = l.adjoint();
    anti += ld * l;
    out += l * rho * ld;
  }
  ComplexMatrix half = anti * rho + rho * anti;
  half *= 0.5;
  out -= half;
  return out;
}

SuperoperatorMatrix generator_superoperator(const LindbladGenerator& g) {
  return superop_from_action([&g](const ComplexMatrix& rho) { return apply_generator(g, rho); }, g.dim());
}

ComplexMatrix liouvillian(const LindbladGenerator& g) { return generator_superoperator(g).liouville(); }

namespace {

void check_step(const LindbladGenerator& g, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::StepTooLarge, "time step must be positive", dt);
  const double product = dt * g.rate_scale();
  if (product > kStabilityBound) {
    throw Error(ErrorCode::StepTooLarge,
                "dt * rate scale = " + std::to_string(product) + " exceeds " + std::to_string(kStabilityBound), product);
  }
}

}  // namespace

std::vector<DensityMatrix> evolve_rk4(const LindbladGenerator& g, const DensityMatrix& rho0, double dt,
                                      std::size_t steps) {
  if (rho0.dim() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "state and generator dimensions differ");
  check_step(g, dt);
  std::vector<DensityMatrix> trajectory;
  trajectory.reserve(steps + 1);
  trajectory.push_back(rho0);
  ComplexMatrix rho = rho0.matrix();
  for (std::size_t step = 1; step <= steps; ++step) {
    const ComplexMatrix k1 = apply_generator(g, rho);
    const ComplexMatrix k2 = apply_generator(g, rho + (0.5 * dt) * k1);
    const ComplexMatrix k3 = apply_generator(g, rho + (0.5 * dt) * k2);
    const ComplexMatrix k4 = apply_generator(g, rho + dt * k3);
    ComplexMatrix incr = k1 + 2.0 * k2 + 2.0 * k3 + k4;
    incr *= dt / 6.0;
    rho += incr;
    try {
      trajectory.emplace_back(rho, kTrajectoryTolerance);
    } catch (const Error& e) {
      throw Error(ErrorCode::ValidationFailure, "step " + std::to_string(step) + ": " + e.what(),
                  static_cast<double>(step));
    }
  }
  return trajectory;
}

ExactPropagator::ExactPropagator(const LindbladGenerator& g) : dim_(g.dim()), liouville_(liouvillian(g)) {}

ComplexMatrix ExactPropagator::propagator(double t) const {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidSpec, "evolution time must be non-negative", t);
  ComplexMatrix x = liouville_;
  x *= t;
  return expm(x);
}

ComplexMatrix ExactPropagator::evolve(const ComplexMatrix& rho0, double t) const {
  if (rho0.rows() != dim_ || rho0.cols() != dim_) throw Error(ErrorCode::DimensionMismatch, "propagator input");
  const auto v = propagator(t) * std::span<const Complex>(rho0.entries());
  return ComplexMatrix(dim_, dim_, v);
}

LinearMap ExactPropagator::flow_map(double t) const {
  return [p = propagator(t), n = dim_](const ComplexMatrix& rho) {
    if (rho.rows() != n || rho.cols() != n) throw Error(ErrorCode::DimensionMismatch, "propagator input");
    return ComplexMatrix(n, n, p * std::span<const Complex>(rho.entries()));
  };
}

DensityMatrix evolve_exact(const LindbladGenerator& g, const DensityMatrix& rho0, double t) {
  if (rho0.dim() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "state and generator dimensions differ");
  if (t == 0.0) return rho0;
  return DensityMatrix(ExactPropagator(g).evolve(rho0.matrix(), t), kTrajectoryTolerance);
}

LindbladGenerator CanonicalGenerator::to_generator() const {
  std::vector<ComplexMatrix> ls;
  ls.reserve(ops.size());
  for (std::size_t b = 0; b < ops.size(); ++b) ls.push_back(std::sqrt(std::max(0.0, rates[b])) * ops[b]);
  return LindbladGenerator(hamiltonian, std::move(ls));
}

CanonicalGenerator canonicalize(const LindbladGenerator& g, double tol) {
  const std::size_t n = g.dim();
  const auto& ls = g.lindblad_ops();
  const ComplexMatrix id = ComplexMatrix::identity(n);

  CanonicalGenerator out{n, g.hamiltonian(), {}, {}};

  // Trace removal.
  std::vector<ComplexMatrix> traceless;
  traceless.reserve(ls.size());
  for (const auto& l : ls) {
    const Complex k = l.trace() / static_cast<double>(n);
    ComplexMatrix lp = l - k * id;
    ComplexMatrix shift = std::conj(k) * lp - k * lp.adjoint();
    shift *= 0.5 * kI;
    out.hamiltonian += shift;
    traceless.push_back(std::move(lp));
  }
  out.hamiltonian = hermitian_part(out.hamiltonian);
  if (traceless.empty()) return out;

  // Gram diagonalization: with G = V diag(c) V†, L̃^β = Σ_α conj(V_αβ) L'^α has
  // Tr L̃^β L̃^β'† = c_β δ_ββ'.
  const std::size_t m = traceless.size();
  ComplexMatrix gram(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) gram(a, b) = frobenius_inner(traceless[a], traceless[b]);
  const auto eig = hermitian_eig(gram, 1e-10 * std::max(1.0, gram.max_abs()));
  const double largest = std::max(0.0, eig.values.back());
  if (largest == 0.0) return out;

  for (std::size_t idx = m; idx-- > 0;) {
    const double c = eig.values[idx];
    if (!(c > tol * largest)) continue;
    ComplexMatrix lt(n, n);
    for (std::size_t a = 0; a < m; ++a) lt += std::conj(eig.vectors(a, idx)) * traceless[a];
    lt *= 1.0 / std::sqrt(c);
    out.rates.push_back(c);
    out.ops.push_back(std::move(lt));
  }
  return out;
}

KrausChannel dt_kraus(const LindbladGenerator& g, double dt) {
  check_step(g, dt);
  const std::size_t n = g.dim();
  ComplexMatrix anti(n, n);
  for (const auto& l : g.lindblad_ops()) anti += l.adjoint() * l;
  ComplexMatrix drift = kI * g.hamiltonian() + 0.5 * anti;
  drift *= dt;
  KrausChannel k{n, {ComplexMatrix::identity(n) - drift}};
  const double root = std::sqrt(dt);
  for (const auto& l : g.lindblad_ops()) k.ops.push_back(root * l);
  return k;
}

}  // namespace lindbladkit
