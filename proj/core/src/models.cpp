#include "lindbladkit/models.hpp"

#include <cmath>
#include <numbers>

#include "lindbladkit/errors.hpp"
#include "lindbladkit/linalg.hpp"

namespace lindbladkit {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::RandomPhases: return "random_phases";
    case ModelKind::UnitaryJump: return "unitary_jump";
    case ModelKind::RandomUnitary: return "random_unitary";
    case ModelKind::StateExchange: return "state_exchange";
    case ModelKind::StateTransitions: return "state_transitions";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (auto kind : {ModelKind::RandomPhases, ModelKind::UnitaryJump, ModelKind::RandomUnitary,
                    ModelKind::StateExchange, ModelKind::StateTransitions}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

ModelSpec ModelSpec::random_phases(double lambda1, double lambda2) {
  ModelSpec s;
  s.kind = ModelKind::RandomPhases;
  s.dim = 2;
  s.rate1 = lambda1;
  s.rate2 = lambda2;
  return s;
}

ModelSpec ModelSpec::unitary_jump(double lambda, ComplexMatrix g) {
  ModelSpec s;
  s.kind = ModelKind::UnitaryJump;
  s.dim = g.rows();
  s.rate = lambda;
  s.g = std::move(g);
  return s;
}

ModelSpec ModelSpec::random_unitary(double lambda, ComplexMatrix g) {
  ModelSpec s = unitary_jump(lambda, std::move(g));
  s.kind = ModelKind::RandomUnitary;
  return s;
}

ModelSpec ModelSpec::state_exchange(double lambda) {
  ModelSpec s;
  s.kind = ModelKind::StateExchange;
  s.dim = 2;
  s.rate = lambda;
  return s;
}

ModelSpec ModelSpec::state_transitions(double lambda, std::vector<double> p) {
  ModelSpec s;
  s.kind = ModelKind::StateTransitions;
  s.dim = p.size();
  s.rate = lambda;
  s.p = std::move(p);
  return s;
}

void validate_spec(const ModelSpec& spec) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidSpec, why); };
  auto check_rate = [&](double r, const char* name) {
    if (!(r >= 0.0) || !std::isfinite(r)) fail(std::string(name) + " must be a finite non-negative rate");
  };
  switch (spec.kind) {
    case ModelKind::RandomPhases:
      check_rate(spec.rate1, "lambda1");
      check_rate(spec.rate2, "lambda2");
      if (spec.dim != 2) fail("random_phases is two-dimensional");
      break;
    case ModelKind::UnitaryJump:
    case ModelKind::RandomUnitary:
      check_rate(spec.rate, "lambda");
      if (spec.dim < 2 || spec.g.rows() != spec.dim || spec.g.cols() != spec.dim) fail("G must be dim x dim, dim >= 2");
      if (!spec.g.all_finite() || hermiticity_defect(spec.g) > kDensityTol) fail("G must be Hermitian");
      break;
    case ModelKind::StateExchange:
      check_rate(spec.rate, "lambda");
      if (spec.dim != 2) fail("state_exchange is two-dimensional");
      break;
    case ModelKind::StateTransitions: {
      check_rate(spec.rate, "lambda");
      if (spec.dim < 2 || spec.p.size() != spec.dim) fail("p must have dim >= 2 entries");
      double total = 0.0;
      for (double pm : spec.p) {
        if (!(pm >= 0.0)) fail("p entries must be non-negative");
        total += pm;
      }
      if (std::abs(total - 1.0) > 1e-12) fail("p must sum to 1");
      break;
    }
  }
}

LindbladGenerator build_generator(const ModelSpec& spec) {
  validate_spec(spec);
  const std::size_t n = spec.dim;
  std::vector<ComplexMatrix> ops;
  switch (spec.kind) {
    case ModelKind::RandomPhases: {
      const double c = std::sqrt(0.5 * (spec.rate1 + spec.rate2));
      for (std::size_t i = 0; i < n; ++i) ops.push_back(c * ComplexMatrix::unit(n, i, i));
      break;
    }
    case ModelKind::UnitaryJump: {
      ComplexMatrix u = expm(-kI * spec.g);
      ops.push_back(std::sqrt(spec.rate) * u);
      break;
    }
    case ModelKind::RandomUnitary:
      ops.push_back(std::sqrt(spec.rate) * spec.g);
      break;
    case ModelKind::StateExchange:
      ops.push_back(std::sqrt(spec.rate) * pauli::x());
      break;
    case ModelKind::StateTransitions:
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t k = 0; k < n; ++k) ops.push_back(std::sqrt(spec.rate * spec.p[m]) * ComplexMatrix::unit(n, m, k));
      break;
  }
  return LindbladGenerator(ComplexMatrix(n, n), std::move(ops));
}

namespace {

std::vector<double> diagonal_of_g(const ModelSpec& spec) {
  const std::size_t n = spec.dim;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && std::abs(spec.g(i, j)) > 1e-12) {
        throw Error(ErrorCode::NonDiagonalG, "closed form needs G diagonal");
      }
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = spec.g(i, i).real();
  return d;
}

}  // namespace

DensityMatrix analytic_solution(const ModelSpec& spec, const DensityMatrix& rho0, double t) {
  validate_spec(spec);
  if (rho0.dim() != spec.dim) throw Error(ErrorCode::DimensionMismatch, "state and model dimensions differ");
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidSpec, "time must be non-negative", t);
  const std::size_t n = spec.dim;
  const ComplexMatrix& r0 = rho0.matrix();
  ComplexMatrix r = r0;
  switch (spec.kind) {
    case ModelKind::RandomPhases: {
      const double decay = std::exp(-0.5 * (spec.rate1 + spec.rate2) * t);
      r(0, 1) *= decay;
      r(1, 0) *= decay;
      break;
    }
    case ModelKind::UnitaryJump: {
      const auto g = diagonal_of_g(spec);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const Complex rate = spec.rate * (1.0 - std::exp(kI * (g[j] - g[i])));
          r(i, j) = r0(i, j) * std::exp(-rate * t);
        }
      break;
    }
    case ModelKind::RandomUnitary: {
      const auto g = diagonal_of_g(spec);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double gap = g[i] - g[j];
          r(i, j) = r0(i, j) * std::exp(-0.5 * spec.rate * gap * gap * t);
        }
      break;
    }
    case ModelKind::StateExchange: {
      const double decay = std::exp(-2.0 * spec.rate * t);
      const double p11 = 0.5 + (r0(0, 0).real() - 0.5) * decay;
      r(0, 0) = p11;
      r(1, 1) = 1.0 - p11;
      r(0, 1) = Complex(r0(0, 1).real(), r0(0, 1).imag() * decay);
      r(1, 0) = std::conj(r(0, 1));
      break;
    }
    case ModelKind::StateTransitions: {
      const double decay = std::exp(-spec.rate * t);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          r(i, j) = r0(i, j) * decay;
          if (i == j) r(i, j) += spec.p[i] * (1.0 - decay);
        }
      break;
    }
  }
  return DensityMatrix(std::move(r));
}

double total_rate(const ModelSpec& spec) {
  return spec.kind == ModelKind::RandomPhases ? spec.rate1 + spec.rate2 : spec.rate;
}

std::vector<NamedModel> bundled_models() {
  const double pi = std::numbers::pi;
  return {
      {"random_phases", ModelSpec::random_phases(1.0, 1.0)},
      {"unitary_jump", ModelSpec::unitary_jump(1.0, ComplexMatrix::diagonal(std::vector<double>{0.0, pi / 2}))},
      {"random_unitary", ModelSpec::random_unitary(1.0, ComplexMatrix::diagonal(std::vector<double>{0.0, 1.0, 3.0}))},
      {"state_exchange", ModelSpec::state_exchange(1.0)},
      {"state_transitions", ModelSpec::state_transitions(1.0, {0.4, 0.3, 0.2, 0.1})},
  };
}

}  // namespace lindbladkit
