#include "lindbladkit/superop.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lindbladkit/errors.hpp"
#include "lindbladkit/linalg.hpp"
#include "lindbladkit/states.hpp"

namespace lindbladkit {

namespace {

ComplexMatrix probe_matrix(std::size_t n) {
  std::mt19937_64 rng(0x5eed1a5eULL + n);
  std::normal_distribution<double> gauss;
  ComplexMatrix x(n, n);
  for (auto& z : x.entries()) z = {gauss(rng), gauss(rng)};
  return x;
}

void check_linear(const LinearMap& apply, const SuperoperatorMatrix& s) {
  const ComplexMatrix probe = probe_matrix(s.dim);
  const ComplexMatrix direct = apply(probe);
  if (direct.rows() != s.dim || direct.cols() != s.dim) {
    throw Error(ErrorCode::DimensionMismatch, "map changes the matrix dimension");
  }
  const ComplexMatrix contracted = s.apply(probe);
  const double scale = std::max({1.0, direct.max_abs(), contracted.max_abs()});
  const double residual = (direct - contracted).max_abs();
  if (!(residual <= kLinearityTol * scale)) {
    throw Error(ErrorCode::NotLinear, "superposition probe residual " + std::to_string(residual), residual);
  }
}

}  // namespace

ComplexMatrix SuperoperatorMatrix::apply(const ComplexMatrix& rho) const {
  const std::size_t n = dim;
  if (rho.rows() != n || rho.cols() != n) throw Error(ErrorCode::DimensionMismatch, "superoperator input");
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t q = 0; q < n; ++q) s += a(i * n + r, j * n + q) * rho(r, q);
      out(i, j) = s;
    }
  return out;
}

ComplexMatrix SuperoperatorMatrix::liouville() const {
  const std::size_t n = dim;
  ComplexMatrix l(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t s = 0; s < n; ++s) l(i * n + j, r * n + s) = a(i * n + r, j * n + s);
  return l;
}

LinearMap SuperoperatorMatrix::as_map() const {
  return [self = *this](const ComplexMatrix& rho) { return self.apply(rho); };
}

SuperoperatorMatrix superoperator_from_liouville(const ComplexMatrix& liouville) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(liouville.rows()))));
  if (!liouville.is_square() || n * n != liouville.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "Liouville matrix must be N²×N²");
  }
  SuperoperatorMatrix s{n, ComplexMatrix(n * n, n * n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t q = 0; q < n; ++q) s.a(i * n + r, j * n + q) = liouville(i * n + j, r * n + q);
  return s;
}

ComplexMatrix SpectralChannel::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out(dim, dim);
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    if (eigenvalues[k] == 0.0) continue;
    ComplexMatrix term = eigenops[k] * rho * eigenops[k].adjoint();
    term *= eigenvalues[k];
    out += term;
  }
  return out;
}

double SpectralChannel::eigenvalue_sum() const {
  double s = 0.0;
  for (double l : eigenvalues) s += l;
  return s;
}

LinearMap SpectralChannel::as_map() const {
  return [self = *this](const ComplexMatrix& rho) { return self.apply(rho); };
}

SuperoperatorMatrix superop_from_action(const LinearMap& apply, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::BadDimension, "dimension must be positive");
  SuperoperatorMatrix s{n, ComplexMatrix(n * n, n * n)};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t q = 0; q < n; ++q) {
      const ComplexMatrix image = apply(ComplexMatrix::unit(n, r, q));
      if (image.rows() != n || image.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch, "map changes the matrix dimension");
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s.a(i * n + r, j * n + q) = image(i, j);
    }
  }
  check_linear(apply, s);
  return s;
}

SpectralChannel spectral_decompose(const SuperoperatorMatrix& s) {
  const std::size_t n = s.dim;
  const double tol = 1e-10 * std::max(1.0, s.a.max_abs());
  const auto eig = hermitian_eig(s.a, tol);
  SpectralChannel sc{n, eig.values, {}};
  sc.eigenops.reserve(n * n);
  for (std::size_t alpha = 0; alpha < n * n; ++alpha) {
    ComplexMatrix e(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t r = 0; r < n; ++r) e(i, r) = eig.vectors(i * n + r, alpha);
    sc.eigenops.push_back(std::move(e));
  }
  return sc;
}

double trace_constraint_defect(const SpectralChannel& sc) {
  ComplexMatrix sum(sc.dim, sc.dim);
  for (std::size_t k = 0; k < sc.eigenvalues.size(); ++k) {
    ComplexMatrix term = sc.eigenops[k].adjoint() * sc.eigenops[k];
    term *= sc.eigenvalues[k];
    sum += term;
  }
  return (sum - ComplexMatrix::identity(sc.dim)).max_abs();
}

ComplexMatrix extend_with_identity(const LinearMap& apply, const ComplexMatrix& r, std::size_t n) {
  if (r.rows() != n * n || r.cols() != n * n) throw Error(ErrorCode::DimensionMismatch, "product-space operator");
  ComplexMatrix out(n * n, n * n);
  // R = Σ_{a,b} X_ab ⊗ |χ_a><χ_b|, X_ab[m, m'] = R[(m, a), (m', b)].
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      ComplexMatrix block(n, n);
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t mp = 0; mp < n; ++mp) block(m, mp) = r(m * n + a, mp * n + b);
      const ComplexMatrix image = apply(block);
      if (image.rows() != n || image.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch, "map changes the matrix dimension");
      }
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t mp = 0; mp < n; ++mp) out(m * n + a, mp * n + b) = image(m, mp);
    }
  }
  return out;
}

std::vector<Complex> entangled_vector(std::size_t n) {
  std::vector<Complex> w(n * n);
  for (std::size_t r = 0; r < n; ++r) w[r * n + r] = 1.0;
  return w;
}

ChoiMatrix choi_matrix(const LinearMap& apply, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::BadDimension, "dimension must be positive");
  const auto w = entangled_vector(n);
  ChoiMatrix choi{n, extend_with_identity(apply, outer(w), n)};

  // Linearity: the Choi matrix determines the map, ρ' = Tr_anc[c (1 ⊗ ρᵀ)].
  const ComplexMatrix probe = probe_matrix(n);
  const ComplexMatrix direct = apply(probe);
  ComplexMatrix reconstructed(n, n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t mp = 0; mp < n; ++mp) {
      Complex s = 0.0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) s += choi.c(m * n + a, mp * n + b) * probe(a, b);
      reconstructed(m, mp) = s;
    }
  const double scale = std::max({1.0, direct.max_abs(), reconstructed.max_abs()});
  const double residual = (direct - reconstructed).max_abs();
  if (!(residual <= kLinearityTol * scale)) {
    throw Error(ErrorCode::NotLinear, "superposition probe residual " + std::to_string(residual), residual);
  }
  return choi;
}

CpVerdict cp_check(const LinearMap& apply, std::size_t n, double tol) {
  const ChoiMatrix choi = choi_matrix(apply, n);
  const double herm_tol = 1e-10 * std::max(1.0, choi.c.max_abs());
  CpVerdict verdict;
  verdict.eigenvalues = hermitian_eigenvalues(choi.c, herm_tol);
  verdict.min_eigenvalue = verdict.eigenvalues.front();
  verdict.completely_positive = verdict.min_eigenvalue >= -tol;
  return verdict;
}

bool positive_on_basis(const LinearMap& apply, std::size_t n, double tol) {
  const auto basis = basis_density_matrices(n);
  bool positive = true;
  for (const auto& rho : basis) {
    const ComplexMatrix image = apply(rho.matrix());
    const double trace_defect = std::abs(image.trace() - Complex{1.0});
    if (!(trace_defect <= tol)) {
      throw Error(ErrorCode::NotTracePreserving, "image trace differs from 1 by " + std::to_string(trace_defect),
                  trace_defect);
    }
    if (!positive) continue;
    if (!(hermiticity_defect(image) <= tol)) {
      positive = false;
      continue;
    }
    const auto eig = hermitian_eigenvalues(image, tol);
    if (eig.front() < -tol) positive = false;
  }
  return positive;
}

SpectralChannel pauli_channel(double l1, double l2, double l3, double l4) {
  const double r = 1.0 / std::sqrt(2.0);
  return SpectralChannel{2, {l1, l2, l3, l4}, {r * pauli::x(), r * pauli::y(), r * pauli::z(), r * pauli::id()}};
}

}  // namespace lindbladkit
