#include "lindbladkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lindbladkit/errors.hpp"

namespace lindbladkit {

namespace {

double off_diagonal_mass(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t q = p + 1; q < a.cols(); ++q) s += std::norm(a(p, q));
  return s;
}

// One complex Jacobi rotation in the (p, q) plane, zeroing a(p, q).
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const std::size_t n = a.rows();
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  const Complex phase = apq / mag;  // e^{i phi}
  const Complex phase_conj = std::conj(phase);

  const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // U restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
  const Complex uqp = -s * phase_conj;
  const Complex uqq = c * phase_conj;

  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * c + akq * uqp;
    a(k, q) = akp * s + akq * uqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk + std::conj(uqp) * aqk;
    a(q, k) = s * apk + std::conj(uqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * c + vkq * uqp;
    v(k, q) = vkp * s + vkq * uqq;
  }
}

}  // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) throw Error(ErrorCode::NotSquare, "hermitian_eig needs a square matrix");
  const double defect = hermiticity_defect(m);
  if (!(defect <= tol)) {
    throw Error(ErrorCode::NotHermitian, "matrix deviates from its adjoint by " + std::to_string(defect));
  }
  const std::size_t n = m.rows();
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double total = a.frobenius_norm();
  bool converged = n <= 1 || total == 0.0;
  for (int sweep = 0; !converged && sweep < kMaxJacobiSweeps; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        // Once a(p, q) no longer registers against either diagonal entry it
        // is dropped instead of rotated.
        const double app = std::abs(a(p, p));
        const double aqq = std::abs(a(q, q));
        if (sweep > 3 && app + 100.0 * mag == app && aqq + 100.0 * mag == aqq) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        if (mag < 1e-300 * std::max(1.0, total)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
      }
    }
    const double off = std::sqrt(off_diagonal_mass(a));
    converged = off <= 1e-17 * total;
  }
  if (!converged) {
    throw Error(ErrorCode::NoConvergence, "Jacobi iteration exceeded the sweep cap");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double tol) {
  return hermitian_eig(m, tol).values;
}

ComplexMatrix hermitian_function(const ComplexMatrix& m, const std::function<double(double)>& f, double tol) {
  const auto eig = hermitian_eig(m, tol);
  const std::size_t n = m.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(eig.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = eig.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eig.vectors(j, k));
    }
  }
  return out;
}

ComplexMatrix expm(const ComplexMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NotSquare, "expm needs a square matrix");
  const std::size_t n = m.rows();
  const double norm = m.norm1();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  ComplexMatrix x = m;
  x *= std::ldexp(1.0, -squarings);

  constexpr int kOrder = 12;
  const ComplexMatrix id = ComplexMatrix::identity(n);
  ComplexMatrix p = id;
  for (int k = kOrder; k >= 1; --k) {
    p = x * p;
    p *= 1.0 / k;
    p += id;
  }
  for (int i = 0; i < squarings; ++i) p = p * p;
  return p;
}

Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "frobenius_inner needs equal shapes");
  }
  Complex s = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) s += ea[k] * std::conj(eb[k]);
  return s;
}

}  // namespace lindbladkit
