#include "lindbladkit/channels.hpp"

#include <algorithm>
#include <cmath>

#include "lindbladkit/errors.hpp"

namespace lindbladkit {

void KrausChannel::check_shape() const {
  if (ops.empty()) throw Error(ErrorCode::DimensionMismatch, "Kraus channel needs at least one operator");
  for (const auto& m : ops) {
    if (m.rows() != dim || m.cols() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "Kraus operator is not " + std::to_string(dim) + "x" +
                                                    std::to_string(dim));
    }
  }
}

ComplexMatrix KrausChannel::act(const ComplexMatrix& rho) const {
  if (rho.rows() != dim || rho.cols() != dim) throw Error(ErrorCode::DimensionMismatch, "Kraus input");
  ComplexMatrix out(dim, dim);
  for (const auto& m : ops) out += m * rho * m.adjoint();
  return out;
}

LinearMap KrausChannel::as_map() const {
  return [self = *this](const ComplexMatrix& rho) { return self.act(rho); };
}

double completeness_defect(const KrausChannel& k) {
  ComplexMatrix sum(k.dim, k.dim);
  for (const auto& m : k.ops) sum += m.adjoint() * m;
  return (sum - ComplexMatrix::identity(k.dim)).max_abs();
}

DensityMatrix apply_kraus(const KrausChannel& k, const DensityMatrix& rho, double completeness_tol,
                          const DensityTolerance& out_tol) {
  k.check_shape();
  if (rho.dim() != k.dim) throw Error(ErrorCode::DimensionMismatch, "state and channel dimensions differ");
  const double defect = completeness_defect(k);
  if (!(defect <= completeness_tol)) {
    throw Error(ErrorCode::IncompleteKraus, "completeness defect " + std::to_string(defect), defect);
  }
  return DensityMatrix(k.act(rho.matrix()), out_tol);
}

KrausChannel spectral_to_kraus(const SpectralChannel& sc, double tol) {
  const double min_lambda = *std::min_element(sc.eigenvalues.begin(), sc.eigenvalues.end());
  if (min_lambda < -tol) {
    throw Error(ErrorCode::NotCompletelyPositive, "negative spectral eigenvalue " + std::to_string(min_lambda),
                min_lambda);
  }
  KrausChannel k{sc.dim, {}};
  for (std::size_t a = 0; a < sc.eigenvalues.size(); ++a) {
    if (sc.eigenvalues[a] <= kKrausDropCutoff) continue;
    k.ops.push_back(std::sqrt(sc.eigenvalues[a]) * sc.eigenops[a]);
  }
  return k;
}

SpectralChannel kraus_to_spectral(const KrausChannel& k) {
  k.check_shape();
  return spectral_decompose(superop_from_action(k.as_map(), k.dim));
}

}  // namespace lindbladkit
