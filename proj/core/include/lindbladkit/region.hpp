#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace lindbladkit {

// Positivity classes of the two-level Pauli+1 spectral map on the slice
// λ² = λ¹ with 2λ¹ + λ³ + λ⁴ = 2.
enum class RegionClass { Invalid, PositiveOnly, CompletelyPositive };

std::string_view to_string(RegionClass c);

inline constexpr double kRegionTol = 1e-9;

/// Classifies (λ¹ = λ², λ³, λ⁴). Invalid when the eigenvalue sum differs from 2
/// or any of 2 ≥ λ¹+λ² ≥ 0, 2 ≥ λ³+λ⁴ ≥ 0, 2 ≥ λ¹+λ⁴ ≥ 0, 2 ≥ λ²+λ⁴ ≥ 0
/// fails; CompletelyPositive when additionally every λ ≥ 0. All comparisons
/// carry kRegionTol slack.
RegionClass region_classify(double l1, double l3, double l4);

struct RegionPoint {
  double l1 = 0.0;
  double l3 = 0.0;
  double l4 = 0.0;
  RegionClass cls = RegionClass::Invalid;
};

// Grid bounds of the scan. λ⁴ = 2 − 2λ¹ − λ³.
inline constexpr double kScanL1Min = -0.5;
inline constexpr double kScanL1Max = 2.5;
inline constexpr double kScanL3Min = -2.5;
inline constexpr double kScanL3Max = 2.5;

/// resolution × resolution grid over (λ¹, λ³), ordered λ¹-major. Every
/// PositiveOnly point is cross-checked against positive_on_basis and cp_check
/// of its Pauli map; a disagreement throws ValidationFailure. Grid points are
/// evaluated on up to `threads` workers (0 = default from LINDBLADKIT_THREADS)
/// and the output order never depends on that count. Throws BadDimension for
/// resolution < 2.
std::vector<RegionPoint> region_scan(std::size_t resolution, unsigned threads = 0);

}  // namespace lindbladkit
