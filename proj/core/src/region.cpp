#include "lindbladkit/region.hpp"

#include <cmath>
#include <string>

#include "lindbladkit/errors.hpp"
#include "lindbladkit/superop.hpp"
#include "parallel.hpp"

namespace lindbladkit {

std::string_view to_string(RegionClass c) {
  switch (c) {
    case RegionClass::Invalid: return "invalid";
    case RegionClass::PositiveOnly: return "positive_only";
    case RegionClass::CompletelyPositive: return "completely_positive";
  }
  return "invalid";
}

namespace {

bool within(double x, double lo, double hi) { return x >= lo - kRegionTol && x <= hi + kRegionTol; }

}  // namespace

RegionClass region_classify(double l1, double l3, double l4) {
  const double l2 = l1;
  if (std::abs(l1 + l2 + l3 + l4 - 2.0) > kRegionTol) return RegionClass::Invalid;
  const bool positive = within(l1 + l2, 0.0, 2.0) && within(l3 + l4, 0.0, 2.0) && within(l1 + l4, 0.0, 2.0) &&
                        within(l2 + l4, 0.0, 2.0);
  if (!positive) return RegionClass::Invalid;
  const bool all_nonnegative = l1 >= -kRegionTol && l3 >= -kRegionTol && l4 >= -kRegionTol;
  return all_nonnegative ? RegionClass::CompletelyPositive : RegionClass::PositiveOnly;
}

std::vector<RegionPoint> region_scan(std::size_t resolution, unsigned threads) {
  if (resolution < 2) throw Error(ErrorCode::BadDimension, "region_scan needs resolution >= 2");
  const double steps = static_cast<double>(resolution - 1);
  std::vector<RegionPoint> points(resolution * resolution);

  detail::parallel_chunks(resolution, threads, [&](std::size_t i) {
    const double l1 = kScanL1Min + (kScanL1Max - kScanL1Min) * static_cast<double>(i) / steps;
    for (std::size_t j = 0; j < resolution; ++j) {
      const double l3 = kScanL3Min + (kScanL3Max - kScanL3Min) * static_cast<double>(j) / steps;
      const double l4 = 2.0 - 2.0 * l1 - l3;
      RegionPoint p{l1, l3, l4, region_classify(l1, l3, l4)};
      if (p.cls == RegionClass::PositiveOnly) {
        const LinearMap map = pauli_channel(l1, l1, l3, l4).as_map();
        const bool positive = positive_on_basis(map, 2, kRegionTol);
        const bool cp = cp_check(map, 2, kRegionTol).completely_positive;
        if (!positive || cp) {
          throw Error(ErrorCode::ValidationFailure,
                      "positive_only point (" + std::to_string(l1) + ", " + std::to_string(l3) + ", " +
                          std::to_string(l4) + ") failed its map cross-check");
        }
      }
      points[i * resolution + j] = p;
    }
  });
  return points;
}

}  // namespace lindbladkit
