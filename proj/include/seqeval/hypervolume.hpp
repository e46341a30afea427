#pragma once

#include "seqeval/types.hpp"

#include <optional>

namespace seqeval {

struct HypervolumeParams {
  /// Defaults to the origin.
  std::optional<Vector> reference_point;
};

/// Lebesgue measure of the union of boxes [reference, p] over all rows p.
///
/// Points are shifted by the reference point and reduced to their
/// non-dominated subset. k = 2 uses a sorted sweep (O(n log n)); higher k
/// slices along the last objective and recurses, O(n^(k-1) log n).
/// Throws InvalidInput for k < 2 or a coordinate not above the reference.
double hypervolume_indicator(const Matrix& points, const HypervolumeParams& params = {});

struct HullVolume {
  double volume = 0.0;
  /// Input is affinely dependent (or has fewer than k+1 points); volume is 0.
  bool degenerate = false;
};

/// Area (k = 2) or volume (k = 3) of the convex hull of the rows.
/// Throws InvalidInput for k outside {2, 3}.
HullVolume convex_hull_volume(const Matrix& points);

}  // namespace seqeval
