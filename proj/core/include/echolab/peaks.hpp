#pragma once

#include <optional>
#include <span>
#include <vector>

#include "echolab/fidelity.hpp"

namespace echolab {

struct PeakRecord {
  int center_n;     // argmax within the region (earliest index on ties)
  double height;    // series value at center_n
  int n_start;      // inclusive extent
  int n_end;        // inclusive extent
  double threshold; // absolute threshold used for this series
};

// Peak regions are maximal runs with value >= threshold_frac * global max;
// regions separated by fewer than min_gap samples merge. Empty or all-zero
// series yield no peaks. Requires 0 < threshold_frac < 1, min_gap >= 0.
std::vector<PeakRecord> detect_peaks(std::span<const double> series,
                                     double threshold_frac, int min_gap);

// First/second peak centers per k across an echo matrix, and the smallest k
// at which the two merge into one region (count drops from >= 2 to 1).
struct PeakTrack {
  std::vector<double> k_values;
  std::vector<std::vector<PeakRecord>> peaks;         // all peaks per k
  std::vector<std::optional<int>> first_center;
  std::vector<std::optional<int>> second_center;
  std::optional<double> merge_k;
};
PeakTrack track_peak_centers(const EchoMatrix& em, double threshold_frac,
                             int min_gap);

}  // namespace echolab
