#include "echolab/peaks.hpp"

#include <algorithm>

namespace echolab {

std::vector<PeakRecord> detect_peaks(std::span<const double> series,
                                     double threshold_frac, int min_gap) {
  if (!(threshold_frac > 0.0 && threshold_frac < 1.0)) {
    throw std::invalid_argument("threshold_frac must lie in (0, 1)");
  }
  if (min_gap < 0) throw std::invalid_argument("min_gap must be >= 0");
  if (series.empty()) return {};
  const double global_max = *std::max_element(series.begin(), series.end());
  if (!(global_max > 0.0)) return {};  // flat-zero series
  const double threshold = threshold_frac * global_max;

  // Maximal runs with value >= threshold.
  struct Region {
    int begin, end;  // inclusive
  };
  std::vector<Region> regions;
  int start = -1;
  for (int i = 0; i < static_cast<int>(series.size()); ++i) {
    if (series[i] >= threshold) {
      if (start < 0) start = i;
    } else if (start >= 0) {
      regions.push_back({start, i - 1});
      start = -1;
    }
  }
  if (start >= 0) regions.push_back({start, static_cast<int>(series.size()) - 1});

  // Merge regions separated by fewer than min_gap samples.
  std::vector<Region> merged{regions.front()};
  for (size_t i = 1; i < regions.size(); ++i) {
    if (regions[i].begin - merged.back().end < min_gap) {
      merged.back().end = regions[i].end;
    } else {
      merged.push_back(regions[i]);
    }
  }

  std::vector<PeakRecord> peaks;
  peaks.reserve(merged.size());
  for (const Region& reg : merged) {
    int center = reg.begin;
    for (int i = reg.begin + 1; i <= reg.end; ++i) {
      if (series[i] > series[center]) center = i;  // earliest index on ties
    }
    peaks.push_back({center, series[center], reg.begin, reg.end, threshold});
  }
  return peaks;
}

PeakTrack track_peak_centers(const EchoMatrix& em, double threshold_frac, int min_gap) {
  PeakTrack track;
  track.k_values = em.k_values;
  const int n_k = static_cast<int>(em.k_values.size());
  track.peaks.resize(n_k);
  track.first_center.resize(n_k);
  track.second_center.resize(n_k);

  for (int j = 0; j < n_k; ++j) {
    const RealVector col = em.probability.col(j);
    track.peaks[j] =
        detect_peaks(std::span<const double>(col.data(), col.size()), threshold_frac, min_gap);
    if (!track.peaks[j].empty()) track.first_center[j] = track.peaks[j][0].center_n;
    if (track.peaks[j].size() >= 2) track.second_center[j] = track.peaks[j][1].center_n;
  }
  // Merge point: first k (ascending) where a resolved pair collapses to one.
  for (int j = 1; j < n_k; ++j) {
    if (track.peaks[j - 1].size() >= 2 && track.peaks[j].size() == 1) {
      track.merge_k = em.k_values[j];
      break;
    }
  }
  return track;
}

}  // namespace echolab
