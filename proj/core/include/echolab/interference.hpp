#pragma once

#include <cstdint>

#include "echolab/floquet.hpp"

namespace echolab {

// Uniform 1-D position grid.
struct SampleGrid {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_points = 2;

  double dx() const { return (x_max - x_min) / (n_points - 1); }
  double x(int i) const { return x_min + i * dx(); }
  friend bool operator==(const SampleGrid&, const SampleGrid&) = default;
};

// Gaussian packet chi(x) = A exp(-(x-center)^2 / (4 w^2)) exp(i q x).
// The grid must span at least 6w beyond the center on both sides.
struct WavePacket {
  SampleGrid grid;
  double center;
  double width;       // w > 0
  double wavevector;  // q
  double amplitude;   // A > 0

  WavePacket(SampleGrid grid, double center, double width, double wavevector,
             double amplitude = 1.0);
  Vector values() const;  // chi at every grid point
};

struct InterferencePattern {
  SampleGrid grid;
  RealVector intensity;  // P(x_i) >= 0
};

// Overlap of the two single-well branches after n kick periods: evolve
// `initial` under couplings K and K + delta_K and return
// <psi_{K+dK}(n) | psi_K(n)>; equals the echo amplitude m(n) at
// sigma = L * delta_K.
Complex two_well_fidelity(const SpinBasis& basis, const ModelParams& params,
                          double delta_K, const StateVector& initial, int n);

// P(x) = |chi1|^2 + |chi2|^2 + 2 Re[f chi1 chi2^*], optionally degraded by
// multiplicative Gaussian noise of relative amplitude rel_noise (samples that
// would push P below zero are redrawn, never clipped). Requires |f| <= 1 and
// a shared grid.
InterferencePattern synthesize_pattern(const WavePacket& chi1,
                                       const WavePacket& chi2, Complex f,
                                       double rel_noise = 0.0,
                                       uint64_t seed = 0);

// Alternative noise model: P is sampled as a binned multinomial histogram of
// n_draws atoms, normalized back to an intensity.
InterferencePattern sample_pattern_multinomial(const WavePacket& chi1,
                                               const WavePacket& chi2,
                                               Complex f, long n_draws,
                                               uint64_t seed);

// Linear least squares of R(x) = P - |chi1|^2 - |chi2|^2 against
// 2 Re[chi1 chi2^*] and -2 Im[chi1 chi2^*]: recovers f = |f| e^{i theta_f}.
// Degenerate geometry (no envelope overlap) throws NumericalError.
struct FringeFit {
  double magnitude;
  double phase;  // in (-pi, pi]
};
FringeFit extract_fidelity(const InterferencePattern& pattern,
                           const WavePacket& chi1, const WavePacket& chi2);

}  // namespace echolab
