#pragma once

#include <optional>

#include "echolab/spin_space.hpp"

namespace echolab {

// Point on the Bloch sphere; theta in [0, pi], phi in [0, 2*pi).
struct SphereAngle {
  double theta;
  double phi;
  SphereAngle(double theta, double phi);
};

// Spin coherent state |alpha> = sum_l (z*)^{l+L} / (1+|z|^2)^L *
// sqrt((2L)! / ((L+l)!(L-l)!)) |l> with z = -e^{-i phi} cot(theta/2).
// Magnitudes are evaluated in log space (log-Gamma binomials) so L = 100
// does not overflow; theta = 0 / pi return exact Fock states |L> / |-L>.
StateVector coherent_state(const SpinBasis& basis, const SphereAngle& angle);

// Closed-form |<alpha|l>|^2 = binom(2L, L+l) cos^{2(L+l)}(theta/2)
// sin^{2(L-l)}(theta/2), log-space evaluation; independent of phi.
double overlap_probability(const SpinBasis& basis, const SphereAngle& angle,
                           double l);

// Grid search (181 x 72 in theta x phi) plus golden-section refinement for
// the coherent state closest to `state`; returns the angle if the infidelity
// 1 - |<alpha|state>|^2 falls below `tolerance`, otherwise nullopt.
std::optional<SphereAngle> is_coherent(const StateVector& state,
                                       double tolerance);

}  // namespace echolab
