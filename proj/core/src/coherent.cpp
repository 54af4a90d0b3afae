#include "echolab/coherent.hpp"

#include <cmath>

namespace echolab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// ln |c_i| = (1/2) ln C(N, i) + i ln cos(theta/2) + (N - i) ln sin(theta/2),
// with i = l + L; the 0 * (-inf) corner at the endpoints is excluded by the
// exact-Fock dispatch in the callers.
double log_abs_amplitude(int n_atoms, int i, double log_cos_half, double log_sin_half) {
  double v = 0.5 * log_binom(n_atoms, i);
  if (i > 0) v += i * log_cos_half;
  if (i < n_atoms) v += (n_atoms - i) * log_sin_half;
  return v;
}

// Expansion amplitudes for theta strictly inside (0, pi):
// c_i = (-1)^i e^{i phi i} exp(ln|c_i|)  [from z = -e^{-i phi} cot(theta/2)].
Vector expansion_amplitudes(const SpinBasis& basis, double theta, double phi) {
  const int n = basis.n_atoms();
  const double log_cos_half = std::log(std::cos(0.5 * theta));
  const double log_sin_half = std::log(std::sin(0.5 * theta));
  Vector v(basis.dim());
  for (int i = 0; i <= n; ++i) {
    const double mag = std::exp(log_abs_amplitude(n, i, log_cos_half, log_sin_half));
    const double arg = phi * i + (i % 2 ? kPi : 0.0);
    v(i) = std::polar(mag, arg);
  }
  return v;
}

}  // namespace

SphereAngle::SphereAngle(double theta_, double phi_) : theta(theta_), phi(phi_) {
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw std::invalid_argument("theta must lie in [0, pi]");
  }
  if (!(phi >= 0.0 && phi < kTwoPi)) {
    throw std::invalid_argument("phi must lie in [0, 2*pi)");
  }
}

StateVector coherent_state(const SpinBasis& basis, const SphereAngle& angle) {
  if (angle.theta == 0.0) return fock_state(basis, basis.spin());
  if (angle.theta == kPi) return fock_state(basis, -basis.spin());
  return StateVector(basis, expansion_amplitudes(basis, angle.theta, angle.phi));
}

double overlap_probability(const SpinBasis& basis, const SphereAngle& angle, double l) {
  const int i = basis.row_of(l);
  const int n = basis.n_atoms();
  if (angle.theta == 0.0) return i == n ? 1.0 : 0.0;
  if (angle.theta == kPi) return i == 0 ? 1.0 : 0.0;
  const double log_cos_half = std::log(std::cos(0.5 * angle.theta));
  const double log_sin_half = std::log(std::sin(0.5 * angle.theta));
  return std::exp(2.0 * log_abs_amplitude(n, i, log_cos_half, log_sin_half));
}

namespace {

double overlap_with(const SpinBasis& basis, const Vector& state, double theta, double phi) {
  if (theta <= 0.0) return std::norm(state(basis.dim() - 1));
  if (theta >= kPi) return std::norm(state(0));
  const Vector c = expansion_amplitudes(basis, theta, phi);
  return std::norm(c.dot(state));
}

// Golden-section maximization of f over [a, b].
template <typename F>
double golden_max(F f, double a, double b, int iters = 40) {
  const double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iters; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

}  // namespace

std::optional<SphereAngle> is_coherent(const StateVector& state, double tolerance) {
  const SpinBasis& basis = state.basis();
  const Vector& amp = state.amplitudes();

  // Coarse 181 x 72 grid...
  const int n_theta = 181, n_phi = 72;
  double best_theta = 0.0, best_phi = 0.0, best = -1.0;
  for (int i = 0; i <= n_theta - 1; ++i) {
    const double theta = kPi * i / (n_theta - 1);
    const int phis = (i == 0 || i == n_theta - 1) ? 1 : n_phi;  // poles are phi-independent
    for (int j = 0; j < phis; ++j) {
      const double phi = kTwoPi * j / n_phi;
      const double p = overlap_with(basis, amp, theta, phi);
      if (p > best) {
        best = p;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  // ...then golden-section refinement, alternating theta and phi.
  const double d_theta = kPi / (n_theta - 1);
  const double d_phi = kTwoPi / n_phi;
  for (int round = 0; round < 2; ++round) {
    const double lo = std::max(0.0, best_theta - d_theta);
    const double hi = std::min(kPi, best_theta + d_theta);
    best_theta = golden_max(
        [&](double t) { return overlap_with(basis, amp, t, best_phi); }, lo, hi);
    if (best_theta > 0.0 && best_theta < kPi) {
      best_phi = golden_max(
          [&](double p) { return overlap_with(basis, amp, best_theta, p); },
          best_phi - d_phi, best_phi + d_phi);
    }
  }
  best = overlap_with(basis, amp, best_theta, best_phi);

  if (1.0 - best >= tolerance) return std::nullopt;
  double phi_wrapped = std::fmod(best_phi, kTwoPi);
  if (phi_wrapped < 0.0) phi_wrapped += kTwoPi;
  if (phi_wrapped >= kTwoPi) phi_wrapped = 0.0;
  return SphereAngle(std::min(std::max(best_theta, 0.0), kPi), phi_wrapped);
}

}  // namespace echolab
