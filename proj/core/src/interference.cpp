#include "echolab/interference.hpp"

#include <cmath>
#include <random>

namespace echolab {

WavePacket::WavePacket(SampleGrid grid_, double center_, double width_,
                       double wavevector_, double amplitude_)
    : grid(grid_), center(center_), width(width_), wavevector(wavevector_),
      amplitude(amplitude_) {
  if (!(width > 0.0)) throw std::invalid_argument("packet width must be > 0");
  if (!(amplitude > 0.0)) throw std::invalid_argument("packet amplitude must be > 0");
  if (grid.n_points < 2) throw std::invalid_argument("grid needs >= 2 points");
  if (!(grid.x_max > grid.x_min)) throw std::invalid_argument("grid x_max must exceed x_min");
  if (grid.x_min > center - 6.0 * width || grid.x_max < center + 6.0 * width) {
    throw std::invalid_argument("grid must span at least 6 widths beyond the packet center");
  }
}

Vector WavePacket::values() const {
  Vector v(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    const double d = x - center;
    const double env = amplitude * std::exp(-d * d / (4.0 * width * width));
    v(i) = std::polar(env, wavevector * x);
  }
  return v;
}

namespace {

RealVector noiseless_intensity(const WavePacket& chi1, const WavePacket& chi2, Complex f) {
  if (!(chi1.grid == chi2.grid)) throw std::invalid_argument("packet grids differ");
  if (std::abs(f) > 1.0 + 1e-12) {
    throw std::invalid_argument("|f| must be <= 1, got " + std::to_string(std::abs(f)));
  }
  const Vector v1 = chi1.values();
  const Vector v2 = chi2.values();
  RealVector p(chi1.grid.n_points);
  for (int i = 0; i < p.size(); ++i) {
    const double val =
        std::norm(v1(i)) + std::norm(v2(i)) + 2.0 * std::real(f * v1(i) * std::conj(v2(i)));
    // Cauchy-Schwarz keeps the exact value nonnegative; only rounding can
    // produce a tiny negative here.
    if (val < -1e-12) {
      throw NumericalError("interference intensity " + std::to_string(val) + " below zero");
    }
    p(i) = std::max(val, 0.0);
  }
  return p;
}

}  // namespace

Complex two_well_fidelity(const SpinBasis& basis, const ModelParams& params,
                          double delta_K, const StateVector& initial, int n) {
  ModelParams p1 = params;
  p1.sigma = 0.0;
  ModelParams p2 = p1;
  p2.K += delta_K;
  p2.validate();
  const StateVector a = evolve(build_floquet(basis, p1, false), initial, n);
  const StateVector b = evolve(build_floquet(basis, p2, false), initial, n);
  return inner(b, a);  // <psi_{K+dK}(n) | psi_K(n)>
}

InterferencePattern synthesize_pattern(const WavePacket& chi1, const WavePacket& chi2,
                                       Complex f, double rel_noise, uint64_t seed) {
  if (rel_noise < 0.0) throw std::invalid_argument("rel_noise must be >= 0");
  RealVector p = noiseless_intensity(chi1, chi2, f);
  if (rel_noise > 0.0) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() { return 1.0 - (rng() >> 11) * 0x1.0p-53; };
    auto gauss = [&]() {
      const double r = std::sqrt(-2.0 * std::log(uniform()));
      return r * std::cos(2.0 * M_PI * uniform());
    };
    for (int i = 0; i < p.size(); ++i) {
      // Multiplicative noise; redraw (never clip) if a sample would go negative.
      double sample;
      do {
        sample = p(i) * (1.0 + rel_noise * gauss());
      } while (sample < 0.0);
      p(i) = sample;
    }
  }
  return InterferencePattern{chi1.grid, std::move(p)};
}

InterferencePattern sample_pattern_multinomial(const WavePacket& chi1,
                                               const WavePacket& chi2, Complex f,
                                               long n_draws, uint64_t seed) {
  if (n_draws < 1) throw std::invalid_argument("n_draws must be >= 1");
  RealVector p = noiseless_intensity(chi1, chi2, f);
  const double total = p.sum();
  if (!(total > 0.0)) throw NumericalError("pattern has zero total intensity");

  // Inverse-CDF sampling of bin indices; deterministic given the seed.
  RealVector cdf(p.size());
  double acc = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    acc += p(i) / total;
    cdf(i) = acc;
  }
  cdf(p.size() - 1) = 1.0;

  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
  RealVector counts = RealVector::Zero(p.size());
  for (long d = 0; d < n_draws; ++d) {
    const double u = uniform();
    const int bin = static_cast<int>(
        std::lower_bound(cdf.data(), cdf.data() + cdf.size(), u) - cdf.data());
    counts(bin) += 1.0;
  }
  // Normalize the histogram back to the intensity scale of the input pattern.
  RealVector intensity = counts * (total / n_draws);
  return InterferencePattern{chi1.grid, std::move(intensity)};
}

FringeFit extract_fidelity(const InterferencePattern& pattern, const WavePacket& chi1,
                           const WavePacket& chi2) {
  if (!(chi1.grid == chi2.grid) || !(pattern.grid == chi1.grid)) {
    throw std::invalid_argument("pattern and packet grids differ");
  }
  const Vector v1 = chi1.values();
  const Vector v2 = chi2.values();
  const int n = pattern.grid.n_points;

  RealMatrix design(n, 2);
  RealVector residual(n);
  double cross_max = 0.0, intensity_scale = 0.0;
  for (int i = 0; i < n; ++i) {
    const Complex cross = v1(i) * std::conj(v2(i));
    design(i, 0) = 2.0 * cross.real();
    design(i, 1) = -2.0 * cross.imag();
    residual(i) = pattern.intensity(i) - std::norm(v1(i)) - std::norm(v2(i));
    cross_max = std::max(cross_max, std::abs(cross));
    intensity_scale = std::max({intensity_scale, std::norm(v1(i)), std::norm(v2(i))});
  }
  // The fringe term must be resolvable against the envelope intensity; a
  // relatively well-conditioned design matrix of negligible magnitude still
  // means the envelopes never overlap.
  if (!(cross_max > 1e-12 * intensity_scale)) {
    throw NumericalError("degenerate fringe geometry: packet envelopes do not overlap");
  }

  Eigen::JacobiSVD<RealMatrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(1);
  if (!(smax > 0.0) || smin < 1e-12 * smax) {
    throw NumericalError("degenerate fringe geometry: packet envelopes do not overlap");
  }
  const Eigen::Vector2d ab = svd.solve(residual);
  return FringeFit{std::hypot(ab(0), ab(1)), std::atan2(ab(1), ab(0))};
}

}  // namespace echolab
