#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include "echolab/fidelity.hpp"
#include "echolab/peaks.hpp"

using namespace echolab;

namespace {

const Complex kI(0.0, 1.0);

ModelParams params(double k, double g_c, double sigma) {
  ModelParams p;
  p.mu = 1.0;
  p.g_c = g_c;
  p.K = k;
  p.T = 1.0;
  p.sigma = sigma;
  return p;
}

// Closed-form two-level reference, plain std::complex arithmetic only.
using Vec2 = std::array<Complex, 2>;
using Mat2 = std::array<Vec2, 2>;

Vec2 mat_vec(const Mat2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

// Period map for spin 1/2 in the row order (l=-1/2, l=+1/2): phase diagonal
// exp(-i (mu l + g l^2) T) applied after the rotation exp(-i k_eff Lx).
Mat2 period_map(double mu, double g, double t, double k_eff) {
  const double c = std::cos(0.5 * k_eff);
  const Complex ms = -kI * std::sin(0.5 * k_eff);
  const Complex d0 = std::exp(-kI * ((-0.5 * mu + 0.25 * g) * t));
  const Complex d1 = std::exp(-kI * ((0.5 * mu + 0.25 * g) * t));
  return {Vec2{d0 * c, d0 * ms}, Vec2{d1 * ms, d1 * c}};
}

}  // namespace

TEST_CASE("two-level curve matches the closed-form reference") {
  const SpinBasis b(1);
  std::mt19937_64 rng(12345);
  auto uniform = [&rng](double lo, double hi) {
    const double u = 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };

  for (int trial = 0; trial < 5; ++trial) {
    const double k_kick = uniform(0.0, 4.0);
    const double g_c = uniform(-1.0, 1.0);
    const double sigma = uniform(0.0, 0.8);
    const double k0 = (trial % 2 == 0) ? 0.5 : -0.5;
    const ModelParams p = params(k_kick, g_c, sigma);

    const int n_max = 400;
    const EchoCurve curve = fidelity_curve(b, p, k0, n_max);
    REQUIRE(static_cast<int>(curve.samples.size()) == n_max + 1);

    const double g = p.interaction_g(b);
    const double eps = p.epsilon(b);
    const Mat2 u = period_map(p.mu, g, p.T, k_kick);
    const Mat2 u_eps = period_map(p.mu, g, p.T, k_kick + eps);
    Vec2 psi = {0.0, 0.0}, psi_eps = {0.0, 0.0};
    psi[b.row_of(k0)] = 1.0;
    psi_eps[b.row_of(k0)] = 1.0;

    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      const Complex m_ref =
          std::conj(psi_eps[0]) * psi[0] + std::conj(psi_eps[1]) * psi[1];
      worst = std::max(worst, std::abs(curve.samples[n].amplitude - m_ref));
      worst = std::max(worst,
                       std::abs(curve.samples[n].probability - std::norm(m_ref)));
      psi = mat_vec(u, psi);
      psi_eps = mat_vec(u_eps, psi_eps);
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("two-level first-kick echo is cos^2 of the detuning half-angle") {
  const SpinBasis b(1);
  for (double sigma : {0.05, 0.3, 1.1}) {
    const EchoCurve curve = fidelity_curve(b, params(1.7, 0.4, sigma), 0.5, 1);
    // epsilon = sigma / L = 2 sigma at spin 1/2, so M(1) = cos^2(sigma).
    const double want = std::pow(std::cos(sigma), 2);
    CHECK(std::abs(curve.samples[1].probability - want) < 1e-12);
  }
}

TEST_CASE("zero detuning keeps the echo pinned at one") {
  const SpinBasis b(20);
  const EchoCurve curve = fidelity_curve(b, params(1.0, 0.2, 0.0), -10, 300);
  for (const EchoSample& s : curve.samples) {
    CHECK(std::abs(s.probability - 1.0) < 1e-10);
  }
}

TEST_CASE("echo probabilities stay inside [0, 1]") {
  const SpinBasis b(16);
  const EchoCurve curve = fidelity_curve(b, params(2.0, 0.17, 0.5), -8, 200);
  CHECK(curve.samples[0].probability == doctest::Approx(1.0).epsilon(1e-14));
  for (const EchoSample& s : curve.samples) {
    CHECK(s.probability >= 0.0);
    CHECK(s.probability <= 1.0 + 1e-10);
  }
}

TEST_CASE("echo operator column: three routes agree") {
  const SpinBasis b(16);
  const ModelParams p = params(2.0, 0.17, 0.5);
  const double k0 = -3.0;
  const std::vector<int> n_set = {0, 1, 7, 25};

  const std::map<int, StateVector> cols = echo_column(b, p, k0, n_set);
  REQUIRE(cols.size() == n_set.size());

  // Route B: co-evolve bra and ket states and take inner products per l.
  const UnitaryOperator u = build_floquet(b, p, false);
  const UnitaryOperator u_eps = build_floquet(b, p, true);
  // Route C: dense echo operator (U_eps^n)^dag U^n by repeated multiplication.
  Matrix fwd = Matrix::Identity(b.dim(), b.dim());
  Matrix fwd_eps = fwd;

  const StateVector ket0 = fock_state(b, k0);
  double worst = 0.0;
  for (int n = 0; n <= 25; ++n) {
    if (std::count(n_set.begin(), n_set.end(), n) > 0) {
      const StateVector& col = cols.at(n);
      CHECK(std::abs(col.amplitudes().norm() - 1.0) < 1e-10);
      const StateVector psi = evolve(u, ket0, n);
      const Matrix echo_op = fwd_eps.adjoint() * fwd;
      for (int i = 0; i < b.dim(); ++i) {
        const double l = b.fock_index(i);
        const StateVector phi = evolve(u_eps, fock_state(b, l), n);
        const Complex m_b = inner(phi, psi);
        const Complex m_c = echo_op(i, b.row_of(k0));
        worst = std::max(worst, std::abs(col.amplitude(i) - m_b));
        worst = std::max(worst, std::abs(col.amplitude(i) - m_c));
      }
    }
    fwd = (u.matrix() * fwd).eval();
    fwd_eps = (u_eps.matrix() * fwd_eps).eval();
  }
  CHECK(worst < 1e-12);

  // n = 0 column is the Kronecker delta at k0.
  const StateVector& c0 = cols.at(0);
  for (int i = 0; i < b.dim(); ++i) {
    const Complex want = (i == b.row_of(k0)) ? Complex(1.0) : Complex(0.0);
    CHECK(std::abs(c0.amplitude(i) - want) < 1e-14);
  }

  CHECK_THROWS_AS(echo_column(b, p, 99.0, n_set), std::invalid_argument);
  CHECK_THROWS_AS(echo_column(b, p, k0, std::vector<int>{-2}), std::invalid_argument);
}

TEST_CASE("echo matrix agrees with the per-pair curve and sums to one") {
  const SpinBasis b(16);
  const ModelParams p = params(2.0, 0.17, 0.5);
  const double l0 = -6.0;
  const int n_max = 50;
  const EchoMatrix em = echo_matrix(b, p, l0, -8.0, 8.0, n_max);
  REQUIRE(em.n_max() == n_max);
  REQUIRE(static_cast<int>(em.k_values.size()) == b.dim());
  CHECK(em.k_index(-8.0) == 0);
  CHECK(em.k_index(8.0) == 16);
  CHECK_THROWS_AS(em.k_index(9.0), std::invalid_argument);

  // Diagonal slice k = l equals the standard curve.
  const EchoCurve diag = fidelity_curve(b, p, l0, n_max);
  for (int n = 0; n <= n_max; ++n) {
    CHECK(std::abs(em.probability(n, em.k_index(l0)) -
                   diag.samples[n].probability) < 1e-12);
  }

  // Spot-check against the co-evolution route.
  const UnitaryOperator u = build_floquet(b, p, false);
  const UnitaryOperator u_eps = build_floquet(b, p, true);
  for (double k0 : {-8.0, -1.0, 5.0}) {
    for (int n : {3, 29}) {
      const Complex m = inner(evolve(u_eps, fock_state(b, l0), n),
                              evolve(u, fock_state(b, k0), n));
      CHECK(std::abs(em.probability(n, em.k_index(k0)) - std::norm(m)) < 1e-12);
    }
  }

  // Row sums: fixed l, summed over k.
  for (int n : {0, 3, 17, 50}) {
    CHECK(std::abs(em.probability.row(n).sum() - 1.0) < 1e-10);
  }

  // Column sums at fixed n need every l; stack rows from separate calls.
  const int n_probe = 17;
  RealMatrix stacked(b.dim(), b.dim());
  for (int i = 0; i < b.dim(); ++i) {
    const EchoMatrix row = echo_matrix(b, p, b.fock_index(i), -8.0, 8.0, n_probe);
    stacked.row(i) = row.probability.row(n_probe);
  }
  for (int j = 0; j < b.dim(); ++j) {
    CHECK(std::abs(stacked.col(j).sum() - 1.0) < 1e-10);
  }

  CHECK_THROWS_AS(echo_matrix(b, p, l0, 3.0, -3.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(echo_matrix(b, p, 99.0, -8.0, 8.0, 10), std::invalid_argument);
}

TEST_CASE("echo matrix output is identical across worker counts") {
  const SpinBasis b(24);
  const ModelParams p = params(2.0, 0.17, 0.5);
  const EchoMatrix serial = echo_matrix(b, p, -12.0, -12.0, 12.0, 40, 1);
  const EchoMatrix threaded = echo_matrix(b, p, -12.0, -12.0, 12.0, 40, 3);
  CHECK((serial.probability - threaded.probability).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generalized amplitude reduces to the plain echo for a Fock start") {
  const SpinBasis b(16);
  const ModelParams p = params(2.0, 0.17, 0.5);
  const double k0 = 4.0;
  const std::map<int, StateVector> cols = echo_column(b, p, k0, {12});
  const EchoCurve curve = fidelity_curve(b, p, k0, 12);

  const Complex f = generalized_amplitude(fock_state(b, k0), cols.at(12));
  CHECK(std::abs(f - curve.samples[12].amplitude) < 1e-12);
  CHECK(std::abs(f) <= 1.0 + 1e-12);

  // Imperfect preparation: a two-component C vector picks up the matching
  // linear combination of column entries.
  Vector c = Vector::Zero(b.dim());
  c(b.row_of(k0)) = std::sqrt(0.99);
  c(b.row_of(k0 - 1)) = std::sqrt(0.01) * std::exp(kI * 0.3);
  const StateVector prep(b, c);
  const Complex f_mix = generalized_amplitude(prep, cols.at(12));
  const Complex want = std::conj(c(b.row_of(k0))) * cols.at(12).amplitude(b.row_of(k0)) +
                       std::conj(c(b.row_of(k0 - 1))) * cols.at(12).amplitude(b.row_of(k0 - 1));
  CHECK(std::abs(f_mix - want) < 1e-14);

  const SpinBasis other(8);
  CHECK_THROWS_AS(generalized_amplitude(fock_state(other, 0), cols.at(12)),
                  std::invalid_argument);
}

TEST_CASE("cumulative transfer sums are monotone and close at one") {
  const SpinBasis b(16);
  const ModelParams p = params(2.0, 0.17, 0.5);
  const EchoMatrix em = echo_matrix(b, p, -8.0, -8.0, 8.0, 40);
  for (int n : {0, 7, 40}) {
    const std::vector<double> s = cumulative_sk(em, n);
    REQUIRE(static_cast<int>(s.size()) == b.dim());
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] >= s[i - 1] - 1e-14);
    CHECK(std::abs(s.back() - 1.0) < 1e-10);
  }
  CHECK_THROWS_AS(cumulative_sk(em, 41), std::invalid_argument);
  CHECK_THROWS_AS(cumulative_sk(em, -1), std::invalid_argument);

  const EchoMatrix partial = echo_matrix(b, p, -8.0, -8.0, 5.0, 10);
  CHECK_THROWS_AS(cumulative_sk(partial, 5), std::invalid_argument);
}

TEST_CASE("coupling sweep: zero detuning gives unity, workers do not matter") {
  const SpinBasis b(8);
  const std::vector<double> k_grid = {0.5, 1.0, 2.5};
  const std::vector<double> k_set = {-4.0, 0.0, 4.0};

  const CouplingSweep flat =
      fidelity_at_time_vs_K(b, params(0.0, 0.2, 0.0), k_grid, k_set, 20);
  CHECK((flat.probability.array() - 1.0).abs().maxCoeff() < 1e-10);

  const ModelParams p = params(0.0, 0.2, 0.3);
  const CouplingSweep a = fidelity_at_time_vs_K(b, p, k_grid, k_set, 20, 1);
  const CouplingSweep c = fidelity_at_time_vs_K(b, p, k_grid, k_set, 20, 4);
  CHECK((a.probability - c.probability).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(a.probability.rows() == 3);
  REQUIRE(a.probability.cols() == 3);

  // The sweep grid overrides the base kick strength.
  const EchoCurve direct = fidelity_curve(b, params(2.5, 0.2, 0.3), -4.0, 20);
  CHECK(std::abs(a.probability(2, 0) - direct.samples[20].probability) < 1e-12);
}

TEST_CASE("perturbation route equals the explicit two-build route") {
  const SpinBasis b(16);
  const double k0 = 1.3, d = 0.08;
  const ModelParams lo = params(k0, 0.2, 0.0);
  ModelParams hi = lo;
  hi.K = k0 + d;

  const UnitaryOperator u_lo = build_floquet(b, lo, false);
  const UnitaryOperator u_hi = build_floquet(b, hi, false);
  const StateVector s = fock_state(b, -8.0);

  ModelParams sweep = lo;
  sweep.sigma = d * b.spin();  // epsilon = sigma / L = d
  const EchoCurve curve = fidelity_curve(b, sweep, -8.0, 30);

  for (int n : {1, 9, 30}) {
    const StateVector psi = evolve(u_lo, s, n);
    const StateVector psi_hi = evolve(u_hi, s, n);
    const Complex m_fwd = inner(psi_hi, psi);
    CHECK(std::abs(curve.samples[n].amplitude - m_fwd) < 1e-12);
    // Swapping which branch is "perturbed" conjugates the amplitude and
    // leaves the probability invariant.
    const Complex m_swap = inner(psi, psi_hi);
    CHECK(std::abs(m_swap - std::conj(m_fwd)) < 1e-14);
    CHECK(std::abs(std::norm(m_swap) - curve.samples[n].probability) < 1e-12);
  }
}

TEST_CASE("observable difference identity") {
  const SpinBasis b(16);
  const ModelParams p = params(2.0, 0.17, 0.3);

  for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const HermitianOperator a = random_hermitian(b, seed);
    const IdentityCheck chk = observable_difference_check(b, p, a, 0.0, 50);
    CHECK(chk.abs_diff < 1e-10);
    CHECK(std::abs(chk.lhs - chk.rhs) == doctest::Approx(chk.abs_diff));
    CHECK(std::abs(chk.lhs) > 1e-3);  // non-vacuous at this detuning
  }

  // Zero detuning: both branches coincide, both sides vanish.
  const IdentityCheck zero = observable_difference_check(
      b, params(2.0, 0.17, 0.0), random_hermitian(b, 9), 3.0, 25);
  CHECK(std::abs(zero.lhs) < 1e-12);
  CHECK(std::abs(zero.rhs) < 1e-12);

  // The identity operator commutes with everything: both sides vanish too.
  const HermitianOperator eye(b, Matrix::Identity(b.dim(), b.dim()));
  const IdentityCheck triv = observable_difference_check(b, p, eye, 0.0, 50);
  CHECK(std::abs(triv.lhs) < 1e-12);
  CHECK(std::abs(triv.rhs) < 1e-12);

  CHECK_THROWS_AS(observable_difference_check(b, p, eye, 99.0, 5),
                  std::invalid_argument);
}

TEST_CASE("seeded hermitian draws are reproducible") {
  const SpinBasis b(12);
  const Matrix a = random_hermitian(b, 42).matrix();
  const Matrix c = random_hermitian(b, 42).matrix();
  CHECK((a - c).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - a.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  const Matrix d = random_hermitian(b, 43).matrix();
  CHECK((a - d).cwiseAbs().maxCoeff() > 1e-3);
}

namespace {
std::vector<double> bump(int len, int center, double height, double width) {
  std::vector<double> v(len, 0.0);
  for (int i = 0; i < len; ++i) {
    v[i] = height * std::exp(-0.5 * std::pow((i - center) / width, 2));
  }
  return v;
}

std::vector<double> add(std::vector<double> a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
}  // namespace

TEST_CASE("peak detector basics") {
  const std::vector<double> single = bump(200, 60, 1.0, 5.0);
  const std::vector<PeakRecord> one = detect_peaks(single, 0.1, 20);
  REQUIRE(one.size() == 1);
  CHECK(one[0].center_n == 60);
  CHECK(one[0].height == doctest::Approx(1.0));
  CHECK(one[0].n_start <= 60);
  CHECK(one[0].n_end >= 60);
  CHECK(one[0].threshold == doctest::Approx(0.1));
  CHECK(single[one[0].n_start] >= one[0].threshold);
  CHECK(single[one[0].n_end] >= one[0].threshold);

  const std::vector<double> twin = add(bump(400, 80, 1.0, 6.0), bump(400, 300, 0.7, 6.0));
  const std::vector<PeakRecord> two = detect_peaks(twin, 0.1, 20);
  REQUIRE(two.size() == 2);
  CHECK(two[0].center_n == 80);
  CHECK(two[1].center_n == 300);
  CHECK(two[1].height == doctest::Approx(0.7).epsilon(1e-6));

  // Same two bumps, but a gap requirement wider than their separation.
  const std::vector<PeakRecord> merged = detect_peaks(twin, 0.1, 250);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].center_n == 80);
  CHECK(merged[0].n_end >= 300);
}

TEST_CASE("peak detector edge cases") {
  CHECK(detect_peaks(std::vector<double>{}, 0.1, 20).empty());
  CHECK(detect_peaks(std::vector<double>(50, 0.0), 0.1, 20).empty());

  const std::vector<double> plateau = {0.0, 0.0, 1.0, 1.0, 0.0};
  const std::vector<PeakRecord> p = detect_peaks(plateau, 0.5, 0);
  REQUIRE(p.size() == 1);
  CHECK(p[0].center_n == 2);  // earliest index wins ties

  const std::vector<double> v(10, 1.0);
  CHECK_THROWS_AS(detect_peaks(v, 0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(detect_peaks(v, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(detect_peaks(v, 0.5, -1), std::invalid_argument);
}

TEST_CASE("peak tracking across a synthetic echo matrix") {
  // Columns: k=0 and k=1 carry two well-separated bumps, k=2 a single one.
  const int n_max = 400;
  RealMatrix prob(n_max + 1, 3);
  const std::vector<double> two_a = add(bump(n_max + 1, 50, 1.0, 8.0),
                                        bump(n_max + 1, 350, 0.8, 8.0));
  const std::vector<double> two_b = add(bump(n_max + 1, 60, 1.0, 8.0),
                                        bump(n_max + 1, 330, 0.8, 8.0));
  const std::vector<double> lone = bump(n_max + 1, 120, 1.0, 8.0);
  for (int n = 0; n <= n_max; ++n) {
    prob(n, 0) = two_a[n];
    prob(n, 1) = two_b[n];
    prob(n, 2) = lone[n];
  }
  const EchoMatrix em{SpinBasis(16), ModelParams{}, -8.0, {0.0, 1.0, 2.0}, prob};

  const PeakTrack track = track_peak_centers(em, 0.1, 20);
  REQUIRE(track.k_values.size() == 3);
  REQUIRE(track.peaks[0].size() == 2);
  REQUIRE(track.peaks[2].size() == 1);
  CHECK(track.first_center[0].value() == 50);
  CHECK(track.second_center[0].value() == 350);
  CHECK(track.first_center[2].value() == 120);
  CHECK_FALSE(track.second_center[2].has_value());
  REQUIRE(track.merge_k.has_value());
  CHECK(track.merge_k.value() == doctest::Approx(2.0));
}
