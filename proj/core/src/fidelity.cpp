#include "echolab/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "echolab/parallel.hpp"

namespace echolab {

namespace {

// One kick: v <- M v with the same norm-drift contract as evolve().
void apply_step(const Matrix& m, Vector& v, Vector& tmp, int period) {
  tmp.noalias() = m * v;
  v.swap(tmp);
  const double drift = std::abs(v.norm() - 1.0);
  if (!(drift <= 1e-10)) {
    throw NumericalError("norm drift " + std::to_string(drift) + " at period " +
                         std::to_string(period));
  }
}

void check_probability(double p, int n) {
  if (!(p >= 0.0 && p <= 1.0 + 1e-10)) {
    throw NumericalError("echo probability " + std::to_string(p) + " outside [0,1] at n = " +
                         std::to_string(n));
  }
}

}  // namespace

int EchoMatrix::k_index(double k) const {
  if (!k_values.empty()) {
    const double off = k - k_values.front();
    const long j = std::lround(off);
    if (std::abs(off - j) <= 1e-9 && j >= 0 && j < static_cast<long>(k_values.size())) {
      return static_cast<int>(j);
    }
  }
  throw std::invalid_argument("k = " + std::to_string(k) + " outside the stored k range");
}

EchoCurve fidelity_curve(const SpinBasis& basis, const ModelParams& params, double k,
                         int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  const UnitaryOperator u = build_floquet(basis, params, false);
  const UnitaryOperator u_eps = build_floquet(basis, params, true);

  Vector psi = fock_state(basis, k).amplitudes();
  Vector psi_eps = psi;
  Vector tmp(psi.size());

  EchoCurve curve{basis, params, k, {}};
  curve.samples.reserve(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) {
      apply_step(u.matrix(), psi, tmp, n);
      apply_step(u_eps.matrix(), psi_eps, tmp, n);
    }
    const Complex m = psi_eps.dot(psi);  // <psi_eps|psi>
    const double prob = std::norm(m);
    check_probability(prob, n);
    curve.samples.push_back({n, m, prob});
  }
  return curve;
}

std::map<int, StateVector> echo_column(const SpinBasis& basis, const ModelParams& params,
                                       double k, const std::vector<int>& n_set) {
  for (int n : n_set) {
    if (n < 0) throw std::invalid_argument("echo_column: negative n requested");
  }
  std::vector<int> sorted(n_set);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  const UnitaryOperator u = build_floquet(basis, params, false);
  const Matrix u_eps_adj = build_floquet(basis, params, true).matrix().adjoint();

  std::map<int, StateVector> out;
  Vector psi = fock_state(basis, k).amplitudes();
  Vector tmp(psi.size());
  int n_cur = 0;
  for (int n : sorted) {
    for (; n_cur < n; ++n_cur) apply_step(u.matrix(), psi, tmp, n_cur + 1);
    Vector w = psi;
    for (int b = 0; b < n; ++b) apply_step(u_eps_adj, w, tmp, b + 1);
    out.emplace(n, StateVector(basis, std::move(w), 2e-10));
  }
  return out;
}

EchoMatrix echo_matrix(const SpinBasis& basis, const ModelParams& params, double l,
                       double k_min, double k_max, int n_max, int workers) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  const int row_lo = basis.row_of(k_min);
  const int row_hi = basis.row_of(k_max);
  if (row_lo > row_hi) throw std::invalid_argument("k_min must be <= k_max");
  basis.row_of(l);

  const UnitaryOperator u = build_floquet(basis, params, false);
  const UnitaryOperator u_eps = build_floquet(basis, params, true);
  const int dim = basis.dim();

  // Bra series phi(n) = U_eps^n |l>, shared read-only by all k jobs.
  Matrix phi(dim, n_max + 1);
  {
    Vector cur = fock_state(basis, l).amplitudes();
    Vector tmp(dim);
    phi.col(0) = cur;
    for (int n = 1; n <= n_max; ++n) {
      apply_step(u_eps.matrix(), cur, tmp, n);
      phi.col(n) = cur;
    }
  }

  EchoMatrix em{basis, params, l, {}, RealMatrix(n_max + 1, row_hi - row_lo + 1)};
  em.k_values.reserve(row_hi - row_lo + 1);
  for (int r = row_lo; r <= row_hi; ++r) em.k_values.push_back(basis.fock_index(r));

  const int n_k = static_cast<int>(em.k_values.size());
  parallel_for(n_k, workers, [&](int j) {
    Vector psi = Vector::Zero(dim);
    psi(row_lo + j) = 1.0;
    Vector tmp(dim);
    em.probability(0, j) = std::norm(phi.col(0).dot(psi));
    for (int n = 1; n <= n_max; ++n) {
      apply_step(u.matrix(), psi, tmp, n);
      em.probability(n, j) = std::norm(phi.col(n).dot(psi));  // m_lk(n) = <phi(n)|psi(n)>
    }
  });
  return em;
}

Complex generalized_amplitude(const StateVector& c, const StateVector& column) {
  // Both arguments are unit vectors by construction, so sum |C_l|^2 = 1 is
  // already enforced; this is <C|column> = sum_l C_l^* m_lk(n).
  return inner(c, column);
}

std::vector<double> cumulative_sk(const EchoMatrix& em, int n) {
  const double L = em.basis.spin();
  const int dim = em.basis.dim();
  if (em.k_values.size() != static_cast<size_t>(dim) ||
      std::abs(em.k_values.front() + L) > 1e-9 || std::abs(em.k_values.back() - L) > 1e-9) {
    throw std::invalid_argument("cumulative_sk requires the full k range -L..L");
  }
  if (n < 0 || n > em.n_max()) {
    throw std::invalid_argument("n = " + std::to_string(n) + " outside the stored 0.." +
                                std::to_string(em.n_max()));
  }
  std::vector<double> s(dim);
  double acc = 0.0;
  for (int j = 0; j < dim; ++j) {
    acc += em.probability(n, j);
    s[j] = acc;
  }
  return s;
}

CouplingSweep fidelity_at_time_vs_K(const SpinBasis& basis, const ModelParams& base,
                                    const std::vector<double>& K_values,
                                    const std::vector<double>& k_set, int t_fixed,
                                    int workers) {
  if (t_fixed < 0) throw std::invalid_argument("t_fixed must be >= 0");
  if (K_values.empty() || k_set.empty()) {
    throw std::invalid_argument("empty K grid or k set");
  }
  for (double k : k_set) basis.row_of(k);
  base.validate();

  CouplingSweep sweep{K_values, k_set,
                      RealMatrix(static_cast<int>(K_values.size()),
                                 static_cast<int>(k_set.size()))};
  parallel_for(static_cast<int>(K_values.size()), workers, [&](int j) {
    ModelParams p = base;
    p.K = K_values[j];
    const UnitaryOperator u = build_floquet(basis, p, false);
    const UnitaryOperator u_eps = build_floquet(basis, p, true);
    Vector tmp(basis.dim());
    for (size_t i = 0; i < k_set.size(); ++i) {
      Vector psi = fock_state(basis, k_set[i]).amplitudes();
      Vector psi_eps = psi;
      for (int n = 1; n <= t_fixed; ++n) {
        apply_step(u.matrix(), psi, tmp, n);
        apply_step(u_eps.matrix(), psi_eps, tmp, n);
      }
      const double prob = std::norm(psi_eps.dot(psi));
      check_probability(prob, t_fixed);
      sweep.probability(j, static_cast<int>(i)) = prob;
    }
  });
  return sweep;
}

IdentityCheck observable_difference_check(const SpinBasis& basis, const ModelParams& params,
                                          const HermitianOperator& a, double k, int n) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (!(a.basis() == basis)) throw std::invalid_argument("observable basis differs");
  const int r = basis.row_of(k);
  const int dim = basis.dim();

  // Dense matrix powers; intended for small bases (the identity is exact at
  // any size, the check cost grows as n * dim^3).
  const Matrix u = build_floquet(basis, params, false).matrix();
  const Matrix u_eps = build_floquet(basis, params, true).matrix();
  Matrix f = Matrix::Identity(dim, dim);
  Matrix g = Matrix::Identity(dim, dim);
  Matrix tmp(dim, dim);
  for (int step = 0; step < n; ++step) {
    tmp.noalias() = u * f;
    f.swap(tmp);
    tmp.noalias() = u_eps * g;
    g.swap(tmp);
  }

  const Matrix a0t = f.adjoint() * a.matrix() * f;        // Heisenberg A under U
  const Matrix aht = g.adjoint() * a.matrix() * g;        // ... under U_eps
  const Complex lhs_c = aht(r, r) - a0t(r, r);
  // Echo row m_kl(n) = (G^dag F)(r, l). Completeness gives exactly
  //   lhs = sum_{l,l'} m_kl m_kl'^* A_ll'  -  A_kk
  // i.e. the (k,k)-excluded sum plus a (M_kk - 1) A_kk correction; the bare
  // excluded sum only approximates lhs in the M_kk -> 1 limit.
  const Eigen::RowVectorXcd m_row = g.col(r).adjoint() * f;
  const Complex full = m_row * a0t * m_row.adjoint();
  const Complex rhs_c = full - a0t(r, r);
  if (std::abs(lhs_c.imag()) >= 1e-10 || std::abs(rhs_c.imag()) >= 1e-10) {
    throw NumericalError("identity sides acquired imaginary parts");
  }
  return IdentityCheck{lhs_c.real(), rhs_c.real(), std::abs(lhs_c.real() - rhs_c.real())};
}

HermitianOperator random_hermitian(const SpinBasis& basis, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    // (0, 1]: 53-bit mantissa, avoids log(0) below.
    return 1.0 - (rng() >> 11) * 0x1.0p-53;
  };
  auto gauss_pair = [&](double& x, double& y) {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * M_PI * uniform();
    x = r * std::cos(t);
    y = r * std::sin(t);
  };
  const int dim = basis.dim();
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double x, y;
      gauss_pair(x, y);
      g(i, j) = Complex(x, y) * M_SQRT1_2;
    }
  }
  Matrix a = 0.5 * (g + g.adjoint());
  // Symmetrize exactly so the Hermiticity gate cannot trip on rounding.
  for (int i = 0; i < dim; ++i) {
    a(i, i) = Complex(a(i, i).real(), 0.0);
    for (int j = i + 1; j < dim; ++j) a(j, i) = std::conj(a(i, j));
  }
  return HermitianOperator(basis, std::move(a));
}

}  // namespace echolab
