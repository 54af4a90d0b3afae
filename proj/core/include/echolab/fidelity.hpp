#pragma once

#include <map>
#include <optional>
#include <vector>

#include "echolab/floquet.hpp"

namespace echolab {

struct EchoSample {
  int n;               // kick count
  Complex amplitude;   // m(n)
  double probability;  // M(n) = |m(n)|^2
};

// Standard echo M(n) = |<k| (U_eps^dag)^n U^n |k>|^2 for one initial Fock state.
struct EchoCurve {
  SpinBasis basis;
  ModelParams params;
  double k;
  std::vector<EchoSample> samples;  // n = 0..n_max
};

// Generalized echo probabilities M_lk(n) at fixed final index l over a k range.
struct EchoMatrix {
  SpinBasis basis;
  ModelParams params;
  double l;
  std::vector<double> k_values;  // ascending, unit steps
  // probability(n, j) = M_{l,k_values[j]}(n), n = 0..n_max.
  RealMatrix probability;

  int n_max() const { return static_cast<int>(probability.rows()) - 1; }
  int k_index(double k) const;  // column for Fock label k; rejects off-range
};

// Two co-evolving states psi(n) = U^n|k>, psi_eps(n) = U_eps^n|k>;
// m(n) = <psi_eps(n)|psi(n)>. Cost O(n_max dim^2).
EchoCurve fidelity_curve(const SpinBasis& basis, const ModelParams& params,
                         double k, int n_max);

// (U_eps^dag)^n U^n |k> for each requested n: the column of the echo operator
// whose Fock components are m_lk(n) for all l at once. Forward evolution under
// U with checkpoints, then n backward applications of U_eps^dag per checkpoint.
std::map<int, StateVector> echo_column(const SpinBasis& basis,
                                       const ModelParams& params, double k,
                                       const std::vector<int>& n_set);

// M_lk(n) for fixed l, k in [k_min, k_max] (unit steps), n = 0..n_max.
// Precomputes the bra series (U_eps^n)|l> once, then forms inner products
// against U^n|k> per k; k jobs run on `workers` threads.
EchoMatrix echo_matrix(const SpinBasis& basis, const ModelParams& params,
                       double l, double k_min, double k_max, int n_max,
                       int workers = 1);

// f(n) = sum_l C_l^* m_lk(n) = <C|column>, for an imperfectly prepared initial
// state |Psi0> = sum_l C_l |l>; `column` is echo_column output at time n.
Complex generalized_amplitude(const StateVector& c, const StateVector& column);

// Prefix sums S_k = sum_{k' <= k} M_lk'(n) at fixed (l, n); requires the full
// k range -L..L, rejects partial ranges.
std::vector<double> cumulative_sk(const EchoMatrix& em, int n);

// M(t_fixed) on a K grid for several initial Fock states; K jobs sharded
// across workers (shard size 1).
struct CouplingSweep {
  std::vector<double> K_values;
  std::vector<double> k_set;
  RealMatrix probability;  // (K index, k index)
};
CouplingSweep fidelity_at_time_vs_K(const SpinBasis& basis, const ModelParams& base,
                                    const std::vector<double>& K_values,
                                    const std::vector<double>& k_set, int t_fixed,
                                    int workers = 1);

// Both expectation-value sides of the echo identity
//   A_kk^H(n) - A_kk^H0(n) = sum_{l,l'} m_kl(n) m_kl'(n)^* A_ll'^H0(n) - A_kk^H0(n),
// evaluated through two independent contraction routes (direct Heisenberg
// diagonals on the left, echo-amplitude double sum on the right).
struct IdentityCheck {
  double lhs;
  double rhs;
  double abs_diff;
};
IdentityCheck observable_difference_check(const SpinBasis& basis,
                                          const ModelParams& params,
                                          const HermitianOperator& a, double k,
                                          int n);

// (G + G^dag)/2 with G a seeded standard complex Gaussian matrix; the Gaussian
// draw is hand-rolled (Box-Muller over mt19937_64) so results are identical
// across standard libraries.
HermitianOperator random_hermitian(const SpinBasis& basis, uint64_t seed);

}  // namespace echolab
