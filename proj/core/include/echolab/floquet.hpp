#pragma once

#include "echolab/spin_space.hpp"

namespace echolab {

// Parameters of the kicked two-mode model. The rescaled interaction g_c and
// the dimensionless perturbation sigma are stored; the microscopic values
// g = g_c / L and epsilon = sigma / L are derived per basis, never cached.
struct ModelParams {
  double mu = 1.0;     // linear Lz coefficient
  double g_c = 0.0;    // rescaled interaction, g = g_c / L
  double K = 0.0;      // kick strength
  double T = 1.0;      // kick period
  double sigma = 0.0;  // perturbation strength in units of hbar_eff; epsilon = sigma / L

  // All fields finite, T > 0, sigma >= 0; throws ConfigError naming the field.
  void validate() const;

  double interaction_g(const SpinBasis& basis) const { return g_c / basis.spin(); }
  double epsilon(const SpinBasis& basis) const { return sigma / basis.spin(); }
};

// One-period propagator U = D * X with X = exp(-i K' Lx), K' = K (+ epsilon
// when perturbed), and D diagonal with entries exp(-i (mu*l + g*l^2) T).
// The kick factor X acts on the state first.
UnitaryOperator build_floquet(const SpinBasis& basis, const ModelParams& params,
                              bool perturbed);

// n_periods successive applications of U; time is the integer kick count.
StateVector evolve(const UnitaryOperator& u, const StateVector& s, int n_periods);

}  // namespace echolab
