#include "echolab/floquet.hpp"

#include <cmath>

namespace echolab {

void ModelParams::validate() const {
  auto check_finite = [](double v, const char* name) {
    if (!std::isfinite(v)) {
      throw ConfigError(std::string(name) + " must be finite");
    }
  };
  check_finite(mu, "mu");
  check_finite(g_c, "g_c");
  check_finite(K, "K");
  check_finite(T, "T");
  check_finite(sigma, "sigma");
  if (!(T > 0.0)) throw ConfigError("T must be > 0");
  if (sigma < 0.0) throw ConfigError("sigma must be >= 0");
}

UnitaryOperator build_floquet(const SpinBasis& basis, const ModelParams& params,
                              bool perturbed) {
  params.validate();
  const double kick = params.K + (perturbed ? params.epsilon(basis) : 0.0);
  const UnitaryOperator x = unitary_from_generator(op_lx(basis), kick);
  const double g = params.interaction_g(basis);

  // D is diagonal: evaluate exp(-i (mu*l + g*l^2) T) directly, no generic
  // exponential needed.
  const int dim = basis.dim();
  Vector d(dim);
  for (int i = 0; i < dim; ++i) {
    const double l = basis.fock_index(i);
    d(i) = std::exp(Complex(0.0, -(params.mu * l + g * l * l) * params.T));
  }
  Matrix u = d.asDiagonal() * x.matrix();
  return UnitaryOperator::from_matrix(basis, std::move(u));
}

StateVector evolve(const UnitaryOperator& u, const StateVector& s, int n_periods) {
  if (n_periods < 0) throw std::invalid_argument("n_periods must be >= 0");
  if (!(s.basis() == u.basis())) {
    throw std::invalid_argument("state and propagator bases differ");
  }
  Vector cur = s.amplitudes();
  Vector tmp(cur.size());
  for (int step = 0; step < n_periods; ++step) {
    tmp.noalias() = u.matrix() * cur;
    cur.swap(tmp);
    const double drift = std::abs(cur.norm() - 1.0);
    if (!(drift <= 1e-10)) {
      throw NumericalError("norm drift " + std::to_string(drift) + " at period " +
                           std::to_string(step + 1));
    }
  }
  return StateVector(s.basis(), std::move(cur), 2e-10);
}

}  // namespace echolab
