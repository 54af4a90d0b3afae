#pragma once

#include "echolab/common.hpp"

namespace echolab {

// Symmetric subspace of N two-level atoms: a single collective spin L = N/2.
// Basis states |l>, l = -L, -L+1, ..., L in unit steps; row index i = l + L.
// Parameterized by the atom number N so that half-integer L stays exact
// (all index arithmetic uses 2L = N internally).
class SpinBasis {
 public:
  explicit SpinBasis(int n_atoms);

  int n_atoms() const { return n_atoms_; }
  int dim() const { return n_atoms_ + 1; }
  double spin() const { return 0.5 * n_atoms_; }  // L
  double hbar_eff() const { return 2.0 / n_atoms_; }

  // Row index of Fock label l; rejects l off the {-L..L} unit ladder.
  int row_of(double l) const;
  // Fock label of row i (i = 0..N).
  double fock_index(int row) const;

  friend bool operator==(const SpinBasis&, const SpinBasis&) = default;

 private:
  int n_atoms_;
};

// Normalized state in the Fock basis of a SpinBasis.
class StateVector {
 public:
  // Validates sum |amplitudes|^2 = 1 within norm_tol on the norm itself.
  StateVector(const SpinBasis& basis, Vector amplitudes,
              double norm_tol = 1e-12);

  const SpinBasis& basis() const { return basis_; }
  const Vector& amplitudes() const { return amp_; }
  Complex amplitude(int row) const { return amp_(row); }

 private:
  SpinBasis basis_;
  Vector amp_;
};

class HermitianOperator {
 public:
  // Validates ||A - A^dag||_max <= 1e-12.
  HermitianOperator(const SpinBasis& basis, Matrix m);

  const SpinBasis& basis() const { return basis_; }
  const Matrix& matrix() const { return m_; }

 private:
  SpinBasis basis_;
  Matrix m_;
};

class UnitaryOperator {
 public:
  // Validates ||U^dag U - I||_max < 1e-12.
  static UnitaryOperator from_matrix(const SpinBasis& basis, Matrix u);

  const SpinBasis& basis() const { return basis_; }
  const Matrix& matrix() const { return u_; }
  UnitaryOperator adjoint() const;

  // U|s>; norm drift beyond 1e-10 signals a broken unitary -> NumericalError.
  StateVector apply(const StateVector& s) const;

 private:
  UnitaryOperator(const SpinBasis& basis, Matrix u) : basis_(basis), u_(std::move(u)) {}
  SpinBasis basis_;
  Matrix u_;
};

SpinBasis make_basis(int n_atoms);

// Collective angular-momentum operators, <l+1|Lx|l> = (1/2) sqrt((L-l)(L+l+1)) etc.
HermitianOperator op_lx(const SpinBasis& basis);
HermitianOperator op_ly(const SpinBasis& basis);
HermitianOperator op_lz(const SpinBasis& basis);

// |l>: unit amplitude at row l + L.
StateVector fock_state(const SpinBasis& basis, double l);

// exp(-i * angle * H) via Hermitian eigendecomposition (real-symmetric fast
// path when H has no imaginary part); eigenvector columns are renormalized so
// the result is unitary to machine precision.
UnitaryOperator unitary_from_generator(const HermitianOperator& h, double angle);

// <a|b> (conjugation on the first argument).
Complex inner(const StateVector& a, const StateVector& b);

// <s|A|s>; imaginary part must vanish within 1e-10 and is discarded.
double expectation(const HermitianOperator& a, const StateVector& s);

}  // namespace echolab
