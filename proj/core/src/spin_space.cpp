#include "echolab/spin_space.hpp"

#include <cmath>
#include <sstream>

namespace echolab {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

SpinBasis::SpinBasis(int n_atoms) : n_atoms_(n_atoms) {
  if (n_atoms < 1) {
    throw ConfigError("n_atoms must be >= 1, got " + std::to_string(n_atoms));
  }
}

int SpinBasis::row_of(double l) const {
  const double r = l + spin();
  const double nearest = std::llround(r);
  if (std::abs(r - nearest) > 1e-9 || nearest < 0 || nearest > n_atoms_) {
    throw std::invalid_argument("Fock index " + fmt(l) + " not on the ladder -L..L for N=" +
                                std::to_string(n_atoms_));
  }
  return static_cast<int>(nearest);
}

double SpinBasis::fock_index(int row) const {
  if (row < 0 || row > n_atoms_) {
    throw std::invalid_argument("row " + std::to_string(row) + " outside 0.." +
                                std::to_string(n_atoms_));
  }
  return row - spin();
}

StateVector::StateVector(const SpinBasis& basis, Vector amplitudes, double norm_tol)
    : basis_(basis), amp_(std::move(amplitudes)) {
  if (amp_.size() != basis_.dim()) {
    throw std::invalid_argument("amplitude length " + std::to_string(amp_.size()) +
                                " != basis dim " + std::to_string(basis_.dim()));
  }
  const double err = std::abs(amp_.norm() - 1.0);
  if (!(err <= norm_tol)) {
    throw std::invalid_argument("state norm deviates from 1 by " + fmt(err));
  }
}

HermitianOperator::HermitianOperator(const SpinBasis& basis, Matrix m)
    : basis_(basis), m_(std::move(m)) {
  if (m_.rows() != basis_.dim() || m_.cols() != basis_.dim()) {
    throw std::invalid_argument("operator shape does not match basis dim " +
                                std::to_string(basis_.dim()));
  }
  const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-12)) {
    throw std::invalid_argument("matrix not Hermitian: ||A - A^dag||_max = " + fmt(asym));
  }
}

UnitaryOperator UnitaryOperator::from_matrix(const SpinBasis& basis, Matrix u) {
  if (u.rows() != basis.dim() || u.cols() != basis.dim()) {
    throw std::invalid_argument("operator shape does not match basis dim " +
                                std::to_string(basis.dim()));
  }
  const double dev =
      (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (!(dev < 1e-12)) {
    throw NumericalError("matrix not unitary: ||U^dag U - I||_max = " + fmt(dev));
  }
  return UnitaryOperator(basis, std::move(u));
}

UnitaryOperator UnitaryOperator::adjoint() const {
  return UnitaryOperator(basis_, u_.adjoint());
}

StateVector UnitaryOperator::apply(const StateVector& s) const {
  if (!(s.basis() == basis_)) {
    throw std::invalid_argument("state and operator bases differ");
  }
  Vector out = u_ * s.amplitudes();
  const double drift = std::abs(out.norm() - 1.0);
  if (!(drift <= 1e-10)) {
    throw NumericalError("norm drift " + fmt(drift) + " after unitary application");
  }
  return StateVector(s.basis(), std::move(out), 2e-10);
}

SpinBasis make_basis(int n_atoms) { return SpinBasis(n_atoms); }

HermitianOperator op_lz(const SpinBasis& basis) {
  const int dim = basis.dim();
  Matrix m = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) m(i, i) = basis.fock_index(i);
  return HermitianOperator(basis, std::move(m));
}

namespace {

// <l+1| L+ |l> = sqrt(L(L+1) - l(l+1)) = sqrt((L-l)(L+l+1)); exact in terms
// of 2L = N to keep half-integer labels clean.
double ladder_up(const SpinBasis& basis, int row) {
  const double n = basis.n_atoms();
  const double i = row;  // l = i - L, so L - l = N - i and L + l + 1 = i + 1
  return std::sqrt((n - i) * (i + 1.0));
}

}  // namespace

HermitianOperator op_lx(const SpinBasis& basis) {
  const int dim = basis.dim();
  Matrix m = Matrix::Zero(dim, dim);
  for (int i = 0; i + 1 < dim; ++i) {
    const double c = 0.5 * ladder_up(basis, i);
    m(i + 1, i) = c;
    m(i, i + 1) = c;
  }
  return HermitianOperator(basis, std::move(m));
}

HermitianOperator op_ly(const SpinBasis& basis) {
  const int dim = basis.dim();
  Matrix m = Matrix::Zero(dim, dim);
  const Complex half_i(0.0, 0.5);
  for (int i = 0; i + 1 < dim; ++i) {
    const double c = ladder_up(basis, i);
    m(i + 1, i) = -half_i * c;       // Ly = (L+ - L-) / (2i) = -i(L+ - L-)/2
    m(i, i + 1) = half_i * c;
  }
  return HermitianOperator(basis, std::move(m));
}

StateVector fock_state(const SpinBasis& basis, double l) {
  Vector v = Vector::Zero(basis.dim());
  v(basis.row_of(l)) = 1.0;
  return StateVector(basis, std::move(v));
}

UnitaryOperator unitary_from_generator(const HermitianOperator& h, double angle) {
  const Matrix& m = h.matrix();
  const int dim = static_cast<int>(m.rows());
  const Complex mi(0.0, -1.0);
  Matrix u;
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(m.real());
    if (es.info() != Eigen::Success) {
      throw NumericalError("eigendecomposition failed for real-symmetric generator, dim = " +
                           std::to_string(dim));
    }
    RealMatrix v = es.eigenvectors();
    for (int j = 0; j < dim; ++j) v.col(j).normalize();
    Vector phases = (mi * angle * es.eigenvalues().cast<Complex>().array()).exp();
    u.noalias() = (v.cast<Complex>() * phases.asDiagonal()) * v.transpose().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success) {
      throw NumericalError("eigendecomposition failed for Hermitian generator, dim = " +
                           std::to_string(dim));
    }
    Matrix v = es.eigenvectors();
    for (int j = 0; j < dim; ++j) v.col(j).normalize();
    Vector phases = (mi * angle * es.eigenvalues().cast<Complex>().array()).exp();
    u.noalias() = (v * phases.asDiagonal()) * v.adjoint();
  }
  return UnitaryOperator::from_matrix(h.basis(), std::move(u));
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (!(a.basis() == b.basis())) {
    throw std::invalid_argument("inner(): bases differ");
  }
  return a.amplitudes().dot(b.amplitudes());
}

double expectation(const HermitianOperator& a, const StateVector& s) {
  if (!(a.basis() == s.basis())) {
    throw std::invalid_argument("expectation(): bases differ");
  }
  const Complex val = s.amplitudes().dot(a.matrix() * s.amplitudes());
  if (std::abs(val.imag()) >= 1e-10) {
    throw NumericalError("expectation value has imaginary part " + fmt(val.imag()));
  }
  return val.real();
}

}  // namespace echolab
