#pragma once

// Dense complex linear algebra for the small (d <= 16) Hilbert spaces used
// throughout the library. Storage is Eigen's dynamic complex matrix; this
// header adds the quantum-specific predicates and constructions on top.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cqed {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using Operator = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr Index kMaxDim = 16;

/// Comparison tolerances shared by the whole library.
namespace tol {
inline constexpr double kAnalytic = 1e-9;  // closed-form identities
inline constexpr double kEigen = 1e-6;     // quantities passing through eigensolvers
inline constexpr double kUnitary = 1e-10;
inline constexpr double kRankCutoff = 1e-10;  // relative to the largest eigenvalue
}  // namespace tol

/// Raised when an argument violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computed quantity breaks a numeric contract
/// (e.g. a probability well below zero from a broken effect).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

inline Operator identity(Index dim) { return Operator::Identity(dim, dim); }

inline StateVector basis_state(Index dim, Index k) {
  if (k < 0 || k >= dim) throw DomainError("basis_state: index out of range");
  StateVector v = StateVector::Zero(dim);
  v(k) = 1.0;
  return v;
}

/// Kronecker product; the left operand owns the most significant index, so
/// basis_state(2,0) (x) basis_state(2,1) is |01> = [0,1,0,0]^T.
inline Operator tensor(const Operator& a, const Operator& b) {
  if (a.rows() * b.rows() > kMaxDim || a.cols() * b.cols() > kMaxDim)
    throw DomainError("tensor: result dimension exceeds 16");
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  if (a.size() * b.size() > kMaxDim) throw DomainError("tensor: result dimension exceeds 16");
  StateVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline Operator dagger(const Operator& a) { return a.adjoint(); }

inline Operator projector(const StateVector& v) { return v * v.adjoint(); }

/// <a|b>
inline Complex inner(const StateVector& a, const StateVector& b) { return a.dot(b); }

inline double max_abs(const Operator& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline bool is_normalized(const StateVector& v, double eps = tol::kAnalytic) {
  return std::abs(v.squaredNorm() - 1.0) <= eps;
}

inline bool is_hermitian(const Operator& a, double tolerance = tol::kUnitary) {
  return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tolerance;
}

inline bool is_unitary(const Operator& u, double tolerance = tol::kUnitary) {
  return u.rows() == u.cols() && max_abs(u.adjoint() * u - identity(u.rows())) <= tolerance;
}

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  Operator vectors;        // columns are eigenvectors
};

inline HermitianEigen eigh(const Operator& h, double tolerance = tol::kUnitary) {
  if (!is_hermitian(h, tolerance)) throw DomainError("eigh: operator is not Hermitian");
  require_finite(h, "eigh");
  // Symmetrise so that roundoff in the input does not leak into the solver.
  const Operator sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericError("eigh: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline double min_eigenvalue(const Operator& h) { return eigh(h).values.minCoeff(); }

inline bool is_positive(const Operator& h, double tolerance = tol::kUnitary) {
  return is_hermitian(h, tolerance) && min_eigenvalue(h) >= -tolerance;
}

/// True iff a = e^{i lambda} b within `tolerance` (max-norm). The phase is
/// read off the largest-magnitude entry of b.
inline bool equal_up_to_global_phase(const Operator& a, const Operator& b,
                                     double tolerance = tol::kAnalytic) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DomainError("equal_up_to_global_phase: dimension mismatch");
  Index r = 0, c = 0;
  const double ref = b.cwiseAbs().maxCoeff(&r, &c);
  if (ref <= tolerance) throw DomainError("equal_up_to_global_phase: reference matrix is zero");
  if (std::abs(a(r, c)) <= tolerance) return false;
  const Complex phase = a(r, c) / b(r, c);
  return max_abs(a - (phase / std::abs(phase)) * b) <= tolerance;
}

/// Deviation after removing the best global phase read from the
/// largest-magnitude entry of b. Used for reporting.
inline double global_phase_deviation(const Operator& a, const Operator& b) {
  Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  Complex phase = a(r, c) / b(r, c);
  if (std::abs(phase) == 0.0) return max_abs(a - b);
  phase /= std::abs(phase);
  return max_abs(a - phase * b);
}

/// Pseudo-inverse square root restricted to the support of a positive
/// semidefinite operator: eigenvalues above 1e-10 * lambda_max map to
/// lambda^{-1/2}, the rest to zero.
inline Operator inv_sqrt_on_support(const Operator& h) {
  const HermitianEigen e = eigh(h);
  const double lmax = e.values.cwiseAbs().maxCoeff();
  if (e.values.minCoeff() < -tol::kRankCutoff * std::max(lmax, 1.0))
    throw DomainError("inv_sqrt_on_support: operator is not positive semidefinite");
  const double cutoff = tol::kRankCutoff * lmax;
  Eigen::VectorXd d(e.values.size());
  for (Index i = 0; i < d.size(); ++i)
    d(i) = e.values(i) > cutoff ? 1.0 / std::sqrt(e.values(i)) : 0.0;
  return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

/// |<a|b>|^2
inline double fidelity(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw DomainError("fidelity: dimension mismatch");
  return std::clamp(std::norm(inner(a, b)), 0.0, 1.0);
}

}  // namespace cqed
