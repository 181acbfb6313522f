#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include "dqe/core/error.hpp"

namespace dqe {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

inline ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

// Index convention: (a ⊗ b)[dim_b*i_a + i_b, dim_b*j_a + j_b] = a[i_a, j_a] * b[i_b, j_b]
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw ModelError("kron: both factors must be square");
  const Eigen::Index na = a.rows(), nb = b.rows();
  ComplexMatrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
  return out;
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

inline double unitarity_defect(const ComplexMatrix& u) {
  return max_abs(u.adjoint() * u - identity(u.rows()));
}

// The absolute bound is scaled by the largest entry so that lab-frame matrices
// with carrier-sized diagonals are judged on the same relative footing.
inline void require_hermitian(const ComplexMatrix& m, std::string_view what, double tol = 1e-12) {
  if (m.rows() != m.cols()) throw ModelError(std::string(what) + ": matrix is not square");
  const double defect = hermiticity_defect(m);
  if (defect > tol * std::max(1.0, max_abs(m)))
    throw ModelError(std::string(what) + ": matrix is not Hermitian, max|M - M^dagger| = " +
                     std::to_string(defect));
}

// Returns exp(-i h t) for Hermitian h.
inline ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const ComplexVector phases =
      (es.eigenvalues().cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace dqe
