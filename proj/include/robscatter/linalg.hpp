#pragma once

#include <complex>

#include <Eigen/Dense>

namespace robscatter {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Vector = Eigen::VectorXd;

/// max_{ij} |M_ij - conj(M_ji)|; throws ValidationError if M is not square.
double hermitian_defect(const Matrix& m);

/// Throws ValidationError when M is not square or its Hermitian defect exceeds `tol`.
void require_hermitian(const Matrix& m, double tol, const char* what);

/// Eigenvalues of a Hermitian matrix in ascending order.
Vector hermitian_eigenvalues(const Matrix& m);

/// Largest absolute eigenvalue of a Hermitian matrix (its spectral norm).
/// Inputs whose Hermitian defect exceeds 1e-8 are rejected.
double spectral_norm(const Matrix& m);

/// (M + M*) / 2
Matrix hermitian_part(const Matrix& m);

}  // namespace robscatter
