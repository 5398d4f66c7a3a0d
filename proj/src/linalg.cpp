#include "robscatter/linalg.hpp"

#include <string>

#include "robscatter/errors.hpp"

namespace robscatter {

double hermitian_defect(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw ValidationError("expected a square matrix, got " + std::to_string(m.rows()) + "x"
                              + std::to_string(m.cols()));
    }
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_hermitian(const Matrix& m, double tol, const char* what) {
    const double defect = hermitian_defect(m);
    if (!(defect <= tol)) {
        throw ValidationError(std::string(what) + ": matrix is not Hermitian (defect "
                              + std::to_string(defect) + ")");
    }
}

Vector hermitian_eigenvalues(const Matrix& m) {
    if (m.size() == 0) return Vector();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Hermitian eigensolver failed");
    }
    return solver.eigenvalues();
}

double spectral_norm(const Matrix& m) {
    require_hermitian(m, 1e-8, "spectral_norm");
    if (m.size() == 0) return 0.0;
    const Vector ev = hermitian_eigenvalues(m);
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace robscatter
