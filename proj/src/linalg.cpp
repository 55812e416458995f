#include "geotrack/linalg.hpp"

#include <algorithm>

namespace geotrack {

Matrix4 symmetrized(const Matrix4& m) { return 0.5 * (m + m.transpose()); }

Matrix4 nearest_psd(const Matrix4& m) {
    const Matrix4 sym = symmetrized(m);
    Eigen::SelfAdjointEigenSolver<Matrix4> eig(sym);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() >= 0.0) {
        return sym;
    }
    const Vector4 clipped = eig.eigenvalues().cwiseMax(0.0);
    const Matrix4 psd = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    return symmetrized(psd);
}

double min_eigenvalue(const Matrix4& m) {
    Eigen::SelfAdjointEigenSolver<Matrix4> eig(symmetrized(m), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

double asymmetry(const Matrix4& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace geotrack
