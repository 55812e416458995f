#pragma once

#include <Eigen/Dense>

namespace geotrack {

using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;

/// (M + M^T) / 2
Matrix4 symmetrized(const Matrix4& m);

/// Nearest positive-semidefinite matrix in the Frobenius sense: symmetrize,
/// then clip negative eigenvalues to zero. Returns the input (symmetrized)
/// untouched when it is already PSD.
Matrix4 nearest_psd(const Matrix4& m);

/// Smallest eigenvalue of the symmetric part.
double min_eigenvalue(const Matrix4& m);

/// Largest |M - M^T| entry.
double asymmetry(const Matrix4& m);

}  // namespace geotrack
