#pragma once

#include <vector>

#include "subdist/linalg.hpp"

namespace subdist {

/// Principal angles between two subspaces with cos(theta_i) = sigma_i, where
/// sigma_i are the singular values of M^T N for orthonormal bases M, N.
struct PrincipalAngles {
    std::vector<double> thetas; // ascending, in [0, pi/2]
    std::vector<double> sigmas; // descending, in [0, 1]
};

PrincipalAngles principal_angles(const Matrix& m, const Matrix& n);

/// Geodesic distance sqrt(sum theta_i^2) on the Grassmannian.
double grassmann_distance(const Matrix& m, const Matrix& n);

/// Affine-invariant distance sqrt(sum log^2 lambda_i(M^-1 N)) on the SPD cone,
/// computed through the symmetric similarity M^{-1/2} N M^{-1/2}.
double ellipsoid_distance(const Matrix& m, const Matrix& n);

/// theta_k: the angle of the smallest singular value.
double asimov_distance(const Matrix& m, const Matrix& n);
/// sin(theta_k).
double projection_distance(const Matrix& m, const Matrix& n);
/// sqrt(k - sum sigma_i^2).
double chordal_distance(const Matrix& m, const Matrix& n);

/// Eigenvalues of M^{-1/2} N M^{-1/2} (ascending) — the spectrum of M^-1 N.
std::vector<double> spd_relative_eigenvalues(const Matrix& m, const Matrix& n);

/// Orthonormal n x k pair whose principal cosines are exactly the given
/// sigmas (requires n >= 2k), wrapped in random basis rotations. Instance
/// generator for runs that need a prescribed spectrum.
std::pair<Matrix, Matrix> subspace_pair_with_sigmas(int n, int k, const std::vector<double>& sigmas,
                                                    std::uint64_t seed);

} // namespace subdist
