#include "subdist/distances.hpp"

#include <algorithm>
#include <cmath>

namespace subdist {

namespace {

// Floating error may push sigma marginally outside [0, 1]; past this slack it
// is an input problem, not roundoff.
constexpr double kClampSlack = 1e-9;

double clamp_sigma(double s) {
    require_input(s >= -kClampSlack && s <= 1.0 + kClampSlack,
                  "principal_angles: singular value outside [0,1] beyond clamp slack");
    return std::min(1.0, std::max(0.0, s));
}

void check_subspace_pair(const Matrix& m, const Matrix& n) {
    require_input(m.rows == n.rows && m.cols == n.cols, "subspace pair: shape mismatch");
    require_input(m.cols >= 1 && m.rows >= m.cols, "subspace pair: need n x k with k <= n");
    require_input(is_orthonormal_columns(m) && is_orthonormal_columns(n),
                  "subspace pair: columns not orthonormal");
}

} // namespace

PrincipalAngles principal_angles(const Matrix& m, const Matrix& n) {
    check_subspace_pair(m, n);
    Matrix g = mul(transpose(m), n); // k x k
    auto svd = jacobi_svd(g);
    PrincipalAngles pa;
    pa.sigmas.reserve(svd.singulars.size());
    pa.thetas.reserve(svd.singulars.size());
    for (double s : svd.singulars) pa.sigmas.push_back(clamp_sigma(s));
    for (double s : pa.sigmas) pa.thetas.push_back(std::acos(s));
    return pa; // sigma descending => theta ascending
}

double grassmann_distance(const Matrix& m, const Matrix& n) {
    auto pa = principal_angles(m, n);
    double s = 0;
    for (double t : pa.thetas) s += t * t;
    return std::sqrt(s);
}

std::vector<double> spd_relative_eigenvalues(const Matrix& m, const Matrix& n) {
    require_input(m.square() && n.square() && m.rows == n.rows, "spd pair: shape mismatch");
    require_input(is_spd(m) && is_spd(n), "spd pair: inputs must be symmetric positive definite");
    auto em = sym_eig(m);
    const int d = m.rows;
    Matrix inv_sqrt(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0;
            for (int p = 0; p < d; ++p)
                s += em.eigvecs(i, p).real() / std::sqrt(em.eigvals[p]) * em.eigvecs(j, p).real();
            inv_sqrt(i, j) = s;
        }
    Matrix sim = mul(mul(inv_sqrt, n), inv_sqrt);
    // Roundoff symmetrization before the symmetric eigensolver.
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            cx v = 0.5 * (sim(i, j) + sim(j, i));
            sim(i, j) = v;
            sim(j, i) = v;
        }
    return sym_eig(sim).eigvals;
}

double ellipsoid_distance(const Matrix& m, const Matrix& n) {
    auto eigs = spd_relative_eigenvalues(m, n);
    double s = 0;
    for (double lam : eigs) {
        require_internal(lam > 0, "ellipsoid_distance: nonpositive relative eigenvalue");
        const double l = std::log(lam);
        s += l * l;
    }
    return std::sqrt(s);
}

double asimov_distance(const Matrix& m, const Matrix& n) {
    return principal_angles(m, n).thetas.back();
}

double projection_distance(const Matrix& m, const Matrix& n) {
    return std::sin(principal_angles(m, n).thetas.back());
}

double chordal_distance(const Matrix& m, const Matrix& n) {
    auto pa = principal_angles(m, n);
    double s = 0;
    for (double sig : pa.sigmas) s += sig * sig;
    const double k = static_cast<double>(pa.sigmas.size());
    return std::sqrt(std::max(0.0, k - s));
}

std::pair<Matrix, Matrix> subspace_pair_with_sigmas(int n, int k,
                                                    const std::vector<double>& sigmas,
                                                    std::uint64_t seed) {
    require_input(static_cast<int>(sigmas.size()) == k, "subspace pair: need k sigmas");
    require_input(n >= 2 * k, "subspace pair: need n >= 2k for prescribed angles");
    for (double s : sigmas) require_input(s >= 0.0 && s <= 1.0, "subspace pair: sigma outside [0,1]");
    Matrix basis = random_orthonormal(n, 2 * k, seed);
    Matrix m(n, k), nn(n, k);
    for (int j = 0; j < k; ++j) {
        const double c = sigmas[j];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int i = 0; i < n; ++i) {
            m(i, j) = basis(i, j);
            nn(i, j) = c * basis(i, j) + s * basis(i, k + j);
        }
    }
    Matrix qm = random_orthonormal(k, k, seed ^ 0x1234567ull);
    Matrix qn = random_orthonormal(k, k, seed ^ 0x7654321ull);
    return {mul(m, qm), mul(nn, qn)};
}

} // namespace subdist
