#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "subdist/errors.hpp"

namespace subdist {

using cx = std::complex<double>;

/// Dense row-major matrix over complex scalars. Real-valued data is carried
/// with imaginary parts exactly zero; one scalar kind everywhere avoids dual
/// code paths between the classical and register-machine layers.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<cx> a; // row-major, rows*cols entries

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    static Matrix zero(int r, int c) { return Matrix(r, c); }
    static Matrix identity(int n);
    /// Real diagonal matrix.
    static Matrix diag(const std::vector<double>& d);

    cx& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const cx& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    int dim() const { return rows; } // for square use
    bool square() const { return rows == cols; }
};

Matrix mul(const Matrix& x, const Matrix& y);
Matrix add(const Matrix& x, const Matrix& y);
Matrix sub(const Matrix& x, const Matrix& y);
Matrix scale(const Matrix& x, cx s);
Matrix transpose(const Matrix& x);
Matrix adjoint(const Matrix& x);
std::vector<cx> mul_vec(const Matrix& x, const std::vector<cx>& v);

double max_abs(const Matrix& x);
double max_abs_diff(const Matrix& x, const Matrix& y);
double frobenius_norm(const Matrix& x);
bool all_finite(const Matrix& x);
bool is_real(const Matrix& x, double tol = 1e-13);
bool is_symmetric(const Matrix& x, double tol);
bool is_hermitian(const Matrix& x, double tol);
bool is_unitary(const Matrix& x, double tol);
/// Columns are orthonormal: max |A^T A - I| <= tol.
bool is_orthonormal_columns(const Matrix& x, double tol = 1e-10);
bool is_spd(const Matrix& x, double sym_tol = 1e-12);

/// A = left * diag(singulars) * right^T, singulars descending and nonnegative,
/// left/right with orthonormal columns.
struct SvdResult {
    Matrix left;
    std::vector<double> singulars;
    Matrix right;
};

/// One-sided cyclic Jacobi SVD. Deterministic for a fixed input (fixed sweep
/// order); requires rows >= cols and real data.
SvdResult jacobi_svd(const Matrix& m);

struct EigResult {
    std::vector<double> eigvals; // ascending
    Matrix eigvecs;              // columns are eigenvectors
};

/// Cyclic two-sided Jacobi eigensolver for real symmetric matrices.
EigResult sym_eig(const Matrix& m);

/// Eigenvalues (ascending) of a complex Hermitian matrix, computed through
/// the real symmetric embedding [[X, -Y], [Y, X]].
std::vector<double> herm_eig_values(const Matrix& m);

/// exp(-i h t) for real symmetric h, via spectral decomposition.
Matrix matrix_exp_unitary(const Matrix& h, double t);

/// sigma_max / sigma_min; +infinity sentinel when sigma_min < 1e-14 * sigma_max.
double condition_number(const Matrix& m);

struct VarahBound {
    double alpha = 0.0;
    bool dominant = false;
};

/// Row-dominance margin: alpha = min_k(|a_kk| - sum_{j!=k} |a_kj|).
VarahBound varah_bound(const Matrix& m);

double spectral_norm(const Matrix& m);

Matrix random_orthonormal(int n, int k, std::uint64_t seed);
/// Symmetric positive definite with eigenvalues in [1/kappa, 1]; the extreme
/// eigenvalues are pinned to the interval endpoints.
Matrix random_spd(int n, double kappa, std::uint64_t seed);
Matrix random_gaussian(int rows, int cols, std::uint64_t seed);

/// Symmetric PSD square root via sym_eig; eigenvalues below -clamp_tol raise
/// an internal error, small negatives are clamped to zero.
Matrix sqrt_psd(const Matrix& m, double clamp_tol = 1e-9);

/// Extends the given orthonormal columns (stored in the leading `have`
/// columns of a rows x rows matrix) to a full orthonormal basis by
/// deterministic modified Gram-Schmidt against the standard basis.
void complete_orthonormal_basis(Matrix& u, int have);

int next_pow2(int n);

/// Bessel functions J_0(x)..J_kmax(x) for x >= 0 by Miller's downward
/// recurrence with the J_0 + 2*sum J_2k = 1 normalization.
std::vector<double> bessel_j_sequence(double x, int kmax);

} // namespace subdist
