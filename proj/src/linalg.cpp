#include "subdist/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "subdist/rng.hpp"

namespace subdist {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diag(const std::vector<double>& d) {
    Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

Matrix mul(const Matrix& x, const Matrix& y) {
    require_input(x.cols == y.rows, "mul: inner dimensions differ");
    Matrix z(x.rows, y.cols);
    const int n = x.rows, k = x.cols, m = y.cols;
    for (int i = 0; i < n; ++i) {
        cx* zi = &z.a[static_cast<std::size_t>(i) * m];
        for (int p = 0; p < k; ++p) {
            const cx xip = x(i, p);
            if (xip == cx{}) continue;
            const cx* yp = &y.a[static_cast<std::size_t>(p) * m];
            for (int j = 0; j < m; ++j) zi[j] += xip * yp[j];
        }
    }
    return z;
}

Matrix add(const Matrix& x, const Matrix& y) {
    require_input(x.rows == y.rows && x.cols == y.cols, "add: shape mismatch");
    Matrix z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
    return z;
}

Matrix sub(const Matrix& x, const Matrix& y) {
    require_input(x.rows == y.rows && x.cols == y.cols, "sub: shape mismatch");
    Matrix z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] -= y.a[i];
    return z;
}

Matrix scale(const Matrix& x, cx s) {
    Matrix z = x;
    for (auto& v : z.a) v *= s;
    return z;
}

Matrix transpose(const Matrix& x) {
    Matrix z(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z(j, i) = x(i, j);
    return z;
}

Matrix adjoint(const Matrix& x) {
    Matrix z(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z(j, i) = std::conj(x(i, j));
    return z;
}

std::vector<cx> mul_vec(const Matrix& x, const std::vector<cx>& v) {
    require_input(x.cols == static_cast<int>(v.size()), "mul_vec: dimension mismatch");
    std::vector<cx> out(x.rows);
    for (int i = 0; i < x.rows; ++i) {
        cx s = 0;
        for (int j = 0; j < x.cols; ++j) s += x(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

double max_abs(const Matrix& x) {
    double m = 0;
    for (const auto& v : x.a) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const Matrix& x, const Matrix& y) {
    require_input(x.rows == y.rows && x.cols == y.cols, "max_abs_diff: shape mismatch");
    double m = 0;
    for (std::size_t i = 0; i < x.a.size(); ++i) m = std::max(m, std::abs(x.a[i] - y.a[i]));
    return m;
}

double frobenius_norm(const Matrix& x) {
    double s = 0;
    for (const auto& v : x.a) s += std::norm(v);
    return std::sqrt(s);
}

bool all_finite(const Matrix& x) {
    for (const auto& v : x.a)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

bool is_real(const Matrix& x, double tol) {
    for (const auto& v : x.a)
        if (std::abs(v.imag()) > tol) return false;
    return true;
}

bool is_symmetric(const Matrix& x, double tol) {
    if (!x.square()) return false;
    for (int i = 0; i < x.rows; ++i)
        for (int j = i + 1; j < x.cols; ++j)
            if (std::abs(x(i, j) - x(j, i)) > tol) return false;
    return true;
}

bool is_hermitian(const Matrix& x, double tol) {
    if (!x.square()) return false;
    for (int i = 0; i < x.rows; ++i)
        for (int j = i; j < x.cols; ++j)
            if (std::abs(x(i, j) - std::conj(x(j, i))) > tol) return false;
    return true;
}

bool is_unitary(const Matrix& x, double tol) {
    if (!x.square()) return false;
    return max_abs_diff(mul(adjoint(x), x), Matrix::identity(x.rows)) <= tol;
}

bool is_orthonormal_columns(const Matrix& x, double tol) {
    return max_abs_diff(mul(adjoint(x), x), Matrix::identity(x.cols)) <= tol;
}

bool is_spd(const Matrix& x, double sym_tol) {
    if (!x.square() || !is_real(x) || !is_symmetric(x, sym_tol)) return false;
    auto eig = sym_eig(x);
    return eig.eigvals.front() > 0;
}

int next_pow2(int n) {
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

// ---------------------------------------------------------------------------
// One-sided Jacobi SVD (real input).

SvdResult jacobi_svd(const Matrix& m) {
    require_input(all_finite(m), "jacobi_svd: non-finite entry");
    require_input(is_real(m), "jacobi_svd: complex input not supported");
    require_input(m.rows >= m.cols && m.cols >= 1, "jacobi_svd: requires rows >= cols >= 1");

    const int rows = m.rows, cols = m.cols;
    // Work on real column-major copies of A's columns; V accumulates rotations.
    std::vector<std::vector<double>> col(cols, std::vector<double>(rows));
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) col[j][i] = m(i, j).real();
    std::vector<std::vector<double>> v(cols, std::vector<double>(cols, 0.0));
    for (int j = 0; j < cols; ++j) v[j][j] = 1.0;

    double fro_sq = 0;
    for (const auto& c : col)
        for (double x : c) fro_sq += x * x;
    const double thresh = 1e-14 * std::max(fro_sq, 1e-300);

    const int max_sweeps = 64;
    bool converged = (cols == 1);
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < cols - 1; ++p) {
            for (int q = p + 1; q < cols; ++q) {
                double alpha = 0, beta = 0, gamma = 0;
                for (int i = 0; i < rows; ++i) {
                    alpha += col[p][i] * col[p][i];
                    beta += col[q][i] * col[q][i];
                    gamma += col[p][i] * col[q][i];
                }
                if (std::abs(gamma) <= thresh) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < rows; ++i) {
                    const double xp = col[p][i], xq = col[q][i];
                    col[p][i] = c * xp - s * xq;
                    col[q][i] = s * xp + c * xq;
                }
                for (int i = 0; i < cols; ++i) {
                    const double vp = v[p][i], vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
        }
        converged = !rotated;
    }
    require_internal(converged, "jacobi_svd: did not converge");

    std::vector<double> sig(cols);
    for (int j = 0; j < cols; ++j) {
        double s = 0;
        for (int i = 0; i < rows; ++i) s += col[j][i] * col[j][i];
        sig[j] = std::sqrt(s);
    }
    std::vector<int> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return sig[x] > sig[y]; });

    SvdResult r;
    r.left = Matrix(rows, cols);
    r.right = Matrix(cols, cols);
    r.singulars.resize(cols);
    const double zero_tol = 1e-290;
    int nonzero = 0;
    for (int jj = 0; jj < cols; ++jj) {
        const int j = order[jj];
        r.singulars[jj] = sig[j];
        for (int i = 0; i < cols; ++i) r.right(i, jj) = v[j][i];
        if (sig[j] > zero_tol) {
            ++nonzero;
            for (int i = 0; i < rows; ++i) r.left(i, jj) = col[j][i] / sig[j];
        }
    }
    if (nonzero < cols) {
        // Null singular directions: fill the left factor by deterministic
        // completion so columns stay orthonormal.
        Matrix u(rows, rows);
        for (int j = 0; j < nonzero; ++j)
            for (int i = 0; i < rows; ++i) u(i, j) = r.left(i, j);
        complete_orthonormal_basis(u, nonzero);
        for (int j = nonzero; j < cols; ++j)
            for (int i = 0; i < rows; ++i) r.left(i, j) = u(i, j);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi eigensolver (real symmetric).

EigResult sym_eig(const Matrix& m) {
    require_input(all_finite(m), "sym_eig: non-finite entry");
    require_input(m.square(), "sym_eig: square input required");
    require_input(is_real(m), "sym_eig: real symmetric input required");
    require_input(is_symmetric(m, 1e-10 * std::max(1.0, max_abs(m))), "sym_eig: input not symmetric");

    const int n = m.rows;
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = 0.5 * (m(i, j).real() + m(j, i).real());
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) v[i][i] = 1.0;

    double off = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) off += 2 * a[i][j] * a[i][j];
    double norm_sq = off;
    for (int i = 0; i < n; ++i) norm_sq += a[i][i] * a[i][i];
    const double stop = 1e-30 * std::max(norm_sq, 1e-300);

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps && off > stop; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[p][q];
                if (apq == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < n; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const double apj = a[p][j], aqj = a[q][j];
                    a[p][j] = c * apj - s * aqj;
                    a[q][j] = s * apj + c * aqj;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v[i][p], viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
        off = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += 2 * a[i][j] * a[i][j];
    }
    require_internal(off <= stop, "sym_eig: did not converge");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a[x][x] < a[y][y]; });

    EigResult r;
    r.eigvals.resize(n);
    r.eigvecs = Matrix(n, n);
    for (int jj = 0; jj < n; ++jj) {
        const int j = order[jj];
        r.eigvals[jj] = a[j][j];
        for (int i = 0; i < n; ++i) r.eigvecs(i, jj) = v[i][j];
    }
    return r;
}

std::vector<double> herm_eig_values(const Matrix& m) {
    require_input(m.square(), "herm_eig_values: square input required");
    require_input(is_hermitian(m, 1e-9 * std::max(1.0, max_abs(m))), "herm_eig_values: input not Hermitian");
    const int n = m.rows;
    Matrix e(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = 0.5 * (m(i, j).real() + m(j, i).real());
            const double y = 0.5 * (m(i, j).imag() - m(j, i).imag());
            e(i, j) = x;
            e(n + i, n + j) = x;
            e(i, n + j) = -y;
            e(n + i, j) = y;
        }
    }
    auto eig = sym_eig(e);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = eig.eigvals[2 * i]; // pairs collapse
    return out;
}

Matrix matrix_exp_unitary(const Matrix& h, double t) {
    require_input(h.square() && is_real(h), "matrix_exp_unitary: real symmetric input required");
    require_input(is_symmetric(h, 1e-10 * std::max(1.0, max_abs(h))),
                  "matrix_exp_unitary: input not symmetric");
    auto eig = sym_eig(h);
    const int n = h.rows;
    Matrix out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cx s = 0;
            for (int p = 0; p < n; ++p) {
                const double phase = -eig.eigvals[p] * t;
                s += eig.eigvecs(i, p) * cx(std::cos(phase), std::sin(phase)) * eig.eigvecs(j, p);
            }
            out(i, j) = s;
        }
    }
    return out;
}

double condition_number(const Matrix& m) {
    require_input(all_finite(m), "condition_number: non-finite entry");
    require_input(max_abs(m) > 0, "condition_number: zero matrix");
    const Matrix work = m.rows >= m.cols ? m : transpose(m);
    auto svd = jacobi_svd(work);
    const double smax = svd.singulars.front();
    const double smin = svd.singulars.back();
    if (smin < 1e-14 * smax) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

VarahBound varah_bound(const Matrix& m) {
    require_input(m.square(), "varah_bound: square input required");
    VarahBound b;
    b.alpha = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m.rows; ++i) {
        double off = 0;
        for (int j = 0; j < m.cols; ++j)
            if (j != i) off += std::abs(m(i, j));
        b.alpha = std::min(b.alpha, std::abs(m(i, i)) - off);
    }
    b.dominant = b.alpha > 0;
    return b;
}

double spectral_norm(const Matrix& m) {
    const Matrix work = m.rows >= m.cols ? m : transpose(m);
    if (max_abs(work) == 0) return 0.0;
    return jacobi_svd(work).singulars.front();
}

Matrix random_gaussian(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = rng.gaussian();
    return g;
}

Matrix random_orthonormal(int n, int k, std::uint64_t seed) {
    require_input(1 <= k && k <= n, "random_orthonormal: need 1 <= k <= n");
    Matrix g = random_gaussian(n, k, seed);
    // Modified Gram-Schmidt with a positive-diagonal convention.
    for (int j = 0; j < k; ++j) {
        for (int p = 0; p < j; ++p) {
            cx dot = 0;
            for (int i = 0; i < n; ++i) dot += std::conj(g(i, p)) * g(i, j);
            for (int i = 0; i < n; ++i) g(i, j) -= dot * g(i, p);
        }
        double nrm = 0;
        for (int i = 0; i < n; ++i) nrm += std::norm(g(i, j));
        nrm = std::sqrt(nrm);
        require_internal(nrm > 1e-12, "random_orthonormal: degenerate draw");
        double sign = g(j, j).real() >= 0 ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) g(i, j) *= sign / nrm;
    }
    return g;
}

Matrix random_spd(int n, double kappa, std::uint64_t seed) {
    require_input(n >= 1, "random_spd: need n >= 1");
    require_input(kappa > 1.0, "random_spd: need kappa > 1");
    Rng rng(seed ^ 0x5bd1e995u);
    std::vector<double> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = rng.uniform(1.0 / kappa, 1.0);
    std::sort(eigs.begin(), eigs.end());
    eigs.front() = 1.0 / kappa;
    eigs.back() = 1.0;
    Matrix q = random_orthonormal(n, n, seed);
    Matrix d = Matrix::diag(eigs);
    Matrix s = mul(mul(q, d), transpose(q));
    // Exact symmetrization removes the last-bit asymmetry of the product.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            cx v = 0.5 * (s(i, j) + s(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    return s;
}

Matrix sqrt_psd(const Matrix& m, double clamp_tol) {
    auto eig = sym_eig(m);
    require_internal(eig.eigvals.front() > -clamp_tol, "sqrt_psd: matrix not PSD");
    const int n = m.rows;
    Matrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int p = 0; p < n; ++p) {
                const double lam = std::max(0.0, eig.eigvals[p]);
                s += eig.eigvecs(i, p).real() * std::sqrt(lam) * eig.eigvecs(j, p).real();
            }
            out(i, j) = s;
        }
    return out;
}

std::vector<double> bessel_j_sequence(double x, int kmax) {
    require_input(x >= 0, "bessel_j_sequence: nonnegative argument required");
    std::vector<double> j(kmax + 1, 0.0);
    if (x < 1e-12) {
        j[0] = 1.0;
        if (kmax >= 1) j[1] = x / 2.0;
        return j;
    }
    const int start = ((std::max(kmax, static_cast<int>(std::ceil(x))) +
                        static_cast<int>(std::ceil(2.0 * std::sqrt(40.0 * (kmax + x + 2.0)))) + 16) |
                       1) +
                      1; // even start order
    double fp1 = 0.0, f = 1e-30;
    double norm = 0.0;
    for (int k = start; k >= 1; --k) {
        double fm1 = (2.0 * k / x) * f - fp1;
        fp1 = f;
        f = fm1;
        if (k - 1 <= kmax) j[k - 1] = f;
        if (((k - 1) & 1) == 0) norm += (k - 1 == 0 ? 1.0 : 2.0) * f;
        if (std::abs(f) > 1e250) {
            const double s = 1e-250;
            f *= s;
            fp1 *= s;
            norm *= s;
            for (auto& v : j) v *= s;
        }
    }
    require_internal(norm != 0.0, "bessel_j_sequence: normalization failed");
    for (auto& v : j) v /= norm;
    return j;
}

void complete_orthonormal_basis(Matrix& u, int have) {
    const int n = u.rows;
    require_input(u.cols == n, "complete_orthonormal_basis: square workspace required");
    int filled = have;
    for (int cand = 0; cand < n && filled < n; ++cand) {
        std::vector<cx> v(n, cx{});
        v[cand] = 1.0;
        for (int pass = 0; pass < 2; ++pass) { // re-orthogonalize once for stability
            for (int p = 0; p < filled; ++p) {
                cx dot = 0;
                for (int i = 0; i < n; ++i) dot += std::conj(u(i, p)) * v[i];
                for (int i = 0; i < n; ++i) v[i] -= dot * u(i, p);
            }
        }
        double nrm = 0;
        for (int i = 0; i < n; ++i) nrm += std::norm(v[i]);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) continue; // candidate inside current span
        for (int i = 0; i < n; ++i) u(i, filled) = v[i] / nrm;
        ++filled;
    }
    require_internal(filled == n, "complete_orthonormal_basis: completion failed");
}

} // namespace subdist
