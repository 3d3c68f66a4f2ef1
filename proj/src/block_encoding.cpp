#include "subdist/block_encoding.hpp"

#include <algorithm>
#include <cmath>

#include "subdist/registers.hpp"

namespace subdist {

namespace {

Matrix permute_rows(const Matrix& m, const std::vector<int>& new_of_old) {
    Matrix out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i) {
        const cx* src = &m.a[static_cast<std::size_t>(i) * m.cols];
        cx* dst = &out.a[static_cast<std::size_t>(new_of_old[i]) * m.cols];
        std::copy(src, src + m.cols, dst);
    }
    return out;
}

Matrix conjugate_by_permutation(const Matrix& m, const std::vector<int>& new_of_old) {
    Matrix out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out(new_of_old[i], new_of_old[j]) = m(i, j);
    return out;
}

int max_row_nonzeros(const Matrix& m) {
    int s = 0;
    for (int i = 0; i < m.rows; ++i) {
        int c = 0;
        for (int j = 0; j < m.cols; ++j)
            if (m(i, j) != cx{}) ++c;
        s = std::max(s, c);
    }
    return s;
}

Matrix embed_matrix_to_dim(const Matrix& m, int dim) {
    const int n = m.rows, k = m.cols;
    require_input(dim >= n + k, "hermitian embed: dimension too small");
    Matrix e(dim, dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) {
            e(i, n + j) = m(i, j);
            e(n + j, i) = m(i, j);
        }
    return e;
}

void check_symmetric_block(const BlockEncoding& be, const char* who) {
    Matrix blk = extract_block(be);
    require_input(is_symmetric(blk, 1e-8 * std::max(1.0, max_abs(blk))),
                  std::string(who) + ": encoded block not symmetric");
}

} // namespace

Matrix extract_block(const BlockEncoding& be) {
    Matrix blk(be.system_dim, be.system_dim);
    for (int i = 0; i < be.system_dim; ++i)
        for (int j = 0; j < be.system_dim; ++j) blk(i, j) = be.unitary(i, j);
    return blk;
}

int hermitian_embed_dim(int n, int k) { return next_pow2(n + k); }

Matrix hermitian_embed(const Matrix& m) {
    require_input(all_finite(m), "hermitian_embed: non-finite entry");
    return embed_matrix_to_dim(m, hermitian_embed_dim(m.rows, m.cols));
}

BlockEncoding column_application_unitary(const Matrix& m) {
    require_input(all_finite(m), "column_application_unitary: non-finite entry");
    require_input(m.square() && is_real(m), "column_application_unitary: real square input required");
    require_input(is_symmetric(m, 1e-9 * std::max(1.0, max_abs(m))),
                  "column_application_unitary: symmetric input required (embed first)");
    const int d = m.rows;
    const int s = max_row_nonzeros(m);
    double alpha = std::max(static_cast<double>(s), spectral_norm(m) * (1.0 + 1e-9));
    if (alpha == 0.0) alpha = 1.0; // zero matrix: any subnormalization encodes it
    Matrix b = scale(m, 1.0 / alpha);
    // Top half of the constrained columns carries B, bottom half the
    // orthogonality filler sqrt(I - B^2); B symmetric makes them commute.
    Matrix b2 = mul(b, b);
    Matrix gap = sub(Matrix::identity(d), b2);
    Matrix c = sqrt_psd(gap);

    Matrix u(2 * d, 2 * d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            u(i, j) = b(i, j);
            u(d + i, j) = c(i, j);
        }
    complete_orthonormal_basis(u, d);
    require_internal(is_unitary(u, 1e-9), "column_application_unitary: completion not unitary");
    return BlockEncoding{std::move(u), alpha, d, 2 * d};
}

BlockEncoding gram_square_encoding(const BlockEncoding& be) {
    const int d = be.system_dim;
    const int anc = be.ancilla_dim();
    const Dims dims{anc, 4, d}; // ancilla, two flag qubits, system
    const int full = total_dim(dims);

    Matrix ub = embed_op(dims, be.unitary, {0, 2});

    // Flag preparation: X on the last flag bit everywhere, then the
    // second flag bit marks branches whose ancilla left zero.
    std::vector<int> f1(full), cn(full);
    const int block = 4 * d;
    for (int g = 0; g < full; ++g) {
        const int a = g / block;
        const int f = (g % block) / d;
        const int s = g % d;
        const int ff = (a == 0) ? (f ^ 1) : (f ^ 3);
        f1[g] = a * block + ff * d + s;
        const int fc = (f & 2) ? (f ^ 1) : f;
        cn[g] = a * block + fc * d + s;
    }
    Matrix uk1 = permute_rows(ub, f1);
    Matrix uk2 = permute_rows(uk1, cn);
    Matrix w = mul(adjoint(uk2), uk1);
    return BlockEncoding{std::move(w), be.alpha * be.alpha, d, full};
}

BlockEncoding gram_block_encoding(const Matrix& m, const Matrix& n) {
    require_input(m.rows == n.rows && m.cols == n.cols, "gram_block_encoding: shape mismatch");
    require_input(is_orthonormal_columns(m) && is_orthonormal_columns(n),
                  "gram_block_encoding: columns not orthonormal");
    const int nn = m.rows, k = m.cols;
    const int k_pad = next_pow2(k);
    // Embedding wide enough that the k-block plus its padding stays inside.
    const int d = next_pow2(nn + k_pad);

    BlockEncoding be_n = column_application_unitary(embed_matrix_to_dim(n, d));
    BlockEncoding be_m = column_application_unitary(embed_matrix_to_dim(m, d));

    const Dims dims{2, 2, d};
    Matrix u1 = embed_op(dims, be_n.unitary, {0, 2});
    Matrix u2 = embed_op(dims, be_m.unitary, {1, 2});
    BlockEncoding prod{mul(u2, u1), be_m.alpha * be_n.alpha, d, 4 * d};

    BlockEncoding sq = gram_square_encoding(prod);

    // Move the M^T N block (system rows nn..nn+k_pad-1) to the front so the
    // Eq.-3 extraction contract reads it at ancilla zero.
    std::vector<int> sys_perm(d);
    {
        std::vector<int> new_of_old(d, -1);
        for (int j = 0; j < k_pad; ++j) new_of_old[nn + j] = j;
        int next = k_pad;
        for (int o = 0; o < d; ++o)
            if (new_of_old[o] < 0) new_of_old[o] = next++;
        sys_perm = std::move(new_of_old);
    }
    const int anc_total = sq.total_dim / d;
    std::vector<int> full_perm(sq.total_dim);
    for (int g = 0; g < sq.total_dim; ++g) {
        const int a = g / d, s = g % d;
        full_perm[g] = a * d + sys_perm[s];
    }
    Matrix w = conjugate_by_permutation(sq.unitary, full_perm);
    (void)anc_total;
    return BlockEncoding{std::move(w), sq.alpha, k_pad, sq.total_dim};
}

namespace {

/// Hermitianized reflection pair for qubitization: V is a Hermitian unitary
/// block-encoding the same matrix with one extra qubit; R reflects about the
/// ancilla-zero subspace. The walk is W = V * R.
Matrix qubitized_hermitian_unitary(const BlockEncoding& be) {
    const int t = be.total_dim;
    Matrix ud = adjoint(be.unitary);
    Matrix v(2 * t, 2 * t);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) {
            const cx a = 0.5 * (be.unitary(i, j) + ud(i, j));
            const cx bdiff = 0.5 * (ud(i, j) - be.unitary(i, j));
            v(i, j) = a;
            v(i, t + j) = bdiff;
            v(t + i, j) = -bdiff;
            v(t + i, t + j) = -a;
        }
    return v;
}

void reflect_columns(Matrix& w, int system_dim) {
    // multiply on the right by R = diag(+1 on global index < system_dim, -1 else)
    for (int i = 0; i < w.rows; ++i)
        for (int j = system_dim; j < w.cols; ++j) w(i, j) = -w(i, j);
}

} // namespace

BlockEncoding chebyshev_block(const BlockEncoding& be, int d) {
    require_input(d >= 0, "chebyshev_block: degree must be nonnegative");
    check_symmetric_block(be, "chebyshev_block");
    const int t2 = 2 * be.total_dim;
    if (d == 0) return BlockEncoding{Matrix::identity(t2), 1.0, be.system_dim, t2};
    Matrix w = qubitized_hermitian_unitary(be);
    reflect_columns(w, be.system_dim);
    Matrix acc = w;
    for (int i = 1; i < d; ++i) acc = mul(acc, w);
    return BlockEncoding{std::move(acc), 1.0, be.system_dim, t2};
}

std::vector<Matrix> chebyshev_block_sequence(const BlockEncoding& be, int dmax) {
    require_input(dmax >= 0, "chebyshev_block_sequence: degree must be nonnegative");
    const int sys = be.system_dim;
    const int t2 = 2 * be.total_dim;
    Matrix w = qubitized_hermitian_unitary(be);
    reflect_columns(w, sys);

    Matrix slab(t2, sys);
    for (int j = 0; j < sys; ++j) slab(j, j) = 1.0;
    std::vector<Matrix> blocks;
    blocks.reserve(dmax + 1);
    auto top_block = [&](const Matrix& s) {
        Matrix b(sys, sys);
        for (int i = 0; i < sys; ++i)
            for (int j = 0; j < sys; ++j) b(i, j) = s(i, j);
        return b;
    };
    blocks.push_back(top_block(slab));
    for (int k = 1; k <= dmax; ++k) {
        slab = mul(w, slab);
        blocks.push_back(top_block(slab));
    }
    return blocks;
}

int jacobi_anger_degree(double z, double eps) {
    require_input(eps > 0 && eps < 1, "jacobi_anger_degree: eps must be in (0,1)");
    const double az = std::abs(z);
    if (az < 1e-14) return 0;
    const int kmax = static_cast<int>(std::ceil(1.5 * az)) + 96;
    std::vector<double> j = bessel_j_sequence(az, kmax);
    // Rigorous geometric tail beyond kmax via |J_k| <= (z/2)^k / k!.
    double log_t = (kmax + 1) * std::log(az / 2.0) - std::lgamma(kmax + 2.0);
    double tail = log_t < -700 ? 0.0 : std::exp(log_t) * 2.0;
    double acc = tail;
    int d = kmax;
    while (d > 0 && 2.0 * (acc + std::abs(j[d])) <= eps / 2.0) {
        acc += std::abs(j[d]);
        --d;
    }
    return d;
}

std::vector<cx> jacobi_anger_coefficients(double z, int degree) {
    std::vector<cx> c(degree + 1);
    const double az = std::abs(z);
    std::vector<double> j = bessel_j_sequence(az, degree);
    const double sgn = z < 0 ? -1.0 : 1.0; // J_k(-z) = (-1)^k J_k(z)
    static const cx mi_pow[4] = {cx(1, 0), cx(0, -1), cx(-1, 0), cx(0, 1)};
    for (int k = 0; k <= degree; ++k) {
        double jk = j[k] * (sgn < 0 && (k & 1) ? -1.0 : 1.0);
        c[k] = (k == 0 ? cx(1, 0) : cx(2, 0)) * mi_pow[k & 3] * jk;
    }
    return c;
}

Matrix evolution_operator(const BlockEncoding& be, double t, double eps, EvolutionMode mode) {
    require_input(eps > 0 && eps < 1, "evolution_operator: eps must be in (0,1)");
    check_symmetric_block(be, "evolution_operator");
    if (mode == EvolutionMode::exact) {
        Matrix a = scale(extract_block(be), be.alpha);
        for (int i = 0; i < a.rows; ++i)
            for (int j = i + 1; j < a.cols; ++j) {
                cx v = 0.5 * (a(i, j) + a(j, i));
                a(i, j) = v;
                a(j, i) = v;
            }
        return matrix_exp_unitary(a, t);
    }
    const double z = be.alpha * t;
    const int d = jacobi_anger_degree(z, eps);
    std::vector<cx> coef = jacobi_anger_coefficients(z, d);
    std::vector<Matrix> blocks = chebyshev_block_sequence(be, d);
    Matrix out(be.system_dim, be.system_dim);
    for (int k = 0; k <= d; ++k) {
        const cx c = coef[k];
        for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += c * blocks[k].a[i];
    }
    return out;
}

BlockEncoding inverse_block_encoding(const Matrix& m, double kappa) {
    require_input(kappa >= 1.0, "inverse_block_encoding: kappa must be >= 1");
    require_input(m.square() && is_real(m) && is_symmetric(m, 1e-10 * std::max(1.0, max_abs(m))),
                  "inverse_block_encoding: symmetric input required");
    auto eig = sym_eig(m);
    const int d = m.rows;
    require_pre(eig.eigvals.front() >= (1.0 / kappa) * (1.0 - 1e-9) &&
                    eig.eigvals.back() <= 1.0 + 1e-9,
                "inverse_block_encoding: spectrum outside [1/kappa, 1]");
    // B = M^{-1}/kappa and sqrt(I - B^2) share M's eigenbasis.
    Matrix b(d, d), c(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double sb = 0, sc = 0;
            for (int p = 0; p < d; ++p) {
                const double inv = 1.0 / (kappa * eig.eigvals[p]);
                const double fill = std::sqrt(std::max(0.0, 1.0 - inv * inv));
                const double uij = eig.eigvecs(i, p).real() * eig.eigvecs(j, p).real();
                sb += uij * inv;
                sc += uij * fill;
            }
            b(i, j) = sb;
            c(i, j) = sc;
        }
    Matrix u(2 * d, 2 * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            u(i, j) = b(i, j);
            u(i, d + j) = c(i, j);
            u(d + i, j) = c(i, j);
            u(d + i, d + j) = -b(i, j);
        }
    require_internal(is_unitary(u, 1e-8), "inverse_block_encoding: dilation not unitary");
    return BlockEncoding{std::move(u), kappa, d, 2 * d};
}

BlockEncoding ellipsoid_gram_encoding(const Matrix& m, const Matrix& n, double kappa_m) {
    require_input(m.square() && n.square() && m.rows == n.rows,
                  "ellipsoid_gram_encoding: shape mismatch");
    require_input(is_spd(n), "ellipsoid_gram_encoding: n must be SPD");
    BlockEncoding be_inv = inverse_block_encoding(m, kappa_m); // checks m's spectrum
    BlockEncoding be_n = column_application_unitary(n);
    const int d = m.rows;
    const Dims dims{2, 2, d};
    Matrix u1 = embed_op(dims, be_n.unitary, {0, 2});
    Matrix u2 = embed_op(dims, be_inv.unitary, {1, 2});
    BlockEncoding prod{mul(u2, u1), kappa_m * be_n.alpha, d, 4 * d};
    return gram_square_encoding(prod);
}

} // namespace subdist
