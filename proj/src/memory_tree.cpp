#include "subdist/memory_tree.hpp"

#include <algorithm>
#include <cmath>

#include "subdist/registers.hpp"

namespace subdist {

namespace {

// Householder-style completion: unitary with first column v (unit norm).
Matrix unitary_with_first_column(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    Matrix u(n, n);
    for (int i = 0; i < n; ++i) u(i, 0) = v[i];
    complete_orthonormal_basis(u, 1);
    return u;
}

std::vector<double> column_of(const Matrix& a, int j) {
    std::vector<double> c(a.rows);
    for (int i = 0; i < a.rows; ++i) c[i] = a(i, j).real();
    return c;
}

} // namespace

MemoryTree build_tree(const Matrix& a) {
    require_input(all_finite(a), "build_tree: non-finite entry");
    require_input(is_real(a), "build_tree: real input required");
    MemoryTree t;
    t.orig_rows = a.rows;
    t.orig_cols = a.cols;
    t.rows = next_pow2(a.rows);
    t.cols = next_pow2(a.cols);
    t.leaves.assign(t.rows, std::vector<double>(t.cols, 0.0));
    t.nodes.assign(t.rows, std::vector<double>(2 * t.cols, 0.0));
    t.row_norms.assign(t.rows, 0.0);
    t.degenerate_rows.assign(t.rows, 0);
    double fro_sq = 0.0;
    for (int i = 0; i < t.rows; ++i) {
        auto& heap = t.nodes[i];
        for (int j = 0; j < t.cols; ++j) {
            const double v = (i < a.rows && j < a.cols) ? a(i, j).real() : 0.0;
            t.leaves[i][j] = v;
            heap[t.cols + j] = v * v;
        }
        for (int p = t.cols - 1; p >= 1; --p) heap[p] = heap[2 * p] + heap[2 * p + 1];
        t.row_norms[i] = std::sqrt(heap[1]);
        t.degenerate_rows[i] = heap[1] == 0.0;
        fro_sq += heap[1];
    }
    t.frobenius = std::sqrt(fro_sq);
    t.degenerate = fro_sq == 0.0;
    return t;
}

Matrix tree_matrix(const MemoryTree& t) {
    Matrix a(t.rows, t.cols);
    for (int i = 0; i < t.rows; ++i)
        for (int j = 0; j < t.cols; ++j) a(i, j) = t.leaves[i][j];
    return a;
}

Matrix row_prep_unitary(const MemoryTree& t) {
    require_input(t.frobenius > 0, "row_prep_unitary: degenerate (zero) tree");
    const int r = t.rows, c = t.cols;
    Matrix u(r * c, r * c);
    for (int i = 0; i < r; ++i) {
        Matrix vi;
        if (t.degenerate_rows[i]) {
            vi = Matrix::identity(c);
        } else {
            std::vector<double> amps(c);
            for (int j = 0; j < c; ++j) amps[j] = t.leaves[i][j] / t.row_norms[i];
            vi = unitary_with_first_column(amps);
        }
        for (int p = 0; p < c; ++p)
            for (int q = 0; q < c; ++q) u(i * c + p, i * c + q) = vi(p, q);
    }
    return u;
}

Matrix norm_prep_unitary(const MemoryTree& t) {
    require_input(t.frobenius > 0, "norm_prep_unitary: degenerate (zero) tree");
    std::vector<double> h(t.rows);
    for (int i = 0; i < t.rows; ++i) h[i] = t.row_norms[i] / t.frobenius;
    return kron(unitary_with_first_column(h), Matrix::identity(t.cols));
}

std::pair<Matrix, Matrix> frobenius_prep_pair(const MemoryTree& t) {
    require_input(t.frobenius > 0, "frobenius_prep_pair: degenerate (zero) tree");
    const int d = std::max(t.rows, t.cols);
    Matrix a_sq(d, d);
    for (int i = 0; i < t.rows; ++i)
        for (int j = 0; j < t.cols; ++j) a_sq(i, j) = t.leaves[i][j];

    // Column-amplitude prep: |k>|0> -> |k> (x) col_k / ||col_k||.
    Matrix um(d * d, d * d);
    std::vector<double> col_norms(d, 0.0);
    for (int k = 0; k < d; ++k) {
        std::vector<double> ck = column_of(a_sq, k);
        double nrm = 0;
        for (double x : ck) nrm += x * x;
        nrm = std::sqrt(nrm);
        col_norms[k] = nrm;
        Matrix vk;
        if (nrm == 0.0) {
            vk = Matrix::identity(d);
        } else {
            for (auto& x : ck) x /= nrm;
            vk = unitary_with_first_column(ck);
        }
        for (int p = 0; p < d; ++p)
            for (int q = 0; q < d; ++q) um(k * d + p, k * d + q) = vk(p, q);
    }
    // Column-norm prep: |0>|j> -> (col norms / ||A||_F) (x) |j>.
    std::vector<double> g(d);
    for (int k = 0; k < d; ++k) g[k] = col_norms[k] / t.frobenius;
    Matrix un = kron(unitary_with_first_column(g), Matrix::identity(d));
    return {std::move(um), std::move(un)};
}

BlockEncoding memory_block_encoding(const MemoryTree& t) {
    require_input(t.frobenius > 0, "memory_block_encoding: degenerate (zero) tree");
    const int d = std::max(t.rows, t.cols);
    auto [um, un] = frobenius_prep_pair(t);
    Matrix sw = swap_registers({d, d}, 0, 1);
    Matrix u = mul(adjoint(un), mul(um, sw));
    return BlockEncoding{std::move(u), t.frobenius, d, d * d};
}

BlockEncoding memory_gram_encoding(const MemoryTree& tm, const MemoryTree& tn) {
    require_input(tm.frobenius > 0 && tn.frobenius > 0, "memory_gram_encoding: degenerate tree");
    require_input(tm.rows == tn.rows && tm.cols == tn.cols,
                  "memory_gram_encoding: incompatible shapes");
    BlockEncoding be_m = memory_block_encoding(tm);
    BlockEncoding be_n = memory_block_encoding(tn);
    const int d = be_m.system_dim;
    const int anc = be_m.ancilla_dim();
    const Dims dims{2, anc, d}; // flag qubit, shared ancilla, system
    const int full = total_dim(dims);

    Matrix un_emb = embed_op(dims, be_n.unitary, {1, 2});
    // Flag everything, then unflag the ancilla-zero branch.
    std::vector<int> fmap(full);
    const int block = anc * d;
    for (int g = 0; g < full; ++g) {
        const int f = g / block;
        const int a = (g % block) / d;
        const int s = g % d;
        const int ff = (a == 0) ? f : (f ^ 1);
        fmap[g] = ff * block + a * d + s;
    }
    Matrix pn(full, full);
    for (int i = 0; i < full; ++i) {
        const cx* src = &un_emb.a[static_cast<std::size_t>(i) * full];
        cx* dst = &pn.a[static_cast<std::size_t>(fmap[i]) * full];
        std::copy(src, src + full, dst);
    }
    Matrix um_emb = embed_op(dims, adjoint(be_m.unitary), {1, 2});
    Matrix w = mul(um_emb, pn);
    return BlockEncoding{std::move(w), tm.frobenius * tn.frobenius, d, full};
}

std::pair<std::vector<cx>, double> memory_inverse_apply(const MemoryTree& tm, double kappa_m,
                                                        const std::vector<cx>& state) {
    require_input(kappa_m >= 1.0, "memory_inverse_apply: kappa must be >= 1");
    require_input(tm.orig_rows == tm.orig_cols, "memory_inverse_apply: square matrix required");
    const int n = tm.orig_rows;
    require_input(static_cast<int>(state.size()) == n, "memory_inverse_apply: state dimension mismatch");
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = tm.leaves[i][j];
    require_pre(is_symmetric(a, 1e-10 * std::max(1.0, max_abs(a))),
                "memory_inverse_apply: matrix not symmetric");
    auto eig = sym_eig(a);
    require_pre(eig.eigvals.front() >= (1.0 / kappa_m) * (1.0 - 1e-9) &&
                    eig.eigvals.back() <= 1.0 + 1e-9,
                "memory_inverse_apply: spectrum outside [1/kappa, 1]");
    const double c = 1.0 / kappa_m;
    std::vector<cx> out(n, cx{});
    for (int p = 0; p < n; ++p) {
        cx proj = 0;
        for (int i = 0; i < n; ++i) proj += eig.eigvecs(i, p).real() * state[i];
        const cx coef = proj * (c / eig.eigvals[p]);
        for (int i = 0; i < n; ++i) out[i] += coef * eig.eigvecs(i, p).real();
    }
    double nrm = 0;
    for (const auto& v : out) nrm += std::norm(v);
    return {std::move(out), std::sqrt(nrm)};
}

} // namespace subdist
