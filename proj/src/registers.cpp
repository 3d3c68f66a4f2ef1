#include "subdist/registers.hpp"

#include <numeric>

namespace subdist {

int total_dim(const Dims& dims) {
    int d = 1;
    for (int x : dims) d *= x;
    return d;
}

Matrix kron(const Matrix& x, const Matrix& y) {
    Matrix z(x.rows * y.rows, x.cols * y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) {
            const cx v = x(i, j);
            if (v == cx{}) continue;
            for (int p = 0; p < y.rows; ++p)
                for (int q = 0; q < y.cols; ++q)
                    z(i * y.rows + p, j * y.cols + q) = v * y(p, q);
        }
    return z;
}

namespace {

void decompose(int index, const Dims& dims, std::vector<int>& digits) {
    for (int r = static_cast<int>(dims.size()) - 1; r >= 0; --r) {
        digits[r] = index % dims[r];
        index /= dims[r];
    }
}

int compose(const std::vector<int>& digits, const Dims& dims) {
    int index = 0;
    for (std::size_t r = 0; r < dims.size(); ++r) index = index * dims[r] + digits[r];
    return index;
}

} // namespace

Matrix embed_op(const Dims& dims, const Matrix& op, const std::vector<int>& targets) {
    int tdim = 1;
    for (int t : targets) tdim *= dims[t];
    require_input(op.rows == tdim && op.cols == tdim, "embed_op: operator/target dims mismatch");

    const int full = total_dim(dims);
    Matrix out(full, full);
    const int nreg = static_cast<int>(dims.size());
    std::vector<int> digits(nreg);

    // Enumerate the non-target ("rest") configurations once, then scatter the
    // operator block for each.
    std::vector<int> rest;
    std::vector<char> is_target(nreg, 0);
    for (int t : targets) is_target[t] = 1;
    for (int r = 0; r < nreg; ++r)
        if (!is_target[r]) rest.push_back(r);
    int rest_dim = 1;
    for (int r : rest) rest_dim *= dims[r];

    std::vector<int> tdigits(targets.size());
    Dims target_dims;
    for (int t : targets) target_dims.push_back(dims[t]);
    Dims rest_dims;
    for (int r : rest) rest_dims.push_back(dims[r]);
    std::vector<int> rdigits(rest.size());

    for (int rc = 0; rc < rest_dim; ++rc) {
        if (!rest.empty()) decompose(rc, rest_dims, rdigits);
        for (int ti = 0; ti < tdim; ++ti) {
            decompose(ti, target_dims, tdigits);
            for (std::size_t r = 0; r < rest.size(); ++r) digits[rest[r]] = rdigits[r];
            for (std::size_t r = 0; r < targets.size(); ++r) digits[targets[r]] = tdigits[r];
            const int gi = compose(digits, dims);
            for (int tj = 0; tj < tdim; ++tj) {
                const cx v = op(ti, tj);
                if (v == cx{}) continue;
                decompose(tj, target_dims, tdigits);
                for (std::size_t r = 0; r < targets.size(); ++r) digits[targets[r]] = tdigits[r];
                out(gi, compose(digits, dims)) = v;
            }
        }
        // restore row target digits clobbered above on next iteration
    }
    return out;
}

Matrix permutation_matrix(int dim, const std::function<int(int)>& new_of_old) {
    Matrix p(dim, dim);
    std::vector<char> seen(dim, 0);
    for (int old = 0; old < dim; ++old) {
        const int nu = new_of_old(old);
        require_input(nu >= 0 && nu < dim && !seen[nu], "permutation_matrix: not a permutation");
        seen[nu] = 1;
        p(nu, old) = 1.0;
    }
    return p;
}

Matrix swap_registers(const Dims& dims, int r1, int r2) {
    const int full = total_dim(dims);
    const int nreg = static_cast<int>(dims.size());
    require_input(dims[r1] == dims[r2], "swap_registers: register dims differ");
    std::vector<int> digits(nreg);
    return permutation_matrix(full, [&](int old) {
        decompose(old, dims, digits);
        std::swap(digits[r1], digits[r2]);
        return compose(digits, dims);
    });
}

} // namespace subdist
