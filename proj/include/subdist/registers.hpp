#pragma once

#include <functional>
#include <vector>

#include "subdist/linalg.hpp"

namespace subdist {

/// Mixed-radix register arithmetic for multi-register operators. Registers
/// are listed most-significant first; the global basis index of digit vector
/// (d0, d1, ..., dm) is ((d0*dim1 + d1)*dim2 + d2)...
using Dims = std::vector<int>;

int total_dim(const Dims& dims);

Matrix kron(const Matrix& x, const Matrix& y);

/// Embeds `op` (acting on the registers listed in `targets`, in that kron
/// order) into the full space described by `dims`, identity elsewhere.
Matrix embed_op(const Dims& dims, const Matrix& op, const std::vector<int>& targets);

/// Permutation matrix P with P * e_old = e_new(old).
Matrix permutation_matrix(int dim, const std::function<int(int)>& new_of_old);

/// Swaps two registers of the given dims (full-space permutation).
Matrix swap_registers(const Dims& dims, int r1, int r2);

} // namespace subdist
