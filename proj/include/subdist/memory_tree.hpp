#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "subdist/block_encoding.hpp"
#include "subdist/linalg.hpp"

namespace subdist {

/// Binary-tree amplitude store: per-row trees whose leaves hold signed
/// entries and whose internal nodes hold sums of squared child values.
struct MemoryTree {
    int rows = 0, cols = 0;           // padded to powers of two
    int orig_rows = 0, orig_cols = 0; // caller's dimensions
    std::vector<double> row_norms;    // ||A_i||, size rows
    double frobenius = 0.0;
    // nodes[i] is a 1-indexed heap of size 2*cols: nodes[i][1] the root
    // (= row_norm^2), nodes[i][cols + j] the squared leaf j.
    std::vector<std::vector<double>> nodes;
    // Signed leaf values; reconstruction is bit-exact from these.
    std::vector<std::vector<double>> leaves;
    std::vector<std::uint8_t> degenerate_rows; // zero-norm rows
    bool degenerate = false;                   // frobenius == 0
};

MemoryTree build_tree(const Matrix& a);

/// Exact reconstruction of the stored (padded) matrix from leaf values.
Matrix tree_matrix(const MemoryTree& t);

/// U: |i>|0> -> |i> (x) row_i amplitudes; unitary on the rows*cols space,
/// unconstrained completion elsewhere. Zero rows map |i>|0> to itself.
Matrix row_prep_unitary(const MemoryTree& t);

/// U: |0>|j> -> (row-norm amplitudes) (x) |j>.
Matrix norm_prep_unitary(const MemoryTree& t);

/// Column-amplitude and column-norm preparation unitaries on a square-padded
/// copy, whose product satisfies <0,j| U_N^dagger U_M |k,0> = A_jk / ||A||_F.
std::pair<Matrix, Matrix> frobenius_prep_pair(const MemoryTree& t);

/// Block encoding of A with alpha = ||A||_F built from the preparation pair
/// plus the register swap fixing the ancilla-first layout.
BlockEncoding memory_block_encoding(const MemoryTree& t);

/// Block encoding of M^T N with alpha = ||M||_F * ||N||_F via the
/// single-flag circuit; square with gram_square_encoding for the Gram matrix.
BlockEncoding memory_gram_encoding(const MemoryTree& tm, const MemoryTree& tn);

/// Applies C * M^{-1} with C = 1/kappa_m to the state; returns the result and
/// the flag-success amplitude ||C M^{-1} state||.
std::pair<std::vector<cx>, double> memory_inverse_apply(const MemoryTree& tm, double kappa_m,
                                                        const std::vector<cx>& state);

} // namespace subdist
