#pragma once

#include "subdist/linalg.hpp"

namespace subdist {

/// A unitary whose top-left system block equals A/alpha, together with the
/// subnormalization alpha and register bookkeeping. The block sits at
/// ancilla value zero: A_ij = alpha * (<0|<i|) U (|0>|j>).
struct BlockEncoding {
    Matrix unitary;
    double alpha = 1.0;
    int system_dim = 0;
    int total_dim = 0;

    int ancilla_dim() const { return total_dim / system_dim; }
};

/// Top-left system block of the unitary, i.e. A/alpha.
Matrix extract_block(const BlockEncoding& be);

/// Symmetric dilation [[0, M], [M^T, 0]], zero-padded so the embedding
/// dimension is a power of two.
Matrix hermitian_embed(const Matrix& m);

/// Embedding dimension used by hermitian_embed for an n x k input.
int hermitian_embed_dim(int n, int k);

/// Unitary completion realizing U|0^a>|b> = |0^a>(M/alpha)|b> + |perp> for a
/// symmetric matrix, with alpha = max(row sparsity, spectral norm * (1+1e-9)).
BlockEncoding column_application_unitary(const Matrix& m);

/// From any block encoding of B, builds the two-flag-qubit composition
/// encoding B^dagger B with subnormalization alpha^2.
BlockEncoding gram_square_encoding(const BlockEncoding& be);

/// Block encoding of K = (M^T N)^T M^T N for orthonormal-columns M, N via the
/// Hermitian embeddings, two column-application oracles and the flag circuit.
/// System register is the padded k-dimensional block; alpha = (alpha_M * alpha_N)^2.
BlockEncoding gram_block_encoding(const Matrix& m, const Matrix& n);

/// Chebyshev iterate: encodes T_d(A/alpha) with unit subnormalization using a
/// qubitized reflection walk (one extra qubit Hermitianizes the input unitary).
BlockEncoding chebyshev_block(const BlockEncoding& be, int d);

enum class EvolutionMode { exact, jacobi_anger };

/// System-block operator approximating exp(-i A t) where A = alpha * block.
/// Exact mode goes through the spectral exponential; jacobi_anger sums
/// Bessel-weighted Chebyshev iterates truncated so the operator-norm error
/// against the exact evolution is at most eps.
Matrix evolution_operator(const BlockEncoding& be, double t, double eps, EvolutionMode mode);

/// Truncation degree the Jacobi-Anger series uses for argument z = alpha * t
/// at accuracy eps (exposed for diagnostics and tests).
int jacobi_anger_degree(double z, double eps);

/// Chebyshev series coefficients c_k with exp(-i z x) ~ sum c_k T_k(x),
/// c_0 = J_0(z), c_k = 2 (-i)^k J_k(z).
std::vector<cx> jacobi_anger_coefficients(double z, int degree);

/// Encodes M^{-1} with alpha = kappa for SPD M with spectrum in [1/kappa, 1].
BlockEncoding inverse_block_encoding(const Matrix& m, double kappa);

/// Encodes P^T P for P = M^{-1} N with alpha = (kappa_m * alpha_N)^2, composed
/// from inverse_block_encoding and column_application_unitary.
BlockEncoding ellipsoid_gram_encoding(const Matrix& m, const Matrix& n, double kappa_m);

/// T_0..T_dmax blocks of the encoded matrix computed by iterating the
/// qubitization walk on a column slab (no full walk powers materialized).
std::vector<Matrix> chebyshev_block_sequence(const BlockEncoding& be, int dmax);

} // namespace subdist
