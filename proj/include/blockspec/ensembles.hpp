#pragma once

#include <cstdint>

#include "blockspec/linalg.hpp"

namespace blockspec {

/// Problem dimensions. The two Gram blocks are built from n-1 i.i.d. columns,
/// so p + q < n - 1 keeps both almost surely invertible.
struct Dims {
    int n;  // sample size, >= 4
    int p;  // first block size
    int q;  // second block size

    int d() const { return p + q; }
    int cols() const { return n - 1; }
    double s() const { return (double)q / p; }
    double t() const { return (double)q / (n - 1 - p); }
    double alpha() const { return (double)(n - 1 - p) / p; }  // = s/t as integer ratios
    double c() const { return (double)(p + q) / n; }

    /// Validates n >= 4, p,q >= 1, p+q < n-1; throws ConfigError otherwise.
    static Dims checked(int n, int p, int q);
};

struct GaussianBlockSample {
    Dims dims;
    Matrix X;  // p x (n-1)
    Matrix Y;  // q x (n-1)
    uint64_t seed;
    uint64_t replicate_id;
};

/// The three distinct blocks of the 2x2 block Gram matrix
/// [[S1, Psi], [Psi', S2]].
struct BlockCovariance {
    Matrix S1;   // p x p
    Matrix S2;   // q x q
    Matrix Psi;  // p x q

    int p() const { return (int)S1.rows(); }
    int q() const { return (int)S2.rows(); }
    int d() const { return p() + q(); }

    /// Assembles the full (p+q) x (p+q) matrix (test and small-scale use).
    Matrix assembled() const;
};

/// Draws X and Y with i.i.d. standard normal entries from the counter-based
/// stream keyed by (seed, replicate_id, matrix tag). Bit-identical for equal
/// inputs regardless of thread schedule.
GaussianBlockSample sample(const Dims& dims, uint64_t seed, uint64_t replicate_id);

/// S1 = X X', S2 = Y Y', Psi = X Y'.
BlockCovariance gram_blocks(const GaussianBlockSample& s);

/// Upsilon-hat = S1^{-1/2} Psi S2^{-1/2}, the matrix of sample canonical
/// correlations in the symmetric normalization.
Matrix upsilon_hat(const BlockCovariance& bc);

/// [[I, Upsilon-hat], [Upsilon-hat', I]]; shares its spectrum with the
/// block-rescaled matrix S S0^{-1}.
SymMatrix rescaled_sym(const BlockCovariance& bc);

/// The off-diagonal part C = [[0, Psi S2^{-1}], [Psi' S1^{-1}, 0]] of the
/// block-rescaled matrix I + C. Not symmetric.
Matrix offdiag_C(const BlockCovariance& bc);

/// Orthogonal projector M'(M M')^{-1} M onto the row space of M.
Matrix projector(const Matrix& m);

/// Symmetrized Fisher matrix W^{-1/2} G W^{-1/2} with
///   G = (1/p) Y P_X Y',  W = (1/(n-1-p)) Y (I - P_X) Y',
/// sharing the spectrum of F = G W^{-1}.
SymMatrix fisher_matrix(const GaussianBlockSample& s);

/// Column-centered sample covariance of a d x n data matrix, scaled by 1/n and
/// split at row p into blocks. For data ingestion; the theorem pipeline samples
/// the n-1 Wishart columns directly instead.
BlockCovariance centered_covariance(const Matrix& z, int p);

} // namespace blockspec
