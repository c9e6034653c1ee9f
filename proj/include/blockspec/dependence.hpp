#pragma once

#include "blockspec/ensembles.hpp"
#include "blockspec/linalg.hpp"

namespace blockspec {

/// Block-standardized matrix R = S0^{-1/2} S S0^{-1/2} with identity diagonal
/// blocks and the cross block Upsilon.
struct StandardizedMatrix {
    SymMatrix R;
    int p;
    int q;
    Matrix upsilon;  // p x q

    /// Population-style construction from the cross block directly.
    static StandardizedMatrix from_upsilon(const Matrix& upsilon);
    /// Empirical construction from Gram blocks.
    static StandardizedMatrix from_blocks(const BlockCovariance& bc);
};

/// Squared Bures-Wasserstein distance between PSD matrices:
/// tr A + tr B - 2 tr((A^{1/2} B A^{1/2})^{1/2}).
double bures_sq(const SymMatrix& a, const SymMatrix& b);

enum class DepDenominator {
    standard,  // (2 - sqrt 2) min(p,q)
    doubled,  // 2 (2 - sqrt 2) min(p,q)
};

/// Normalized dependence coefficient: bures_sq(R, I) over the chosen
/// denominator.
double dep_coefficient(const StandardizedMatrix& sm,
                       DepDenominator mode = DepDenominator::standard);

/// Adjusted RV coefficient (1/p) tr(Upsilon Upsilon').
double adjusted_rv(const StandardizedMatrix& sm);

} // namespace blockspec
