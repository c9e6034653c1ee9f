#include "blockspec/dependence.hpp"

#include <cmath>

namespace blockspec {

namespace {

SymMatrix assemble_r(const Matrix& upsilon) {
    const int p = (int)upsilon.rows(), q = (int)upsilon.cols();
    Matrix r(p + q, p + q);
    r.topLeftCorner(p, p) = Matrix::Identity(p, p);
    r.topRightCorner(p, q) = upsilon;
    r.bottomLeftCorner(q, p) = upsilon.transpose();
    r.bottomRightCorner(q, q) = Matrix::Identity(q, q);
    return SymMatrix(std::move(r));
}

void check_invariants(const StandardizedMatrix& sm) {
    // Singular values of Upsilon at most 1 keeps R PSD; allow roundoff slack.
    const Eigen::JacobiSVD<Matrix> svd(sm.upsilon);
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    if (smax > 1.0 + 1e-8) {
        throw Error("StandardizedMatrix: largest singular value of Upsilon exceeds 1");
    }
}

} // namespace

StandardizedMatrix StandardizedMatrix::from_upsilon(const Matrix& upsilon) {
    StandardizedMatrix sm{assemble_r(upsilon), (int)upsilon.rows(), (int)upsilon.cols(), upsilon};
    check_invariants(sm);
    return sm;
}

StandardizedMatrix StandardizedMatrix::from_blocks(const BlockCovariance& bc) {
    const Matrix ups = upsilon_hat(bc);
    StandardizedMatrix sm{assemble_r(ups), bc.p(), bc.q(), ups};
    check_invariants(sm);
    return sm;
}

double bures_sq(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw Error("bures_sq: dimension mismatch");
    const SymMatrix ra = psd_sqrt(a);
    Matrix inner = ra.mat() * b.mat() * ra.mat();
    inner = ((inner + inner.transpose()) / 2.0).eval();
    const Vector evals = sym_eigvalues_ascending(SymMatrix(std::move(inner)));
    double tr_sqrt = 0.0;
    for (int i = 0; i < evals.size(); ++i) tr_sqrt += std::sqrt(std::max(0.0, evals(i)));
    return a.mat().trace() + b.mat().trace() - 2.0 * tr_sqrt;
}

double dep_coefficient(const StandardizedMatrix& sm, DepDenominator mode) {
    const double numer = bures_sq(sm.R, SymMatrix::identity(sm.R.dim()));
    double denom = (2.0 - std::sqrt(2.0)) * std::min(sm.p, sm.q);
    if (mode == DepDenominator::doubled) denom *= 2.0;
    return numer / denom;
}

double adjusted_rv(const StandardizedMatrix& sm) {
    return sm.upsilon.squaredNorm() / sm.p;
}

} // namespace blockspec
