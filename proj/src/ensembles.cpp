#include "blockspec/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blockspec/philox.hpp"

namespace blockspec {

namespace {
constexpr uint32_t kTagX = 0;
constexpr uint32_t kTagY = 1;
} // namespace

Dims Dims::checked(int n, int p, int q) {
    if (n < 4) throw ConfigError("dims: n >= 4 required");
    if (p < 1 || q < 1) throw ConfigError("dims: p, q >= 1 required");
    if (p + q >= n - 1) {
        throw ConfigError("dims: p + q < n - 1 required (got p=" + std::to_string(p) +
                          ", q=" + std::to_string(q) + ", n=" + std::to_string(n) + ")");
    }
    return Dims{n, p, q};
}

Matrix BlockCovariance::assembled() const {
    Matrix full(d(), d());
    full.topLeftCorner(p(), p()) = S1;
    full.topRightCorner(p(), q()) = Psi;
    full.bottomLeftCorner(q(), p()) = Psi.transpose();
    full.bottomRightCorner(q(), q()) = S2;
    return full;
}

GaussianBlockSample sample(const Dims& dims, uint64_t seed, uint64_t replicate_id) {
    GaussianBlockSample s{dims, Matrix(dims.p, dims.cols()), Matrix(dims.q, dims.cols()), seed,
                          replicate_id};
    NormalStream sx(seed, replicate_id, kTagX);
    NormalStream sy(seed, replicate_id, kTagY);
    sx.fill(s.X.data(), (uint64_t)dims.p * dims.cols());
    sy.fill(s.Y.data(), (uint64_t)dims.q * dims.cols());
    return s;
}

BlockCovariance gram_blocks(const GaussianBlockSample& s) {
    BlockCovariance bc;
    bc.S1 = Matrix::Zero(s.dims.p, s.dims.p);
    bc.S1.selfadjointView<Eigen::Lower>().rankUpdate(s.X);
    bc.S1.triangularView<Eigen::StrictlyUpper>() = bc.S1.transpose();
    bc.S2 = Matrix::Zero(s.dims.q, s.dims.q);
    bc.S2.selfadjointView<Eigen::Lower>().rankUpdate(s.Y);
    bc.S2.triangularView<Eigen::StrictlyUpper>() = bc.S2.transpose();
    bc.Psi = s.X * s.Y.transpose();
    return bc;
}

Matrix upsilon_hat(const BlockCovariance& bc) {
    const SymMatrix s1_isqrt = psd_inv_sqrt(SymMatrix(bc.S1));
    const SymMatrix s2_isqrt = psd_inv_sqrt(SymMatrix(bc.S2));
    return s1_isqrt.mat() * bc.Psi * s2_isqrt.mat();
}

SymMatrix rescaled_sym(const BlockCovariance& bc) {
    const int p = bc.p(), q = bc.q();
    const Matrix ups = upsilon_hat(bc);
    Matrix r(p + q, p + q);
    r.topLeftCorner(p, p) = Matrix::Identity(p, p);
    r.topRightCorner(p, q) = ups;
    r.bottomLeftCorner(q, p) = ups.transpose();
    r.bottomRightCorner(q, q) = Matrix::Identity(q, q);
    return SymMatrix(std::move(r));
}

Matrix offdiag_C(const BlockCovariance& bc) {
    const int p = bc.p(), q = bc.q();
    // B1 = Psi S2^{-1} and B2 = Psi' S1^{-1} via Cholesky solves.
    const Matrix b1 = spd_solve(SymMatrix(bc.S2), bc.Psi.transpose()).transpose();
    const Matrix b2 = spd_solve(SymMatrix(bc.S1), bc.Psi).transpose();
    Matrix c = Matrix::Zero(p + q, p + q);
    c.topRightCorner(p, q) = b1;
    c.bottomLeftCorner(q, p) = b2;
    return c;
}

Matrix projector(const Matrix& m) {
    Matrix gram = Matrix::Zero(m.rows(), m.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(m);
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    return m.transpose() * spd_solve(SymMatrix(std::move(gram)), m);
}

SymMatrix fisher_matrix(const GaussianBlockSample& s) {
    const int cols = s.dims.cols();
    const double denom_dof = (double)(s.dims.n - 1 - s.dims.p);
    const Matrix px = projector(s.X);
    const Matrix ypx = s.Y * px;
    Matrix g = (ypx * s.Y.transpose()) / (double)s.dims.p;
    g = ((g + g.transpose()) / 2.0).eval();
    Matrix w = ((s.Y * (Matrix::Identity(cols, cols) - px)) * s.Y.transpose()) / denom_dof;
    w = ((w + w.transpose()) / 2.0).eval();

    // W must be invertible on the scale of the whole ratio, not merely on its
    // own scale: when Y sits inside the row space of X, W is pure roundoff
    // while G stays order one, and the ratio diverges.
    const EigResult we = sym_eig(SymMatrix(w));
    const double scale = std::max({std::abs(we.spectrum.max()), std::abs(we.spectrum.min()),
                                   g.cwiseAbs().maxCoeff()});
    const double tol = 1e-9 * s.dims.q * scale;
    if (we.spectrum.min() <= tol) {
        throw NotPositiveDefinite("fisher_matrix: denominator Wishart block is singular");
    }
    Vector isqrt(we.spectrum.dim());
    for (int i = 0; i < isqrt.size(); ++i) isqrt(i) = 1.0 / std::sqrt(we.spectrum.values()(i));
    const Matrix w_isqrt = we.vectors * isqrt.asDiagonal() * we.vectors.transpose();
    Matrix f = w_isqrt * g * w_isqrt;
    f = ((f + f.transpose()) / 2.0).eval();
    return SymMatrix(std::move(f));
}

BlockCovariance centered_covariance(const Matrix& z, int p) {
    const int d = (int)z.rows();
    const int n = (int)z.cols();
    if (n < 2) throw ConfigError("centered_covariance: n >= 2 required");
    if (p < 1 || p >= d) throw ConfigError("centered_covariance: split 1 <= p < d required");
    const Vector mean = z.rowwise().mean();
    const Matrix centered = z.colwise() - mean;
    Matrix a = Matrix::Zero(d, d);
    a.selfadjointView<Eigen::Lower>().rankUpdate(centered);
    a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
    a /= (double)n;
    BlockCovariance bc;
    bc.S1 = a.topLeftCorner(p, p);
    bc.S2 = a.bottomRightCorner(d - p, d - p);
    bc.Psi = a.topRightCorner(p, d - p);
    try {
        cholesky(SymMatrix(bc.S1));
        cholesky(SymMatrix(bc.S2));
    } catch (const NotPositiveDefinite&) {
        throw DegenerateData("centered_covariance: singular diagonal Gram block");
    }
    return bc;
}

} // namespace blockspec
