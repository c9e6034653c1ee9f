#include "blockspec/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <string>

// BLAS runs single-threaded inside each call; parallelism lives at the
// replicate level, which keeps per-replicate results bit-identical no matter
// how many harness threads are active.
extern "C" void openblas_set_num_threads(int);

namespace blockspec {

namespace {
const bool kBlasPinned = [] {
    openblas_set_num_threads(1);
    return true;
}();
} // namespace

SymMatrix::SymMatrix(Matrix a) : m_(std::move(a)) {
    if (m_.rows() < 1 || m_.rows() != m_.cols()) {
        throw Error("SymMatrix: square matrix of dim >= 1 required");
    }
    const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
    const double tol = sym_tol(m_);
    if (asym > tol) {
        throw Error("SymMatrix: asymmetry " + std::to_string(asym) + " exceeds tolerance " +
                    std::to_string(tol));
    }
    m_ = ((m_ + m_.transpose()) / 2.0).eval();
}

SymMatrix SymMatrix::identity(int dim) {
    return SymMatrix(Matrix::Identity(dim, dim), AlreadySymmetric{});
}

Spectrum::Spectrum(Vector descending) : values_(std::move(descending)) {
    if (values_.size() < 1) throw Error("Spectrum: at least one eigenvalue required");
    for (int i = 1; i < values_.size(); ++i) {
        if (values_(i) > values_(i - 1)) throw Error("Spectrum: values must be non-increasing");
    }
}

Matrix cholesky(const SymMatrix& a) {
    Matrix l = a.mat();
    const double ptol = pd_tol(a.mat());
    const lapack_int n = (lapack_int)l.rows();
    const lapack_int info = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, l.data(), n);
    if (info > 0) {
        throw NotPositiveDefinite("cholesky: leading minor " + std::to_string(info) +
                                  " is not positive definite");
    }
    if (info < 0) throw Error("cholesky: invalid argument to dpotrf");
    for (int i = 0; i < n; ++i) {
        if (l(i, i) * l(i, i) <= ptol) {
            throw NotPositiveDefinite("cholesky: pivot " + std::to_string(i) +
                                      " below tolerance");
        }
    }
    l.triangularView<Eigen::StrictlyUpper>().setZero();
    return l;
}

namespace {

// dsyevd on a copy of A. jobz 'N' for values only, 'V' for vectors too.
// LAPACK returns ascending eigenvalues.
void syevd(const SymMatrix& a, char jobz, Vector& evals, Matrix& work) {
    work = a.mat();
    const lapack_int n = (lapack_int)work.rows();
    evals.resize(n);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'L', n, work.data(), n, evals.data());
    if (info > 0) throw NoConvergence("sym_eig: dsyevd failed to converge (info=" +
                                      std::to_string(info) + ")");
    if (info < 0) throw Error("sym_eig: invalid argument to dsyevd");
}

} // namespace

EigResult sym_eig(const SymMatrix& a) {
    Vector evals;
    Matrix vecs;
    syevd(a, 'V', evals, vecs);
    const int n = (int)evals.size();
    Vector desc(n);
    Matrix vdesc(n, n);
    for (int i = 0; i < n; ++i) {
        desc(i) = evals(n - 1 - i);
        vdesc.col(i) = vecs.col(n - 1 - i);
    }
    return EigResult{Spectrum(std::move(desc)), std::move(vdesc)};
}

Vector sym_eigvalues_ascending(const SymMatrix& a) {
    Vector evals;
    Matrix scratch;
    syevd(a, 'N', evals, scratch);
    return evals;
}

namespace {

// Shared spectral-function path: B = V f(lambda) V'.
SymMatrix spectral_map(const SymMatrix& a, bool inverse) {
    Vector evals;
    Matrix v;
    syevd(a, 'V', evals, v);
    const int n = (int)evals.size();
    const double tol = eig_tol(std::max(std::abs(evals(0)), std::abs(evals(n - 1))), n);
    Vector f(n);
    for (int i = 0; i < n; ++i) {
        double lam = evals(i);
        if (lam < -tol) {
            throw NotPositiveDefinite("psd spectral map: eigenvalue " + std::to_string(lam) +
                                      " below -tolerance");
        }
        lam = std::max(lam, 0.0);
        if (inverse) {
            if (lam <= tol) {
                throw NotPositiveDefinite("psd_inv_sqrt: eigenvalue within tolerance of zero");
            }
            f(i) = 1.0 / std::sqrt(lam);
        } else {
            f(i) = std::sqrt(lam);
        }
    }
    Matrix b = v * f.asDiagonal() * v.transpose();
    b = ((b + b.transpose()) / 2.0).eval();
    return SymMatrix(std::move(b));
}

} // namespace

SymMatrix psd_sqrt(const SymMatrix& a) { return spectral_map(a, false); }

SymMatrix psd_inv_sqrt(const SymMatrix& a) { return spectral_map(a, true); }

Matrix spd_solve(const SymMatrix& a, const Matrix& rhs) {
    const Matrix l = cholesky(a);
    Matrix z = l.triangularView<Eigen::Lower>().solve(rhs);
    return l.transpose().triangularView<Eigen::Upper>().solve(z);
}

double trace_power(const Matrix& a, int k) {
    if (a.rows() != a.cols()) throw Error("trace_power: square matrix required");
    if (k < 1) throw Error("trace_power: k >= 1 required");
    if (k == 1) return a.trace();
    Matrix acc = a;
    for (int i = 2; i < k; ++i) acc = (acc * a).eval();
    // Last power folded into the trace: tr(acc * a) without forming the product.
    return (acc.array() * a.transpose().array()).sum();
}

} // namespace blockspec
