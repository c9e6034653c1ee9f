#pragma once

#include <Eigen/Dense>

#include "blockspec/errors.hpp"

namespace blockspec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Scale-aware tolerances used across the linear algebra layer.
inline double sym_tol(const Matrix& a) { return 1e-9 * (1.0 + a.cwiseAbs().maxCoeff()); }
inline double pd_tol(const Matrix& a) { return 1e-12 * a.trace() / (double)a.rows(); }
inline double eig_tol(double max_abs_eig, int dim) { return 1e-9 * dim * max_abs_eig; }

/// Dense symmetric matrix. Construction rejects inputs whose asymmetry
/// exceeds sym_tol and stores the exactly symmetric average (A + A')/2.
class SymMatrix {
  public:
    explicit SymMatrix(Matrix a);

    static SymMatrix identity(int dim);

    int dim() const { return (int)m_.rows(); }
    const Matrix& mat() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

  private:
    struct AlreadySymmetric {};
    SymMatrix(Matrix a, AlreadySymmetric) : m_(std::move(a)) {}
    Matrix m_;
};

/// Eigenvalues sorted non-increasing.
class Spectrum {
  public:
    explicit Spectrum(Vector descending);

    int dim() const { return (int)values_.size(); }
    const Vector& values() const { return values_; }
    double max() const { return values_(0); }
    double min() const { return values_(dim() - 1); }

  private:
    Vector values_;
};

/// Lower-triangular Cholesky factor of an SPD matrix.
/// Throws NotPositiveDefinite if any pivot is <= pd_tol(A).
Matrix cholesky(const SymMatrix& a);

struct EigResult {
    Spectrum spectrum;  // descending
    Matrix vectors;     // column i pairs with spectrum.values()(i)
};

/// Full symmetric eigendecomposition, A = V diag(lambda) V'.
EigResult sym_eig(const SymMatrix& a);

/// Eigenvalues only (ascending), for spectra where vectors are not needed.
Vector sym_eigvalues_ascending(const SymMatrix& a);

/// Symmetric PSD square root. Eigenvalues within eig_tol below zero are
/// clamped to zero; more negative ones raise NotPositiveDefinite.
SymMatrix psd_sqrt(const SymMatrix& a);

/// Symmetric inverse square root of an SPD matrix: B with B A B = I.
SymMatrix psd_inv_sqrt(const SymMatrix& a);

/// Solves A Z = rhs for SPD A through the tolerance-checked Cholesky factor.
Matrix spd_solve(const SymMatrix& a, const Matrix& rhs);

/// tr(A^k) by repeated multiplication; k = 1 is the plain diagonal sum.
double trace_power(const Matrix& a, int k);

} // namespace blockspec
