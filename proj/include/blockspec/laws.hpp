#pragma once

#include <vector>

#include "blockspec/rational.hpp"

namespace blockspec {

// ---------------------------------------------------------------------------
// Arcsine law on [0,2], density 1/(pi sqrt(x(2-x))).

double arcsine_pdf(double x);
double arcsine_cdf(double x);
/// Inverse CDF: Q(u) = 2 sin^2(pi u / 2).
double arcsine_quantile(double u);
/// k-th moment, 2^k Gamma(k+1/2) / (sqrt(pi) Gamma(k+1)) = C(2k,k) / 2^k.
double arcsine_moment(int k);
/// Same value as an exact rational; k <= 31.
Rational arcsine_moment_exact(int k);

// ---------------------------------------------------------------------------
// Fisher limiting spectral distribution with ratio indices (s, t).

struct FisherLSD {
    double s;  // > 0
    double t;  // in (0,1)

    FisherLSD(double s_, double t_);

    double h() const;  // sqrt(s + t - s t)
    double a() const;  // (1-h)^2 / (1-t)^2
    double b() const;  // (1+h)^2 / (1-t)^2
    double pdf(double x) const;
};

double fisher_pdf(const FisherLSD& law, double x);

/// I_k = integral of (x/(x + s/t))^k against the Fisher density, by adaptive
/// quadrature with the sin^2 endpoint substitution. Absolute target 1e-9;
/// throws QuadratureFailure if the error estimate exceeds 1e-6.
double ik_quadrature(const FisherLSD& law, int k);

/// Closed form of I_k in the tractable case s = 1 (so h = 1), as the finite
/// multinomial sum obtained from the k-th derivative of the contour integrand.
/// Valid for 0 < t < 1 and 1 <= k <= 25.
double ik_closed(double t, int k);

/// Limit of I_k as t -> 1: C(2k,k) / 4^k.
double ik_limit(int k);

// ---------------------------------------------------------------------------
// Limiting moments of the block-rescaled ensemble.

/// sum over eta of C(k,2 eta) C(2 eta, eta) / 4^eta; equals arcsine_moment(k).
double block_moment_limit(int k);
Rational block_moment_limit_exact(int k);

struct IdentityCheck {
    Rational lhs;  // binomial sum
    Rational rhs;  // Gamma-ratio side, reduced to C(2k,k) / 2^k
    bool equal;
};

/// Exact-rational comparison of the two closed forms of the k-th limit moment.
IdentityCheck identity_check(int k);

// ---------------------------------------------------------------------------
// Kesten-McKay family with affine location/scale map.

struct KestenMcKayFamily {
    double m;  // shape, > 1
    double u;  // location
    double v;  // scale, > 0

    KestenMcKayFamily(double m_, double u_, double v_);

    double support_lo() const;
    double support_hi() const;
    double pdf(double x) const;
};

double km_pdf(const KestenMcKayFamily& fam, double x);

struct MomentVector {
    std::vector<double> values;  // values[k] is the k-th raw moment; values[0] = 1
};

/// Fit (m, u, v) to raw moments up to order 4: mean and variance are matched
/// exactly, then m minimizes the squared deviation of the 3rd and 4th moments
/// by golden-section search over (1, 64]. Deterministic.
/// Throws FitFailure when the moment system is infeasible (variance <= 0).
KestenMcKayFamily km_fit(const MomentVector& moments);

} // namespace blockspec
