#include "blockspec/laws.hpp"

#include <cmath>
#include <string>

#include "blockspec/errors.hpp"
#include "blockspec/quadrature.hpp"

namespace blockspec {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

// ---------------------------------------------------------------------------
// Arcsine law.

double arcsine_pdf(double x) {
    if (x <= 0.0 || x >= 2.0) return 0.0;
    return 1.0 / (kPi * std::sqrt(x * (2.0 - x)));
}

double arcsine_cdf(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 2.0 / kPi * std::asin(std::sqrt(x / 2.0));
}

double arcsine_quantile(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 2.0;
    const double s = std::sin(kPi * u / 2.0);
    return 2.0 * s * s;
}

double arcsine_moment(int k) {
    if (k < 0) throw Error("arcsine_moment: k >= 0 required");
    if (k <= 31) return arcsine_moment_exact(k).to_double();
    // log-Gamma evaluation of 2^k Gamma(k+1/2) / (sqrt(pi) Gamma(k+1)).
    return std::exp(k * std::log(2.0) + std::lgamma(k + 0.5) - 0.5 * std::log(kPi) -
                    std::lgamma(k + 1.0));
}

Rational arcsine_moment_exact(int k) {
    if (k < 0 || k > 31) throw Error("arcsine_moment_exact: 0 <= k <= 31 required");
    return Rational(binomial_exact(2 * k, k), pow2_exact(k));
}

// ---------------------------------------------------------------------------
// Fisher LSD.

FisherLSD::FisherLSD(double s_, double t_) : s(s_), t(t_) {
    if (!(s > 0.0)) throw Error("FisherLSD: s > 0 required");
    if (!(t > 0.0 && t < 1.0)) throw Error("FisherLSD: t in (0,1) required");
}

double FisherLSD::h() const { return std::sqrt(s + t - s * t); }

double FisherLSD::a() const {
    const double d = 1.0 - t;
    const double r = 1.0 - h();
    return r * r / (d * d);
}

double FisherLSD::b() const {
    const double d = 1.0 - t;
    const double r = 1.0 + h();
    return r * r / (d * d);
}

double FisherLSD::pdf(double x) const {
    const double lo = a(), hi = b();
    if (x <= lo || x >= hi) return 0.0;
    return (1.0 - t) / (2.0 * kPi * x * (s + t * x)) * std::sqrt((hi - x) * (x - lo));
}

double fisher_pdf(const FisherLSD& law, double x) { return law.pdf(x); }

double ik_quadrature(const FisherLSD& law, int k) {
    if (k < 1) throw Error("ik_quadrature: k >= 1 required");
    const double shift = law.s / law.t;
    auto f = [&](double x) {
        const double ratio = x / (x + shift);
        return std::pow(ratio, k) * law.pdf(x);
    };
    const QuadResult q = integrate_endpoint_singular(f, law.a(), law.b(), 1e-9, 4000);
    if (q.error > 1e-6) {
        throw QuadratureFailure("ik_quadrature: error estimate " + std::to_string(q.error) +
                                " exceeds 1e-6");
    }
    return q.value;
}

double ik_closed(double t, int k) {
    if (!(t > 0.0 && t < 1.0)) throw Error("ik_closed: t in (0,1) required");
    if (k < 1 || k > 25) throw Error("ik_closed: 1 <= k <= 25 required");
    // Multinomial expansion of the k-th derivative evaluated at z = -t, for
    // s = 1 where h = 1. Indices j1+j2+j3+j4 = k; C(2,j2) kills j2 > 2.
    double sum = 0.0;
    for (int j2 = 0; j2 <= std::min(2, k); ++j2) {
        for (int j4 = 0; j4 + j2 <= k; ++j4) {
            for (int j1 = 0; j1 + j2 + j4 <= k; ++j1) {
                const int j3 = k - j1 - j2 - j4;
                const double sign = ((j4 - j2 + 1) % 2 == 0) ? 1.0 : -1.0;
                const double coeff = (double)binomial_exact(2 * k, j1) *
                                     (double)binomial_exact(2, j2) *
                                     (double)binomial_exact(k + j4, j4);
                const double term = sign * coeff *
                                    std::pow(1.0 - t, j2 + j3) *               // (1-t)^(k-j1-j4)
                                    std::pow(1.0 + t, 1.0 - j2 - k - j4) *
                                    std::pow(t, k + j4 - j3);
                sum += term;
            }
        }
    }
    return -(1.0 - t) / (2.0 * t) - sum / (2.0 * t);
}

double ik_limit(int k) {
    if (k < 1) throw Error("ik_limit: k >= 1 required");
    if (k <= 31) {
        return (double)binomial_exact(2 * k, k) / (double)pow2_exact(k) / (double)pow2_exact(k);
    }
    return std::exp(std::lgamma(2.0 * k + 1.0) - 2.0 * std::lgamma(k + 1.0) -
                    2.0 * k * std::log(2.0));
}

// ---------------------------------------------------------------------------
// Limit moments of the block-rescaled ensemble.

double block_moment_limit(int k) {
    if (k < 0) throw Error("block_moment_limit: k >= 0 required");
    if (k <= 25) return block_moment_limit_exact(k).to_double();
    double sum = 0.0;
    for (int eta = 0; 2 * eta <= k; ++eta) {
        const double log_term = std::lgamma(k + 1.0) - std::lgamma(2.0 * eta + 1.0) -
                                std::lgamma(k - 2.0 * eta + 1.0) + std::lgamma(2.0 * eta + 1.0) -
                                2.0 * std::lgamma(eta + 1.0) - 2.0 * eta * std::log(2.0);
        sum += std::exp(log_term);
    }
    return sum;
}

Rational block_moment_limit_exact(int k) {
    if (k < 0 || k > 25) throw Error("block_moment_limit_exact: 0 <= k <= 25 required");
    Rational sum(0);
    for (int eta = 0; 2 * eta <= k; ++eta) {
        const long long numer = binomial_exact(k, 2 * eta) * binomial_exact(2 * eta, eta);
        sum = sum + Rational(numer, pow2_exact(2 * eta));
    }
    return sum;
}

IdentityCheck identity_check(int k) {
    if (k < 0 || k > 25) throw Error("identity_check: 0 <= k <= 25 required");
    IdentityCheck out{block_moment_limit_exact(k), arcsine_moment_exact(k), false};
    out.equal = (out.lhs == out.rhs);
    return out;
}

// ---------------------------------------------------------------------------
// Kesten-McKay family.

KestenMcKayFamily::KestenMcKayFamily(double m_, double u_, double v_) : m(m_), u(u_), v(v_) {
    if (!(m > 1.0)) throw Error("KestenMcKayFamily: shape m > 1 required");
    if (!(v > 0.0)) throw Error("KestenMcKayFamily: scale v > 0 required");
}

double KestenMcKayFamily::support_lo() const { return u - 2.0 * std::sqrt(m - 1.0) * v; }

double KestenMcKayFamily::support_hi() const { return u + 2.0 * std::sqrt(m - 1.0) * v; }

double KestenMcKayFamily::pdf(double x) const {
    const double y = (x - u) / v;
    const double rad = 4.0 * (m - 1.0) - y * y;
    if (rad <= 0.0) return 0.0;
    return m * std::sqrt(rad) / (2.0 * kPi * (m * m - y * y)) / v;
}

double km_pdf(const KestenMcKayFamily& fam, double x) { return fam.pdf(x); }

KestenMcKayFamily km_fit(const MomentVector& moments) {
    const auto& mu = moments.values;
    if (mu.size() < 5) throw FitFailure("km_fit: moments up to order 4 required");
    if (std::abs(mu[0] - 1.0) > 1e-12) throw FitFailure("km_fit: moments[0] must be 1");
    const double mean = mu[1];
    const double var = mu[2] - mean * mean;
    if (!(var > 0.0)) throw FitFailure("km_fit: variance must be positive");

    // Base law is symmetric with E[Y^2] = m and E[Y^4] = 2m^2 - m, so under
    // x = u + vY the mean and variance pin u and v(m) = sqrt(var/m), and only
    // the 3rd/4th moments distinguish m.
    const double u = mean;
    auto objective = [&](double m) {
        const double v2m = var;  // v^2 * m
        const double p3 = u * u * u + 3.0 * u * v2m;
        const double p4 = u * u * u * u + 6.0 * u * u * v2m + var * var * (2.0 - 1.0 / m);
        const double d3 = p3 - mu[3];
        const double d4 = p4 - mu[4];
        return d3 * d3 + d4 * d4;
    };

    double lo = 1.0 + 1e-9, hi = 64.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = objective(x2);
        }
    }
    const double m = 0.5 * (lo + hi);
    return KestenMcKayFamily(m, u, std::sqrt(var / m));
}

} // namespace blockspec
