#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace blockspec {

struct QuadResult {
    double value;
    double error;  // estimated absolute error
    int intervals;
};

/// Adaptive Gauss-Kronrod (G7,K15) on [a,b]. Splits the worst interval until
/// the summed error estimate drops below abs_tol or the interval cap is hit.
QuadResult gk15_adaptive(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, int max_intervals = 2000);

/// Integral over [a,b] of f under the substitution x = a + (b-a) sin^2(theta),
/// which absorbs inverse-square-root endpoint singularities exactly.
/// The integrand is called as f(x) and the Jacobian is applied internally.
QuadResult integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                       double abs_tol, int max_intervals = 2000);

/// Tabulated CDF/quantile pair for a density on [a,b], built by cumulative
/// Simpson integration in the sin^2-substituted variable. Accuracy is set by
/// the panel count; 1 << 13 panels puts smooth densities well below 1e-9.
class CdfTable {
  public:
    CdfTable(const std::function<double(double)>& pdf, double a, double b, int panels = 1 << 13);

    double cdf(double x) const;
    double quantile(double u) const;
    double support_lo() const { return a_; }
    double support_hi() const { return b_; }
    /// Total mass before normalization; 1 up to quadrature error for a density.
    double raw_mass() const { return raw_mass_; }

  private:
    double a_, b_;
    double raw_mass_;
    std::vector<double> theta_;  // grid in [0, pi/2]
    std::vector<double> cum_;    // normalized cumulative mass at theta_
};

} // namespace blockspec
