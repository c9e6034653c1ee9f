#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "blockspec/laws.hpp"
#include "blockspec/linalg.hpp"

namespace blockspec {

/// Empirical spectral distribution: the uniform measure on a sorted multiset
/// of real eigenvalues.
class ESD {
  public:
    explicit ESD(std::vector<double> eigenvalues);  // sorts ascending
    static ESD from_spectrum(const Spectrum& s);

    int dim() const { return (int)values_.size(); }
    const std::vector<double>& values() const { return values_; }  // non-decreasing
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

  private:
    std::vector<double> values_;
};

/// Analytic law descriptor with the query surface the fit machinery needs.
/// Arcsine is closed form; Fisher and Kesten-McKay build a CDF table on
/// first use of cdf/quantile/moment.
class SpectralLaw {
  public:
    static SpectralLaw arcsine();
    static SpectralLaw fisher(double s, double t);
    static SpectralLaw kesten_mckay(const KestenMcKayFamily& fam);

    const std::string& name() const { return name_; }
    const std::vector<double>& params() const { return params_; }
    std::pair<double, double> support() const { return support_; }
    double pdf(double x) const;
    double cdf(double x) const;
    double quantile(double u) const;
    double moment(int k) const;

  private:
    SpectralLaw() = default;
    struct Impl;
    std::string name_;
    std::vector<double> params_;
    std::pair<double, double> support_;
    std::shared_ptr<const Impl> impl_;
};

/// (1/dim) sum of lambda_i^k.
double esd_moment(const ESD& e, int k);

/// Kolmogorov-Smirnov distance between the empirical CDF and an analytic CDF,
/// evaluated at the jump points from both sides.
double ks_distance(const ESD& e, const std::function<double(double)>& cdf);

/// Order-statistics W1 estimate: (1/dim) sum |lambda_(i) - Q((i-1/2)/dim)|.
double w1_distance(const ESD& e, const std::function<double(double)>& quantile);

struct Histogram {
    std::vector<double> edges;      // bins+1 strictly increasing edges
    std::vector<long long> counts;  // sums to dim
    std::vector<double> densities;  // counts / (dim * width)
};

/// Equal-width histogram over [e.min(), e.max()].
Histogram histogram(const ESD& e, int bins);
/// Equal-width histogram over a fixed range [lo, hi]; values outside are
/// clamped into the boundary bins so counts still sum to dim.
Histogram histogram(const ESD& e, int bins, double lo, double hi);

struct MomentGap {
    int k;
    double empirical;
    double analytic;
    double gap;  // |empirical - analytic|
};

struct FitReport {
    std::string law;
    std::vector<double> params;
    double ks;
    double w1;
    std::vector<MomentGap> moment_gaps;  // k = 1..kmax
};

FitReport fit_report(const ESD& e, const SpectralLaw& law, int kmax);

} // namespace blockspec
