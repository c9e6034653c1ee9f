#include "blockspec/esd.hpp"

#include <algorithm>
#include <cmath>

#include "blockspec/errors.hpp"
#include "blockspec/quadrature.hpp"

namespace blockspec {

ESD::ESD(std::vector<double> eigenvalues) : values_(std::move(eigenvalues)) {
    if (values_.empty()) throw Error("ESD: at least one eigenvalue required");
    std::sort(values_.begin(), values_.end());
}

ESD ESD::from_spectrum(const Spectrum& s) {
    std::vector<double> v(s.values().data(), s.values().data() + s.dim());
    return ESD(std::move(v));
}

// ---------------------------------------------------------------------------
// SpectralLaw.

struct SpectralLaw::Impl {
    std::function<double(double)> pdf;
    std::function<double(double)> cdf;
    std::function<double(double)> quantile;
    std::function<double(int)> moment;
};

SpectralLaw SpectralLaw::arcsine() {
    SpectralLaw law;
    law.name_ = "arcsine";
    law.support_ = {0.0, 2.0};
    auto impl = std::make_shared<Impl>();
    impl->pdf = [](double x) { return arcsine_pdf(x); };
    impl->cdf = [](double x) { return arcsine_cdf(x); };
    impl->quantile = [](double u) { return arcsine_quantile(u); };
    impl->moment = [](int k) { return arcsine_moment(k); };
    law.impl_ = std::move(impl);
    return law;
}

namespace {

// Raw moment by quadrature against a tabulated density.
double table_moment(const std::function<double(double)>& pdf, double lo, double hi, int k) {
    auto f = [&](double x) { return std::pow(x, k) * pdf(x); };
    return integrate_endpoint_singular(f, lo, hi, 1e-10, 4000).value;
}

} // namespace

SpectralLaw SpectralLaw::fisher(double s, double t) {
    const FisherLSD fl(s, t);
    SpectralLaw law;
    law.name_ = "fisher";
    law.params_ = {s, t};
    law.support_ = {fl.a(), fl.b()};
    auto impl = std::make_shared<Impl>();
    auto pdf = [fl](double x) { return fl.pdf(x); };
    auto table = std::make_shared<CdfTable>(pdf, fl.a(), fl.b());
    impl->pdf = pdf;
    impl->cdf = [table](double x) { return table->cdf(x); };
    impl->quantile = [table](double u) { return table->quantile(u); };
    const double lo = fl.a(), hi = fl.b();
    impl->moment = [pdf, lo, hi](int k) {
        return k == 0 ? 1.0 : table_moment(pdf, lo, hi, k);
    };
    law.impl_ = std::move(impl);
    return law;
}

SpectralLaw SpectralLaw::kesten_mckay(const KestenMcKayFamily& fam) {
    SpectralLaw law;
    law.name_ = "kesten-mckay";
    law.params_ = {fam.m, fam.u, fam.v};
    law.support_ = {fam.support_lo(), fam.support_hi()};
    auto impl = std::make_shared<Impl>();
    auto pdf = [fam](double x) { return fam.pdf(x); };
    auto table = std::make_shared<CdfTable>(pdf, fam.support_lo(), fam.support_hi());
    impl->pdf = pdf;
    impl->cdf = [table](double x) { return table->cdf(x); };
    impl->quantile = [table](double u) { return table->quantile(u); };
    const double lo = fam.support_lo(), hi = fam.support_hi();
    impl->moment = [pdf, lo, hi](int k) {
        return k == 0 ? 1.0 : table_moment(pdf, lo, hi, k);
    };
    law.impl_ = std::move(impl);
    return law;
}

double SpectralLaw::pdf(double x) const { return impl_->pdf(x); }
double SpectralLaw::cdf(double x) const { return impl_->cdf(x); }
double SpectralLaw::quantile(double u) const { return impl_->quantile(u); }
double SpectralLaw::moment(int k) const { return impl_->moment(k); }

// ---------------------------------------------------------------------------
// Distances and summaries.

double esd_moment(const ESD& e, int k) {
    if (k < 0) throw Error("esd_moment: k >= 0 required");
    if (k == 0) return 1.0;
    double sum = 0.0;
    for (double v : e.values()) sum += std::pow(v, k);
    return sum / e.dim();
}

double ks_distance(const ESD& e, const std::function<double(double)>& cdf) {
    const auto& vals = e.values();
    const int n = e.dim();
    double sup = 0.0;
    int i = 0;
    while (i < n) {
        int j = i;
        while (j < n && vals[j] == vals[i]) ++j;
        const double fx = cdf(vals[i]);
        // Left limit of the law's CDF, so that a law sharing the jump (e.g. the
        // ESD's own empirical CDF) measures as distance zero.
        const double fx_left = cdf(std::nextafter(vals[i], -HUGE_VAL));
        const double below = (double)i / n;      // empirical CDF just left of the jump
        const double above = (double)j / n;      // empirical CDF at the jump
        sup = std::max(sup, std::max(std::abs(above - fx), std::abs(below - fx_left)));
        i = j;
    }
    return sup;
}

double w1_distance(const ESD& e, const std::function<double(double)>& quantile) {
    const int n = e.dim();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = (i + 0.5) / n;
        sum += std::abs(e.values()[i] - quantile(u));
    }
    return sum / n;
}

Histogram histogram(const ESD& e, int bins) {
    double lo = e.min(), hi = e.max();
    if (hi <= lo) hi = lo + 1.0;  // degenerate spectrum: one unit-width bin range
    return histogram(e, bins, lo, hi);
}

Histogram histogram(const ESD& e, int bins, double lo, double hi) {
    if (bins < 1) throw Error("histogram: bins >= 1 required");
    if (!(hi > lo)) throw Error("histogram: hi > lo required");
    Histogram h;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.edges[b] = lo + (hi - lo) * b / bins;
    h.counts.assign(bins, 0);
    const double width = (hi - lo) / bins;
    for (double v : e.values()) {
        int b = (int)std::floor((v - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        ++h.counts[b];
    }
    h.densities.resize(bins);
    for (int b = 0; b < bins; ++b) h.densities[b] = h.counts[b] / (width * e.dim());
    return h;
}

FitReport fit_report(const ESD& e, const SpectralLaw& law, int kmax) {
    if (kmax < 1) throw Error("fit_report: kmax >= 1 required");
    FitReport r;
    r.law = law.name();
    r.params = law.params();
    r.ks = ks_distance(e, [&](double x) { return law.cdf(x); });
    r.w1 = w1_distance(e, [&](double u) { return law.quantile(u); });
    r.moment_gaps.reserve(kmax);
    for (int k = 1; k <= kmax; ++k) {
        MomentGap g;
        g.k = k;
        g.empirical = esd_moment(e, k);
        g.analytic = law.moment(k);
        g.gap = std::abs(g.empirical - g.analytic);
        r.moment_gaps.push_back(g);
    }
    return r;
}

} // namespace blockspec
