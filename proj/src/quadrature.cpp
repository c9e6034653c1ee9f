#include "blockspec/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "blockspec/errors.hpp"

namespace blockspec {

namespace {

// Kronrod-15 abscissae on [0,1] side (symmetric) with Kronrod weights and
// the embedded Gauss-7 weights on the shared nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
};

Panel gk15_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double dx = h * kXgk[j];
        const double fsum = (j == 7) ? f(c) : f(c - dx) + f(c + dx);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;  // j = 1,3,5,7 are the Gauss nodes
    }
    Panel p;
    p.a = a;
    p.b = b;
    p.value = resk * h;
    p.error = std::abs((resk - resg) * h);
    return p;
}

} // namespace

QuadResult gk15_adaptive(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, int max_intervals) {
    std::vector<Panel> panels;
    panels.push_back(gk15_panel(f, a, b));
    while ((int)panels.size() < max_intervals) {
        double total_err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total_err += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        if (total_err <= abs_tol) break;
        const Panel w = panels[worst];
        const double mid = 0.5 * (w.a + w.b);
        if (mid <= w.a || mid >= w.b) break;  // interval at floating-point resolution
        panels[worst] = gk15_panel(f, w.a, mid);
        panels.push_back(gk15_panel(f, mid, w.b));
    }
    QuadResult r{0.0, 0.0, (int)panels.size()};
    // Deterministic summation order: left to right.
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const Panel& p : panels) {
        r.value += p.value;
        r.error += p.error;
    }
    return r;
}

QuadResult integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                       double abs_tol, int max_intervals) {
    if (!(b > a)) throw Error("integrate_endpoint_singular: b > a required");
    const double w = b - a;
    auto g = [&](double theta) {
        const double s = std::sin(theta), c = std::cos(theta);
        const double x = a + w * s * s;
        return f(x) * w * 2.0 * s * c;
    };
    return gk15_adaptive(g, 0.0, std::asin(1.0), abs_tol, max_intervals);
}

CdfTable::CdfTable(const std::function<double(double)>& pdf, double a, double b, int panels)
    : a_(a), b_(b) {
    if (!(b > a)) throw Error("CdfTable: b > a required");
    if (panels < 8) panels = 8;
    if (panels % 2 == 1) ++panels;
    const double w = b - a;
    const double half_pi = std::asin(1.0);
    const int npts = panels + 1;
    theta_.resize(npts);
    cum_.resize(npts);
    std::vector<double> g(npts);
    const double h_theta = half_pi / panels;
    for (int i = 0; i < npts; ++i) {
        const double theta = half_pi * i / panels;
        theta_[i] = theta;
        // The endpoints are 0 * infinity for inverse-square-root edges; a tiny
        // inward offset evaluates the finite limit instead.
        double te = theta;
        if (i == 0) te = h_theta / 64.0;
        if (i == panels) te = half_pi - h_theta / 64.0;
        const double s = std::sin(te), c = std::cos(te);
        const double x = a + w * s * s;
        g[i] = pdf(x) * w * 2.0 * s * c;
    }
    // Composite Simpson, accumulated two panels at a time.
    const double h = half_pi / panels;
    cum_[0] = 0.0;
    for (int i = 2; i < npts; i += 2) {
        cum_[i] = cum_[i - 2] + h / 3.0 * (g[i - 2] + 4.0 * g[i - 1] + g[i]);
        // Midpoint value via Simpson on the half panels keeps the table monotone
        // and accurate at odd indices too.
        cum_[i - 1] = cum_[i - 2] + h / 12.0 * (5.0 * g[i - 2] + 8.0 * g[i - 1] - g[i]);
    }
    raw_mass_ = cum_[npts - 1];
    if (!(raw_mass_ > 0.0)) throw Error("CdfTable: non-positive total mass");
    for (double& v : cum_) v /= raw_mass_;
    // Enforce monotonicity against roundoff.
    for (int i = 1; i < npts; ++i) cum_[i] = std::max(cum_[i], cum_[i - 1]);
    cum_[npts - 1] = 1.0;
}

double CdfTable::cdf(double x) const {
    if (x <= a_) return 0.0;
    if (x >= b_) return 1.0;
    const double ratio = std::min(1.0, std::max(0.0, (x - a_) / (b_ - a_)));
    const double theta = std::asin(std::sqrt(ratio));
    const double half_pi = std::asin(1.0);
    const int panels = (int)theta_.size() - 1;
    const double pos = theta / half_pi * panels;
    int i = std::min((int)pos, panels - 1);
    const double frac = pos - i;
    return cum_[i] + frac * (cum_[i + 1] - cum_[i]);
}

double CdfTable::quantile(double u) const {
    if (u <= 0.0) return a_;
    if (u >= 1.0) return b_;
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    int i = (int)(it - cum_.begin());
    if (i == 0) i = 1;
    const double c0 = cum_[i - 1], c1 = cum_[i];
    const double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.0;
    const double theta = theta_[i - 1] + frac * (theta_[i] - theta_[i - 1]);
    const double s = std::sin(theta);
    return a_ + (b_ - a_) * s * s;
}

} // namespace blockspec
