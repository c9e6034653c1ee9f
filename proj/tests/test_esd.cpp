#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "blockspec/ensembles.hpp"
#include "blockspec/esd.hpp"

using namespace blockspec;

namespace {

ESD arcsine_quantile_grid(int dim) {
    std::vector<double> v(dim);
    for (int i = 0; i < dim; ++i) v[i] = arcsine_quantile((i + 0.5) / dim);
    return ESD(std::move(v));
}

} // namespace

TEST_CASE("esd_moment: constants and exact trace identity") {
    const ESD ones(std::vector<double>{1.0, 1.0, 1.0});
    for (int k : {0, 1, 2, 5}) CHECK(esd_moment(ones, k) == doctest::Approx(1.0).epsilon(1e-14));
    const ESD pair(std::vector<double>{0.0, 2.0});
    CHECK(esd_moment(pair, 2) == doctest::Approx(2.0).epsilon(1e-14));

    const Dims d = Dims::checked(24, 5, 4);
    const SymMatrix r = rescaled_sym(gram_blocks(sample(d, 3, 0)));
    const Vector evals = sym_eigvalues_ascending(r);
    const ESD esd(std::vector<double>(evals.data(), evals.data() + evals.size()));
    CHECK(std::abs(esd_moment(esd, 1) - 1.0) <= 1e-9);
}

TEST_CASE("ks_distance: quantile grid, point mass, self-cdf") {
    const int dim = 500;
    const ESD grid = arcsine_quantile_grid(dim);
    CHECK(ks_distance(grid, [](double x) { return arcsine_cdf(x); }) <= 0.5 / dim + 1e-9);

    const ESD point(std::vector<double>{1.0});
    CHECK(ks_distance(point, [](double x) { return arcsine_cdf(x); }) ==
          doctest::Approx(0.5).epsilon(1e-12));

    // Against its own empirical CDF the distance vanishes.
    const auto& vals = grid.values();
    auto empirical = [&](double x) {
        std::size_t cnt = 0;
        while (cnt < vals.size() && vals[cnt] <= x) ++cnt;
        return (double)cnt / vals.size();
    };
    CHECK(ks_distance(grid, empirical) == 0.0);
}

TEST_CASE("w1_distance: grid coupling, two-point hand value, shift Lipschitz bound") {
    const int dim = 400;
    const ESD grid = arcsine_quantile_grid(dim);
    CHECK(w1_distance(grid, [](double u) { return arcsine_quantile(u); }) <= 1e-9);

    const ESD pair(std::vector<double>{0.0, 2.0});
    // (1/2)(Q(1/4) + 2 - Q(3/4)) = (2 - sqrt 2)/2.
    CHECK(w1_distance(pair, [](double u) { return arcsine_quantile(u); }) ==
          doctest::Approx(0.29289321881345254).epsilon(1e-12));

    const double base = w1_distance(grid, [](double u) { return arcsine_quantile(u); });
    for (double delta : {0.01, 0.1}) {
        std::vector<double> shifted = grid.values();
        for (double& v : shifted) v += delta;
        const double moved = w1_distance(ESD(shifted), [](double u) { return arcsine_quantile(u); });
        CHECK(moved <= base + delta + 1e-12);
    }
}

TEST_CASE("histogram: fixed-range counting and empty bins") {
    const ESD e(std::vector<double>{0.5, 0.5, 1.5, 1.5});
    const Histogram h = histogram(e, 2, 0.0, 2.0);
    CHECK(h.counts[0] == 2);
    CHECK(h.counts[1] == 2);
    CHECK(h.densities[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(h.densities[1] == doctest::Approx(0.5).epsilon(1e-14));

    const Histogram h4 = histogram(ESD(std::vector<double>{0.1, 1.9}), 4, 0.0, 2.0);
    CHECK(h4.counts[1] == 0);
    CHECK(h4.counts[2] == 0);
    CHECK(h4.densities[1] == 0.0);
    long long total = 0;
    for (long long c : h4.counts) total += c;
    CHECK(total == 2);
}

TEST_CASE("histogram approximates the density away from the endpoints") {
    const ESD grid = arcsine_quantile_grid(10000);
    const Histogram h = histogram(grid, 50, 0.0, 2.0);
    double worst = 0.0;
    for (int b = 0; b < 50; ++b) {
        const double mid = 0.5 * (h.edges[b] + h.edges[b + 1]);
        if (mid < 0.15 || mid > 1.85) continue;
        worst = std::max(worst, std::abs(h.densities[b] - arcsine_pdf(mid)));
    }
    CHECK(worst <= 0.05);
}

TEST_CASE("fit_report: grid construction, point mass, exact analytic moments") {
    const ESD grid = arcsine_quantile_grid(10000);
    const FitReport r = fit_report(grid, SpectralLaw::arcsine(), 4);
    CHECK(r.ks <= 1e-3);
    CHECK(r.w1 <= 1e-3);
    CHECK(r.law == "arcsine");

    const ESD ones(std::vector<double>{1.0, 1.0, 1.0});
    const FitReport r1 = fit_report(ones, SpectralLaw::arcsine(), 3);
    CHECK(r1.ks == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r1.moment_gaps[0].analytic == 1.0);
    CHECK(r1.moment_gaps[1].analytic == 1.5);
    CHECK(r1.moment_gaps[2].analytic == 2.5);
}

TEST_CASE("moment-link identity: binomial expansion of tr((I+C)^k) on one realization") {
    const Dims dm = Dims::checked(22, 4, 4);
    const BlockCovariance bc = gram_blocks(sample(dm, 101, 0));
    const Matrix c = offdiag_C(bc);
    const int d = dm.d();
    const Matrix iplusc = Matrix::Identity(d, d) + c;
    for (int k = 1; k <= 6; ++k) {
        const double direct = trace_power(iplusc, k) / d;
        double viasum = 0.0;
        for (int l = 0; l <= k; ++l) {
            const double trc = (l == 0) ? d : trace_power(c, l);
            viasum += (double)binomial_exact(k, l) * trc;
        }
        viasum /= d;
        CHECK(std::abs(direct - viasum) <= 1e-8 * d);
    }
}

TEST_CASE("even-trace reduction: eigenvalue moments match the B1 B2 route") {
    const Dims dm = Dims::checked(26, 5, 5);
    const BlockCovariance bc = gram_blocks(sample(dm, 103, 0));
    const int d = dm.d();
    const Vector evals = sym_eigvalues_ascending(rescaled_sym(bc));
    const ESD esd(std::vector<double>(evals.data(), evals.data() + evals.size()));

    const Matrix b1 = bc.Psi * bc.S2.inverse();
    const Matrix b2 = bc.Psi.transpose() * bc.S1.inverse();
    const Matrix b1b2 = b1 * b2;
    for (int k = 1; k <= 6; ++k) {
        double viasum = 0.0;
        for (int l = 0; l <= k; ++l) {
            double trc;
            if (l == 0) {
                trc = d;
            } else if (l % 2 == 1) {
                trc = 0.0;
            } else {
                trc = 2.0 * trace_power(b1b2, l / 2);
            }
            viasum += (double)binomial_exact(k, l) * trc;
        }
        viasum /= d;
        CHECK(esd_moment(esd, k) == doctest::Approx(viasum).epsilon(1e-6));
    }
}

TEST_CASE("SpectralLaw: the kesten-mckay table reproduces the arcsine closed forms") {
    // KM(m=2, u=1, v=1/2) is the arcsine law on [0,2]; the tabulated cdf and
    // quantile must agree with the closed forms to table accuracy.
    const SpectralLaw km = SpectralLaw::kesten_mckay(KestenMcKayFamily(2.0, 1.0, 0.5));
    CHECK(km.support().first == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(km.support().second == doctest::Approx(2.0).epsilon(1e-12));
    double worst_cdf = 0.0, worst_q = 0.0;
    for (int i = 1; i < 60; ++i) {
        const double x = 2.0 * i / 60.0;
        worst_cdf = std::max(worst_cdf, std::abs(km.cdf(x) - arcsine_cdf(x)));
        const double u = i / 60.0;
        worst_q = std::max(worst_q, std::abs(km.quantile(u) - arcsine_quantile(u)));
    }
    CHECK(worst_cdf <= 1e-8);
    CHECK(worst_q <= 1e-7);
    CHECK(km.moment(1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(km.moment(2) == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("SpectralLaw: fisher table is a valid distribution") {
    const SpectralLaw fl = SpectralLaw::fisher(1.0, 0.5);
    CHECK(fl.cdf(fl.support().first) == 0.0);
    CHECK(fl.cdf(fl.support().second) == 1.0);
    double prev = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double x = fl.support().first +
                         (fl.support().second - fl.support().first) * i / 40.0;
        const double v = fl.cdf(x);
        CHECK(v >= prev);
        prev = v;
    }
    for (double u : {0.1, 0.5, 0.9}) {
        CHECK(fl.cdf(fl.quantile(u)) == doctest::Approx(u).epsilon(1e-7));
    }
}
