// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints exactly one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "blockspec/dependence.hpp"
#include "blockspec/ensembles.hpp"
#include "blockspec/esd.hpp"
#include "blockspec/harness.hpp"
#include "blockspec/laws.hpp"

using namespace blockspec;

namespace {

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> sym_spectrum_desc(const Matrix& m) {
    const Vector v = sym_eigvalues_ascending(SymMatrix(((m + m.transpose()) / 2.0).eval()));
    std::vector<double> out(v.data(), v.data() + v.size());
    std::sort(out.rbegin(), out.rend());
    return out;
}

// --------------------------------------------------------------------------
// 1. Exact identity suite.
Outcome criterion1() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k <= 20; ++k) {
        o.require(identity_check(k).equal, "identity_check failed at k=" + std::to_string(k));
    }
    for (int k = 0; k <= 12; ++k) {
        o.require(block_moment_limit_exact(k) == arcsine_moment_exact(k),
                  "block_moment_limit != arcsine_moment at k=" + std::to_string(k));
    }
    const double secs = seconds_since(t0);
    o.require(secs < 1.0, "runtime " + std::to_string(secs) + "s exceeds 1s");
    o.detail << "k<=20 identities exact, k<=12 moment equalities exact, " << secs << "s";
    return o;
}

// --------------------------------------------------------------------------
// 2. I_k oracle suite.
Outcome criterion2() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    double worst_closed = 0.0;
    for (double t : {0.3, 0.6, 0.9}) {
        for (int k = 1; k <= 8; ++k) {
            worst_closed = std::max(
                worst_closed, std::abs(ik_closed(t, k) - ik_quadrature(FisherLSD(1.0, t), k)));
        }
    }
    o.require(worst_closed <= 1e-7, "closed-vs-quadrature gap " + std::to_string(worst_closed));

    double worst_mom = 0.0;
    for (double s : {0.5, 1.0, 2.0}) {
        for (double t : {0.3, 0.6, 0.9}) {
            const FisherLSD law(s, t);
            const double i1 = t / (s + t);
            const double i2 = t * t * (s * s + s + t) / std::pow(s + t, 3);
            worst_mom = std::max(worst_mom, std::abs(ik_quadrature(law, 1) - i1));
            worst_mom = std::max(worst_mom, std::abs(ik_quadrature(law, 2) - i2));
        }
    }
    o.require(worst_mom <= 1e-7, "first-moment gap " + std::to_string(worst_mom));

    double worst_limit = 0.0;
    for (int k = 1; k <= 8; ++k) {
        worst_limit = std::max(worst_limit, std::abs(ik_closed(1.0 - 1e-6, k) - ik_limit(k)));
    }
    o.require(worst_limit <= 1e-4, "t->1 limit gap " + std::to_string(worst_limit));

    const double secs = seconds_since(t0);
    o.require(secs < 10.0, "runtime " + std::to_string(secs) + "s exceeds 10s");
    o.detail << "closed/quadrature " << worst_closed << ", firstMom " << worst_mom << ", limit "
             << worst_limit << ", " << secs << "s";
    return o;
}

// --------------------------------------------------------------------------
// 3. Theorem at desk scale.
Outcome criterion3() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg;
    cfg.mode = RunMode::theorem;
    cfg.schedule = {Dims::checked(2000, 999, 999)};
    cfg.replicates = 4;
    cfg.seed = 42;
    cfg.kmax = 4;
    const RunResult main_run = run(cfg);

    double worst_gap = 0.0;
    for (const auto& rr : main_run.replicates) {
        o.require(rr.min_eig >= -1e-8, "eigenvalue below -1e-8");
        o.require(rr.max_eig <= 2.0 + 1e-8, "eigenvalue above 2+1e-8");
        o.require(std::abs(rr.moment1 - 1.0) <= 1e-9, "first moment deviates from 1");
        o.require(rr.symmetry_defect <= 1e-6, "symmetry defect above 1e-6");
        for (const auto& g : rr.arcsine.moment_gaps) worst_gap = std::max(worst_gap, g.gap);
    }
    o.require(worst_gap <= 0.06, "moment gap " + std::to_string(worst_gap) + " above 0.06");
    const double med_w1 = main_run.cells[0].median_w1;
    o.require(med_w1 <= 0.05, "median W1 " + std::to_string(med_w1) + " above 0.05");
    const double secs_main = seconds_since(t0);

    RunConfig mono = cfg;
    mono.schedule = {Dims::checked(250, 124, 124), Dims::checked(1000, 499, 499),
                     Dims::checked(4000, 1999, 1999)};
    mono.replicates = 3;
    const RunResult mono_run = run(mono);
    for (std::size_t i = 1; i < mono_run.cells.size(); ++i) {
        o.require(mono_run.cells[i].median_w1 < mono_run.cells[i - 1].median_w1,
                  "median W1 not decreasing from n=" + std::to_string(mono_run.cells[i - 1].dims.n) +
                      " to n=" + std::to_string(mono_run.cells[i].dims.n));
    }
    o.detail << "median W1 " << med_w1 << ", worst moment gap " << worst_gap << ", W1 path ";
    for (const auto& c : mono_run.cells) o.detail << c.median_w1 << " ";
    o.detail << "(main " << secs_main << "s, total " << seconds_since(t0) << "s)";
    return o;
}

// --------------------------------------------------------------------------
// 4. Structural identities on small instances.
Outcome criterion4() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    double worst_odd = 0.0, worst_even = 0.0, worst_cc = 0.0, worst_fisher = 0.0;
    for (int seed = 0; seed < 100; ++seed) {
        const int p = 2 + seed % 4;              // 2..5
        const int q = (seed % 2 == 0) ? p : 2 + (seed / 2) % 4;
        const int n = p + q + 10;
        const Dims dims = Dims::checked(n, p, q);
        const GaussianBlockSample s = sample(dims, 9000 + seed, 0);
        const BlockCovariance bc = gram_blocks(s);
        const int d = dims.d();

        const Matrix c = offdiag_C(bc);
        for (int l : {1, 3, 5, 7}) {
            worst_odd = std::max(worst_odd, std::abs(trace_power(c, l)) / d);
        }
        const Matrix b1 = c.topRightCorner(p, q);
        const Matrix b2 = c.bottomLeftCorner(q, p);
        const Matrix b1b2 = b1 * b2;
        for (int l : {2, 4, 6, 8}) {
            worst_even = std::max(worst_even, std::abs(trace_power(c, l) -
                                                       2.0 * trace_power(b1b2, l / 2)));
        }

        const Matrix ups = upsilon_hat(bc);
        const auto uut = sym_spectrum_desc(ups * ups.transpose());
        const Matrix px = projector(s.X);
        const Matrix py = projector(s.Y);
        const auto pxy = sym_spectrum_desc(py * px * py);
        const int m = std::min(p, q);
        for (int i = 0; i < m; ++i) worst_cc = std::max(worst_cc, std::abs(uut[i] - pxy[i]));
        for (std::size_t i = m; i < uut.size(); ++i) worst_cc = std::max(worst_cc, std::abs(uut[i]));
        for (std::size_t i = m; i < pxy.size(); ++i) worst_cc = std::max(worst_cc, std::abs(pxy[i]));

        const SymMatrix f = fisher_matrix(s);
        std::vector<double> lhs;
        for (double lam : sym_spectrum_desc(f.mat())) lhs.push_back(lam / (lam + dims.alpha()));
        std::sort(lhs.rbegin(), lhs.rend());
        const auto rhs = sym_spectrum_desc(ups * ups.transpose());  // spectrum of B1 B2
        for (int i = 0; i < m; ++i) worst_fisher = std::max(worst_fisher, std::abs(lhs[i] - rhs[i]));
        for (std::size_t i = m; i < lhs.size(); ++i) {
            worst_fisher = std::max(worst_fisher, std::abs(lhs[i]));
        }
        for (std::size_t i = m; i < rhs.size(); ++i) {
            worst_fisher = std::max(worst_fisher, std::abs(rhs[i]));
        }
    }
    o.require(worst_odd <= 1e-10, "odd trace " + std::to_string(worst_odd));
    o.require(worst_even <= 1e-6, "even-trace reduction " + std::to_string(worst_even));
    o.require(worst_cc <= 1e-6, "canonical-correlation identity " + std::to_string(worst_cc));
    o.require(worst_fisher <= 1e-6, "fisher link " + std::to_string(worst_fisher));
    const double secs = seconds_since(t0);
    o.require(secs < 30.0, "runtime " + std::to_string(secs) + "s exceeds 30s");
    o.detail << "odd " << worst_odd << ", even " << worst_even << ", cc " << worst_cc
             << ", fisher " << worst_fisher << ", " << secs << "s";
    return o;
}

// --------------------------------------------------------------------------
// 5. Dependence suite.
Outcome criterion5() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const StandardizedMatrix indep = StandardizedMatrix::from_upsilon(Matrix::Zero(3, 3));
    o.require(dep_coefficient(indep) == 0.0, "independent case not exactly 0");

    Matrix full(1, 1);
    full << 1.0;
    const StandardizedMatrix corr = StandardizedMatrix::from_upsilon(full);
    o.require(std::abs(dep_coefficient(corr, DepDenominator::standard) - 2.0) <= 1e-10,
              "standard-denominator full correlation != 2");
    o.require(std::abs(dep_coefficient(corr, DepDenominator::doubled) - 1.0) <= 1e-10,
              "doubled-denominator full correlation != 1");

    double worst = 0.0;
    for (int seed = 0; seed < 100; ++seed) {
        const int p = 2 + seed % 3, q = 2 + (seed / 3) % 3;
        const Dims dims = Dims::checked(p + q + 12, p, q);
        const BlockCovariance bc = gram_blocks(sample(dims, 5000 + seed, 0));
        const StandardizedMatrix sm = StandardizedMatrix::from_blocks(bc);
        const double two_route =
            (bc.Psi * bc.S2.inverse() * bc.Psi.transpose() * bc.S1.inverse()).trace() / bc.p();
        worst = std::max(worst, std::abs(adjusted_rv(sm) - two_route));
    }
    o.require(worst <= 1e-8, "two-route adjusted_rv gap " + std::to_string(worst));
    const double secs = seconds_since(t0);
    o.require(secs < 5.0, "runtime " + std::to_string(secs) + "s exceeds 5s");
    o.detail << "two-route gap " << worst << ", " << secs << "s";
    return o;
}

// --------------------------------------------------------------------------
// 6. Conjecture scan.
Outcome criterion6() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg;
    cfg.mode = RunMode::conjecture;
    cfg.c_grid = {0.5, 0.95};
    cfg.conjecture_n = 2000;
    cfg.replicates = 4;
    cfg.seed = 42;
    cfg.kmax = 4;
    const RunResult r = run(cfg);
    for (const auto& rr : r.replicates) {
        if (!rr.km) {
            o.require(false, "km fit failed: " + rr.km_error);
            continue;
        }
        if (rr.cell == 0) {
            o.require(rr.km->w1 <= rr.arcsine.w1,
                      "c=0.5 replicate " + std::to_string(rr.replicate) + ": km W1 " +
                          std::to_string(rr.km->w1) + " > arcsine W1 " +
                          std::to_string(rr.arcsine.w1));
        } else {
            o.require(std::abs(rr.km->w1 - rr.arcsine.w1) <= 0.03,
                      "c=0.95 replicate " + std::to_string(rr.replicate) + ": |km - arcsine| W1 " +
                          std::to_string(std::abs(rr.km->w1 - rr.arcsine.w1)));
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs <= 240.0, "runtime " + std::to_string(secs) + "s exceeds 4min");
    o.detail << "c=0.5 median km W1 " << r.cells[0].median_km_w1 << " vs arcsine "
             << r.cells[0].median_w1 << "; c=0.95 km " << r.cells[1].median_km_w1 << " vs arcsine "
             << r.cells[1].median_w1 << ", " << secs << "s";
    return o;
}

// --------------------------------------------------------------------------
// 7. Determinism across thread counts.
Outcome criterion7() {
    Outcome o;
    RunConfig cfg;
    cfg.mode = RunMode::theorem;
    cfg.schedule = {Dims::checked(2000, 999, 999)};
    cfg.replicates = 4;
    cfg.seed = 42;
    cfg.kmax = 4;

    std::string json_ref, csv_ref, hist_ref;
    for (int threads : {1, 2, 8}) {
        cfg.threads = threads;
        const RunResult r = run(cfg);
        const std::string js = to_json_string(r);
        const std::string csv = replicates_csv(r);
        const std::string hist = histograms_csv(r);
        if (threads == 1) {
            json_ref = js;
            csv_ref = csv;
            hist_ref = hist;
        } else {
            o.require(js == json_ref, "JSON differs at threads=" + std::to_string(threads));
            o.require(csv == csv_ref, "CSV differs at threads=" + std::to_string(threads));
            o.require(hist == hist_ref,
                      "histogram CSV differs at threads=" + std::to_string(threads));
        }
    }
    o.detail << "byte-identical JSON/CSV under 1, 2, 8 threads";
    return o;
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {1, "exact identity suite", criterion1},
        {2, "I_k oracle suite", criterion2},
        {3, "theorem at desk scale", criterion3},
        {4, "structural identities on small instances", criterion4},
        {5, "dependence suite", criterion5},
        {6, "conjecture scan", criterion6},
        {7, "determinism across thread counts", criterion7},
    };
    int failures = 0;
    for (const Entry& e : entries) {
        Outcome o;
        try {
            o = e.fn();
        } catch (const std::exception& ex) {
            o.passed = false;
            o.detail << "exception: " << ex.what();
        }
        std::printf("%s criterion %d: %s (%s)\n", o.passed ? "PASS" : "FAIL", e.id, e.name,
                    o.detail.str().c_str());
        std::fflush(stdout);
        failures += o.passed ? 0 : 1;
    }
    return failures;
}
