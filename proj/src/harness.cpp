#include "blockspec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>

#include "blockspec/laws.hpp"
#include "blockspec/quadrature.hpp"

namespace blockspec {

std::string mode_name(RunMode m) {
    switch (m) {
        case RunMode::theorem: return "theorem";
        case RunMode::conjecture: return "conjecture";
        case RunMode::single: return "single";
        case RunMode::laws_selftest: return "laws-selftest";
        case RunMode::dependence: return "dependence";
    }
    return "?";
}

std::vector<Dims> RunConfig::default_theorem_schedule() {
    std::vector<Dims> s;
    for (int n : {250, 500, 1000, 2000, 4000}) {
        const int p = n / 2 - 1;
        s.push_back(Dims::checked(n, p, p));
    }
    return s;
}

std::vector<double> RunConfig::default_c_grid() { return {0.2, 0.4, 0.6, 0.8, 0.95}; }

namespace {

int resolve_threads(const RunConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    if (const char* env = std::getenv("BLOCKSPEC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return (int)v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? (int)hw : 1;
}

// Runs fn(0..count-1) on up to `threads` workers. Tasks land in caller-indexed
// slots, so results are identical whatever the interleaving.
void parallel_tasks(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mu;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

uint64_t replicate_key(int cell, int replicate) {
    return ((uint64_t)(uint32_t)cell << 32) | (uint32_t)replicate;
}

ReplicateResult run_replicate(const RunConfig& cfg, int cell, const Dims& dims, int rep,
                              bool fit_km) {
    ReplicateResult rr;
    rr.cell = cell;
    rr.replicate = rep;
    rr.dims = dims;
    rr.seed = cfg.seed;

    const GaussianBlockSample s = sample(dims, cfg.seed, replicate_key(cell, rep));
    const BlockCovariance bc = gram_blocks(s);
    const SymMatrix r = rescaled_sym(bc);
    const Vector evals = sym_eigvalues_ascending(r);
    rr.eigenvalues.assign(evals.data(), evals.data() + evals.size());
    const ESD esd(rr.eigenvalues);

    rr.min_eig = esd.min();
    rr.max_eig = esd.max();
    rr.moment1 = esd_moment(esd, 1);
    if (dims.p == dims.q) {
        const int d = esd.dim();
        double defect = 0.0;
        for (int i = 0; i < d; ++i) {
            defect = std::max(defect,
                              std::abs(esd.values()[i] + esd.values()[d - 1 - i] - 2.0));
        }
        rr.symmetry_defect = defect;
    }

    rr.arcsine = fit_report(esd, SpectralLaw::arcsine(), cfg.kmax);

    if (fit_km) {
        MomentVector mom;
        mom.values.resize(5);
        mom.values[0] = 1.0;
        for (int k = 1; k <= 4; ++k) mom.values[k] = esd_moment(esd, k);
        try {
            const KestenMcKayFamily fam = km_fit(mom);
            rr.km_params = fam;
            rr.km = fit_report(esd, SpectralLaw::kesten_mckay(fam), cfg.kmax);
        } catch (const FitFailure& e) {
            rr.km_error = e.what();
        }
    }
    return rr;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

CellAggregate aggregate_cell(int cell, const Dims& dims,
                             const std::vector<const ReplicateResult*>& reps) {
    CellAggregate agg;
    agg.cell = cell;
    agg.dims = dims;
    std::vector<double> w1s, km_w1s;
    for (const auto* rr : reps) {
        agg.mean_ks += rr->arcsine.ks;
        agg.max_ks = std::max(agg.max_ks, rr->arcsine.ks);
        agg.mean_w1 += rr->arcsine.w1;
        w1s.push_back(rr->arcsine.w1);
        for (const auto& g : rr->arcsine.moment_gaps) {
            agg.max_moment_gap = std::max(agg.max_moment_gap, g.gap);
        }
        if (rr->km) km_w1s.push_back(rr->km->w1);
    }
    if (!reps.empty()) {
        agg.mean_ks /= (double)reps.size();
        agg.mean_w1 /= (double)reps.size();
    }
    agg.median_w1 = median_of(w1s);
    if (!km_w1s.empty()) agg.median_km_w1 = median_of(km_w1s);
    return agg;
}

RunResult run_cells(const RunConfig& cfg, const std::vector<Dims>& cells, bool fit_km) {
    RunResult out;
    out.config = cfg;
    const int n_tasks = (int)cells.size() * cfg.replicates;
    out.replicates.resize(n_tasks);
    parallel_tasks(n_tasks, resolve_threads(cfg), [&](int task) {
        const int cell = task / cfg.replicates;
        const int rep = task % cfg.replicates;
        out.replicates[task] = run_replicate(cfg, cell, cells[cell], rep, fit_km);
    });
    for (int c = 0; c < (int)cells.size(); ++c) {
        std::vector<const ReplicateResult*> reps;
        for (int r = 0; r < cfg.replicates; ++r) reps.push_back(&out.replicates[c * cfg.replicates + r]);
        CellAggregate agg = aggregate_cell(c, cells[c], reps);
        if (fit_km) {
            // Cell-level fit on pooled moments, used for the histogram table.
            MomentVector mom;
            mom.values.assign(5, 0.0);
            mom.values[0] = 1.0;
            double total = 0.0;
            for (const auto* rr : reps) {
                for (double v : rr->eigenvalues) {
                    double pw = v;
                    for (int k = 1; k <= 4; ++k) {
                        mom.values[k] += pw;
                        pw *= v;
                    }
                }
                total += (double)rr->eigenvalues.size();
            }
            for (int k = 1; k <= 4; ++k) mom.values[k] /= total;
            try {
                agg.km_pooled = km_fit(mom);
            } catch (const FitFailure&) {
            }
        }
        out.cells.push_back(std::move(agg));
    }
    return out;
}

} // namespace

RunResult run_theorem_study(const RunConfig& cfg) {
    std::vector<Dims> cells = cfg.schedule.empty() ? RunConfig::default_theorem_schedule()
                                                   : cfg.schedule;
    double prev_c = 0.0;
    for (const Dims& d : cells) {
        if (d.p != d.q) throw ConfigError("theorem mode requires p = q in every schedule entry");
        if (d.c() <= prev_c) {
            throw ConfigError("theorem mode requires 2p/n increasing along the schedule");
        }
        prev_c = d.c();
    }
    return run_cells(cfg, cells, /*fit_km=*/false);
}

RunResult run_conjecture_scan(const RunConfig& cfg) {
    const std::vector<double> grid = cfg.c_grid.empty() ? RunConfig::default_c_grid() : cfg.c_grid;
    std::vector<Dims> cells;
    for (double c : grid) {
        if (!(c > 0.0 && c < 1.0)) throw ConfigError("conjecture grid values must lie in (0,1)");
        const int n = cfg.conjecture_n;
        const int p = (int)std::lround(c * n / 2.0);
        cells.push_back(Dims::checked(n, p, p));
    }
    return run_cells(cfg, cells, /*fit_km=*/true);
}

RunResult run_single(const RunConfig& cfg) {
    if (cfg.schedule.size() != 1) throw ConfigError("single mode takes exactly one (n,p,q) cell");
    return run_cells(cfg, cfg.schedule, /*fit_km=*/false);
}

RunResult run_dependence(const RunConfig& cfg) {
    if (cfg.data_path.empty()) throw ConfigError("dependence mode requires --data <csv>");
    if (cfg.split_p < 1) throw ConfigError("dependence mode requires --p (block split)");
    const Matrix z = read_csv_matrix(cfg.data_path);
    const BlockCovariance bc = centered_covariance(z, cfg.split_p);
    const StandardizedMatrix sm = StandardizedMatrix::from_blocks(bc);
    RunResult out;
    out.config = cfg;
    DependenceReport rep;
    rep.d = (int)z.rows();
    rep.n = (int)z.cols();
    rep.p = sm.p;
    rep.q = sm.q;
    rep.dep_standard = dep_coefficient(sm, DepDenominator::standard);
    rep.dep_doubled = dep_coefficient(sm, DepDenominator::doubled);
    rep.adjusted_rv = adjusted_rv(sm);
    out.dependence = rep;
    return out;
}

RunResult run_laws_selftest(const RunConfig& cfg) {
    RunResult out;
    out.config = cfg;
    auto& checks = out.checks;
    auto add = [&](const std::string& name, double observed, double bound) {
        checks.push_back(CheckResult{name, observed <= bound, observed, bound});
    };

    {
        bool all = true;
        for (int k = 0; k <= 20; ++k) all = all && identity_check(k).equal;
        checks.push_back(CheckResult{"identity_check k<=20 exact", all, all ? 0.0 : 1.0, 0.0});
    }
    {
        bool all = true;
        for (int k = 0; k <= std::min(25, std::max(12, cfg.kmax)); ++k) {
            all = all && (block_moment_limit_exact(k) == arcsine_moment_exact(k));
        }
        checks.push_back(
            CheckResult{"block_moment_limit = arcsine_moment k<=12 exact", all, all ? 0.0 : 1.0, 0.0});
    }
    {
        double worst = 0.0;
        for (double t : {0.3, 0.6, 0.9}) {
            for (int k = 1; k <= 8; ++k) {
                worst = std::max(worst,
                                 std::abs(ik_closed(t, k) - ik_quadrature(FisherLSD(1.0, t), k)));
            }
        }
        add("ik_closed vs ik_quadrature (s=1; t in {0.3,0.6,0.9}; k<=8)", worst, 1e-7);
    }
    {
        double worst = 0.0;
        for (int k = 1; k <= 8; ++k) {
            worst = std::max(worst, std::abs(ik_closed(1.0 - 1e-6, k) - ik_limit(k)));
        }
        add("ik_closed(t->1) vs ik_limit (k<=8)", worst, 1e-4);
    }
    {
        double worst = 0.0;
        for (double s : {0.5, 1.0, 2.0}) {
            for (double t : {0.3, 0.6, 0.9}) {
                const FisherLSD law(s, t);
                const double i1 = t / (s + t);
                const double i2 = t * t * (s * s + s + t) / std::pow(s + t, 3);
                worst = std::max(worst, std::abs(ik_quadrature(law, 1) - i1));
                worst = std::max(worst, std::abs(ik_quadrature(law, 2) - i2));
            }
        }
        add("ik_quadrature vs first-moment formulas on 3x3 (s,t) grid", worst, 1e-7);
    }
    {
        double worst = 0.0;
        for (int i = 1; i <= 100; ++i) {
            const double x = 2.0 * i / 101.0;
            const double byquad =
                integrate_endpoint_singular([](double y) { return arcsine_pdf(y); }, 0.0, x, 1e-12,
                                            4000)
                    .value;
            worst = std::max(worst, std::abs(arcsine_cdf(x) - byquad));
        }
        add("arcsine_cdf vs cumulative quadrature (100 points)", worst, 1e-9);
    }
    {
        const double mass =
            integrate_endpoint_singular([](double y) { return arcsine_pdf(y); }, 0.0, 2.0, 1e-12,
                                        4000)
                .value;
        add("arcsine pdf normalization", std::abs(mass - 1.0), 1e-8);
    }
    {
        double worst = 0.0;
        for (auto [s, t] : std::vector<std::pair<double, double>>{{1.0, 0.5}, {0.5, 0.3}, {1.0, 0.9}}) {
            const FisherLSD law(s, t);
            const double mass = integrate_endpoint_singular([&](double x) { return law.pdf(x); },
                                                            law.a(), law.b(), 1e-10, 4000)
                                    .value;
            worst = std::max(worst, std::abs(mass - 1.0));
        }
        add("fisher pdf normalization (s<=1 grid)", worst, 1e-7);
    }
    {
        const KestenMcKayFamily fam(3.0, 1.0, 0.5);
        const double mass = integrate_endpoint_singular([&](double x) { return fam.pdf(x); },
                                                        fam.support_lo(), fam.support_hi(), 1e-10,
                                                        4000)
                                .value;
        add("kesten-mckay pdf normalization (m=3,u=1,v=0.5)", std::abs(mass - 1.0), 1e-7);
    }
    return out;
}

RunResult run(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    RunResult out;
    switch (cfg.mode) {
        case RunMode::theorem: out = run_theorem_study(cfg); break;
        case RunMode::conjecture: out = run_conjecture_scan(cfg); break;
        case RunMode::single: out = run_single(cfg); break;
        case RunMode::laws_selftest: out = run_laws_selftest(cfg); break;
        case RunMode::dependence: out = run_dependence(cfg); break;
    }
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                      .count();
    return out;
}

} // namespace blockspec
