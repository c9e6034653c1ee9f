#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blockspec/harness.hpp"

namespace {

using namespace blockspec;

struct CliOptions {
    int n = 0;
    int p = 0;
    int q = 0;
    std::string schedule_path;
    std::vector<double> c_grid;
    int replicates = 1;
    uint64_t seed = 0;
    int kmax = 4;
    int bins = 50;
    std::string out_dir = "out";
    std::string format = "json,csv";
    bool denominator_doubled = false;
    std::string data_path;
};

void add_common(CLI::App* sub, CliOptions& o) {
    sub->add_option("--replicates", o.replicates, "Monte Carlo replicates per cell")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "master seed for the counter-based RNG");
    sub->add_option("--kmax", o.kmax, "highest moment order in fit reports")
        ->check(CLI::PositiveNumber);
    sub->add_option("--bins", o.bins, "histogram bins")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--format", o.format, "comma list of artifacts: json,csv");
    sub->add_flag("--denominator-doubled", o.denominator_doubled,
                  "divide the dependence coefficient by 2(2-sqrt 2)min(p,q)");
}

RunConfig build_config(RunMode mode, const CliOptions& o) {
    RunConfig cfg;
    cfg.mode = mode;
    cfg.replicates = o.replicates;
    cfg.seed = o.seed;
    cfg.kmax = o.kmax;
    cfg.out_dir = o.out_dir;
    cfg.flags.bins = o.bins;
    cfg.flags.denominator_doubled = o.denominator_doubled;
    cfg.write_json = o.format.find("json") != std::string::npos;
    cfg.write_csv = o.format.find("csv") != std::string::npos;
    if (!cfg.write_json && !cfg.write_csv) {
        throw ConfigError("--format must include json and/or csv");
    }

    if (mode == RunMode::theorem || mode == RunMode::single) {
        if (!o.schedule_path.empty()) {
            cfg.schedule = read_schedule(o.schedule_path);
        } else if (o.n > 0 || o.p > 0) {
            if (o.n <= 0 || o.p <= 0) throw ConfigError("--n and --p must be given together");
            const int q = o.q > 0 ? o.q : o.p;
            cfg.schedule = {Dims::checked(o.n, o.p, q)};
        } else if (mode == RunMode::single) {
            throw ConfigError("single mode requires --n and --p (or --schedule)");
        }
    }
    if (mode == RunMode::conjecture) {
        if (!o.c_grid.empty()) cfg.c_grid = o.c_grid;
        if (o.n > 0) cfg.conjecture_n = o.n;
    }
    if (mode == RunMode::dependence) {
        cfg.data_path = o.data_path;
        cfg.split_p = o.p;
    }
    return cfg;
}

void print_summary(const RunResult& r) {
    std::printf("mode=%s cells=%zu replicates=%zu wall_ms=%.0f\n",
                mode_name(r.config.mode).c_str(), r.cells.size(), r.replicates.size(), r.wall_ms);
    for (const auto& c : r.cells) {
        std::printf("  cell %d: n=%d p=%d q=%d c=%.6g median_w1=%.6g mean_ks=%.6g", c.cell,
                    c.dims.n, c.dims.p, c.dims.q, c.dims.c(), c.median_w1, c.mean_ks);
        if (c.median_km_w1 >= 0.0) std::printf(" median_km_w1=%.6g", c.median_km_w1);
        if (c.km_pooled) {
            std::printf(" km=(m=%.4g,u=%.4g,v=%.4g)", c.km_pooled->m, c.km_pooled->u,
                        c.km_pooled->v);
        }
        std::printf("\n");
    }
    for (const auto& chk : r.checks) {
        std::printf("  [%s] %s (observed=%.3g bound=%.3g)\n", chk.passed ? "PASS" : "FAIL",
                    chk.name.c_str(), chk.observed, chk.bound);
    }
    if (r.dependence) {
        const auto& d = *r.dependence;
        std::printf("  d=%d n=%d p=%d q=%d dep=%.10g dep_doubled=%.10g adjusted_rv=%.10g\n", d.d,
                    d.n, d.p, d.q, d.dep_standard, d.dep_doubled, d.adjusted_rv);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"blockspec: spectra of block-rescaled empirical covariance matrices"};
    app.require_subcommand(1);
    CliOptions o;

    auto* theorem = app.add_subcommand("theorem", "arcsine-limit convergence study (p = q)");
    theorem->add_option("--n", o.n, "sample size for a one-cell study");
    theorem->add_option("--p", o.p, "block size for a one-cell study");
    theorem->add_option("--schedule", o.schedule_path, "JSON schedule of {n,p[,q]} cells");
    add_common(theorem, o);

    auto* conjecture = app.add_subcommand("conjecture", "Kesten-McKay fit scan over c = d/n");
    conjecture->add_option("--n", o.n, "sample size for every grid cell");
    conjecture->add_option("--c-grid", o.c_grid, "grid of c values in (0,1)");
    add_common(conjecture, o);

    auto* single = app.add_subcommand("single", "one (n,p,q) cell, arcsine comparison");
    single->add_option("--n", o.n, "sample size");
    single->add_option("--p", o.p, "first block size");
    single->add_option("--q", o.q, "second block size (defaults to p)");
    single->add_option("--schedule", o.schedule_path, "JSON schedule with exactly one cell");
    add_common(single, o);

    auto* selftest = app.add_subcommand("laws-selftest", "analytic-law identity checks");
    add_common(selftest, o);

    auto* dependence = app.add_subcommand("dependence", "dependence coefficients of a data matrix");
    dependence->add_option("--data", o.data_path, "CSV of reals, rows = coordinates")->required();
    dependence->add_option("--p", o.p, "row index splitting the two blocks")->required();
    add_common(dependence, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        RunMode mode = RunMode::theorem;
        if (conjecture->parsed()) mode = RunMode::conjecture;
        if (single->parsed()) mode = RunMode::single;
        if (selftest->parsed()) mode = RunMode::laws_selftest;
        if (dependence->parsed()) mode = RunMode::dependence;

        const RunConfig cfg = build_config(mode, o);
        const RunResult result = run(cfg);
        emit(result);
        print_summary(result);
        return 0;
    } catch (const blockspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
