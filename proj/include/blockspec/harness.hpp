#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blockspec/dependence.hpp"
#include "blockspec/ensembles.hpp"
#include "blockspec/esd.hpp"

namespace blockspec {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "0.1.0";

enum class RunMode { theorem, conjecture, single, laws_selftest, dependence };

std::string mode_name(RunMode m);

struct RunFlags {
    bool denominator_doubled = false;
    bool fixed_range_histogram = true;  // theorem-mode histograms span exactly [0,2]
    int bins = 50;
};

struct RunConfig {
    RunMode mode = RunMode::theorem;
    std::vector<Dims> schedule;   // theorem / single cells; conjecture derives its own
    std::vector<double> c_grid;   // conjecture mode
    int conjecture_n = 2000;      // sample size used for conjecture cells
    int replicates = 1;
    uint64_t seed = 0;
    int kmax = 4;
    std::string out_dir;
    bool write_json = true;
    bool write_csv = true;
    RunFlags flags;
    int threads = 0;  // 0: take BLOCKSPEC_THREADS, else hardware concurrency
    std::string data_path;  // dependence mode input (CSV, rows = coordinates)
    int split_p = 0;        // dependence mode block split

    static std::vector<Dims> default_theorem_schedule();
    static std::vector<double> default_c_grid();
};

struct ReplicateResult {
    int cell = 0;
    int replicate = 0;
    Dims dims{};
    uint64_t seed = 0;
    double min_eig = 0.0;
    double max_eig = 0.0;
    double moment1 = 0.0;
    double symmetry_defect = 0.0;  // only meaningful when p == q
    FitReport arcsine;
    std::optional<FitReport> km;                 // conjecture mode
    std::optional<KestenMcKayFamily> km_params;  // conjecture mode
    std::string km_error;                        // set when the fit failed
    std::vector<double> eigenvalues;             // kept in memory, not serialized
};

struct CellAggregate {
    int cell = 0;
    Dims dims{};
    double mean_ks = 0.0;
    double max_ks = 0.0;
    double mean_w1 = 0.0;
    double median_w1 = 0.0;
    double max_moment_gap = 0.0;
    double median_km_w1 = -1.0;  // conjecture mode; -1 when absent
    std::optional<KestenMcKayFamily> km_pooled;  // fit on the pooled cell moments
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double observed = 0.0;  // the quantity compared against the bound
    double bound = 0.0;
};

struct DependenceReport {
    int d = 0, n = 0, p = 0, q = 0;
    double dep_standard = 0.0;
    double dep_doubled = 0.0;
    double adjusted_rv = 0.0;
};

struct RunResult {
    RunConfig config;
    std::vector<CellAggregate> cells;
    std::vector<ReplicateResult> replicates;
    std::vector<CheckResult> checks;           // laws-selftest mode
    std::optional<DependenceReport> dependence;
    double wall_ms = 0.0;  // excluded from the bit-stable artifacts
};

RunResult run(const RunConfig& cfg);
RunResult run_theorem_study(const RunConfig& cfg);
RunResult run_conjecture_scan(const RunConfig& cfg);
RunResult run_single(const RunConfig& cfg);
RunResult run_laws_selftest(const RunConfig& cfg);
RunResult run_dependence(const RunConfig& cfg);

/// Bit-stable serializations (doubles printed with max_digits10 significance).
std::string to_json_string(const RunResult& r);
std::string replicates_csv(const RunResult& r);
std::string histograms_csv(const RunResult& r);

/// Writes the requested artifacts plus a timing.log sidecar into cfg.out_dir.
void emit(const RunResult& r);

/// d x n matrix from a headerless CSV of reals (rows = coordinates).
Matrix read_csv_matrix(const std::string& path);

/// Schedule file: a JSON array of {"n":..,"p":..[,"q":..]} objects.
std::vector<Dims> read_schedule(const std::string& path);

} // namespace blockspec
