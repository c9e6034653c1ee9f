#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "blockspec/harness.hpp"

namespace blockspec {

namespace {

using json = nlohmann::ordered_json;

// Fixed-format double so artifacts are byte-stable: shortest text that
// round-trips is locale-independent via %.17g with the C locale.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

json dims_json(const Dims& d) {
    return json{{"n", d.n}, {"p", d.p}, {"q", d.q}, {"c", d.c()}};
}

json fit_json(const FitReport& f) {
    json gaps = json::array();
    for (const auto& g : f.moment_gaps) {
        gaps.push_back(json{{"k", g.k},
                            {"empirical", g.empirical},
                            {"analytic", g.analytic},
                            {"gap", g.gap}});
    }
    return json{{"law", f.law}, {"params", f.params}, {"ks", f.ks}, {"w1", f.w1},
                {"moment_gaps", std::move(gaps)}};
}

json config_json(const RunConfig& cfg) {
    json j{{"mode", mode_name(cfg.mode)},
           {"replicates", cfg.replicates},
           {"seed", cfg.seed},
           {"kmax", cfg.kmax},
           {"bins", cfg.flags.bins},
           {"denominator_doubled", cfg.flags.denominator_doubled},
           {"fixed_range_histogram", cfg.flags.fixed_range_histogram}};
    if (cfg.mode == RunMode::theorem || cfg.mode == RunMode::single) {
        json sched = json::array();
        const auto cells =
            cfg.schedule.empty() && cfg.mode == RunMode::theorem
                ? RunConfig::default_theorem_schedule()
                : cfg.schedule;
        for (const Dims& d : cells) sched.push_back(dims_json(d));
        j["schedule"] = std::move(sched);
    }
    if (cfg.mode == RunMode::conjecture) {
        j["c_grid"] = cfg.c_grid.empty() ? RunConfig::default_c_grid() : cfg.c_grid;
        j["n"] = cfg.conjecture_n;
    }
    if (cfg.mode == RunMode::dependence) {
        j["data"] = cfg.data_path;
        j["split_p"] = cfg.split_p;
    }
    return j;
}

// Pooled per-cell histogram plus the analytic overlay used in the table.
struct CellHistogram {
    Histogram hist;
    std::string analytic_law;
    std::function<double(double)> analytic_pdf;
};

std::optional<CellHistogram> cell_histogram(const RunResult& r, int cell) {
    std::vector<double> pooled;
    for (const auto& rr : r.replicates) {
        if (rr.cell != cell) continue;
        pooled.insert(pooled.end(), rr.eigenvalues.begin(), rr.eigenvalues.end());
    }
    if (pooled.empty()) return std::nullopt;
    const ESD esd(std::move(pooled));
    CellHistogram ch;
    const int bins = r.config.flags.bins;
    ch.hist = r.config.flags.fixed_range_histogram ? histogram(esd, bins, 0.0, 2.0)
                                                   : histogram(esd, bins);
    if (r.config.mode == RunMode::conjecture && r.cells[cell].km_pooled) {
        const KestenMcKayFamily fam = *r.cells[cell].km_pooled;
        ch.analytic_law = "kesten-mckay";
        ch.analytic_pdf = [fam](double x) { return fam.pdf(x); };
    } else {
        ch.analytic_law = "arcsine";
        ch.analytic_pdf = [](double x) { return arcsine_pdf(x); };
    }
    return ch;
}

} // namespace

std::string to_json_string(const RunResult& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = json{{"name", "blockspec"}, {"version", kToolVersion}};
    j["config"] = config_json(r.config);

    if (!r.cells.empty()) {
        json cells = json::array();
        for (const auto& c : r.cells) {
            json jc = dims_json(c.dims);
            jc["cell"] = c.cell;
            jc["mean_ks"] = c.mean_ks;
            jc["max_ks"] = c.max_ks;
            jc["mean_w1"] = c.mean_w1;
            jc["median_w1"] = c.median_w1;
            jc["max_moment_gap"] = c.max_moment_gap;
            if (c.median_km_w1 >= 0.0) jc["median_km_w1"] = c.median_km_w1;
            if (c.km_pooled) {
                jc["km_pooled"] =
                    json{{"m", c.km_pooled->m}, {"u", c.km_pooled->u}, {"v", c.km_pooled->v}};
            }
            cells.push_back(std::move(jc));
        }
        j["cells"] = std::move(cells);
    }

    if (!r.replicates.empty()) {
        json reps = json::array();
        for (const auto& rr : r.replicates) {
            json jr = dims_json(rr.dims);
            jr["cell"] = rr.cell;
            jr["replicate"] = rr.replicate;
            jr["seed"] = rr.seed;
            jr["min_eig"] = rr.min_eig;
            jr["max_eig"] = rr.max_eig;
            jr["moment1"] = rr.moment1;
            jr["symmetry_defect"] = rr.symmetry_defect;
            jr["arcsine"] = fit_json(rr.arcsine);
            if (rr.km) jr["km"] = fit_json(*rr.km);
            if (rr.km_params) {
                jr["km_params"] = json{{"m", rr.km_params->m},
                                       {"u", rr.km_params->u},
                                       {"v", rr.km_params->v}};
            }
            if (!rr.km_error.empty()) jr["km_error"] = rr.km_error;
            reps.push_back(std::move(jr));
        }
        j["replicates"] = std::move(reps);
    }

    if (!r.checks.empty()) {
        json checks = json::array();
        for (const auto& c : r.checks) {
            checks.push_back(json{{"name", c.name},
                                  {"passed", c.passed},
                                  {"observed", c.observed},
                                  {"bound", c.bound}});
        }
        j["checks"] = std::move(checks);
    }

    if (r.dependence) {
        const auto& d = *r.dependence;
        const double selected =
            r.config.flags.denominator_doubled ? d.dep_doubled : d.dep_standard;
        j["dependence"] = json{{"d", d.d},         {"n", d.n},
                               {"p", d.p},         {"q", d.q},
                               {"dep", selected},
                               {"dep_standard", d.dep_standard}, {"dep_doubled", d.dep_doubled},
                               {"adjusted_rv", d.adjusted_rv}};
    }
    return j.dump(2) + "\n";
}

std::string replicates_csv(const RunResult& r) {
    std::ostringstream os;
    os << "n,p,q,c,seed,replicate,law,param1,param2,param3,ks,w1";
    for (int k = 1; k <= r.config.kmax; ++k) os << ",gap_k" << k;
    os << "\r\n";
    auto row = [&](const ReplicateResult& rr, const FitReport& f) {
        os << rr.dims.n << ',' << rr.dims.p << ',' << rr.dims.q << ',' << fmt(rr.dims.c()) << ','
           << rr.seed << ',' << rr.replicate << ',' << csv_quote(f.law);
        for (int i = 0; i < 3; ++i) {
            os << ',';
            if (i < (int)f.params.size()) os << fmt(f.params[i]);
        }
        os << ',' << fmt(f.ks) << ',' << fmt(f.w1);
        for (const auto& g : f.moment_gaps) os << ',' << fmt(g.gap);
        os << "\r\n";
    };
    for (const auto& rr : r.replicates) {
        row(rr, rr.arcsine);
        if (rr.km) row(rr, *rr.km);
    }
    if (r.dependence) {
        // Dependence runs carry no replicate rows; summary goes in JSON.
    }
    return os.str();
}

std::string histograms_csv(const RunResult& r) {
    std::ostringstream os;
    os << "cell,n,p,q,c,bin_lo,bin_hi,x_mid,empirical_density,analytic_law,analytic_density\r\n";
    for (const auto& c : r.cells) {
        const auto ch = cell_histogram(r, c.cell);
        if (!ch) continue;
        const auto& h = ch->hist;
        for (std::size_t b = 0; b + 1 < h.edges.size(); ++b) {
            const double mid = 0.5 * (h.edges[b] + h.edges[b + 1]);
            os << c.cell << ',' << c.dims.n << ',' << c.dims.p << ',' << c.dims.q << ','
               << fmt(c.dims.c()) << ',' << fmt(h.edges[b]) << ',' << fmt(h.edges[b + 1]) << ','
               << fmt(mid) << ',' << fmt(h.densities[b]) << ',' << csv_quote(ch->analytic_law)
               << ',' << fmt(ch->analytic_pdf(mid)) << "\r\n";
        }
    }
    return os.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace

void emit(const RunResult& r) {
    if (r.config.out_dir.empty()) throw IoError("emit: empty output directory");
    const std::filesystem::path dir(r.config.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    if (r.config.write_json) write_file(dir / "result.json", to_json_string(r));
    if (r.config.write_csv) {
        write_file(dir / "replicates.csv", replicates_csv(r));
        if (!r.cells.empty()) write_file(dir / "histograms.csv", histograms_csv(r));
    }
    // Timing is intentionally outside the bit-stable artifacts.
    write_file(dir / "timing.log", "wall_ms " + fmt(r.wall_ms) + "\n");
}

Matrix read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open data file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError("non-numeric CSV cell '" + cell + "' in " + path);
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IoError("ragged CSV rows in " + path);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().empty()) throw IoError("empty CSV matrix in " + path);
    Matrix m((int)rows.size(), (int)rows.front().size());
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<Dims> read_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open schedule file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("schedule parse error in " + path + ": " + e.what());
    }
    if (!j.is_array()) throw ConfigError("schedule must be a JSON array of {n,p[,q]}");
    std::vector<Dims> out;
    for (const auto& item : j) {
        if (!item.contains("n") || !item.contains("p")) {
            throw ConfigError("schedule entries need fields n and p");
        }
        const int n = item["n"].get<int>();
        const int p = item["p"].get<int>();
        const int q = item.contains("q") ? item["q"].get<int>() : p;
        out.push_back(Dims::checked(n, p, q));
    }
    if (out.empty()) throw ConfigError("schedule file contains no entries");
    return out;
}

} // namespace blockspec
