#include "hillbloch/commands.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hillbloch/galerkin.hpp"
#include "hillbloch/report.hpp"

namespace hillbloch {

namespace {

constexpr double pi = std::numbers::pi;

std::filesystem::path prepare(const RunConfig& cfg) {
    std::filesystem::path dir(cfg.output);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

// All files go through here, one at a time, after the computation is done.
void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << body;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json potential_info(const RunConfig& cfg, const MatrixPotential& p) {
    const MeanSpectrum ms = mean_spectrum(p);
    json mu = json::array();
    for (double v : ms.mu) mu.push_back(v);
    json info = {{"source", cfg.potential}, {"m", p.dim()}, {"degree", p.degree()}, {"mean_eigenvalues", mu}};
    if (cfg.seed) info["seed"] = *cfg.seed;
    return info;
}

}  // namespace

int spectrum_truncation(double lambda_max, int degree) {
    return static_cast<int>(std::ceil(std::sqrt(lambda_max) / (2.0 * pi))) + degree + 3;
}

void cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
    const MatrixPotential p = load_potential(cfg.potential, cfg.seed);
    const auto dir = prepare(cfg);
    SweepOptions opt;
    opt.K = cfg.K > 0 ? cfg.K : spectrum_truncation(cfg.lambda_max, p.degree());
    opt.grid_size = cfg.grid_size;
    opt.lambda_max = cfg.lambda_max;
    opt.workers = cfg.workers;

    const BandTable bt = sweep_bands(p, opt);
    const GapReport gaps = detect_gaps(refine_bands(p, bt, cfg.workers), bt.lambda_max, cfg.merge_tol);
    const GapCensus census = gap_census(finite_gap_condition(mean_spectrum(p), cfg.tol_sum), gaps);

    json doc;
    doc["potential"] = potential_info(cfg, p);
    doc["table"] = table_summary(bt);
    doc["gap_report"] = to_json(gaps);
    json edges = json::array();
    if (cfg.edge_check)
        for (const auto& e : cross_check_edges(p, bt, cfg.edge_check_max)) edges.push_back(to_json(e));
    doc["edge_checks"] = edges;
    doc["census"] = to_json(census);

    std::ostringstream csv, svg;
    write_bands_csv(csv, bt);
    write_bands_svg(svg, bt, gaps);
    write_file(dir / "bands.csv", csv.str());
    write_file(dir / "bands.svg", svg.str());
    write_file(dir / "gaps.json", dump(doc));
    write_file(dir / "census.json", dump({{"potential", doc["potential"]}, {"census", doc["census"]}}));

    log << "spectrum: K=" << opt.K << " bands=" << bt.bands << " gaps=" << gaps.gaps.size()
        << " unresolved=" << gaps.unresolved.size() << (bt.continuous ? "" : " (continuity bound exceeded)") << '\n';
    for (const auto& e : edges)
        log << "  edge check t=" << e["t"].get<double>() << " max deviation " << e["max_deviation"].get<double>()
            << (e["counts_match"].get<bool>() ? "" : " COUNT MISMATCH") << '\n';
}

void cmd_verify(const RunConfig& cfg, std::ostream& log) {
    const MatrixPotential p = load_potential(cfg.potential, cfg.seed);
    const auto dir = prepare(cfg);
    VerifyConfig vc;
    vc.t = cfg.t;
    vc.k_min = cfg.k_min;
    vc.k_max = cfg.k_max;
    vc.K = cfg.K;
    vc.c8 = cfg.c8;
    vc.calibrate = cfg.calibrate_c8;
    vc.n0 = cfg.n0;
    vc.census_pairs = cfg.census_pairs;
    vc.census_k_max = cfg.census_k_max;
    vc.seed = cfg.seed.value_or(1);
    vc.workers = cfg.workers;

    const VerifyReport rep = run_verification(p, vc);
    json doc;
    doc["potential"] = potential_info(cfg, p);
    doc["report"] = to_json(rep);
    write_file(dir / "verify.json", dump(doc));

    auto line = [&](const char* name, bool pass) { log << "  " << (pass ? "PASS " : "FAIL ") << name << '\n'; };
    log << "verify: K=" << rep.K << " c8=" << rep.c8.c8 << (rep.c8.calibrated ? " (calibrated)" : " (configured)") << '\n';
    line("residual decay", rep.residual_sup.pass);
    line("projection defect decay", rep.projection_sup.pass);
    line("leading term", rep.leading_pass);
    line("uniqueness", rep.census_pass);
}

void cmd_condition(const RunConfig& cfg, std::ostream& log) {
    const MatrixPotential p = load_potential(cfg.potential, cfg.seed);
    const auto dir = prepare(cfg);
    const FiniteGapVerdict v = finite_gap_condition(mean_spectrum(p), cfg.tol_sum);
    json doc;
    doc["potential"] = potential_info(cfg, p);
    doc["tol_sum"] = cfg.tol_sum;
    doc["verdict"] = to_json(v);
    write_file(dir / "condition.json", dump(doc));
    log << "condition: " << (v.holds ? "holds" : "does not hold") << " (" << v.reason << ")\n";
}

void cmd_oracle_check(const RunConfig& cfg, std::ostream& log) {
    const MatrixPotential p = load_potential(cfg.potential, cfg.seed);
    const auto dir = prepare(cfg);
    const int K = cfg.K > 0 ? cfg.K : 64;
    const std::size_t count = static_cast<std::size_t>(cfg.oracle_count);
    const auto values = galerkin_eigenvalues(p, BlochParams(cfg.t, K));
    if (values.size() <= count) throw ConfigError("oracle_count exceeds the Galerkin basis size");

    const double lo = values.front() - 1.0;
    const double hi = 0.5 * (values[count - 1] + values[count]);
    const QuasimomentumRoots qr = find_eigenvalues(p, cfg.t, {lo, hi});
    std::vector<double> roots;
    for (const auto& r : qr.roots)
        for (int c = 0; c < r.multiplicity; ++c) roots.push_back(r.lambda);

    json cmp = json::array();
    double worst = 0.0;
    const std::size_t n = std::min(count, roots.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double dev = std::abs(values[i] - roots[i]);
        worst = std::max(worst, dev);
        cmp.push_back({{"index", i + 1}, {"galerkin", values[i]}, {"oracle", roots[i]}, {"deviation", dev}});
    }
    const bool agree = roots.size() == count && worst <= 1e-6;
    json doc;
    doc["potential"] = potential_info(cfg, p);
    doc["K"] = K;
    doc["t"] = qr.t;
    doc["tolerance"] = 1e-6;
    doc["status"] = agree ? "PASS" : "FAIL";
    doc["max_deviation"] = worst;
    doc["comparison"] = cmp;
    doc["oracle"] = to_json(qr);
    write_file(dir / "oracle.json", dump(doc));
    log << "oracle-check: " << (agree ? "PASS" : "FAIL") << " max deviation " << worst << " over " << n
        << " eigenvalues\n";
}

}  // namespace hillbloch
