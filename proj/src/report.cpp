#include "hillbloch/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

namespace hillbloch {

namespace {

constexpr double pi = std::numbers::pi;

json interval(double lo, double hi) { return json::array({lo, hi}); }

json triple(const std::optional<std::array<std::size_t, 3>>& a) {
    if (!a) return nullptr;
    return json::array({(*a)[0], (*a)[1], (*a)[2]});
}

json optional_number(const std::optional<double>& x) {
    if (!x) return nullptr;
    return *x;
}

}  // namespace

json to_json(const DecayReport& r) {
    json samples = json::array();
    for (const auto& [k, v] : r.samples) samples.push_back({{"k", k}, {"r", v}});
    return {{"pass", r.pass},
            {"exact", r.exact},
            {"slope", optional_number(r.slope)},
            {"intercept", optional_number(r.intercept)},
            {"c_hat", r.c_hat},
            {"c_hat_upper", r.c_hat_upper},
            {"stable", r.stable},
            {"samples", samples}};
}

json to_json(const ConstantFit& f) {
    return {{"c_hat", f.c_hat}, {"c_hat_upper", f.c_hat_upper}, {"stable", f.stable}};
}

json to_json(const VerifyReport& r) {
    const auto& c = r.config;
    json j;
    j["config"] = {{"t", c.t},
                   {"k_min", c.k_min},
                   {"k_max", c.k_max},
                   {"K", r.K},
                   {"n0", c.n0},
                   {"census_pairs", c.census_pairs},
                   {"census_k_max", c.census_k_max},
                   {"seed", c.seed}};
    j["c8"] = {{"value", r.c8.c8}, {"calibrated", r.c8.calibrated}, {"max_ratio", r.c8.max_ratio}};

    json per_j = json::array();
    for (std::size_t i = 0; i < r.residual_by_j.size(); ++i) {
        json e = to_json(r.residual_by_j[i]);
        e["j"] = i + 1;
        per_j.push_back(e);
    }
    j["residual"] = {{"check", "eigenvalue residual decays like ln k / k"},
                     {"status", r.residual_sup.pass ? "PASS" : "FAIL"},
                     {"sup_over_j", to_json(r.residual_sup)},
                     {"per_j", per_j}};
    j["projection"] = {{"check", "projection defect decays like ln k / k"},
                       {"status", r.projection_sup.pass ? "PASS" : "FAIL"},
                       {"sup_over_j", to_json(r.projection_sup)}};

    json lead = json::array();
    for (const auto& s : r.leading_samples) lead.push_back({{"k", s.k}, {"distance", s.value}, {"alpha", s.scale}});
    j["leading_term"] = {{"check", "distance to the leading term is at most c * alpha_k"},
                         {"status", r.leading_pass ? "PASS" : "FAIL"},
                         {"fit", to_json(r.leading_fit)},
                         {"samples", lead}};

    json census = json::array();
    std::size_t bad = 0;
    for (const auto& e : r.census) {
        if (e.count != 1) ++bad;
        census.push_back({{"k", e.k}, {"t", e.t}, {"j", e.j + 1}, {"count", e.count}, {"distance", e.distance},
                          {"alpha", e.alpha}});
    }
    j["uniqueness"] = {{"check", "exactly one eigenvalue within eps_k of the unperturbed level"},
                       {"status", r.census_pass ? "PASS" : "FAIL"},
                       {"cases", r.census.size()},
                       {"violations", bad},
                       {"distance_fit", to_json(r.census_fit)},
                       {"samples", census}};
    json skipped = json::array();
    for (auto s : r.skipped_j) skipped.push_back(s + 1);
    j["non_simple_j"] = skipped;
    return j;
}

json to_json(const GapReport& r) {
    json bands = json::array(), spectrum = json::array(), gaps = json::array(), unresolved = json::array();
    for (const auto& b : r.bands)
        bands.push_back({{"index", b.index + 1}, {"interval", interval(b.lo, b.hi)}, {"t_min", b.t_lo}, {"t_max", b.t_hi}});
    for (const auto& s : r.spectrum) spectrum.push_back(interval(s.lo, s.hi));
    for (const auto& g : r.gaps) gaps.push_back({{"interval", interval(g.lo, g.hi)}, {"width", g.width()}});
    for (const auto& g : r.unresolved) unresolved.push_back({{"interval", interval(g.lo, g.hi)}, {"width", g.width()}});
    return {{"lambda_min", r.lambda_min}, {"lambda_max", r.lambda_max}, {"merge_tol", r.merge_tol},
            {"gap_count", r.gaps.size()}, {"gaps", gaps},   {"unresolved", unresolved},
            {"spectrum", spectrum},       {"bands", bands}};
}

json to_json(const FiniteGapVerdict& v) {
    return {{"holds", v.holds},
            {"simple_count", v.simple_count},
            {"witness", triple(v.witness)},
            {"violation", triple(v.violation)},
            {"violated_j", triple(v.violated_j)},
            {"common_sum", optional_number(v.common_sum)},
            {"reason", v.reason}};
}

json to_json(const GapCensus& c) {
    json table = json::array();
    for (const auto& g : c.gaps.gaps) table.push_back({{"position", 0.5 * (g.lo + g.hi)}, {"width", g.width()}});
    return {{"label", c.label},
            {"condition", to_json(c.verdict)},
            {"largest_gap_lower_half", c.largest_lower},
            {"largest_gap_upper_half", c.largest_upper},
            {"upper_gaps_smaller", c.upper_smaller},
            {"vacuous", c.vacuous},
            {"unresolved_count", c.gaps.unresolved.size()},
            {"h_empirical", c.h_empirical},
            {"highest_gap_midpoint", optional_number(c.highest_gap_midpoint)},
            {"widths", table}};
}

json to_json(const EdgeCheck& e) {
    return {{"t", e.t},
            {"compared", e.compared},
            {"max_deviation", e.max_deviation},
            {"counts_match", e.counts_match},
            {"note", e.note}};
}

json to_json(const QuasimomentumRoots& q) {
    json roots = json::array();
    for (const auto& r : q.roots)
        roots.push_back({{"lambda", r.lambda},
                         {"multiplicity", r.multiplicity},
                         {"eigen_distance", r.eigen_distance},
                         {"sigma_min", r.sigma_min}});
    return {{"t", q.t},
            {"bracket", interval(q.bracket.first, q.bracket.second)},
            {"root_count", q.root_count},
            {"galerkin_count", q.galerkin_count},
            {"galerkin_K", q.galerkin_K},
            {"status", q.status == RootStatus::Ok ? "ok" : "suspected_missed_root"},
            {"note", q.note},
            {"roots", roots}};
}

json table_summary(const BandTable& bt) {
    return {{"K", bt.K},
            {"grid_size", bt.t.size()},
            {"bands", bt.bands},
            {"lambda_max", bt.lambda_max},
            {"max_jump", bt.max_jump},
            {"jump_bound", bt.jump_bound},
            {"continuous", bt.continuous}};
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_field(fields[i]);
    }
    os << "\r\n";
}

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_bands_csv(std::ostream& os, const BandTable& bt) {
    std::vector<std::string> head{"t"};
    for (std::size_t n = 0; n < bt.bands; ++n) head.push_back("lambda_" + std::to_string(n + 1));
    write_csv_row(os, head);
    for (std::size_t i = 0; i < bt.t.size(); ++i) {
        std::vector<std::string> row{format_number(bt.t[i])};
        for (double v : bt.values[i]) row.push_back(format_number(v));
        write_csv_row(os, row);
    }
}

void write_bands_svg(std::ostream& os, const BandTable& bt, const GapReport& gaps) {
    const double W = 800, H = 600, left = 70, right = 20, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    double lo = gaps.lambda_min, hi = bt.lambda_max;
    if (!(hi > lo)) hi = lo + 1.0;
    const double pad = 0.02 * (hi - lo);
    lo -= pad;

    auto X = [&](double t) { return left + (t + 0.5 * pi) / (2.0 * pi) * pw; };
    auto Y = [&](double l) { return top + (hi - std::clamp(l, lo, hi)) / (hi - lo) * ph; };
    auto f2 = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
       << "Bloch bands, K=" << bt.K << ", " << bt.bands << " bands</text>\n";

    os << "<g id=\"gaps\" fill=\"#f4c7c3\" stroke=\"none\">\n";
    for (const auto& g : gaps.gaps) {
        const double y0 = Y(g.hi), y1 = Y(g.lo);
        os << "<rect x=\"" << f2(left) << "\" y=\"" << f2(y0) << "\" width=\"" << f2(pw) << "\" height=\""
           << f2(std::max(1.0, y1 - y0)) << "\"/>\n";
    }
    os << "</g>\n";

    os << "<g id=\"bands\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\">\n";
    for (std::size_t n = 0; n < bt.bands; ++n) {
        os << "<polyline points=\"";
        for (std::size_t i = 0; i < bt.t.size(); ++i) os << (i ? " " : "") << f2(X(bt.t[i])) << ',' << f2(Y(bt.values[i][n]));
        os << "\"/>\n";
    }
    os << "</g>\n";

    os << "<g id=\"axes\" stroke=\"black\" fill=\"none\">\n";
    os << "<rect x=\"" << f2(left) << "\" y=\"" << f2(top) << "\" width=\"" << f2(pw) << "\" height=\"" << f2(ph)
       << "\"/>\n";
    os << "</g>\n";
    os << "<g id=\"labels\" font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
    const char* tnames[] = {"-pi/2", "0", "pi/2", "pi", "3pi/2"};
    for (int i = 0; i < 5; ++i) {
        const double t = -0.5 * pi + 0.5 * pi * i;
        os << "<text x=\"" << f2(X(t)) << "\" y=\"" << f2(top + ph + 18) << "\" text-anchor=\"middle\">" << tnames[i]
           << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double l = lo + (hi - lo) * i / 4.0;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", l);
        os << "<text x=\"" << f2(left - 6) << "\" y=\"" << f2(Y(l) + 4) << "\" text-anchor=\"end\">" << buf
           << "</text>\n";
    }
    os << "<text x=\"" << f2(left + pw / 2) << "\" y=\"" << f2(H - 10) << "\" text-anchor=\"middle\">t</text>\n";
    os << "<text x=\"16\" y=\"" << f2(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << f2(top + ph / 2) << ")\">lambda</text>\n";
    os << "</g>\n</svg>\n";
}

}  // namespace hillbloch
