#include "hillbloch/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

namespace hillbloch {

namespace {

using nlohmann::json;

template <class T>
T get_as(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

ComplexMatrix read_matrix(const json& re, const json* im, std::size_t m) {
    auto rows = [&](const json& a) {
        if (!a.is_array() || a.size() != m) throw SpectralError(ErrorCode::ParseError, "matrix must have m rows");
        for (const auto& r : a)
            if (!r.is_array() || r.size() != m) throw SpectralError(ErrorCode::ParseError, "matrix must have m columns");
    };
    rows(re);
    if (im) rows(*im);
    ComplexMatrix q(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) {
            const double a = re[i][k].get<double>();
            const double b = im ? (*im)[i][k].get<double>() : 0.0;
            if (!std::isfinite(a) || !std::isfinite(b)) throw SpectralError(ErrorCode::ParseError, "non-finite entry");
            q(i, k) = {a, b};
        }
    return q;
}

MatrixPotential build(const json& j, std::optional<std::uint64_t> seed) {
    if (j.contains("random")) {
        const json& r = j["random"];
        RandomPotentialSpec spec;
        spec.m = r.value("m", spec.m);
        spec.degree = r.value("degree", spec.degree);
        spec.norm = r.value("norm", spec.norm);
        spec.zero_mean = r.value("zero_mean", spec.zero_mean);
        spec.seed = seed.value_or(r.value("seed", spec.seed));
        return random_potential(spec);
    }
    const std::size_t m = j.at("m").get<std::size_t>();
    if (j.contains("blocks")) {
        std::vector<std::pair<int, ComplexMatrix>> blocks;
        for (const auto& b : j["blocks"]) {
            const json* im = b.contains("im") ? &b["im"] : nullptr;
            blocks.emplace_back(b.at("n").get<int>(), read_matrix(b.at("re"), im, m));
        }
        return from_fourier(m, blocks);
    }
    if (j.contains("samples")) {
        std::vector<ComplexMatrix> values;
        for (const auto& v : j["samples"]) {
            const json* im = v.contains("im") ? &v["im"] : nullptr;
            values.push_back(read_matrix(v.at("re"), im, m));
        }
        if (j.contains("grid") && j["grid"].get<std::size_t>() != values.size())
            throw SpectralError(ErrorCode::ParseError, "'grid' does not match the number of samples");
        return from_samples(m, values, j.at("degree").get<int>());
    }
    throw SpectralError(ErrorCode::ParseError, "potential needs one of 'blocks', 'random', 'samples'");
}

}  // namespace

void apply_json(RunConfig& cfg, const json& j) {
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    for (const auto& [key, val] : j.items()) {
        const char* k = key.c_str();
        if (key == "potential") cfg.potential = get_as<std::string>(j, k);
        else if (key == "K") cfg.K = get_as<int>(j, k);
        else if (key == "grid_size") cfg.grid_size = get_as<int>(j, k);
        else if (key == "lambda_max") cfg.lambda_max = get_as<double>(j, k);
        else if (key == "t") cfg.t = get_as<double>(j, k);
        else if (key == "k_min") cfg.k_min = get_as<int>(j, k);
        else if (key == "k_max") cfg.k_max = get_as<int>(j, k);
        else if (key == "c8") cfg.c8 = get_as<double>(j, k);
        else if (key == "calibrate_c8") cfg.calibrate_c8 = get_as<bool>(j, k);
        else if (key == "n0") cfg.n0 = get_as<int>(j, k);
        else if (key == "census_pairs") cfg.census_pairs = get_as<int>(j, k);
        else if (key == "census_k_max") cfg.census_k_max = get_as<int>(j, k);
        else if (key == "tol_sum") cfg.tol_sum = get_as<double>(j, k);
        else if (key == "merge_tol") cfg.merge_tol = get_as<double>(j, k);
        else if (key == "output") cfg.output = get_as<std::string>(j, k);
        else if (key == "workers") cfg.workers = get_as<unsigned>(j, k);
        else if (key == "seed") cfg.seed = get_as<std::uint64_t>(j, k);
        else if (key == "edge_check") cfg.edge_check = get_as<bool>(j, k);
        else if (key == "edge_check_max") cfg.edge_check_max = get_as<double>(j, k);
        else if (key == "oracle_count") cfg.oracle_count = get_as<int>(j, k);
        else throw ConfigError("unknown config key '" + key + "'");
    }
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
    apply_json(base, j);
    return base;
}

void validate(const RunConfig& c) {
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    need(!c.potential.empty(), "potential must be given");
    need(c.K >= 0, "K must be nonnegative (0 selects the default)");
    need(c.grid_size >= 64, "grid_size must be at least 64");
    need(c.lambda_max > 0.0 && std::isfinite(c.lambda_max), "lambda_max must be positive");
    need(std::isfinite(c.t), "t must be finite");
    need(c.k_min >= 3 && c.n0 >= 3, "k-range must exclude |k| <= 2");
    need(c.k_max >= c.k_min + 7, "k-range needs at least 8 indices");
    need(c.census_k_max >= c.n0, "census_k_max must be at least n0");
    need(c.c8 > 0.0 && std::isfinite(c.c8), "c8 must be positive");
    need(c.census_pairs >= 1, "census_pairs must be positive");
    need(c.tol_sum > 0.0, "tol_sum must be positive");
    need(c.merge_tol >= 0.0, "merge_tol must be nonnegative");
    need(c.workers >= 1, "workers must be positive");
    need(c.edge_check_max > 0.0, "edge_check_max must be positive");
    need(c.oracle_count >= 1, "oracle_count must be positive");
}

std::filesystem::path builtin_dir() {
    if (const char* env = std::getenv("HILLBLOCH_DATA_DIR"); env && *env) return std::filesystem::path(env) / "potentials";
    return std::filesystem::path(HILLBLOCH_DATA_DIR) / "potentials";
}

MatrixPotential potential_from_json(const json& j, std::optional<std::uint64_t> seed) {
    try {
        MatrixPotential p = build(j, seed);
        if (j.contains("scale")) p = scaled(p, j["scale"].get<double>());
        if (j.contains("mean_diag")) {
            const auto d = j["mean_diag"].get<std::vector<double>>();
            if (d.size() != p.dim()) throw SpectralError(ErrorCode::DimensionMismatch, "mean_diag has wrong length");
            p = add_mean(p, ComplexMatrix::diagonal(d));
        }
        return p;
    } catch (const json::exception& e) {
        throw SpectralError(ErrorCode::ParseError, e.what());
    }
}

MatrixPotential load_potential(const std::string& source, std::optional<std::uint64_t> seed) {
    std::filesystem::path path(source);
    if (!std::filesystem::is_regular_file(path)) {
        path = builtin_dir() / (source + ".json");
        if (!std::filesystem::is_regular_file(path))
            throw ConfigError("'" + source + "' is neither a file nor a builtin potential in " + builtin_dir().string());
    }
    std::ifstream in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SpectralError(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    return potential_from_json(j, seed);
}

}  // namespace hillbloch
