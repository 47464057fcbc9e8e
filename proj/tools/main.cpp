// hillbloch: band spectra and large-eigenvalue asymptotics for matrix Hill
// operators -y'' + Q(x) y with a Hermitian trigonometric-polynomial Q.
//
// Exit codes: 0 ran to completion (FAIL verdicts included), 1 usage error,
// 2 computation error.

#include <functional>
#include <iostream>
#include <vector>

#include "CLI11.hpp"

#include "hillbloch/commands.hpp"
#include "hillbloch/config.hpp"

using namespace hillbloch;

namespace {

// Flag values land in `flags`; only options actually given on the command
// line are copied over the config-file values.
struct Binder {
    RunConfig flags;
    std::string config_file;
    bool no_calibrate = false;
    bool no_edge_check = false;
    std::uint64_t seed = 0;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> copies;

    template <class T>
    void add(CLI::App* app, const std::string& name, T RunConfig::*field, const std::string& help) {
        CLI::Option* o = app->add_option(name, flags.*field, help);
        copies.emplace_back(o, [this, field](RunConfig& c) { c.*field = flags.*field; });
    }

    void attach(CLI::App* app) {
        app->add_option("--config", config_file, "JSON config file; flags override its values");
        add(app, "-p,--potential", &RunConfig::potential, "builtin name or JSON file");
        add(app, "-K,--truncation", &RunConfig::K, "Fourier truncation half-width (0: default)");
        add(app, "--grid", &RunConfig::grid_size, "t-grid size (>= 64)");
        add(app, "--lambda-max", &RunConfig::lambda_max, "spectral cutoff");
        add(app, "-t,--quasimomentum", &RunConfig::t, "quasimomentum for verify and oracle-check");
        add(app, "--k-min", &RunConfig::k_min, "first index of the verification range");
        add(app, "--k-max", &RunConfig::k_max, "last index of the verification range");
        add(app, "--c8", &RunConfig::c8, "width constant (fallback when not calibrated)");
        add(app, "--n0", &RunConfig::n0, "smallest index used by the uniqueness census");
        add(app, "--census-pairs", &RunConfig::census_pairs, "number of seeded (k, t) census pairs");
        add(app, "--census-k-max", &RunConfig::census_k_max, "largest census index");
        add(app, "--tol-sum", &RunConfig::tol_sum, "equality tolerance for the finite-gap condition");
        add(app, "--merge-tol", &RunConfig::merge_tol, "gap merge tolerance (0: 1e-7 lambda_max)");
        add(app, "-o,--output", &RunConfig::output, "output directory");
        add(app, "-j,--workers", &RunConfig::workers, "worker threads");
        add(app, "--edge-check-max", &RunConfig::edge_check_max, "oracle band-edge check below this energy");
        add(app, "--count", &RunConfig::oracle_count, "eigenvalues compared by oracle-check");
        CLI::Option* s = app->add_option("--seed", seed, "seed for random potentials and the census");
        copies.emplace_back(s, [this](RunConfig& c) { c.seed = seed; });
        CLI::Option* nc = app->add_flag("--no-calibrate", no_calibrate, "keep c8 as given");
        copies.emplace_back(nc, [this](RunConfig& c) { c.calibrate_c8 = !no_calibrate; });
        CLI::Option* ne = app->add_flag("--no-edge-check", no_edge_check, "skip the oracle band-edge check");
        copies.emplace_back(ne, [this](RunConfig& c) { c.edge_check = !no_edge_check; });
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_file.empty()) cfg = load_config_file(config_file, cfg);
        for (const auto& [opt, copy] : copies)
            if (opt->count() > 0) copy(cfg);
        validate(cfg);
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Band spectra and eigenvalue asymptotics of matrix Hill operators"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        void (*run)(const RunConfig&, std::ostream&);
    };
    const Sub subs[] = {
        {"spectrum", "band table, gaps, SVG diagram and gap census", &cmd_spectrum},
        {"verify", "large-eigenvalue asymptotics checks", &cmd_verify},
        {"condition", "finite-gap condition on the mean matrix", &cmd_condition},
        {"oracle-check", "Galerkin eigenvalues against monodromy roots", &cmd_oracle_check},
    };
    std::vector<Binder> binders(std::size(subs));
    std::vector<CLI::App*> apps;
    for (std::size_t i = 0; i < std::size(subs); ++i) {
        CLI::App* sub = app.add_subcommand(subs[i].name, subs[i].help);
        binders[i].attach(sub);
        apps.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    for (std::size_t i = 0; i < apps.size(); ++i) {
        if (!apps[i]->parsed()) continue;
        try {
            const RunConfig cfg = binders[i].resolve();
            subs[i].run(cfg, std::cout);
            return 0;
        } catch (const ConfigError& e) {
            std::cerr << "usage error: " << e.what() << '\n';
            return 1;
        } catch (const SpectralError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return e.code() == ErrorCode::ParseError ? 1 : 2;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        }
    }
    return 1;
}
