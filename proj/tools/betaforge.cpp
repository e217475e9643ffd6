// betaforge: samplers for beta-ensembles on the real line.
//
// Subcommands:
//   classical  exact tridiagonal-model draws (Hermite / Laguerre / Jacobi)
//   gibbs      Gibbs / Metropolis-within-Gibbs chains for polynomial potentials
//   stats ks   pooled-spectrum KS distance per pass against a target law
//   stats tw   edge-rescaled maxima per pass against the Tracy-Widom law
//   rerun      repeat a run byte-for-byte from its manifest.json

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "betaforge/runner.hpp"

namespace {

betaforge::PolynomialPotential parse_potential(const std::string& text) {
    betaforge::PolynomialPotential v;
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    if (name == "quartic") {
        v.g4 = 0.25;
    } else if (name == "sextic") {
        v.g6 = 1.0 / 6.0;
    } else if (name != "poly") {
        throw betaforge::ConfigError("potential: unknown family '" + name +
                                     "' (use quartic, sextic or poly)");
    }
    if (colon != std::string::npos) {
        std::string rest = text.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            const auto comma = rest.find(',', pos);
            const std::string item =
                rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw betaforge::ConfigError("potential: expected key=value, got '" + item + "'");
            const std::string key = item.substr(0, eq);
            double value;
            try {
                value = std::stod(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw betaforge::ConfigError("potential: bad number in '" + item + "'");
            }
            if (key == "g1") {
                v.g1 = value;
            } else if (key == "g2") {
                v.g2 = value;
            } else if (key == "g3") {
                v.g3 = value;
            } else if (key == "g4") {
                v.g4 = value;
            } else if (key == "g6") {
                v.g6 = value;
            } else {
                throw betaforge::ConfigError("potential: unknown coefficient '" + key +
                                             "' (g1..g4, g6; there is no degree-5 term)");
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    v.validate();
    return v;
}

void print_summary(const betaforge::RunSummary& summary) {
    std::cout << "wrote " << summary.eigenvalues_csv.string() << "\n";
    std::cout << "wrote " << summary.manifest_json.string() << "\n";
    if (!summary.ks_csv.empty()) {
        std::cout << "wrote " << summary.ks_csv.string() << "\n";
        for (const auto& [pass, ks] : summary.ks_by_pass)
            std::printf("pass %d: ks = %.6f\n", pass, ks);
    }
}

}  // namespace

int main(int argc, char** argv) {
    using betaforge::RunConfig;

    CLI::App app{"beta-ensemble samplers on tridiagonal models"};
    app.set_version_flag("--version", betaforge::kVersion);
    app.require_subcommand(1);

    RunConfig config;
    std::string potential_text = "quartic";

    // ---- classical ----
    CLI::App* classical = app.add_subcommand("classical", "exact draws from the classical ensembles");
    classical->add_option("--ensemble", config.ensemble, "hermite | laguerre | jacobi")->required();
    classical->add_option("--n", config.n, "number of points")->required();
    classical->add_option("--beta", config.beta, "inverse temperature (default 2)");
    classical->add_option("--chains", config.chains, "independent draws (default 1)");
    classical->add_option("--seed", config.seed, "RNG seed (default 0)");
    classical->add_option("--mu", config.mu, "Hermite location (default 0)");
    classical->add_option("--sigma", config.sigma, "Hermite scale (default 1)");
    classical->add_option("--k", config.k, "Laguerre shape (default 1)");
    classical->add_option("--theta", config.theta, "Laguerre scale (default 2)");
    classical->add_option("--p", config.p, "Jacobi first exponent (default 1)");
    classical->add_option("--q", config.q, "Jacobi second exponent (default 1)");
    classical->add_flag("--rescale", config.rescale, "map eigenvalues onto the limiting support");
    classical->add_option("--target", config.target,
                          "none | auto | semicircle | arcsine | mp[:ratio] (default none)");
    classical->add_option("--threads", config.threads, "worker threads (default: all cores)");
    classical->add_option("--out", config.out_dir, "output directory")->required();

    // ---- gibbs ----
    CLI::App* gibbs = app.add_subcommand("gibbs", "Gibbs sampling for polynomial potentials");
    gibbs->add_option("--potential", potential_text,
                      "family:coeffs, e.g. quartic:g4=0.25 or poly:g2=-1.25,g4=0.25")
        ->required();
    gibbs->add_option("--n", config.n, "number of points")->required();
    gibbs->add_option("--beta", config.beta, "inverse temperature (default 2)");
    gibbs->add_option("--passes", config.passes, "Gibbs sweeps per chain")->required();
    gibbs->add_option("--chains", config.chains, "independent chains (default 1)");
    gibbs->add_option("--snapshot-every", config.snapshot_every,
                      "record eigenvalues every k passes (default 1)");
    gibbs->add_option("--seed", config.seed, "RNG seed (default 0)");
    gibbs->add_flag("--rescale", config.rescale, "target W = (beta N / 2) V");
    gibbs->add_option("--target", config.target, "none | auto (default none)");
    gibbs->add_option("--mala-steps", config.mala.steps_per_update,
                      "MALA transitions per non-log-concave update (default: 100 sextic, 1 quartic)");
    gibbs->add_option("--mala-step", config.mala.step_size, "initial MALA step size (default 0.1)");
    gibbs->add_option("--threads", config.threads, "worker threads (default: all cores)");
    gibbs->add_option("--out", config.out_dir, "output directory")->required();

    // ---- stats ----
    CLI::App* stats = app.add_subcommand("stats", "diagnostics on eigenvalue CSV files");
    stats->require_subcommand(1);
    std::string input_csv, stats_target = "auto", stats_potential, stats_out;
    std::size_t quad_order = 64;

    CLI::App* ks_cmd = stats->add_subcommand("ks", "pooled KS distance per pass");
    ks_cmd->add_option("--input", input_csv, "eigenvalues.csv from a previous run")->required();
    ks_cmd->add_option("--target", stats_target, "semicircle | arcsine | mp[:ratio] | auto");
    ks_cmd->add_option("--potential", stats_potential, "potential for --target auto");
    ks_cmd->add_option("--out", stats_out, "directory for ks_by_pass.csv (default: stdout only)");

    CLI::App* tw_cmd = stats->add_subcommand("tw", "Tracy-Widom KS of edge-rescaled maxima");
    tw_cmd->add_option("--input", input_csv, "eigenvalues.csv from a previous run")->required();
    tw_cmd->add_option("--target", stats_target, "semicircle | mp[:ratio] | auto");
    tw_cmd->add_option("--potential", stats_potential, "potential for --target auto");
    tw_cmd->add_option("--quad-order", quad_order, "Fredholm quadrature order (default 64)");
    tw_cmd->add_option("--out", stats_out, "directory for tw_summary.json (default: stdout only)");

    // ---- rerun ----
    CLI::App* rerun = app.add_subcommand("rerun", "repeat a run from its manifest");
    std::string manifest_path;
    rerun->add_option("--manifest", manifest_path, "manifest.json of the original run")->required();
    rerun->add_option("--out", config.out_dir, "output directory")->required();
    rerun->add_option("--threads", config.threads, "worker threads (default: all cores)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (classical->parsed()) {
            config.mode = RunConfig::Mode::classical;
            print_summary(betaforge::run(config));
            return 0;
        }
        if (gibbs->parsed()) {
            config.mode = RunConfig::Mode::gibbs;
            config.potential = parse_potential(potential_text);
            print_summary(betaforge::run(config));
            return 0;
        }
        if (rerun->parsed()) {
            std::ifstream in(manifest_path);
            if (!in) throw betaforge::IoError("cannot open " + manifest_path);
            nlohmann::json j;
            in >> j;
            const std::string out_dir = config.out_dir;
            const int threads = config.threads;
            config = betaforge::config_from_json(j);
            config.out_dir = out_dir;
            config.threads = threads;
            print_summary(betaforge::run(config));
            return 0;
        }

        // stats subcommands
        const betaforge::EigenvalueTable table = betaforge::read_eigenvalues_csv(input_csv);
        betaforge::EquilibriumMeasure eq = [&]() {
            if (stats_target == "auto") {
                if (stats_potential.empty())
                    throw betaforge::ConfigError("stats: --target auto needs --potential");
                betaforge::PolynomialPotential v = parse_potential(stats_potential);
                v.rescale_by_N = true;
                return betaforge::equilibrium_polynomial(v);
            }
            RunConfig probe;
            probe.target = stats_target;
            const auto resolved = betaforge::resolve_target(probe);
            if (!resolved)
                throw betaforge::ConfigError("stats: --target must not be 'none'");
            return *resolved;
        }();

        nlohmann::json result;
        std::string filename;
        if (ks_cmd->parsed()) {
            result = betaforge::stats_ks(table, eq);
            filename = "ks_by_pass.csv";
        } else {
            result = betaforge::stats_tw(table, eq, quad_order);
            filename = "tw_summary.json";
        }
        std::cout << result.dump(2) << "\n";

        if (!stats_out.empty()) {
            std::filesystem::create_directories(stats_out);
            if (ks_cmd->parsed()) {
                std::ofstream f(std::filesystem::path(stats_out) / filename);
                f << "pass,ks\n";
                for (const auto& row : result["by_pass"])
                    f << row["pass"].get<int>() << ','
                      << betaforge::detail::format_double(row["ks"].get<double>()) << '\n';
            } else {
                std::ofstream f(std::filesystem::path(stats_out) / filename);
                f << result.dump(2) << "\n";
            }
        }
        return 0;
    } catch (const betaforge::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
