#pragma once

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "betaforge/empirical.hpp"
#include "betaforge/ensembles.hpp"
#include "betaforge/equilibrium.hpp"
#include "betaforge/errors.hpp"
#include "betaforge/gibbs.hpp"
#include "betaforge/tracy_widom.hpp"

namespace betaforge {

inline constexpr const char* kVersion = "0.1.0";

struct MalaSettings {
    double step_size = 0.1;
    int steps_per_update = 0;  // 0: 100 for sextic potentials, 1 otherwise
};

struct RunConfig {
    enum class Mode { classical, gibbs };

    Mode mode = Mode::classical;

    // classical-mode ensemble
    std::string ensemble = "hermite";  // hermite | laguerre | jacobi
    double mu = 0.0, sigma = 1.0;
    double k = 1.0, theta = 2.0;
    double p = 1.0, q = 1.0;

    // gibbs-mode potential (rescaling tracked by `rescale` below)
    PolynomialPotential potential{};

    std::size_t n = 1;
    double beta = 2.0;
    int passes = 1;
    int chains = 1;
    int snapshot_every = 1;
    std::uint64_t seed = 0;
    bool rescale = false;
    MalaSettings mala;
    std::string target = "none";  // none | auto | semicircle | arcsine | mp[:ratio]
    int threads = 0;              // 0: hardware concurrency
    std::string out_dir;
};

namespace detail {

inline void validate(const RunConfig& c) {
    if (c.n < 1) throw ConfigError("config.n: must be >= 1");
    if (!(c.beta > 0.0)) throw ConfigError("config.beta: must be > 0");
    if (c.chains < 1) throw ConfigError("config.chains: must be >= 1");
    if (c.out_dir.empty()) throw ConfigError("config.out: output directory required");
    if (c.mode == RunConfig::Mode::gibbs) {
        if (c.passes < 1) throw ConfigError("config.passes: must be >= 1");
        if (c.snapshot_every < 1) throw ConfigError("config.snapshot_every: must be >= 1");
        if (c.mala.steps_per_update < 0)
            throw ConfigError("config.mala.steps_per_update: must be >= 0 (0 = default)");
        if (!(c.mala.step_size > 0.0))
            throw ConfigError("config.mala.step_size: must be > 0");
        PolynomialPotential v = c.potential;
        v.validate();
        if (c.target == "auto" && !c.rescale)
            throw ConfigError(
                "config.target: 'auto' requires --rescale (the equilibrium limit holds for "
                "the N-rescaled potential)");
    } else {
        if (c.ensemble != "hermite" && c.ensemble != "laguerre" && c.ensemble != "jacobi")
            throw ConfigError("config.ensemble: must be hermite, laguerre or jacobi");
        if (!(c.sigma > 0.0)) throw ConfigError("config.sigma: must be > 0");
        if (!(c.k > 0.0)) throw ConfigError("config.k: must be > 0");
        if (!(c.theta > 0.0)) throw ConfigError("config.theta: must be > 0");
        if (!(c.p > 0.0) || !(c.q > 0.0)) throw ConfigError("config.p/q: must be > 0");
        if (c.target != "none" && !c.rescale)
            throw ConfigError("config.target: classical targets require --rescale");
    }
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["betaforge_version"] = kVersion;
    j["mode"] = c.mode == RunConfig::Mode::classical ? "classical" : "gibbs";
    j["n"] = c.n;
    j["beta"] = c.beta;
    j["chains"] = c.chains;
    j["seed"] = c.seed;
    j["rescale"] = c.rescale;
    j["target"] = c.target;
    if (c.mode == RunConfig::Mode::classical) {
        nlohmann::json e;
        e["kind"] = c.ensemble;
        if (c.ensemble == "hermite") {
            e["mu"] = c.mu;
            e["sigma"] = c.sigma;
        } else if (c.ensemble == "laguerre") {
            e["k"] = c.k;
            e["theta"] = c.theta;
        } else {
            e["p"] = c.p;
            e["q"] = c.q;
        }
        j["ensemble"] = e;
    } else {
        j["potential"] = {{"g1", c.potential.g1},
                          {"g2", c.potential.g2},
                          {"g3", c.potential.g3},
                          {"g4", c.potential.g4},
                          {"g6", c.potential.g6}};
        j["passes"] = c.passes;
        j["snapshot_every"] = c.snapshot_every;
        j["mala"] = {{"step_size", c.mala.step_size},
                     {"steps_per_update", c.mala.steps_per_update}};
    }
    return j;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    const std::string mode = j.at("mode").get<std::string>();
    c.mode = mode == "classical" ? RunConfig::Mode::classical : RunConfig::Mode::gibbs;
    c.n = j.at("n").get<std::size_t>();
    c.beta = j.at("beta").get<double>();
    c.chains = j.at("chains").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.rescale = j.at("rescale").get<bool>();
    c.target = j.at("target").get<std::string>();
    if (c.mode == RunConfig::Mode::classical) {
        const auto& e = j.at("ensemble");
        c.ensemble = e.at("kind").get<std::string>();
        if (c.ensemble == "hermite") {
            c.mu = e.at("mu").get<double>();
            c.sigma = e.at("sigma").get<double>();
        } else if (c.ensemble == "laguerre") {
            c.k = e.at("k").get<double>();
            c.theta = e.at("theta").get<double>();
        } else {
            c.p = e.at("p").get<double>();
            c.q = e.at("q").get<double>();
        }
    } else {
        const auto& v = j.at("potential");
        c.potential.g1 = v.at("g1").get<double>();
        c.potential.g2 = v.at("g2").get<double>();
        c.potential.g3 = v.at("g3").get<double>();
        c.potential.g4 = v.at("g4").get<double>();
        c.potential.g6 = v.at("g6").get<double>();
        c.passes = j.at("passes").get<int>();
        c.snapshot_every = j.at("snapshot_every").get<int>();
        c.mala.step_size = j.at("mala").at("step_size").get<double>();
        c.mala.steps_per_update = j.at("mala").at("steps_per_update").get<int>();
    }
    return c;
}

namespace detail {

inline EnsembleSpec ensemble_spec(const RunConfig& c) {
    if (c.ensemble == "hermite")
        return EnsembleSpec(HermiteEnsemble{c.mu, c.sigma}, c.n, c.beta);
    if (c.ensemble == "laguerre")
        return EnsembleSpec(LaguerreEnsemble{c.k, c.theta}, c.n, c.beta);
    return EnsembleSpec(JacobiEnsemble{c.p, c.q}, c.n, c.beta);
}

/// Scale factor applied to classical eigenvalues under --rescale, chosen so
/// the empirical law converges to the named limit: Hermite draws map onto the
/// semicircle on [-2, 2], Laguerre onto Marchenko-Pastur, Jacobi is already
/// compact.  Exact in law via the scale equivariance of the ensembles.
inline double classical_scale(const RunConfig& c) {
    if (!c.rescale) return 1.0;
    if (c.ensemble == "hermite")
        return 1.0 / (c.sigma * std::sqrt(0.5 * c.beta * static_cast<double>(c.n)));
    if (c.ensemble == "laguerre") {
        const double m_cols = static_cast<double>(c.n) - 1.0 + 2.0 * c.k / c.beta;
        return 1.0 / (0.5 * c.theta * c.beta * m_cols);
    }
    return 1.0;
}

inline double laguerre_mp_ratio(const RunConfig& c) {
    const double m_cols = static_cast<double>(c.n) - 1.0 + 2.0 * c.k / c.beta;
    return std::min(1.0, static_cast<double>(c.n) / m_cols);
}

}  // namespace detail

/// Resolve the distribution the run should be compared against, or nullopt
/// for target "none".
inline std::optional<EquilibriumMeasure> resolve_target(const RunConfig& c) {
    if (c.target == "none") return std::nullopt;
    if (c.target == "semicircle") return equilibrium_semicircle();
    if (c.target == "arcsine") return equilibrium_arcsine();
    if (c.target.rfind("mp", 0) == 0) {
        double ratio = 1.0;
        const auto colon = c.target.find(':');
        if (colon != std::string::npos) ratio = std::stod(c.target.substr(colon + 1));
        return equilibrium_marchenko_pastur(ratio);
    }
    if (c.target == "auto") {
        if (c.mode == RunConfig::Mode::gibbs) {
            PolynomialPotential v = c.potential;
            v.rescale_by_N = c.rescale;
            return equilibrium_polynomial(v);
        }
        if (c.ensemble == "hermite") return equilibrium_semicircle();
        if (c.ensemble == "laguerre")
            return equilibrium_marchenko_pastur(detail::laguerre_mp_ratio(c));
        return equilibrium_arcsine();
    }
    throw ConfigError("config.target: unknown target '" + c.target + "'");
}

struct RunSummary {
    std::filesystem::path eigenvalues_csv;
    std::filesystem::path manifest_json;
    std::filesystem::path ks_csv;  // empty when no target
    std::vector<std::pair<int, double>> ks_by_pass;
};

/// Execute a run: `chains` classical draws or Gibbs chains in a worker pool
/// (streams keyed by chain id, so output is thread-count independent), then
/// deterministic merge into eigenvalues.csv plus manifest and diagnostics.
inline RunSummary run(const RunConfig& config) {
    detail::validate(config);
    const std::optional<EquilibriumMeasure> target = resolve_target(config);

    namespace fs = std::filesystem;
    const fs::path out(config.out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create output directory " + out.string());

    const fs::path marker = out / "INCOMPLETE";
    {
        std::ofstream m(marker);
        m << "run in progress\n";
    }

    try {
        {
            std::ofstream mf(out / "manifest.json");
            if (!mf) throw IoError("cannot write manifest.json");
            mf << config_to_json(config).dump(2) << "\n";
        }

        // snapshots[chain][snapshot] = sorted eigenvalues
        const int snaps_per_chain = config.mode == RunConfig::Mode::classical
                                        ? 1
                                        : config.passes / config.snapshot_every;
        std::vector<std::vector<std::vector<double>>> snapshots(
            static_cast<std::size_t>(config.chains));

        std::atomic<int> next{0};
        std::atomic<bool> failed{false};
        std::string error_text;
        std::mutex error_mutex;

        auto worker = [&]() {
            for (;;) {
                const int chain = next.fetch_add(1);
                if (chain >= config.chains || failed.load()) break;
                try {
                    RngStream rng(config.seed, static_cast<std::uint64_t>(chain));
                    auto& slot = snapshots[static_cast<std::size_t>(chain)];
                    if (config.mode == RunConfig::Mode::classical) {
                        SpectralSample s = sample_ensemble(detail::ensemble_spec(config), rng);
                        const double scale = detail::classical_scale(config);
                        for (double& lam : s.eigenvalues) lam *= scale;
                        slot.push_back(std::move(s.eigenvalues));
                    } else {
                        PolynomialPotential v = config.potential;
                        v.rescale_by_N = config.rescale;
                        MalaConfig mala;
                        mala.step_size = config.mala.step_size;
                        mala.steps_per_update =
                            config.mala.steps_per_update > 0
                                ? config.mala.steps_per_update
                                : (v.g6 != 0.0 ? 100 : 1);
                        mala.adapt_passes = config.passes / 10;
                        GibbsChain gc(v, config.n, config.beta, rng, mala);
                        for (const SpectralSample& s :
                             run_chain(gc, config.passes, config.snapshot_every)) {
                            slot.push_back(s.eigenvalues);
                        }
                    }
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    failed.store(true);
                    if (error_text.empty()) error_text = e.what();
                }
            }
        };

        int nthreads = config.threads;
        if (nthreads <= 0) {
            if (const char* env = std::getenv("BETAFORGE_THREADS")) nthreads = std::atoi(env);
        }
        if (nthreads <= 0) nthreads = static_cast<int>(std::thread::hardware_concurrency());
        nthreads = std::max(1, std::min(nthreads, config.chains));

        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (failed.load()) throw Error("chain failed: " + error_text);

        RunSummary summary;
        summary.manifest_json = out / "manifest.json";
        summary.eigenvalues_csv = out / "eigenvalues.csv";
        {
            std::ofstream csv(summary.eigenvalues_csv);
            if (!csv) throw IoError("cannot write eigenvalues.csv");
            csv << "chain,pass,index,value\n";
            for (int chain = 0; chain < config.chains; ++chain) {
                const auto& slot = snapshots[static_cast<std::size_t>(chain)];
                for (std::size_t snap = 0; snap < slot.size(); ++snap) {
                    const int pass = config.mode == RunConfig::Mode::classical
                                         ? 0
                                         : static_cast<int>(snap + 1) * config.snapshot_every;
                    for (std::size_t i = 0; i < slot[snap].size(); ++i) {
                        csv << chain << ',' << pass << ',' << i << ','
                            << detail::format_double(slot[snap][i]) << '\n';
                    }
                }
            }
        }

        if (target) {
            summary.ks_csv = out / "ks_by_pass.csv";
            std::ofstream ks(summary.ks_csv);
            if (!ks) throw IoError("cannot write ks_by_pass.csv");
            ks << "pass,ks\n";
            for (int snap = 0; snap < snaps_per_chain; ++snap) {
                std::vector<double> pooled;
                pooled.reserve(static_cast<std::size_t>(config.chains) * config.n);
                for (int chain = 0; chain < config.chains; ++chain) {
                    const auto& vals = snapshots[static_cast<std::size_t>(chain)]
                                                [static_cast<std::size_t>(snap)];
                    pooled.insert(pooled.end(), vals.begin(), vals.end());
                }
                const int pass = config.mode == RunConfig::Mode::classical
                                     ? 0
                                     : (snap + 1) * config.snapshot_every;
                const double d = ks_distance(EmpiricalCDF(std::move(pooled)), target->cdf);
                ks << pass << ',' << detail::format_double(d) << '\n';
                summary.ks_by_pass.emplace_back(pass, d);
            }
        }

        std::filesystem::remove(marker);
        return summary;
    } catch (...) {
        std::ofstream m(marker);
        m << "run aborted\n";
        throw;
    }
}

/// Parsed eigenvalues.csv: values grouped per pass, and per (chain, pass)
/// maxima for edge statistics.
struct EigenvalueTable {
    std::map<int, std::vector<double>> pooled_by_pass;
    std::map<int, std::vector<double>> maxima_by_pass;
    std::size_t n = 0;  // points per (chain, pass) group
};

inline EigenvalueTable read_eigenvalues_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ":1: empty file");
    if (line != "chain,pass,index,value")
        throw ParseError(path + ":1: expected header chain,pass,index,value");

    EigenvalueTable table;
    std::map<std::pair<long, int>, double> group_max;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        long chain;
        int pass;
        std::size_t index;
        double value;
        char extra;
        const int got = std::sscanf(line.c_str(), "%ld,%d,%zu,%lf%c", &chain, &pass, &index,
                                    &value, &extra);
        if (got != 4)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected 4 columns chain,pass,index,value");
        table.pooled_by_pass[pass].push_back(value);
        table.n = std::max(table.n, index + 1);
        auto [it, fresh] = group_max.try_emplace({chain, pass}, value);
        if (!fresh) it->second = std::max(it->second, value);
    }
    for (const auto& [key, vmax] : group_max) table.maxima_by_pass[key.second].push_back(vmax);
    return table;
}

/// KS distance of the pooled spectrum per pass against a target cdf.
inline nlohmann::json stats_ks(const EigenvalueTable& table, const EquilibriumMeasure& eq) {
    nlohmann::json out;
    out["statistic"] = "ks";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [pass, values] : table.pooled_by_pass) {
        nlohmann::json row;
        row["pass"] = pass;
        row["count"] = values.size();
        row["ks"] = ks_distance(EmpiricalCDF(values), eq.cdf);
        rows.push_back(row);
    }
    out["by_pass"] = rows;
    return out;
}

/// Per-pass KS of edge-rescaled maxima against the Tracy-Widom beta = 2 law.
inline nlohmann::json stats_tw(const EigenvalueTable& table, const EquilibriumMeasure& eq,
                               std::size_t quad_order = 64) {
    nlohmann::json out;
    out["statistic"] = "tracy-widom";
    out["edge"] = eq.right_edge;
    if (!eq.edge_coefficient)
        throw NoSoftEdge("stats_tw: target measure has no square-root right edge");
    out["edge_coefficient"] = *eq.edge_coefficient;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [pass, maxima] : table.maxima_by_pass) {
        std::vector<double> rescaled;
        rescaled.reserve(maxima.size());
        for (double m : maxima) rescaled.push_back(edge_rescale(m, table.n, eq));
        nlohmann::json row;
        row["pass"] = pass;
        row["count"] = maxima.size();
        row["ks_tw"] = ks_distance(EmpiricalCDF(std::move(rescaled)), [quad_order](double s) {
            return tracy_widom2_cdf(s, quad_order);
        });
        rows.push_back(row);
    }
    out["by_pass"] = rows;
    return out;
}

}  // namespace betaforge
