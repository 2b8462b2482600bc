#pragma once

// Command execution for the stablenn tool.

#include "../limit_theory.hpp"
#include "../serialize.hpp"
#include "../simulator.hpp"
#include "../verify.hpp"
#include "config.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace stablenn::cli {

enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_usage = 2, exit_runtime = 3 };

namespace detail {

inline std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> notes;  // extra header comments
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline void write_csv(std::ostream& os, const RunConfig& cfg, const Table& t)
{
    os << "# stablenn " << cfg.get("command") << "\n";
    for (const auto& [k, v] : cfg.entries()) os << "# " << k << " = " << v << "\n";
    for (const auto& n : t.notes) os << "# " << n << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
    }
}

inline nlohmann::json config_json(const RunConfig& cfg)
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : cfg.entries()) j[k] = v;
    return j;
}

inline std::string normalization_note(double p, bool log_scaling)
{
    return std::string("normalization: ") + (log_scaling ? "(n log n)" : "n") + "^(-1/p) with p = " + num(p);
}

struct Ensemble {
    std::vector<double> values;
    LimitPrediction prediction;
    LayerScaleSequence layers;
    std::string normalization;
};

inline Ensemble simulate(const RunConfig& cfg, unsigned workers, bool want_prediction)
{
    const QuadratureOptions opt = numerics_of(cfg);
    const EnsembleConfig ens = ensemble_of(cfg);
    Ensemble out;
    if (cfg.get("network.architecture") == "shallow") {
        const ShallowConfig s = shallow_of(cfg);
        const double cost = 2.0 * static_cast<double>(ens.width) * static_cast<double>(ens.replications);
        if (cost > ens.budget) throw ConfigError("ensemble.budget", "run needs " + num(cost) + " variates");
        out.values = shallow_ensemble(s, ens.width, ens.replications, ens.seed, workers);
        out.normalization = normalization_note(s.resolved_exponent(), s.log_scaling());
        if (want_prediction) out.prediction = shallow_limit(s.alpha0, s.sigma0, s.alpha1, s.sigma1, s.activation, opt);
        return out;
    }
    const NetworkConfig net = network_of(cfg);
    out.values = sample_deep(net, ens, workers, opt);
    out.normalization = net.bias_regime == BiasRegime::geometric
                            ? "normalization: layer l sums use " + std::string(net.log_scaling() ? "(n log n)" : "n") +
                                  "^(-gamma^(l-1)/alpha)"
                            : normalization_note(net.alpha, net.log_scaling());
    if (want_prediction) {
        out.layers = deep_recursion(net.alpha, net.sigma_w, net.sigma_b, net.input, net.depth, net.activation, opt);
        out.prediction = deep_limit(out.layers);
        if (net.readout_gain != 1) {
            // only the read-out sum is scaled, the output bias is not
            const double a = out.prediction.stability;
            const double sum_part = std::pow(out.prediction.scale, a) - std::pow(net.sigma_b, a);
            out.prediction.scale =
                std::pow(std::pow(std::fabs(net.readout_gain), a) * sum_part + std::pow(net.sigma_b, a), 1 / a);
        }
    }
    return out;
}

inline int cmd_predict(const RunConfig& cfg, std::ostream& os)
{
    const QuadratureOptions opt = numerics_of(cfg);
    LimitPrediction pred;
    LayerScaleSequence layers;
    if (cfg.get("network.architecture") == "shallow") {
        const ShallowConfig s = shallow_of(cfg);
        pred = shallow_limit(s.alpha0, s.sigma0, s.alpha1, s.sigma1, s.activation, opt);
    } else {
        const NetworkConfig net = network_of(cfg);
        layers = deep_recursion(net.alpha, net.sigma_w, net.sigma_b, net.input, net.depth, net.activation, opt);
        pred = deep_limit(layers);
    }
    if (cfg.get("output.format") == "json") {
        os << nlohmann::json{{"command", "predict"}, {"config", config_json(cfg)}, {"prediction", to_json(pred, layers)}}
                  .dump(2)
           << "\n";
        return exit_ok;
    }
    Table t;
    t.columns = {"layer", "stability", "scale", "scaling_exponent", "log_correction"};
    if (layers.empty()) layers.push_back({2, pred.stability, pred.scale, pred.scaling_exponent, pred.log_correction});
    for (const auto& l : layers)
        t.rows.push_back({std::to_string(l.layer), num(l.stability), num(l.scale), num(l.scaling_exponent),
                          l.log_correction ? "1" : "0"});
    t.notes.push_back("layer 2 of a shallow network is its output; scale is the limit law's sigma");
    write_csv(os, cfg, t);
    return exit_ok;
}

inline int cmd_simulate(const RunConfig& cfg, unsigned workers, std::ostream& os)
{
    const Ensemble e = simulate(cfg, workers, false);
    if (cfg.get("output.format") == "json") {
        os << nlohmann::json{{"command", "simulate"},
                             {"config", config_json(cfg)},
                             {"seed", ensemble_of(cfg).seed.value},
                             {"normalization", e.normalization},
                             {"values", e.values}}
                  .dump()
           << "\n";
        return exit_ok;
    }
    Table t;
    t.notes = {e.normalization, "value: normalized network output at the configured input"};
    t.columns = {"replication", "value"};
    for (std::size_t i = 0; i < e.values.size(); ++i) t.rows.push_back({std::to_string(i), num(e.values[i])});
    write_csv(os, cfg, t);
    return exit_ok;
}

inline VerificationReport build_report(const RunConfig& cfg, unsigned workers)
{
    const Ensemble e = simulate(cfg, workers, true);
    const QuadratureOptions opt = numerics_of(cfg);
    const EnsembleConfig ens = ensemble_of(cfg);
    VerificationReport r;
    r.prediction = e.prediction;
    r.sample_count = e.values.size();
    r.width = ens.width;
    r.seed = ens.seed;
    const StabilityFit fit = estimate_stability(e.values);
    r.alpha_hat = fit.alpha;
    r.sigma_hat = fit.sigma;
    r.ks_distance = ks_against_prediction(e.values, e.prediction, workers, opt);
    r.hill_index = std::nan("");
    r.checks.push_back(upper_check("ks", r.ks_distance, cfg.real("tolerances.ks")));
    r.checks.push_back(absolute_check("alpha", r.alpha_hat, e.prediction.stability, cfg.real("tolerances.alpha")));
    r.checks.push_back(relative_check("scale", r.sigma_hat, e.prediction.scale, cfg.real("tolerances.scale")));
    const double k = cfg.real("verify.hill_k_fraction");
    if (k > 0) {
        r.hill_index = hill_tail_index(e.values, k);
        r.checks.push_back(absolute_check("hill", r.hill_index, e.prediction.stability, cfg.real("tolerances.hill")));
    }
    return r;
}

inline int cmd_verify(const RunConfig& cfg, unsigned workers, std::ostream& os, std::ostream& log)
{
    const VerificationReport r = build_report(cfg, workers);
    log << render_table(r);
    if (cfg.get("output.format") == "json") {
        os << nlohmann::json{{"command", "verify"}, {"config", config_json(cfg)}, {"report", to_json(r)}}.dump(2) << "\n";
    } else {
        Table t;
        t.notes = {"alpha_hat = " + num(r.alpha_hat), "sigma_hat = " + num(r.sigma_hat),
                   "ks_distance = " + num(r.ks_distance), "prediction: stability = " + num(r.prediction.stability) +
                                                              ", scale = " + num(r.prediction.scale)};
        t.columns = {"check", "observed", "expected", "tolerance", "passed"};
        for (const auto& c : r.checks)
            t.rows.push_back({c.name, num(c.observed), num(c.expected), num(c.tolerance), c.passed ? "1" : "0"});
        write_csv(os, cfg, t);
    }
    return r.passed() ? exit_ok : exit_check_failed;
}

inline int cmd_tailscan(const RunConfig& cfg, unsigned workers, std::ostream& os)
{
    const ShallowConfig s = shallow_of(cfg);
    const QuadratureOptions opt = numerics_of(cfg);
    const long long count = cfg.integer("tailscan.count");
    if (count < 1) throw ConfigError("tailscan.count", "must be >= 1");
    const TailAsymptote asym = product_tail(s.alpha1, s.sigma1, s.alpha0, s.sigma0, s.activation, opt);
    const auto draws = sample_products(s.alpha1, s.sigma1, s.alpha0, s.sigma0, s.activation,
                                       static_cast<std::size_t>(count), ensemble_of(cfg).seed, workers);
    TailTable table;
    try {
        table = tail_scan(draws, asym, cfg.reals("tailscan.levels"));
    } catch (const DomainError& e) {
        throw ConfigError("tailscan.levels", e.what());
    }
    const double tol = cfg.real("tolerances.tail");
    if (cfg.get("output.format") == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : table) rows.push_back(to_json(r));
        os << nlohmann::json{{"command", "tailscan"}, {"config", config_json(cfg)}, {"asymptote", to_json(asym)}, {"tail_table", rows}}
                  .dump(2)
           << "\n";
        return exit_ok;
    }
    Table t;
    t.notes = {"statistic: |X tau(Y)|, X ~ S_alpha1(sigma1), Y ~ S_alpha0(sigma0)",
               std::string("normalized = survival * z^index") + (asym.log_factor ? " / log z" : ""),
               "index = " + num(asym.index)};
    t.columns = {"level", "z", "survival", "normalized", "predicted", "ratio", "exceedances", "within_tolerance"};
    for (const auto& r : table)
        t.rows.push_back({num(r.level), num(r.z), num(r.survival), num(r.normalized), num(r.predicted), num(r.ratio),
                          std::to_string(r.exceedances), std::fabs(r.ratio - 1) <= tol ? "1" : "0"});
    write_csv(os, cfg, t);
    return exit_ok;
}

inline int cmd_surface(const RunConfig& cfg, unsigned workers, std::ostream& os)
{
    if (cfg.get("network.architecture") != "deep")
        throw ConfigError("network.architecture", "surface needs the deep architecture");
    const NetworkConfig net = network_of(cfg);
    const std::size_t dims = net.input.size();
    if (dims > 2) throw ConfigError("network.input", "surface supports 1- or 2-dimensional inputs");
    const long long pts = cfg.integer("surface.points");
    if (pts < 2 || pts > 2001) throw ConfigError("surface.points", "must lie in [2, 2001]");
    const double lo = cfg.real("surface.lo"), hi = cfg.real("surface.hi");
    if (!(hi > lo)) throw ConfigError("surface.hi", "must exceed surface.lo");
    std::vector<double> axis(static_cast<std::size_t>(pts));
    for (long long i = 0; i < pts; ++i) axis[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(pts - 1);
    std::vector<std::vector<double>> grid;
    for (double a : axis) {
        if (dims == 1)
            grid.push_back({a});
        else
            for (double b : axis) grid.push_back({a, b});
    }
    const EnsembleConfig ens = ensemble_of(cfg);
    const auto values = sample_surface(net, grid, ens.width, ens.seed,
                                       static_cast<std::uint64_t>(cfg.integer("surface.realization")), workers);
    if (cfg.get("output.format") == "json") {
        os << nlohmann::json{{"command", "surface"}, {"config", config_json(cfg)}, {"grid", grid}, {"values", values}}.dump()
           << "\n";
        return exit_ok;
    }
    Table t;
    t.notes = {"one finite-width weight realization evaluated at every grid point"};
    t.columns = dims == 1 ? std::vector<std::string>{"x1", "value"} : std::vector<std::string>{"x1", "x2", "value"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<std::string> row;
        for (double x : grid[i]) row.push_back(num(x));
        row.push_back(num(values[i]));
        t.rows.push_back(std::move(row));
    }
    write_csv(os, cfg, t);
    return exit_ok;
}

inline int cmd_sample(const RunConfig& cfg, unsigned workers, std::ostream& os)
{
    StableParams p = [&] {
        try {
            return StableParams(cfg.real("sample.alpha"), cfg.real("sample.beta"), cfg.real("sample.sigma"),
                                cfg.real("sample.mu"));
        } catch (const DomainError& e) {
            throw ConfigError("sample", e.what());
        }
    }();
    const long long count = cfg.integer("sample.count");
    if (count < 0) throw ConfigError("sample.count", "must be >= 0");
    if (static_cast<double>(count) > cfg.real("ensemble.budget")) throw ConfigError("ensemble.budget", "sample.count exceeds budget");
    const auto values = sample(p, static_cast<std::size_t>(count), ensemble_of(cfg).seed, workers);
    if (cfg.get("output.format") == "json") {
        os << nlohmann::json{{"command", "sample"}, {"config", config_json(cfg)}, {"seed", ensemble_of(cfg).seed.value}, {"values", values}}
                  .dump()
           << "\n";
        return exit_ok;
    }
    Table t;
    t.columns = {"index", "value"};
    for (std::size_t i = 0; i < values.size(); ++i) t.rows.push_back({std::to_string(i), num(values[i])});
    write_csv(os, cfg, t);
    return exit_ok;
}

} // namespace detail

/// Runs the configured command. Writes artifacts to output.path (or `out`
/// for "-") and diagnostics to `log`. Returns an ExitCode.
inline int run(const RunConfig& cfg, unsigned workers, std::ostream& out, std::ostream& log)
{
    try {
        std::ofstream file;
        std::ostream* os = &out;
        if (cfg.get("output.path") != "-") {
            file.open(cfg.get("output.path"), std::ios::binary);
            if (!file) throw ConfigError("output.path", "cannot open '" + cfg.get("output.path") + "' for writing");
            os = &file;
        }
        const std::string& cmd = cfg.get("command");
        if (cmd == "predict") return detail::cmd_predict(cfg, *os);
        if (cmd == "simulate") return detail::cmd_simulate(cfg, workers, *os);
        if (cmd == "verify") return detail::cmd_verify(cfg, workers, *os, log);
        if (cmd == "tailscan") return detail::cmd_tailscan(cfg, workers, *os);
        if (cmd == "surface") return detail::cmd_surface(cfg, workers, *os);
        return detail::cmd_sample(cfg, workers, *os);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError& e) {
        log << "invalid parameters: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_runtime;
    }
}

} // namespace stablenn::cli
