#pragma once

// Flat "section.key = value" run configuration for the command-line tool.

#include "../activations.hpp"
#include "../density.hpp"
#include "../error.hpp"
#include "../simulator.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace stablenn::cli {

enum class FieldType { real, integer, choice, real_list, text };

struct FieldSpec {
    std::string key;
    FieldType type;
    std::string default_value;
    std::vector<std::string> choices;  // for FieldType::choice
    std::string help;
};

inline const std::vector<FieldSpec>& schema()
{
    using T = FieldType;
    static const std::vector<FieldSpec> fields = {
        {"command", T::choice, "predict", {"predict", "simulate", "verify", "tailscan", "surface", "sample"}, "what to run"},
        {"network.architecture", T::choice, "shallow", {"shallow", "deep"}, "one hidden layer sum or deep network"},
        {"network.activation", T::choice, "tanh", {"tanh", "identity", "relu", "odd_power", "positive_part_power"}, "activation"},
        {"network.gamma", T::real, "1", {}, "growth exponent of the power activations"},
        {"network.alpha0", T::real, "1.5", {}, "shallow: stability of the pre-activations w0"},
        {"network.sigma0", T::real, "1", {}, "shallow: scale of w0"},
        {"network.alpha1", T::real, "1.5", {}, "shallow: stability of the read-out weights w"},
        {"network.sigma1", T::real, "1", {}, "shallow: scale of w"},
        {"network.alpha", T::real, "1.5", {}, "deep: stability of weights and biases"},
        {"network.sigma_w", T::real, "1", {}, "deep: weight scale"},
        {"network.sigma_b", T::real, "1", {}, "deep: bias scale"},
        {"network.input", T::real_list, "1", {}, "deep: input vector x, comma separated"},
        {"network.depth", T::integer, "1", {}, "deep: number of hidden layers L"},
        {"network.bias_regime", T::choice, "standard", {"standard", "geometric"}, "deep: bias laws"},
        {"network.scaling", T::choice, "auto", {"auto", "plain_n", "n_log_n"}, "normalization nu(n)"},
        {"network.readout_gain", T::real, "1", {}, "deep: extra factor on the read-out weights"},
        {"ensemble.width_n", T::integer, "1000", {}, "width n"},
        {"ensemble.replications", T::integer, "1000", {}, "independent networks"},
        {"ensemble.seed", T::integer, "1", {}, "64-bit seed"},
        {"ensemble.growth_mode", T::choice, "exact_sequential", {"exact_sequential", "finite_width"}, "deep: growth scheme"},
        {"ensemble.budget", T::real, "2e11", {}, "maximum number of random variates per run"},
        {"tolerances.ks", T::real, "0.05", {}, "verify: KS distance bound"},
        {"tolerances.alpha", T::real, "0.1", {}, "verify: |alpha_hat - stability| bound"},
        {"tolerances.scale", T::real, "0.1", {}, "verify: relative scale error bound"},
        {"tolerances.hill", T::real, "0.1", {}, "verify: |hill - stability| bound"},
        {"tolerances.tail", T::real, "0.25", {}, "tailscan: relative tail-constant error bound"},
        {"verify.hill_k_fraction", T::real, "0", {}, "verify: Hill fraction (0 disables the Hill check)"},
        {"tailscan.count", T::integer, "10000000", {}, "tailscan: number of product draws"},
        {"tailscan.levels", T::real_list, "0.995,0.999,0.9995", {}, "tailscan: quantile levels"},
        {"surface.lo", T::real, "-3", {}, "surface: grid lower end (every axis)"},
        {"surface.hi", T::real, "3", {}, "surface: grid upper end (every axis)"},
        {"surface.points", T::integer, "41", {}, "surface: points per axis"},
        {"surface.realization", T::integer, "0", {}, "surface: weight realization index"},
        {"sample.alpha", T::real, "1.5", {}, "sample: stability"},
        {"sample.beta", T::real, "0", {}, "sample: skewness"},
        {"sample.sigma", T::real, "1", {}, "sample: scale"},
        {"sample.mu", T::real, "0", {}, "sample: shift"},
        {"sample.count", T::integer, "1000", {}, "sample: number of draws"},
        {"numerics.tolerance", T::real, "1e-9", {}, "quadrature tolerance"},
        {"numerics.max_levels", T::integer, "10", {}, "Fourier quadrature levels (1..10)"},
        {"numerics.max_depth", T::integer, "15", {}, "finite-interval bisection depth"},
        {"output.path", T::text, "-", {}, "output file, - for stdout"},
        {"output.format", T::choice, "json", {"csv", "json"}, "output format"},
    };
    return fields;
}

inline const FieldSpec* find_field(const std::string& key)
{
    for (const auto& f : schema())
        if (f.key == key) return &f;
    return nullptr;
}

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline bool parse_real(const std::string& s, double& v)
{
    const std::string t = trim(s);
    if (t.empty()) return false;
    char* end = nullptr;
    v = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && std::isfinite(v);
}

inline bool parse_integer(const std::string& s, long long& v)
{
    const std::string t = trim(s);
    double d;
    if (!parse_real(t, d) || d != std::floor(d) || std::fabs(d) > 1.85e19) return false;
    if (std::fabs(d) < 9e15) {
        v = static_cast<long long>(d);
        return true;
    }
    // exact 64-bit values (seeds)
    unsigned long long u = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), u);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size()) return false;
    v = static_cast<long long>(u);
    return true;
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    return parts;
}

} // namespace detail

/// Named example configurations.
inline const std::map<std::string, std::vector<std::pair<std::string, std::string>>>& presets()
{
    static const std::map<std::string, std::vector<std::pair<std::string, std::string>>> p = {
        {"tanh",
         {{"network.architecture", "shallow"}, {"network.activation", "tanh"}, {"network.alpha0", "1.7"},
          {"network.alpha1", "1.7"}, {"network.sigma0", "1"}, {"network.sigma1", "1"}, {"ensemble.width_n", "5000"},
          {"ensemble.replications", "10000"}}},
        {"id",
         {{"network.architecture", "shallow"}, {"network.activation", "identity"}, {"network.alpha0", "1"},
          {"network.alpha1", "1"}, {"network.sigma0", "1"}, {"network.sigma1", "1"}, {"ensemble.width_n", "10000"},
          {"ensemble.replications", "10000"}}},
        {"cube",
         {{"network.architecture", "shallow"}, {"network.activation", "odd_power"}, {"network.gamma", "3"},
          {"network.alpha0", "1.5"}, {"network.alpha1", "1.5"}, {"network.sigma0", "1"}, {"network.sigma1", "1"},
          {"ensemble.width_n", "10000"}, {"ensemble.replications", "10000"}}},
        {"z32",
         {{"network.architecture", "shallow"}, {"network.activation", "positive_part_power"}, {"network.gamma", "1.5"},
          {"network.alpha0", "1.5"}, {"network.alpha1", "1"}, {"network.sigma0", "1"}, {"network.sigma1", "1"},
          {"ensemble.width_n", "10000"}, {"ensemble.replications", "10000"}}},
        {"relu",
         {{"network.architecture", "shallow"}, {"network.activation", "relu"}, {"network.alpha0", "1"},
          {"network.alpha1", "1"}, {"network.sigma0", "1"}, {"network.sigma1", "1"}, {"ensemble.width_n", "10000"},
          {"ensemble.replications", "10000"}}},
        {"deep_relu",
         {{"network.architecture", "deep"}, {"network.activation", "relu"}, {"network.alpha", "1"},
          {"network.sigma_w", "1"}, {"network.sigma_b", "1"}, {"network.input", "1,1"}, {"network.depth", "3"},
          {"ensemble.width_n", "10000"}, {"ensemble.replications", "10000"},
          {"ensemble.growth_mode", "exact_sequential"}}},
        {"deep_cube",
         {{"network.architecture", "deep"}, {"network.activation", "odd_power"}, {"network.gamma", "3"},
          {"network.alpha", "1.5"}, {"network.sigma_w", "1"}, {"network.sigma_b", "1"}, {"network.input", "1"},
          {"network.depth", "2"}, {"network.bias_regime", "geometric"}, {"ensemble.width_n", "1000"},
          {"ensemble.replications", "10000"}, {"ensemble.growth_mode", "exact_sequential"}}},
    };
    return p;
}

/// Fully resolved key/value configuration. Every schema key is present.
class RunConfig {
public:
    RunConfig()
    {
        for (const auto& f : schema()) values_[f.key] = f.default_value;
    }

    void set(const std::string& key, const std::string& raw)
    {
        const FieldSpec* f = find_field(key);
        if (!f) throw ConfigError(key, "unknown key");
        const std::string v = detail::trim(raw);
        switch (f->type) {
        case FieldType::real: {
            double d;
            if (!detail::parse_real(v, d)) throw ConfigError(key, "expected a real number, got '" + v + "'");
            break;
        }
        case FieldType::integer: {
            long long i;
            if (!detail::parse_integer(v, i)) throw ConfigError(key, "expected an integer, got '" + v + "'");
            break;
        }
        case FieldType::choice:
            if (std::find(f->choices.begin(), f->choices.end(), v) == f->choices.end()) {
                std::string all;
                for (const auto& c : f->choices) all += (all.empty() ? "" : ", ") + c;
                throw ConfigError(key, "'" + v + "' is not one of {" + all + "}");
            }
            break;
        case FieldType::real_list:
            for (const auto& part : detail::split(v, ',')) {
                double d;
                if (!detail::parse_real(part, d)) throw ConfigError(key, "expected comma-separated reals, got '" + v + "'");
            }
            break;
        case FieldType::text:
            if (v.empty()) throw ConfigError(key, "must not be empty");
            break;
        }
        values_[key] = v;
    }

    void apply_preset(const std::string& name)
    {
        const auto it = presets().find(name);
        if (it == presets().end()) throw ConfigError("preset", "unknown preset '" + name + "'");
        for (const auto& [k, v] : it->second) set(k, v);
    }

    /// Reads "key = value" lines ('#' starts a comment). A line "preset = name"
    /// is expanded in place. A JSON document is read through its "config" object.
    void merge_text(const std::string& text, const std::string& origin = "config")
    {
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(text);
            } catch (const std::exception& e) {
                throw ConfigError(origin, std::string("invalid JSON: ") + e.what());
            }
            const auto& c = j.contains("config") ? j["config"] : j;
            if (!c.is_object()) throw ConfigError(origin, "JSON config must be an object");
            for (const auto& [k, v] : c.items()) set(k, v.is_string() ? v.get<std::string>() : v.dump());
            return;
        }
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno), "expected 'key = value'");
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (key == "preset")
                apply_preset(value);
            else
                set(key, value);
        }
    }

    void merge_file(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        merge_text(ss.str(), path);
    }

    const std::string& get(const std::string& key) const
    {
        const auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError(key, "unknown key");
        return it->second;
    }

    double real(const std::string& key) const
    {
        double d = 0;
        detail::parse_real(get(key), d);
        return d;
    }

    long long integer(const std::string& key) const
    {
        long long i = 0;
        detail::parse_integer(get(key), i);
        return i;
    }

    std::vector<double> reals(const std::string& key) const
    {
        std::vector<double> out;
        for (const auto& part : detail::split(get(key), ',')) {
            double d = 0;
            detail::parse_real(part, d);
            out.push_back(d);
        }
        return out;
    }

    /// Keys in schema order.
    std::vector<std::pair<std::string, std::string>> entries() const
    {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& f : schema()) out.emplace_back(f.key, values_.at(f.key));
        return out;
    }

    /// Re-readable text form.
    std::string to_text() const
    {
        std::string out;
        for (const auto& [k, v] : entries()) out += k + " = " + v + "\n";
        return out;
    }

    friend bool operator==(const RunConfig& a, const RunConfig& b) { return a.values_ == b.values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Typed views with the domain checks of each module, reported per field.
inline ActivationSpec activation_of(const RunConfig& c)
{
    try {
        return builtin(c.get("network.activation"), c.real("network.gamma"));
    } catch (const DomainError& e) {
        throw ConfigError("network.activation", e.what());
    }
}

inline ScalingMode scaling_of(const RunConfig& c)
{
    const auto& s = c.get("network.scaling");
    return s == "auto" ? ScalingMode::automatic : s == "plain_n" ? ScalingMode::plain_n : ScalingMode::n_log_n;
}

inline ShallowConfig shallow_of(const RunConfig& c)
{
    ShallowConfig s;
    s.alpha0 = c.real("network.alpha0");
    s.sigma0 = c.real("network.sigma0");
    s.alpha1 = c.real("network.alpha1");
    s.sigma1 = c.real("network.sigma1");
    if (!(s.alpha0 > 0 && s.alpha0 <= 2)) throw ConfigError("network.alpha0", "must lie in (0, 2]");
    if (!(s.alpha1 > 0 && s.alpha1 <= 2)) throw ConfigError("network.alpha1", "must lie in (0, 2]");
    if (!(s.sigma0 > 0)) throw ConfigError("network.sigma0", "must be positive");
    if (!(s.sigma1 > 0)) throw ConfigError("network.sigma1", "must be positive");
    s.activation = activation_of(c);
    s.scaling = scaling_of(c);
    return s;
}

inline NetworkConfig network_of(const RunConfig& c)
{
    NetworkConfig n;
    n.alpha = c.real("network.alpha");
    n.sigma_w = c.real("network.sigma_w");
    n.sigma_b = c.real("network.sigma_b");
    n.input = c.reals("network.input");
    n.depth = static_cast<int>(c.integer("network.depth"));
    n.activation = activation_of(c);
    n.bias_regime = c.get("network.bias_regime") == "geometric" ? BiasRegime::geometric : BiasRegime::standard;
    n.scaling = scaling_of(c);
    n.readout_gain = c.real("network.readout_gain");
    try {
        n.validate();
    } catch (const DomainError& e) {
        throw ConfigError("network", e.what());
    }
    return n;
}

inline EnsembleConfig ensemble_of(const RunConfig& c)
{
    EnsembleConfig e;
    const long long w = c.integer("ensemble.width_n"), r = c.integer("ensemble.replications");
    if (w < 1) throw ConfigError("ensemble.width_n", "must be >= 1");
    if (r < 1) throw ConfigError("ensemble.replications", "must be >= 1");
    e.width = static_cast<std::size_t>(w);
    e.replications = static_cast<std::size_t>(r);
    e.seed = RngSeed(static_cast<std::uint64_t>(c.integer("ensemble.seed")));
    e.growth = c.get("ensemble.growth_mode") == "finite_width" ? GrowthMode::finite_width : GrowthMode::exact_sequential;
    e.budget = c.real("ensemble.budget");
    return e;
}

inline QuadratureOptions numerics_of(const RunConfig& c)
{
    QuadratureOptions q;
    q.tolerance = c.real("numerics.tolerance");
    q.max_levels = static_cast<int>(c.integer("numerics.max_levels"));
    q.max_depth = static_cast<int>(c.integer("numerics.max_depth"));
    if (!(q.tolerance > 0 && q.tolerance < 1e-2)) throw ConfigError("numerics.tolerance", "must lie in (0, 1e-2)");
    if (q.max_levels < 2 || q.max_levels > 10) throw ConfigError("numerics.max_levels", "must lie in [2, 10]");
    if (q.max_depth < 1 || q.max_depth > 30) throw ConfigError("numerics.max_depth", "must lie in [1, 30]");
    return q;
}

} // namespace stablenn::cli
