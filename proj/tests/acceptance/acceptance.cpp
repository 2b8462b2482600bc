// Acceptance run: ten criteria, one PASS/FAIL line each.
//
// Criteria 1-9 each produce a JSON artifact (estimates, distances, tables
// and FNV-1a digests of every simulated sample). Criterion 10 regenerates all
// artifacts with a different worker count and compares them byte for byte.
// Artifacts are written under ./acceptance_artifacts/w<workers>/.
// Arguments, if any, select a subset of criteria 1-9 by number.

#include "support/oracles.hpp"

#include <stablenn/serialize.hpp>
#include <stablenn/stablenn.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace stablenn;
using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    std::vector<Check> checks;
    json artifact = json::object();
};

json checks_json(const std::vector<Check>& cs)
{
    json a = json::array();
    for (const auto& c : cs) a.push_back(to_json(c));
    return a;
}

std::string hex(std::uint64_t v)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string label(double a)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%g", a);
    return buf;
}

void record_samples(Outcome& o, const std::string& name, const std::vector<double>& v)
{
    o.artifact["samples"][name] = {{"count", v.size()}, {"fnv1a", hex(oracle::digest(v))}};
}

// 1. stable machinery
Outcome stable_machinery(unsigned workers)
{
    Outcome o;
    // sampler vs closed-form CDFs
    const auto cauchy = sample(StableParams::symmetric(1), 100000, RngSeed(1001), workers);
    const auto gauss = sample(StableParams::symmetric(2), 100000, RngSeed(1002), workers);
    record_samples(o, "alpha1", cauchy);
    record_samples(o, "alpha2", gauss);
    o.checks.push_back(upper_check("ks_sampler_alpha1",
                                   ks_statistic(cauchy, [](double x) { return 0.5 + std::atan(x) / pi; }, workers), 0.01));
    o.checks.push_back(upper_check("ks_sampler_alpha2",
                                   ks_statistic(gauss, [](double x) { return 0.5 * std::erfc(-x / 2); }, workers), 0.01));

    // inversion vs arctan / erf on a grid
    double err1 = 0, err2 = 0;
    for (double x = -100; x <= 100; x += 0.05) {
        err1 = std::max(err1, std::fabs(symmetric_cdf(1, 1, x) - (0.5 + std::atan(x) / pi)));
        err2 = std::max(err2, std::fabs(symmetric_cdf(2, 1, x) - 0.5 * std::erfc(-x / 2)));
    }
    o.checks.push_back(upper_check("cdf_vs_arctan", err1, 1e-8));
    o.checks.push_back(upper_check("cdf_vs_erf", err2, 1e-8));

    for (double a : {0.5, 1.0, 1.5}) {
        const double q = 1 / oracle::sine_power_integral(a);
        o.checks.push_back(absolute_check("c_alpha_" + label(a), c_alpha(a), q, 1e-6));
    }

    // moments vs Monte Carlo, r = 0.4 alpha keeps |Z|^r square integrable
    std::uint64_t seed = 1010;
    for (double a : {0.8, 1.0, 1.5, 2.0}) {
        const double r = 0.4 * a;
        const auto z = sample(StableParams::symmetric(a), 1000000, RngSeed(seed++), workers);
        record_samples(o, "moment_alpha" + label(a), z);
        double m = 0;
        for (double v : z) m += std::pow(std::fabs(v), r);
        m /= static_cast<double>(z.size());
        o.checks.push_back(relative_check("moment_mc_alpha" + label(a), frac_abs_moment(a, 1, r), m, 0.01));
    }
    return o;
}

// 2. generalized CLT
Outcome generalized_clt(unsigned workers)
{
    Outcome o;
    const std::size_t n = 10000, reps = 10000;
    const ParetoTails sym{0.5, 0.5, 1.5};
    const auto s = sample_gclt_sums(sym, n, reps, RngSeed(2001), workers);
    record_samples(o, "symmetric_p1.5", s);
    const LimitPrediction pred = gclt_limit(sym.c, sym.d, sym.p, false, sym.mean());
    const StabilityFit fit = estimate_stability(s);
    o.checks.push_back(absolute_check("alpha_hat", fit.alpha, 1.5, 0.05));
    o.checks.push_back(upper_check("ks_vs_gclt", ks_against_prediction(s, pred, workers), 0.03));
    o.artifact["symmetric"] = {{"prediction", to_json(pred)}, {"alpha_hat", fit.alpha}, {"sigma_hat", fit.sigma}};

    const ParetoTails skew{2, 1, 1};
    const auto t = sample_gclt_sums(skew, n, reps, RngSeed(2002), workers);
    record_samples(o, "skewed_p1", t);
    const LimitPrediction sp = gclt_limit(skew.c, skew.d, skew.p, false);
    std::vector<double> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    const double median = detail::quantile_sorted(sorted, 0.5);
    o.checks.push_back(upper_check("median_in_scales", std::fabs(median) / sp.scale, 3.0));
    o.artifact["skewed"] = {{"prediction", to_json(sp)}, {"median", median}};
    return o;
}

// 3. shallow tanh
Outcome shallow_tanh(unsigned workers)
{
    Outcome o;
    ShallowConfig cfg;
    cfg.alpha0 = cfg.alpha1 = 1.7;
    cfg.activation = builtin("tanh");
    const auto v = shallow_ensemble(cfg, 5000, 10000, RngSeed(3001), workers);
    record_samples(o, "outputs", v);
    const LimitPrediction pred = shallow_limit(1.7, 1, 1.7, 1, cfg.activation);
    const StabilityFit fit = estimate_stability(v);
    o.checks.push_back(upper_check("ks_vs_shallow_limit", ks_against_prediction(v, pred, workers), 0.05));
    o.checks.push_back(absolute_check("alpha_hat", fit.alpha, 1.7, 0.1));
    o.artifact["prediction"] = to_json(pred);
    o.artifact["sigma_hat"] = fit.sigma;
    return o;
}

// 4. log correction
Outcome log_correction(unsigned workers)
{
    Outcome o;
    const std::vector<std::size_t> grid{1u << 10, 1u << 13, 1u << 16};
    std::uint64_t seed = 4001;
    for (const char* name : {"identity", "relu"}) {
        const auto res = log_factor_check(builtin(name), 1.0, grid, 10000, RngSeed(seed++), workers);
        json rows = json::array();
        for (const auto& r : res.rows) rows.push_back({{"n", r.n}, {"sigma_plain", r.sigma_plain}, {"sigma_log", r.sigma_log}});
        o.artifact[name] = rows;
        for (auto c : res.checks) {
            c.name = std::string(name) + "_" + c.name;
            o.checks.push_back(c);
        }
    }
    return o;
}

// 5. super-linear shallow network
Outcome superlinear_shallow(unsigned workers)
{
    Outcome o;
    ShallowConfig cfg;
    cfg.alpha0 = cfg.alpha1 = 1.5;
    cfg.activation = builtin("odd_power", 3);
    const LimitPrediction pred = shallow_limit(1.5, 1, 1.5, 1, cfg.activation);
    const auto many = shallow_ensemble(cfg, 100, 1000000, RngSeed(5001), workers);
    record_samples(o, "hill_outputs", many);
    const double hill = hill_tail_index(many, 0.01);
    o.checks.push_back(absolute_check("hill_index", hill, 0.5, 0.1));
    const auto wide = shallow_ensemble(cfg, 10000, 10000, RngSeed(5002), workers);
    record_samples(o, "ks_outputs", wide);
    o.checks.push_back(upper_check("ks_vs_S0.5", ks_against_prediction(wide, pred, workers), 0.05));
    o.artifact["prediction"] = to_json(pred);
    return o;
}

NetworkConfig deep_relu_net()
{
    NetworkConfig net;
    net.alpha = 1;
    net.sigma_w = net.sigma_b = 1;
    net.input = {1, 1};
    net.depth = 3;
    net.activation = builtin("relu");
    return net;
}

// 6. deep ReLU, sequential growth
Outcome deep_relu(unsigned workers)
{
    Outcome o;
    const NetworkConfig net = deep_relu_net();
    EnsembleConfig ens;
    ens.width = 10000;
    ens.replications = 10000;
    ens.seed = RngSeed(6001);
    ens.growth = GrowthMode::exact_sequential;
    const auto v = sample_deep(net, ens, workers);
    record_samples(o, "outputs", v);
    const auto seq = deep_recursion(net.alpha, net.sigma_w, net.sigma_b, net.input, net.depth, net.activation);
    const double target = relu_explicit_scale(net.depth, net.alpha, net.sigma_w, net.sigma_b, seq[0].scale);
    const StabilityFit fit = estimate_stability(v);
    o.checks.push_back(relative_check("sigma_hat_vs_explicit", fit.sigma, target, 0.10));
    o.checks.push_back(absolute_check("alpha_hat", fit.alpha, 1.0, 0.1));
    json layers = json::array();
    for (const auto& l : seq) layers.push_back(to_json(l));
    o.artifact["layers"] = layers;
    o.artifact["ks_vs_limit"] = ks_against_prediction(v, deep_limit(seq), workers);
    return o;
}

// 7. deep super-linear network, geometric biases
Outcome deep_superlinear(unsigned workers)
{
    Outcome o;
    NetworkConfig net;
    net.alpha = 1.5;
    net.sigma_w = net.sigma_b = 1;
    net.input = {1};
    net.depth = 2;
    net.activation = builtin("odd_power", 3);
    net.bias_regime = BiasRegime::geometric;
    EnsembleConfig ens;
    ens.width = 1000;
    ens.replications = 100000;
    ens.seed = RngSeed(7001);
    ens.growth = GrowthMode::exact_sequential;
    const auto v = sample_deep(net, ens, workers);
    record_samples(o, "outputs", v);
    const double hill = hill_tail_index(v, 0.01);
    o.checks.push_back(absolute_check("hill_index", hill, 1.5 / 9, 0.1));
    json layers = json::array();
    for (const auto& l : deep_recursion(net.alpha, net.sigma_w, net.sigma_b, net.input, net.depth, net.activation))
        layers.push_back(to_json(l));
    o.artifact["layers"] = layers;
    return o;
}

// 8. tail theorem scan
Outcome tail_theorem(unsigned workers)
{
    Outcome o;
    std::uint64_t seed = 8001;
    for (const char* name : {"identity", "relu", "tanh"}) {
        const ActivationSpec spec = builtin(name);
        const TailAsymptote asym = product_tail(1, 1, 1, 1, spec);
        const auto draws = sample_products(1, 1, 1, 1, spec, 10000000, RngSeed(seed++), workers);
        record_samples(o, name, draws);
        const TailTable t = tail_scan(draws, asym, {0.999});
        o.checks.push_back(relative_check(std::string(name) + "_tail_constant", t[0].normalized, asym.constant, 0.25));
        o.artifact[name] = {{"asymptote", to_json(asym)}, {"row", to_json(t[0])}};
    }
    return o;
}

// 9. Breiman ratio and sum stability
Outcome breiman_and_sums(unsigned workers)
{
    Outcome o;
    const std::size_t N = 10000000;
    const double ax = 1, ay = 1.5, sy = 1;
    const auto x = sample(StableParams::symmetric(ax), N, RngSeed(9001), workers);
    const auto y = sample(StableParams::symmetric(ay, sy), N, RngSeed(9002), workers);
    record_samples(o, "breiman_x", x);
    record_samples(o, "breiman_y", y);
    std::vector<double> xy(N);
    for (std::size_t i = 0; i < N; ++i) xy[i] = std::fabs(x[i] * y[i]);
    std::vector<double> sorted = xy;
    const auto k = static_cast<std::ptrdiff_t>(0.999 * static_cast<double>(N));
    std::nth_element(sorted.begin(), sorted.begin() + k, sorted.end());
    const double u = sorted[static_cast<std::size_t>(k)];
    double num = 0, den = 0;
    for (std::size_t i = 0; i < N; ++i) {
        num += xy[i] > u;
        den += std::fabs(x[i]) > u;
    }
    o.checks.push_back(relative_check("breiman_ratio", num / den, frac_abs_moment(ay, sy, ax), 0.25));
    o.artifact["breiman"] = {{"u", u}, {"ratio", num / den}};

    std::uint64_t seed = 9010;
    for (double a : {0.7, 1.0, 1.6}) {
        const double s1 = 1, s2 = 2;
        auto p = sample(StableParams::symmetric(a, s1), 100000, RngSeed(seed++), workers);
        const auto q = sample(StableParams::symmetric(a, s2), 100000, RngSeed(seed++), workers);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += q[i];
        record_samples(o, "sum_alpha" + label(a), p);
        const double s = std::pow(std::pow(s1, a) + std::pow(s2, a), 1 / a);
        o.checks.push_back(upper_check("sum_stability_ks_alpha" + label(a),
                                       ks_statistic(p, [&](double v) { return symmetric_cdf(a, s, v); }, workers), 0.01));
    }
    return o;
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    std::function<Outcome(unsigned)> run;
};

} // namespace

int main(int argc, char** argv)
{
    std::vector<Criterion> criteria = {
        {1, "stable machinery", 60, stable_machinery},
        {2, "generalized CLT", 180, generalized_clt},
        {3, "shallow tanh", 120, shallow_tanh},
        {4, "log correction", 300, log_correction},
        {5, "super-linear shallow", 300, superlinear_shallow},
        {6, "deep ReLU sequential", 300, deep_relu},
        {7, "deep super-linear", 300, deep_superlinear},
        {8, "tail theorem scan", 300, tail_theorem},
        {9, "Breiman and sum stability", 180, breiman_and_sums},
    };
    if (argc > 1) {
        std::vector<int> wanted;
        for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
        std::erase_if(criteria, [&](const Criterion& c) { return std::find(wanted.begin(), wanted.end(), c.id) == wanted.end(); });
    }
    const unsigned primary_workers = 8, replay_workers = 1;
    const std::filesystem::path root = "acceptance_artifacts";

    auto write = [&](unsigned w, int id, const std::string& text) {
        const auto dir = root / ("w" + std::to_string(w));
        std::filesystem::create_directories(dir);
        std::ofstream(dir / ("criterion" + std::to_string(id) + ".json"), std::ios::binary) << text;
    };

    bool all = true;
    std::vector<std::string> artifacts;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = false;
        try {
            Outcome o = c.run(primary_workers);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            o.checks.push_back(upper_check("runtime_seconds", secs, c.budget_seconds));
            pass = all_passed(o.checks);
            for (const auto& k : o.checks) {
                char buf[200];
                std::snprintf(buf, sizeof buf, "%s%s=%.6g(%s%.4g)", detail.empty() ? "" : " ", k.name.c_str(), k.observed,
                              k.passed ? "ok " : "FAILED ", k.tolerance);
                detail += buf;
            }
            // the timing is not part of the reproducible artifact
            o.checks.pop_back();
            o.artifact["checks"] = checks_json(o.checks);
            artifacts.push_back(o.artifact.dump(2));
            write(primary_workers, c.id, artifacts.back());
        } catch (const std::exception& e) {
            detail = std::string("error: ") + e.what();
            artifacts.emplace_back();
        }
        all = all && pass;
        std::printf("CRITERION %d %s: %s | %s\n", c.id, pass ? "PASS" : "FAIL", c.title, detail.c_str());
        std::fflush(stdout);
    }

    // 10. determinism under a different worker count
    {
        std::string detail;
        bool pass = true;
        for (std::size_t i = 0; i < criteria.size(); ++i) {
            std::string replay;
            try {
                Outcome o = criteria[i].run(replay_workers);
                o.artifact["checks"] = checks_json(o.checks);
                replay = o.artifact.dump(2);
                write(replay_workers, criteria[i].id, replay);
            } catch (const std::exception& e) {
                replay = std::string("error: ") + e.what();
            }
            const bool same = !artifacts[i].empty() && replay == artifacts[i];
            pass = pass && same;
            detail += (detail.empty() ? "" : " ") + std::to_string(criteria[i].id) + (same ? "=identical" : "=DIFFERENT");
        }
        all = all && pass;
        std::printf("CRITERION 10 %s: determinism %u vs %u workers | %s\n", pass ? "PASS" : "FAIL", primary_workers,
                    replay_workers, detail.c_str());
    }
    return all ? 0 : 1;
}
