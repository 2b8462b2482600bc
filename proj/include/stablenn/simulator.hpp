#pragma once

// Monte Carlo sampling of finite-width Stable networks.
//
// Every replication r owns the random stream (seed, r), so ensembles do not
// depend on the number of worker threads.

#include "activations.hpp"
#include "error.hpp"
#include "limit_theory.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stable.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace stablenn {

enum class BiasRegime { standard, geometric };
enum class ScalingMode { automatic, plain_n, n_log_n };
enum class GrowthMode { exact_sequential, finite_width };

inline const char* to_string(BiasRegime b) { return b == BiasRegime::standard ? "standard" : "geometric"; }
inline const char* to_string(GrowthMode g)
{
    return g == GrowthMode::exact_sequential ? "exact_sequential" : "finite_width";
}
inline const char* to_string(ScalingMode s)
{
    switch (s) {
    case ScalingMode::automatic: return "auto";
    case ScalingMode::plain_n: return "plain_n";
    case ScalingMode::n_log_n: return "n_log_n";
    }
    return "?";
}

namespace detail {

/// nu(n)^{-1/p} with nu(n) = n or n log n.
inline double normalization(std::size_t n, double p, bool log_scaling)
{
    const double dn = static_cast<double>(n);
    if (log_scaling) {
        require(n >= 2, "n log n normalization needs n >= 2");
        return std::pow(dn * std::log(dn), -1 / p);
    }
    return std::pow(dn, -1 / p);
}

} // namespace detail

struct NetworkConfig {
    double alpha = 1.5;
    double sigma_w = 1;
    double sigma_b = 1;
    std::vector<double> input{1.0};
    int depth = 1;
    ActivationSpec activation = builtin("tanh");
    BiasRegime bias_regime = BiasRegime::standard;
    ScalingMode scaling = ScalingMode::automatic;
    /// Extra factor on the read-out weights (sigma_w of the last layer only).
    double readout_gain = 1;

    void validate() const
    {
        detail::require(alpha > 0 && alpha <= 2, "network: alpha must lie in (0, 2]");
        detail::require(sigma_w > 0, "network: sigma_w must be positive");
        detail::require(sigma_b >= 0, "network: sigma_b must be non-negative");
        detail::require(!input.empty(), "network: input dimension must be >= 1");
        detail::require(depth >= 1, "network: depth must be >= 1");
        detail::require(std::isfinite(readout_gain), "network: readout_gain must be finite");
        const bool superlinear = alpha < 2 && activation.power_like() && detail::compare_growth(activation.gamma(), 1) > 0;
        if (bias_regime == BiasRegime::geometric)
            detail::require(superlinear, "network: geometric bias regime requires an E2/E3 activation with gamma > 1");
        else
            detail::require(!superlinear, "network: gamma > 1 requires the geometric bias regime");
    }

    /// True when auto scaling resolves to n log n (E2/E3 with gamma = 1).
    bool log_scaling() const
    {
        if (scaling != ScalingMode::automatic) return scaling == ScalingMode::n_log_n;
        return alpha < 2 && activation.power_like() && detail::compare_growth(activation.gamma(), 1) == 0;
    }

    /// Stability index of the sum that forms layer l (l >= 1), i.e. of b^{(l-1)}.
    double layer_stability(int l) const
    {
        if (bias_regime == BiasRegime::standard) return alpha;
        return alpha / std::pow(activation.gamma(), l - 1);
    }
};

struct EnsembleConfig {
    std::size_t width = 1000;
    std::size_t replications = 1000;
    RngSeed seed{};
    GrowthMode growth = GrowthMode::exact_sequential;
    /// Upper bound on random variates per ensemble.
    double budget = 2e11;

    void validate() const
    {
        detail::require(width >= 1, "ensemble: width must be >= 1");
        detail::require(replications >= 1, "ensemble: replications must be >= 1");
    }
};

/// Number of stable variates an ensemble will draw.
inline double ensemble_cost(const NetworkConfig& net, const EnsembleConfig& ens)
{
    const double n = static_cast<double>(ens.width);
    const double per = ens.growth == GrowthMode::exact_sequential
                           ? 2 * n + 1
                           : n * (static_cast<double>(net.input.size()) + 1) + (net.depth - 1) * n * (n + 1) + n + 1;
    return per * static_cast<double>(ens.replications);
}

inline void check_budget(const NetworkConfig& net, const EnsembleConfig& ens)
{
    const double cost = ensemble_cost(net, ens);
    if (cost > ens.budget)
        throw ConfigError("ensemble.budget", "run needs " + std::to_string(cost) + " variates, budget is " +
                                                 std::to_string(ens.budget));
}

struct ShallowConfig {
    double alpha0 = 1;
    double sigma0 = 1;
    double alpha1 = 1;
    double sigma1 = 1;
    ActivationSpec activation = builtin("tanh");
    ScalingMode scaling = ScalingMode::automatic;
    std::optional<double> exponent;  ///< overrides p

    double resolved_exponent() const
    {
        return exponent ? *exponent : shallow_normalization(alpha0, alpha1, activation).scaling_exponent;
    }

    bool log_scaling() const
    {
        if (scaling != ScalingMode::automatic) return scaling == ScalingMode::n_log_n;
        return shallow_normalization(alpha0, alpha1, activation).log_correction;
    }
};

/// One draw of nu(n)^{-1/p} sum_{j<n} w_j tau(w0_j).
inline double sample_shallow(std::size_t n, const ShallowConfig& cfg, RandomStream& rng)
{
    detail::require(n >= 1, "sample_shallow: n must be >= 1");
    const SymmetricStableSampler pre(cfg.alpha0), out(cfg.alpha1);
    const double norm = detail::normalization(n, cfg.resolved_exponent(), cfg.log_scaling());
    double sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double y = cfg.sigma0 * pre(rng);
        sum += out(rng) * cfg.activation(y);
    }
    return cfg.sigma1 * norm * sum;
}

inline std::vector<double> shallow_ensemble(const ShallowConfig& cfg, std::size_t n, std::size_t replications,
                                            RngSeed seed, unsigned workers = default_workers())
{
    detail::require(n >= 1, "shallow_ensemble: n must be >= 1");
    const double norm = detail::normalization(n, cfg.resolved_exponent(), cfg.log_scaling());
    const SymmetricStableSampler pre(cfg.alpha0), out(cfg.alpha1);
    std::vector<double> values(replications);
    parallel_for(replications, workers, [&](std::size_t r) {
        RandomStream rng(seed, r);
        double sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double y = cfg.sigma0 * pre(rng);
            sum += out(rng) * cfg.activation(y);
        }
        values[r] = cfg.sigma1 * norm * sum;
    });
    return values;
}

/// count draws of X tau(Y), X ~ S_ax(sx), Y ~ S_ay(sy).
inline std::vector<double> sample_products(double alpha_x, double sigma_x, double alpha_y, double sigma_y,
                                           const ActivationSpec& spec, std::size_t count, RngSeed seed,
                                           unsigned workers = default_workers())
{
    const SymmetricStableSampler sx(alpha_x), sy(alpha_y);
    std::vector<double> out(count);
    const std::size_t chunks = (count + detail::sample_chunk - 1) / detail::sample_chunk;
    parallel_for(chunks, workers, [&](std::size_t c) {
        RandomStream rng(seed, c);
        const std::size_t hi = std::min(count, (c + 1) * detail::sample_chunk);
        for (std::size_t i = c * detail::sample_chunk; i < hi; ++i) {
            const double y = sigma_y * sy(rng);
            out[i] = sigma_x * sx(rng) * spec(y);
        }
    });
    return out;
}

namespace detail {

struct DeepPlan {
    std::vector<SymmetricStableSampler> bias;  // bias[l] draws b^{(l)}, l = 0..L
    std::vector<double> norm;                  // norm[l] for the sum forming layer l, l = 2..L+1
    bool draw_bias;
};

inline DeepPlan plan_deep(const NetworkConfig& net, std::size_t n)
{
    DeepPlan p{{}, std::vector<double>(net.depth + 2, 1.0), net.sigma_b > 0};
    for (int l = 0; l <= net.depth; ++l) p.bias.emplace_back(net.layer_stability(l + 1));
    const bool logs = net.log_scaling();
    for (int l = 2; l <= net.depth + 1; ++l) p.norm[l] = normalization(n, net.layer_stability(l), logs);
    return p;
}

/// Forward pass of one finite-width network at input x. Draw order is fixed
/// and independent of x, so the same stream gives the same weights.
inline double forward_finite(const NetworkConfig& net, const DeepPlan& plan, const std::vector<double>& x,
                             std::size_t n, RandomStream& rng, std::vector<double>& act, std::vector<double>& next)
{
    const SymmetricStableSampler w(net.alpha);
    const ActivationSpec& tau = net.activation;
    act.resize(n);
    next.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double g = plan.draw_bias ? net.sigma_b * plan.bias[0](rng) : 0.0;
        for (double xj : x) g += net.sigma_w * xj * w(rng);
        act[i] = tau(g);
    }
    for (int l = 2; l <= net.depth; ++l) {
        for (std::size_t j = 0; j < n; ++j) {
            const double b = plan.draw_bias ? net.sigma_b * plan.bias[l - 1](rng) : 0.0;
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) s += w(rng) * act[i];
            next[j] = b + net.sigma_w * plan.norm[l] * s;
        }
        for (std::size_t j = 0; j < n; ++j) act[j] = tau(next[j]);
    }
    const double b = plan.draw_bias ? net.sigma_b * plan.bias[net.depth](rng) : 0.0;
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += w(rng) * act[j];
    return b + net.readout_gain * net.sigma_w * plan.norm[net.depth + 1] * s;
}

} // namespace detail

/// Ensemble of network outputs g^{(L+1)}(x).
///
/// finite_width: every hidden layer has width n (joint growth, exploratory).
/// exact_sequential: the n units of layer L are drawn from their proven limit
/// law and only the read-out sum is simulated.
inline std::vector<double> sample_deep(const NetworkConfig& net, const EnsembleConfig& ens,
                                       unsigned workers = default_workers(), const QuadratureOptions& opt = {})
{
    net.validate();
    ens.validate();
    check_budget(net, ens);
    const std::size_t n = ens.width;
    const detail::DeepPlan plan = detail::plan_deep(net, n);
    std::vector<double> values(ens.replications);

    if (ens.growth == GrowthMode::finite_width) {
        parallel_for(ens.replications, workers, [&](std::size_t r) {
            RandomStream rng(ens.seed, r);
            std::vector<double> act, next;
            values[r] = detail::forward_finite(net, plan, net.input, n, rng, act, next);
        });
        return values;
    }

    const LayerScaleSequence seq =
        deep_recursion(net.alpha, net.sigma_w, net.sigma_b, net.input, net.depth, net.activation, opt);
    const LayerScale& hidden = seq[net.depth - 1];
    const SymmetricStableSampler unit(hidden.stability), w(net.alpha);
    const double factor = net.readout_gain * net.sigma_w * plan.norm[net.depth + 1];
    parallel_for(ens.replications, workers, [&](std::size_t r) {
        RandomStream rng(ens.seed, r);
        const double b = plan.draw_bias ? net.sigma_b * plan.bias[net.depth](rng) : 0.0;
        double s = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double g = hidden.scale * unit(rng);
            s += w(rng) * net.activation(g);
        }
        values[r] = b + factor * s;
    });
    return values;
}

/// One finite-width weight realization evaluated at every grid point.
/// `realization` selects the random stream.
inline std::vector<double> sample_surface(const NetworkConfig& net, const std::vector<std::vector<double>>& grid,
                                          std::size_t n, RngSeed seed, std::uint64_t realization = 0,
                                          unsigned workers = default_workers())
{
    net.validate();
    detail::require(n >= 1, "sample_surface: n must be >= 1");
    for (const auto& x : grid)
        detail::require(x.size() == net.input.size(), "sample_surface: grid point dimension differs from the network input");
    const detail::DeepPlan plan = detail::plan_deep(net, n);
    std::vector<double> values(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t k) {
        RandomStream rng(seed, realization);
        std::vector<double> act, next;
        values[k] = detail::forward_finite(net, plan, grid[k], n, rng, act, next);
    });
    return values;
}

/// Two-sided Pareto law with P(Z > z) = c z^{-p} and P(Z < -z) = d z^{-p}
/// for z >= (c + d)^{1/p}.
struct ParetoTails {
    double c = 0.5;
    double d = 0.5;
    double p = 1.5;

    double lower_bound() const { return std::pow(c + d, 1 / p); }
    double mean() const
    {
        detail::require(p > 1, "ParetoTails: mean is infinite for p <= 1");
        return (c - d) / (c + d) * lower_bound() * p / (p - 1);
    }

    double operator()(RandomStream& rng) const
    {
        const double sign = rng.uniform() * (c + d) < c ? 1.0 : -1.0;
        return sign * lower_bound() * std::pow(rng.uniform(), -1 / p);
    }
};

/// Replications of (n L(n))^{-1/p} sum_{i<n} (Z_i - a_n), centered per the
/// generalized CLT (L = 1).
inline std::vector<double> sample_gclt_sums(const ParetoTails& law, std::size_t n, std::size_t replications,
                                            RngSeed seed, unsigned workers = default_workers())
{
    detail::require(law.c >= 0 && law.d >= 0 && law.c + law.d > 0, "ParetoTails: need c, d >= 0, c + d > 0");
    detail::require(law.p > 0 && law.p < 2, "ParetoTails: p must lie in (0, 2)");
    detail::require(n >= 1, "sample_gclt_sums: n must be >= 1");
    const LimitPrediction pred = gclt_limit(law.c, law.d, law.p, false, law.p > 1 ? law.mean() : 0.0);
    const double shift = law.p == 1 ? pred.centering * std::log(static_cast<double>(n)) : pred.centering;
    const double norm = detail::normalization(n, law.p, false);
    std::vector<double> values(replications);
    parallel_for(replications, workers, [&](std::size_t r) {
        RandomStream rng(seed, r);
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += law(rng) - shift;
        values[r] = norm * s;
    });
    return values;
}

} // namespace stablenn
