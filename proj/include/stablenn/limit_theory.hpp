#pragma once

// Closed-form limit laws: generalized CLT, tails of X*tau(Y), shallow and
// deep (sequential-growth) network limits.

#include "activations.hpp"
#include "density.hpp"
#include "error.hpp"
#include "stable.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace stablenn {

struct LimitPrediction {
    double stability = 2;
    double scale = 1;
    double scaling_exponent = 2;  ///< p in the n^{-1/p} normalization
    bool log_correction = false;  ///< normalization is (n log n)^{-1/p}
    double centering = 0;         ///< a_n: 0, slope of (c-d) log n, or the mean
    double skewness = 0;          ///< (c-d)/(c+d)
};

struct LayerScale {
    int layer = 1;
    double stability = 2;
    double scale = 1;
    double scaling_exponent = 2;  ///< exponent of the sum feeding this layer
    bool log_correction = false;
};

using LayerScaleSequence = std::vector<LayerScale>;

namespace detail {

/// Sign of gamma - ratio, with ties decided at relative tolerance 1e-12.
inline int compare_growth(double gamma, double ratio)
{
    if (std::fabs(gamma - ratio) <= 1e-12 * std::max(std::fabs(gamma), std::fabs(ratio))) return 0;
    return gamma > ratio ? 1 : -1;
}

inline double tau_abs_moment(const ActivationSpec& spec, double alpha, double sigma, double r,
                             const QuadratureOptions& opt)
{
    if (spec.kind() == ActivationSpec::Kind::identity || spec.kind() == ActivationSpec::Kind::odd_power) {
        const double q = r * spec.gamma();
        require(alpha == 2 || q < alpha - 1e-9, "moment E|tau(Y)|^r is infinite for this law");
        return frac_abs_moment(alpha, sigma, q, opt);
    }
    if (spec.power_like())
        require(alpha == 2 || r * spec.gamma() < alpha - 1e-9, "moment E|tau(Y)|^r is infinite for this law");
    return symmetric_expectation(alpha, sigma, [&](double z) { return std::pow(std::fabs(spec(z)), r); }, opt);
}

inline void require_alpha_open(double a, const char* what)
{
    require(a > 0 && a < 2, std::string(what) + ": stability must lie in (0, 2)");
}

} // namespace detail

/// E|tau(Y)|^r for Y ~ S_alpha(sigma).
inline double tau_abs_moment(const ActivationSpec& spec, double alpha, double sigma, double r,
                             const QuadratureOptions& opt = {})
{
    detail::check_symmetric_args(alpha, sigma);
    detail::require(r > 0, "tau_abs_moment: r must be positive");
    return detail::tau_abs_moment(spec, alpha, sigma, r, opt);
}

/// Generalized CLT: tails P(Z > z) ~ c z^{-p} L(z), P(Z < -z) ~ d z^{-p} L(z),
/// L = 1 or log. `mean` is the centering used when 1 < p < 2.
inline LimitPrediction gclt_limit(double c, double d, double p, bool log_factor, double mean = 0)
{
    detail::require(c >= 0 && d >= 0 && c + d > 0, "gclt_limit: need c, d >= 0 and c + d > 0");
    detail::require_alpha_open(p, "gclt_limit");
    LimitPrediction out;
    out.stability = p;
    out.scaling_exponent = p;
    out.scale = std::pow((c + d) / c_alpha(p), 1 / p);
    out.log_correction = log_factor;
    out.skewness = (c - d) / (c + d);
    out.centering = p < 1 ? 0.0 : p == 1 ? c - d : mean;
    return out;
}

/// Tail of |X tau(Y)|, X ~ S_ax(sx), Y ~ S_ay(sy) independent and symmetric.
inline TailAsymptote product_tail(double alpha_x, double sigma_x, double alpha_y, double sigma_y,
                                  const ActivationSpec& spec, const QuadratureOptions& opt = {})
{
    detail::require_alpha_open(alpha_x, "product_tail");
    detail::require_alpha_open(alpha_y, "product_tail");
    detail::require(sigma_x > 0 && sigma_y > 0, "product_tail: scales must be positive");

    if (!spec.power_like()) {
        detail::require(spec.beta_bound() * alpha_x < alpha_y, "product_tail: E1 requires beta * alpha_x < alpha_y");
        const double m = detail::tau_abs_moment(spec, alpha_y, sigma_y, alpha_x, opt);
        return {alpha_x, c_alpha(alpha_x) * std::pow(sigma_x, alpha_x) * m, false, TailSide::magnitude};
    }
    const double g = spec.gamma();
    const double ct = spec.c_tau();
    switch (detail::compare_growth(g, alpha_y / alpha_x)) {
    case 1: {
        const double ab = alpha_y / g;
        return {ab, ct * c_alpha(alpha_y) * std::pow(sigma_y, alpha_y) * frac_abs_moment(alpha_x, sigma_x, ab, opt),
                false, TailSide::magnitude};
    }
    case 0: {
        const double ab = alpha_x;
        return {ab,
                ct * ab * c_alpha(ab) * c_alpha(alpha_y) * std::pow(sigma_x, ab) * std::pow(sigma_y, alpha_y),
                true, TailSide::magnitude};
    }
    default: {
        const double ab = alpha_x;
        const double m = detail::tau_abs_moment(spec, alpha_y, sigma_y, ab, opt);
        return {ab, c_alpha(ab) * std::pow(sigma_x, ab) * m, false, TailSide::magnitude};
    }
    }
}

namespace detail {

enum class ShallowBranch { moment, critical, heavy };

/// Which form of the shallow limit applies. moment: the weights' tail wins
/// (E1, light pre-activations or gamma < a0/a1); heavy: tau(Y) wins
/// (gamma > a0/a1); critical: the tie, with its log correction.
inline ShallowBranch shallow_branch(double alpha0, double alpha1, const ActivationSpec& spec)
{
    require(alpha0 > 0 && alpha0 <= 2 && alpha1 > 0 && alpha1 <= 2, "shallow network: stabilities must lie in (0, 2]");
    if (!spec.power_like()) {
        require(spec.beta_bound() * alpha1 < alpha0, "shallow network: E1 requires beta * alpha1 < alpha0");
        return ShallowBranch::moment;
    }
    if (alpha0 == 2) return ShallowBranch::moment;
    const int cmp = compare_growth(spec.gamma(), alpha0 / alpha1);
    if (cmp < 0) return ShallowBranch::moment;
    require(!(cmp == 0 && alpha1 == 2), "shallow network: log-corrected Gaussian case is not covered");
    return cmp == 0 ? ShallowBranch::critical : ShallowBranch::heavy;
}

} // namespace detail

/// Index and normalization of the shallow network sum, without any moments.
inline LimitPrediction shallow_normalization(double alpha0, double alpha1, const ActivationSpec& spec)
{
    LimitPrediction out;
    switch (detail::shallow_branch(alpha0, alpha1, spec)) {
    case detail::ShallowBranch::moment: out.stability = alpha1; break;
    case detail::ShallowBranch::critical:
        out.stability = alpha1;
        out.log_correction = true;
        break;
    case detail::ShallowBranch::heavy: out.stability = alpha0 / spec.gamma(); break;
    }
    out.scaling_exponent = out.stability;
    return out;
}

/// Limit of the shallow network sum_j w_j tau(w0_j) normalized by n^{-1/p}
/// (times (log n)^{-1/p} on the critical branch). w ~ S_a1(s1) plays X and
/// the pre-activation w0 ~ S_a0(s0) plays Y.
inline LimitPrediction shallow_limit(double alpha0, double sigma0, double alpha1, double sigma1,
                                     const ActivationSpec& spec, const QuadratureOptions& opt = {})
{
    detail::require(sigma0 > 0 && sigma1 > 0, "shallow_limit: scales must be positive");
    LimitPrediction out = shallow_normalization(alpha0, alpha1, spec);
    const double ab = out.stability;
    switch (detail::shallow_branch(alpha0, alpha1, spec)) {
    case detail::ShallowBranch::moment:
        out.scale = sigma1 * std::pow(detail::tau_abs_moment(spec, alpha0, sigma0, alpha1, opt), 1 / alpha1);
        break;
    case detail::ShallowBranch::critical:
        out.scale = std::pow(sigma0, spec.gamma()) * sigma1 *
                    std::pow(spec.c_tau() * ab * c_alpha(spec.gamma() * ab), 1 / ab);
        break;
    case detail::ShallowBranch::heavy: {
        const double m = frac_abs_moment(alpha1, 1.0, ab, opt);
        out.scale = std::pow(sigma0, spec.gamma()) * sigma1 *
                    std::pow(spec.c_tau() * c_alpha(ab * spec.gamma()) / c_alpha(ab) * m, 1 / ab);
        break;
    }
    }
    return out;
}

/// Layer-by-layer limit laws of a deep network grown sequentially.
/// Entry l-1 describes g^{(l)}, l = 1..L+1. For gamma > 1 the biases of
/// layer l are S_{alpha/gamma^l}(1) and the stability decays geometrically.
inline LayerScaleSequence deep_recursion(double alpha, double sigma_w, double sigma_b, const std::vector<double>& x,
                                         int depth, const ActivationSpec& spec, const QuadratureOptions& opt = {})
{
    detail::require(alpha > 0 && alpha <= 2, "deep_recursion: alpha must lie in (0, 2]");
    detail::require(sigma_w > 0, "deep_recursion: sigma_w must be positive");
    detail::require(sigma_b >= 0, "deep_recursion: sigma_b must be non-negative");
    detail::require(!x.empty(), "deep_recursion: input must have dimension >= 1");
    detail::require(depth >= 1, "deep_recursion: depth must be >= 1");

    double s1 = std::pow(sigma_b, alpha);
    for (double xj : x) s1 += std::pow(sigma_w * std::fabs(xj), alpha);
    detail::require(s1 > 0, "deep_recursion: first-layer scale is zero");

    LayerScaleSequence seq;
    seq.push_back({1, alpha, std::pow(s1, 1 / alpha), alpha, false});

    const bool moment_path =
        alpha == 2 || !spec.power_like() || detail::compare_growth(spec.gamma(), 1.0) < 0;
    const bool critical = !moment_path && detail::compare_growth(spec.gamma(), 1.0) == 0;

    for (int l = 2; l <= depth + 1; ++l) {
        const double prev = seq.back().scale;
        LayerScale cur{l, alpha, 0, alpha, false};
        if (moment_path) {
            const double m = detail::tau_abs_moment(spec, alpha, prev, alpha, opt);
            cur.scale = std::pow(std::pow(sigma_w, alpha) * m + std::pow(sigma_b, alpha), 1 / alpha);
        } else if (critical) {
            cur.log_correction = true;
            cur.scale = std::pow(spec.c_tau() * alpha * c_alpha(alpha) * std::pow(sigma_w * prev, alpha) +
                                     std::pow(sigma_b, alpha),
                                 1 / alpha);
        } else {
            const double a_prev = seq.back().stability;  // alpha / gamma^{l-2}
            const double a_cur = a_prev / spec.gamma();  // alpha / gamma^{l-1}
            detail::require_alpha_open(a_prev, "deep_recursion");
            const double m = frac_abs_moment(alpha, 1.0, a_cur, opt);
            const double t = spec.c_tau() * c_alpha(a_prev) / c_alpha(a_cur) * std::pow(sigma_w, a_cur) *
                             std::pow(prev, a_prev) * m;
            cur.stability = cur.scaling_exponent = a_cur;
            cur.scale = std::pow(t + std::pow(sigma_b, a_cur), 1 / a_cur);
        }
        seq.push_back(cur);
    }
    return seq;
}

/// Output limit of the deep network as a prediction.
inline LimitPrediction deep_limit(const LayerScaleSequence& seq)
{
    detail::require(!seq.empty(), "deep_limit: empty sequence");
    const LayerScale& last = seq.back();
    LimitPrediction out;
    out.stability = last.stability;
    out.scale = last.scale;
    out.scaling_exponent = last.scaling_exponent;
    out.log_correction = last.log_correction;
    return out;
}

/// Closed-form ReLU scale after L hidden layers.
inline double relu_explicit_scale(int L, double alpha, double sigma_w, double sigma_b, double sigma_x)
{
    detail::require(L >= 1, "relu_explicit_scale: L must be >= 1");
    detail::require_alpha_open(alpha, "relu_explicit_scale");
    detail::require(sigma_w > 0 && sigma_b >= 0 && sigma_x > 0, "relu_explicit_scale: invalid scales");
    const double k = 0.5 * alpha * c_alpha(alpha) * std::pow(sigma_w, alpha);
    double s = std::pow(k, L) * std::pow(sigma_x, alpha);
    for (int i = 0; i < L; ++i) s += std::pow(k, i) * std::pow(sigma_b, alpha);
    return std::pow(s, 1 / alpha);
}

} // namespace stablenn
