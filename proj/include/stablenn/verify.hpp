#pragma once

// Estimators and checks used to compare simulated ensembles with predictions.

#include "density.hpp"
#include "error.hpp"
#include "limit_theory.hpp"
#include "parallel.hpp"
#include "simulator.hpp"
#include "stable.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace stablenn {

struct StabilityFit {
    double alpha = 2;
    double sigma = 1;
};

namespace detail {

struct EcfPoints {
    std::vector<double> log_t, y;  // y = log(-log|phi(t)|)
};

inline double quantile_sorted(const std::vector<double>& s, double q)
{
    const double pos = q * static_cast<double>(s.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return i + 1 < s.size() ? s[i] + frac * (s[i + 1] - s[i]) : s[i];
}

inline EcfPoints ecf_points(std::span<const double> x)
{
    require(x.size() >= 1000, "stability fit: need at least 1000 samples");
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    require(std::isfinite(s.front()) && std::isfinite(s.back()), "stability fit: non-finite samples");
    const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
    require(iqr > 0, "stability fit: degenerate samples (zero interquartile range)");
    require(std::fabs(quantile_sorted(s, 0.5)) <= iqr, "stability fit: samples are far from symmetric about 0");
    const double s0 = iqr / 2;

    constexpr int points = 20;
    EcfPoints out;
    for (int k = 0; k < points; ++k) {
        const double t = std::pow(10.0, -1.0 + static_cast<double>(k) / (points - 1)) / s0;
        double re = 0, im = 0;
        for (double v : x) {
            re += std::cos(t * v);
            im += std::sin(t * v);
        }
        const double mod = std::hypot(re, im) / static_cast<double>(x.size());
        if (mod < 0.1 || mod >= 1) continue;
        out.log_t.push_back(std::log(t));
        out.y.push_back(std::log(-std::log(mod)));
    }
    require(out.y.size() >= 2, "stability fit: too few usable characteristic-function points");
    return out;
}

inline double mean(const std::vector<double>& v)
{
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace detail

/// Regression of log(-log|phi_hat(t)|) on log t: slope alpha, intercept alpha log sigma.
inline StabilityFit estimate_stability(std::span<const double> samples)
{
    const auto pts = detail::ecf_points(samples);
    const double mx = detail::mean(pts.log_t), my = detail::mean(pts.y);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < pts.y.size(); ++i) {
        sxx += (pts.log_t[i] - mx) * (pts.log_t[i] - mx);
        sxy += (pts.log_t[i] - mx) * (pts.y[i] - my);
    }
    double a = std::clamp(sxy / sxx, 1e-3, 2.0);
    const double b = my - a * mx;
    return {a, std::exp(b / a)};
}

/// Scale estimate with the stability held at `alpha`.
inline double estimate_scale(std::span<const double> samples, double alpha)
{
    detail::require(alpha > 0 && alpha <= 2, "estimate_scale: alpha must lie in (0, 2]");
    const auto pts = detail::ecf_points(samples);
    double b = 0;
    for (std::size_t i = 0; i < pts.y.size(); ++i) b += pts.y[i] - alpha * pts.log_t[i];
    b /= static_cast<double>(pts.y.size());
    return std::exp(b / alpha);
}

/// Hill estimator of the tail index of |X| from the top k = floor(k_fraction N) order statistics.
inline double hill_tail_index(std::span<const double> samples, double k_fraction)
{
    detail::require(k_fraction > 0 && k_fraction <= 0.05, "hill_tail_index: k_fraction must lie in (0, 0.05]");
    detail::require(samples.size() >= 10000, "hill_tail_index: need at least 10^4 samples");
    const std::size_t k = static_cast<std::size_t>(k_fraction * static_cast<double>(samples.size()));
    detail::require(k >= 10, "hill_tail_index: too few exceedances");
    std::vector<double> a(samples.size());
    std::transform(samples.begin(), samples.end(), a.begin(), [](double v) { return std::fabs(v); });
    std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k), a.end(), std::greater<>());
    const double xk = a[k];
    detail::require(xk > 0 && std::isfinite(xk), "hill_tail_index: too few exceedances above zero");
    double h = 0;
    for (std::size_t i = 0; i < k; ++i) h += std::log(a[i] / xk);
    detail::require(h > 0, "hill_tail_index: top order statistics are tied");
    return static_cast<double>(k) / h;
}

/// sup_x |F_N(x) - F(x)| for a continuous F. F is evaluated in parallel.
inline double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf,
                           unsigned workers = default_workers())
{
    detail::require(!samples.empty(), "ks_statistic: no samples");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    std::vector<double> f(s.size());
    parallel_for(s.size(), workers, [&](std::size_t i) { f[i] = cdf(s[i]); });
    const double n = static_cast<double>(s.size());
    double d = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        d = std::max({d, f[i] - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f[i]});
    return std::clamp(d, 0.0, 1.0);
}

/// KS distance to the symmetric stable law named by a prediction.
inline double ks_against_prediction(std::span<const double> samples, const LimitPrediction& pred,
                                    unsigned workers = default_workers(), const QuadratureOptions& opt = {})
{
    detail::require(pred.skewness == 0, "ks_against_prediction: prediction must be symmetric");
    return ks_statistic(
        samples, [&](double x) { return symmetric_cdf(pred.stability, pred.scale, x - pred.centering, opt); },
        workers);
}

inline double two_sample_ks(std::span<const double> a, std::span<const double> b)
{
    detail::require(!a.empty() && !b.empty(), "two_sample_ks: empty sample");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

struct TailRow {
    double level = 0;      ///< quantile level q
    double z = 0;          ///< empirical q-quantile of the scanned statistic
    double survival = 0;   ///< empirical P(statistic > z)
    double normalized = 0; ///< survival * z^index (/ log z)
    double predicted = 0;  ///< asymptote constant
    double ratio = 0;      ///< normalized / predicted
    std::size_t exceedances = 0;
};

using TailTable = std::vector<TailRow>;

/// Normalized empirical survival at the requested quantile levels. The
/// statistic is |X| for magnitude asymptotes and X for upper ones.
inline TailTable tail_scan(std::span<const double> samples, const TailAsymptote& asym, const std::vector<double>& levels)
{
    detail::require(asym.index > 0 && asym.constant > 0, "tail_scan: asymptote must have positive index and constant");
    detail::require(!levels.empty(), "tail_scan: no levels");
    std::vector<double> s(samples.size());
    if (asym.side == TailSide::magnitude)
        std::transform(samples.begin(), samples.end(), s.begin(), [](double v) { return std::fabs(v); });
    else
        std::copy(samples.begin(), samples.end(), s.begin());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    TailTable out;
    for (double q : levels) {
        detail::require(q > 0.99 && q < 0.9999, "tail_scan: levels must lie in (0.99, 0.9999)");
        const std::size_t idx = static_cast<std::size_t>(q * n);
        detail::require(idx < s.size(), "tail_scan: not enough samples");
        const double z = s[idx];
        const std::size_t exceed = static_cast<std::size_t>(s.end() - std::upper_bound(s.begin(), s.end(), z));
        detail::require(exceed >= 100, "tail_scan: fewer than 100 exceedances at level " + std::to_string(q));
        detail::require(!asym.log_factor || z > 1, "tail_scan: log-factor scan needs quantiles above 1");
        TailRow row;
        row.level = q;
        row.z = z;
        row.exceedances = exceed;
        row.survival = static_cast<double>(exceed) / n;
        row.normalized = row.survival * std::pow(z, asym.index);
        if (asym.log_factor) row.normalized /= std::log(z);
        row.predicted = asym.constant;
        row.ratio = row.normalized / asym.constant;
        out.push_back(row);
    }
    return out;
}

struct Check {
    std::string name;
    double tolerance = 0;
    double observed = 0;
    double expected = 0;
    bool passed = false;
};

/// |observed - expected| <= tolerance * |expected|
inline Check relative_check(std::string name, double observed, double expected, double tolerance)
{
    return {std::move(name), tolerance, observed, expected, std::fabs(observed - expected) <= tolerance * std::fabs(expected)};
}

inline Check absolute_check(std::string name, double observed, double expected, double tolerance)
{
    return {std::move(name), tolerance, observed, expected, std::fabs(observed - expected) <= tolerance};
}

/// observed < bound
inline Check upper_check(std::string name, double observed, double bound)
{
    return {std::move(name), bound, observed, 0, observed < bound};
}

inline bool all_passed(const std::vector<Check>& checks)
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

struct LogFactorRow {
    std::size_t n = 0;
    double sigma_plain = 0;  ///< scale under n^{-1/alpha}
    double sigma_log = 0;    ///< scale under (n log n)^{-1/alpha}
};

struct LogFactorResult {
    std::vector<LogFactorRow> rows;
    std::vector<Check> checks;
    bool critical = false;  ///< activation sits on the log-corrected branch

    bool passed() const { return all_passed(checks); }
};

struct LogFactorTolerances {
    double ratio = 0.15;     ///< plain-n scale ratios vs (log n_k / log n_0)^{1/alpha}
    double flatness = 0.10;  ///< max/min - 1 of the flat normalization
};

/// Shallow network with alpha0 = alpha1 = alpha, sigma0 = sigma1 = 1, one
/// ensemble per width. On the critical branch the n^{-1/alpha} scale must
/// grow like (log n)^{1/alpha}; otherwise it must already be flat.
inline LogFactorResult log_factor_check(const ActivationSpec& spec, double alpha, const std::vector<std::size_t>& n_grid,
                                        std::size_t replications, RngSeed seed, unsigned workers = default_workers(),
                                        const LogFactorTolerances& tol = {})
{
    detail::require(n_grid.size() >= 3, "log_factor_check: n grid needs at least 3 points");
    detail::require(alpha > 0 && alpha < 2, "log_factor_check: alpha must lie in (0, 2)");
    for (std::size_t n : n_grid) detail::require(n >= 2, "log_factor_check: widths must be >= 2");
    LogFactorResult res;
    res.critical = shallow_normalization(alpha, alpha, spec).log_correction;

    ShallowConfig cfg;
    cfg.alpha0 = cfg.alpha1 = alpha;
    cfg.activation = spec;
    cfg.scaling = ScalingMode::plain_n;
    cfg.exponent = alpha;
    for (std::size_t k = 0; k < n_grid.size(); ++k) {
        const std::size_t n = n_grid[k];
        const auto v = shallow_ensemble(cfg, n, replications, derive_seed(seed, k), workers);
        LogFactorRow row;
        row.n = n;
        row.sigma_plain = estimate_scale(v, alpha);
        row.sigma_log = row.sigma_plain * std::pow(std::log(static_cast<double>(n)), -1 / alpha);
        res.rows.push_back(row);
    }

    auto spread = [&](auto member) {
        double lo = res.rows[0].*member, hi = lo;
        for (const auto& r : res.rows) {
            lo = std::min(lo, r.*member);
            hi = std::max(hi, r.*member);
        }
        return hi / lo;
    };
    const auto& first = res.rows.front();
    if (res.critical) {
        for (std::size_t k = 1; k < res.rows.size(); ++k) {
            const auto& r = res.rows[k];
            const double expected = std::pow(std::log(static_cast<double>(r.n)) / std::log(static_cast<double>(first.n)), 1 / alpha);
            res.checks.push_back(relative_check("log_ratio_n" + std::to_string(r.n), r.sigma_plain / first.sigma_plain,
                                                expected, tol.ratio));
        }
        res.checks.push_back(upper_check("log_flatness", spread(&LogFactorRow::sigma_log), 1 + tol.flatness));
    } else {
        res.checks.push_back(upper_check("plain_flatness", spread(&LogFactorRow::sigma_plain), 1 + tol.flatness));
    }
    return res;
}

/// Everything a verification run reports.
struct VerificationReport {
    LimitPrediction prediction;
    double alpha_hat = 0;
    double sigma_hat = 0;
    double ks_distance = 0;
    double hill_index = 0;  ///< NaN when not computed
    TailTable tail_table;
    std::vector<Check> checks;
    std::size_t sample_count = 0;
    std::size_t width = 0;
    RngSeed seed{};

    bool passed() const { return all_passed(checks); }
};

/// Plain-text table of a report.
inline std::string render_table(const VerificationReport& r)
{
    std::string out;
    char buf[256];
    auto line = [&](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof buf, fmt, args...);
        out += buf;
        out += '\n';
    };
    line("prediction  stability=%.6g scale=%.6g p=%.6g log=%s", r.prediction.stability, r.prediction.scale,
         r.prediction.scaling_exponent, r.prediction.log_correction ? "yes" : "no");
    line("estimates   alpha_hat=%.6g sigma_hat=%.6g ks=%.6g hill=%.6g", r.alpha_hat, r.sigma_hat, r.ks_distance,
         r.hill_index);
    line("samples     n=%zu width=%zu seed=%llu", r.sample_count, r.width, static_cast<unsigned long long>(r.seed.value));
    for (const auto& t : r.tail_table)
        line("tail        q=%.5g z=%.6g S=%.6g norm=%.6g pred=%.6g ratio=%.4f", t.level, t.z, t.survival,
             t.normalized, t.predicted, t.ratio);
    for (const auto& c : r.checks)
        line("%-6s %-22s observed=%.6g expected=%.6g tol=%.4g", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.observed,
             c.expected, c.tolerance);
    return out;
}

} // namespace stablenn
