#pragma once

// Symmetric stable density, distribution function and expectations.
//
// Body: Fourier inversion of exp(-|t|^a),
//   F(x) = 1/2 + (1/pi) int_0^inf sin(t x) e^{-t^a} / t dt
//   f(x) = (1/pi)     int_0^inf cos(t x) e^{-t^a} dt
// Far tail (beyond the 1 - 1e-6 quantile): the power series in x^{-a},
// convergent for a < 1 and asymptotic otherwise.

#include "detail/fourier_quadrature.hpp"
#include "error.hpp"
#include "stable.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

namespace stablenn {

struct QuadratureOptions {
    double tolerance = 1e-9;  ///< absolute target for F and relative target for expectations
    int max_levels = 10;      ///< Fourier quadrature refinement levels (at most 10)
    int max_depth = 15;       ///< bisection depth for finite-interval quadrature
};

namespace detail {

inline void check_symmetric_args(double alpha, double sigma)
{
    require(alpha > 0 && alpha <= 2, "symmetric stable: alpha must lie in (0, 2]");
    require(sigma > 0 && std::isfinite(sigma), "symmetric stable: sigma must be positive and finite");
}

/// Standardized abscissa beyond which the tail series replaces quadrature.
inline double tail_series_start(double alpha)
{
    if (alpha >= 2) return std::numeric_limits<double>::infinity();
    const double q = std::pow(0.5 * c_alpha(alpha) / 1e-6, 1 / alpha);
    return alpha > 1 ? std::max(q, 40.0) : q;
}

/// Sums sum_k (-1)^{k+1} Gamma(a k + 1)/k! sin(k pi a/2) x^{-a k} / k^{p}
/// where p = 1 for the survival function and 0 for the density.
inline double tail_series_sum(double alpha, double x, int p)
{
    const double lx = std::log(x);
    double sum = 0, prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 60; ++k) {
        const double s = boost::math::sin_pi(k * alpha / 2);
        const double mag = std::exp(std::lgamma(alpha * k + 1) - std::lgamma(k + 1.0) - alpha * k * lx) /
                           std::pow(static_cast<double>(k), p);
        if (alpha > 1 && mag > prev) break;  // asymptotic series: stop at the smallest term
        prev = mag;
        const double term = ((k & 1) ? 1.0 : -1.0) * s * mag;
        sum += term;
        if (std::fabs(term) <= 1e-17 * std::fabs(sum)) break;
    }
    return sum;
}

/// P(Z > x) for Z ~ S_a(1), x >= tail_series_start(a).
inline double survival_series(double alpha, double x)
{
    return tail_series_sum(alpha, x, 1) / (std::numbers::pi * alpha);
}

inline double pdf_series(double alpha, double x)
{
    return tail_series_sum(alpha, x, 0) / (std::numbers::pi * x);
}

/// (1/pi) int_0^inf sin(t x) e^{-t^a}/t dt for x > 0, i.e. F(x) - 1/2.
inline double cdf_offset(double alpha, double x, const QuadratureOptions& opt)
{
    if (x < 1e-5) return x * std::tgamma(1 + 1 / alpha) / std::numbers::pi;
    auto f = [alpha](double t) { return t > 0 ? std::exp(-std::pow(t, alpha)) / t : 0.0; };
    const auto r = FourierQuadrature::sine().integrate(f, x, 1e-13, 1e-2 * opt.tolerance, opt.max_levels);
    if (!r.converged && !(r.error <= std::numbers::pi * opt.tolerance))
        throw QuadratureError("symmetric_cdf: inversion integral did not converge (alpha=" + std::to_string(alpha) +
                              ", x=" + std::to_string(x) + ")");
    return r.value / std::numbers::pi;
}

inline double standard_pdf(double alpha, double x, const QuadratureOptions& opt)
{
    x = std::fabs(x);
    if (x == 0) return std::tgamma(1 + 1 / alpha) / std::numbers::pi;
    if (x >= tail_series_start(alpha)) return pdf_series(alpha, x);
    auto f = [alpha](double t) { return std::exp(-std::pow(t, alpha)); };
    const auto r = FourierQuadrature::cosine().integrate(f, x, 1e-11, 1e-14 / x, opt.max_levels);
    if (!r.converged && !(r.error <= 1e-6 * std::fabs(r.value)))
        throw QuadratureError("symmetric_pdf: inversion integral did not converge (alpha=" + std::to_string(alpha) +
                              ", x=" + std::to_string(x) + ")");
    return std::max(0.0, r.value / std::numbers::pi);
}

/// P(Z > x) for Z ~ S_a(1), x >= 0.
inline double standard_survival(double alpha, double x, const QuadratureOptions& opt)
{
    if (x >= tail_series_start(alpha)) return survival_series(alpha, x);
    return std::clamp(0.5 - cdf_offset(alpha, x, opt), 0.0, 0.5);
}

} // namespace detail

/// P(Z <= x) for Z ~ S_alpha(sigma), symmetric.
inline double symmetric_cdf(double alpha, double sigma, double x, const QuadratureOptions& opt = {})
{
    detail::check_symmetric_args(alpha, sigma);
    detail::require(!std::isnan(x), "symmetric_cdf: x is NaN");
    const double u = x / sigma;
    if (u == 0) return 0.5;
    const double s = detail::standard_survival(alpha, std::fabs(u), opt);
    return u > 0 ? 1 - s : s;
}

/// P(Z > x); keeps relative accuracy deep in the upper tail.
inline double symmetric_survival(double alpha, double sigma, double x, const QuadratureOptions& opt = {})
{
    detail::check_symmetric_args(alpha, sigma);
    const double u = x / sigma;
    if (u < 0) return 1 - detail::standard_survival(alpha, -u, opt);
    return detail::standard_survival(alpha, u, opt);
}

inline double symmetric_pdf(double alpha, double sigma, double x, const QuadratureOptions& opt = {})
{
    detail::check_symmetric_args(alpha, sigma);
    if (std::isinf(x)) return 0.0;
    return detail::standard_pdf(alpha, x / sigma, opt) / sigma;
}

namespace detail {

template <class F>
double gk_integrate(const F& f, double a, double b, const QuadratureOptions& opt, const char* what)
{
    double err = 0, l1 = 0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, static_cast<unsigned>(opt.max_depth), opt.tolerance, &err, &l1);
    if (!std::isfinite(v) || err > std::max(1e-6 * l1, 1e-300))
        throw QuadratureError(std::string(what) + ": quadrature error estimate " + std::to_string(err) +
                              " exceeds bound");
    return v;
}

} // namespace detail

namespace detail {

/// Beginning of the analytic/series tail used by expectations.
inline double expectation_cut(double alpha)
{
    return alpha == 2 ? 40.0 : std::max(40.0, std::pow(c_alpha(alpha) / 2e-7, 1 / alpha));
}

/// int over (0, cut] of even(u) f(u) du for the standard law, in log coordinates.
template <class Even>
double expectation_body(double alpha, const Even& even, const QuadratureOptions& opt)
{
    auto logbody = [&](double s) {
        const double u = std::exp(s);
        if (!(u < std::numeric_limits<double>::max()) || u == 0) return 0.0;
        return even(u) * standard_pdf(alpha, u, opt) * u;
    };
    const double inf = std::numeric_limits<double>::infinity();
    const double cut = expectation_cut(alpha);
    return gk_integrate(logbody, -inf, 0.0, opt, "symmetric expectation") +
           gk_integrate(logbody, 0.0, std::log(cut), opt, "symmetric expectation");
}

} // namespace detail

/// E[h(Z)] for Z ~ S_alpha(sigma) symmetric. The tail beyond the 1 - 1e-7
/// quantile is integrated against the series density up to the largest
/// finite double, so |h(z)| should grow at most like |z|^r with r clearly
/// below alpha.
inline double symmetric_expectation(double alpha, double sigma, const std::function<double(double)>& h,
                                    const QuadratureOptions& opt = {})
{
    detail::check_symmetric_args(alpha, sigma);
    auto even = [&](double u) { return h(sigma * u) + h(-sigma * u); };
    double total = detail::expectation_body(alpha, even, opt);
    if (alpha < 2) {
        auto logtail = [&](double s) {
            const double u = std::exp(s);
            if (!(u < std::numeric_limits<double>::max())) return 0.0;
            return even(u) * detail::pdf_series(alpha, u) * u;
        };
        total += detail::gk_integrate(logtail, std::log(detail::expectation_cut(alpha)),
                                      std::numeric_limits<double>::infinity(), opt, "symmetric expectation");
    }
    return total;
}

/// E|Z|^r for Z ~ S_alpha(sigma), 0 < r < alpha (any r > 0 when alpha = 2).
inline double frac_abs_moment(double alpha, double sigma, double r, const QuadratureOptions& opt = {})
{
    detail::check_symmetric_args(alpha, sigma);
    detail::require(r > 0, "frac_abs_moment: r must be positive");
    detail::require(alpha == 2 || r < alpha - 1e-9, "frac_abs_moment: r must be below alpha (moment is infinite)");
    auto even = [r](double u) { return 2 * std::pow(u, r); };
    double m = detail::expectation_body(alpha, even, opt);
    if (alpha < 2) {
        // term-wise integral of the series density: int_U^inf u^r u^{-ak-1} du = U^{r-ak}/(ak-r)
        const double cut = detail::expectation_cut(alpha);
        const double lc = std::log(cut);
        double tail = 0, prev = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 60; ++k) {
            const double mag = std::exp(std::lgamma(alpha * k + 1) - std::lgamma(k + 1.0) + (r - alpha * k) * lc) /
                               (alpha * k - r);
            if (alpha > 1 && mag > prev) break;
            prev = mag;
            const double term = ((k & 1) ? 1.0 : -1.0) * boost::math::sin_pi(k * alpha / 2) * mag;
            tail += term;
            if (std::fabs(term) <= 1e-17 * std::fabs(tail)) break;
        }
        m += 2 * tail / std::numbers::pi;
    }
    return std::pow(sigma, r) * m;
}

} // namespace stablenn
