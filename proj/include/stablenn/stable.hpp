#pragma once

// Univariate stable laws: parameters, characteristic function, tail
// constants and exact (Chambers-Mallows-Stuck) sampling.

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace stablenn {

/// S_alpha(sigma, beta, mu), characteristic exponent
///   psi(t) = -sigma^a |t|^a [1 + i beta tan(pi a/2) sign t] + i mu t      (a != 1)
///   psi(t) = -sigma |t| [1 + i beta (2/pi) sign t log|t|] + i mu t        (a == 1)
class StableParams {
public:
    StableParams(double alpha, double beta, double sigma, double mu) : alpha_(alpha), beta_(beta), sigma_(sigma), mu_(mu)
    {
        detail::require(alpha > 0 && alpha <= 2, "stable law: alpha must lie in (0, 2]");
        detail::require(beta >= -1 && beta <= 1, "stable law: beta must lie in [-1, 1]");
        detail::require(sigma > 0 && std::isfinite(sigma), "stable law: sigma must be positive and finite");
        detail::require(std::isfinite(mu), "stable law: mu must be finite");
    }

    static StableParams symmetric(double alpha, double sigma = 1.0) { return {alpha, 0.0, sigma, 0.0}; }

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double sigma() const noexcept { return sigma_; }
    double mu() const noexcept { return mu_; }
    bool symmetric() const noexcept { return beta_ == 0 && mu_ == 0; }

    friend bool operator==(const StableParams&, const StableParams&) = default;

private:
    double alpha_, beta_, sigma_, mu_;
};

inline std::complex<double> char_fn(const StableParams& p, double t)
{
    if (t == 0) return {1.0, 0.0};
    const double a = p.alpha();
    const double at = std::fabs(t);
    const double sgn = t > 0 ? 1.0 : -1.0;
    double re, im;
    if (a == 1) {
        re = -p.sigma() * at;
        im = re * p.beta() * (2 / std::numbers::pi) * sgn * std::log(at);
    } else {
        re = -std::pow(p.sigma() * at, a);
        im = a == 2 ? 0.0 : re * p.beta() * std::tan(std::numbers::pi * a / 2) * sgn;
    }
    return std::exp(std::complex<double>(re, im + p.mu() * t));
}

/// Tail constant C_a = (int_0^inf x^{-a} sin x dx)^{-1}.
inline double c_alpha(double alpha)
{
    detail::require(alpha > 0 && alpha < 2, "c_alpha: alpha must lie in (0, 2)");
    if (alpha == 1) return 2 / std::numbers::pi;
    return (1 - alpha) / (std::tgamma(2 - alpha) * boost::math::cos_pi(alpha / 2));
}

enum class TailSide {
    upper,     ///< P(Z > z)
    magnitude  ///< P(|Z| > z)
};

/// S(z) ~ constant * z^{-index} * (log z if log_factor), z -> inf.
struct TailAsymptote {
    double index = 1;
    double constant = 0;
    bool log_factor = false;
    TailSide side = TailSide::magnitude;

    double survival(double z) const
    {
        const double s = constant * std::pow(z, -index);
        return log_factor ? s * std::log(z) : s;
    }
};

/// Upper tail of a symmetric variable from the tail of its magnitude.
inline TailAsymptote upper_tail(const TailAsymptote& t)
{
    if (t.side == TailSide::upper) return t;
    return {t.index, t.constant / 2, t.log_factor, TailSide::upper};
}

/// One-sided upper tail of a symmetric stable law: (1/2) C_a sigma^a z^{-a}.
inline TailAsymptote survival_asymptote(const StableParams& p)
{
    detail::require(p.symmetric(), "survival_asymptote: law must be symmetric");
    detail::require(p.alpha() < 2, "survival_asymptote: alpha = 2 has no power tail");
    return {p.alpha(), 0.5 * c_alpha(p.alpha()) * std::pow(p.sigma(), p.alpha()), false, TailSide::upper};
}

/// Draws from S_alpha(1) (symmetric) with the constants hoisted out of the loop.
class SymmetricStableSampler {
public:
    explicit SymmetricStableSampler(double alpha) : alpha_(alpha), inv_alpha_(1 / alpha), expo_((1 - alpha) / alpha)
    {
        detail::require(alpha > 0 && alpha <= 2, "stable sampler: alpha must lie in (0, 2]");
    }

    double alpha() const noexcept { return alpha_; }

    double operator()(RandomStream& rng) const
    {
        const double v = std::numbers::pi * (rng.uniform() - 0.5);
        if (alpha_ == 1) return std::tan(v);
        const double w = rng.exponential();
        if (alpha_ == 2) return 2 * std::sin(v) * std::sqrt(w);
        return std::sin(alpha_ * v) / std::pow(std::cos(v), inv_alpha_) *
               std::pow(std::cos((1 - alpha_) * v) / w, expo_);
    }

private:
    double alpha_, inv_alpha_, expo_;
};

/// One draw from a general stable law. The skewness sign is matched to char_fn.
inline double draw(const StableParams& p, RandomStream& rng)
{
    const double a = p.alpha();
    if (p.beta() == 0 || a == 2) return p.sigma() * SymmetricStableSampler(a)(rng) + p.mu();

    constexpr double half_pi = std::numbers::pi / 2;
    const double v = std::numbers::pi * (rng.uniform() - 0.5);
    const double w = rng.exponential();
    if (a == 1) {
        const double b = p.beta();
        const double x = (1 / half_pi) * ((half_pi + b * v) * std::tan(v) -
                                          b * std::log(half_pi * w * std::cos(v) / (half_pi + b * v)));
        return p.sigma() * x + (1 / half_pi) * b * p.sigma() * std::log(p.sigma()) + p.mu();
    }
    // char_fn carries +i beta tan(pi a/2); the textbook transform is written for the opposite sign
    const double b = -p.beta();
    const double zeta = b * std::tan(half_pi * a);
    const double shift = std::atan(zeta) / a;
    const double scale = std::pow(1 + zeta * zeta, 1 / (2 * a));
    const double x = scale * std::sin(a * (v + shift)) / std::pow(std::cos(v), 1 / a) *
                     std::pow(std::cos(v - a * (v + shift)) / w, (1 - a) / a);
    return p.sigma() * x + p.mu();
}

namespace detail {
inline constexpr std::size_t sample_chunk = std::size_t{1} << 16;
}

/// count i.i.d. draws. Chunk c of 2^16 draws uses stream c of `seed`, so the
/// output does not depend on `workers`.
inline std::vector<double> sample(const StableParams& p, std::size_t count, RngSeed seed,
                                  unsigned workers = default_workers())
{
    std::vector<double> out(count);
    const std::size_t chunks = (count + detail::sample_chunk - 1) / detail::sample_chunk;
    parallel_for(chunks, workers, [&](std::size_t c) {
        RandomStream rng(seed, c);
        const std::size_t lo = c * detail::sample_chunk;
        const std::size_t hi = std::min(count, lo + detail::sample_chunk);
        if (p.beta() == 0 || p.alpha() == 2) {
            const SymmetricStableSampler s(p.alpha());
            for (std::size_t i = lo; i < hi; ++i) out[i] = p.sigma() * s(rng) + p.mu();
        } else {
            for (std::size_t i = lo; i < hi; ++i) out[i] = draw(p, rng);
        }
    });
    return out;
}

} // namespace stablenn
