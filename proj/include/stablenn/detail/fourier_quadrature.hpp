#pragma once

// Double-exponential quadrature for one-sided Fourier integrals
//   int_0^inf f(t) sin(w t) dt   and   int_0^inf f(t) cos(w t) dt
// (Ooura & Mori's transformation, nodes placed at the zeros of sin/cos).
//
// Node tables are built once and never mutated. Every call walks the levels
// from the coarsest one, so a result depends only on (f, w, tolerance).

#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace stablenn::detail {

enum class FourierKernel { sine, cosine };

struct FourierResult {
    double value = 0;
    double error = 0;  // |difference| between the last two levels
    int levels = 0;
    bool converged = false;
};

class FourierQuadrature {
public:
    static constexpr int max_table_levels = 10;

    explicit FourierQuadrature(FourierKernel kernel) : kernel_(kernel)
    {
        for (int i = 0; i < max_table_levels; ++i) levels_.push_back(build_level(std::ldexp(1.0L, -i)));
    }

    static const FourierQuadrature& sine()
    {
        static const FourierQuadrature q(FourierKernel::sine);
        return q;
    }

    static const FourierQuadrature& cosine()
    {
        static const FourierQuadrature q(FourierKernel::cosine);
        return q;
    }

    /// Integrates f(t)*kernel(omega*t) over (0, inf), omega > 0.
    /// Stops once two successive levels differ by at most
    /// max(abs_tol, rel_tol*|I|).
    template <class F>
    FourierResult integrate(const F& f, double omega, double rel_tol, double abs_tol, int max_levels) const
    {
        const double inv = 1.0 / omega;
        const int nlev = std::min<int>(max_levels, static_cast<int>(levels_.size()));
        FourierResult out;
        double prev = 0;
        for (int i = 0; i < nlev; ++i) {
            const Level& lv = levels_[i];
            double sum = 0;
            for (std::size_t j = 0; j < lv.node.size(); ++j) sum += f(lv.node[j] * inv) * lv.weight[j];
            const double value = sum * inv;
            out.value = value;
            out.levels = i + 1;
            if (i > 0) {
                out.error = std::fabs(value - prev);
                if (out.error <= std::max(abs_tol, rel_tol * std::fabs(value))) {
                    out.converged = true;
                    return out;
                }
            }
            prev = value;
        }
        return out;
    }

private:
    using LD = long double;

    struct Level {
        std::vector<double> node, weight;
    };

    static LD ooura_alpha(LD h) { return 1 / std::sqrt(16 + 4 * std::log1p(std::numbers::pi_v<LD> / h) / h); }

    // eta(x) = 2x - a(e^{-x} - 1) + (e^x - 1)/4 and its derivative
    static std::pair<LD, LD> eta(LD x, LD a)
    {
        const LD ex = std::exp(x);
        const LD e = std::fabs(x) > 0.125L ? 2 * x - a * (1 / ex - 1) + (ex - 1) / 4
                                           : 2 * x - a * std::expm1(-x) + std::expm1(x) / 4;
        return {e, 2 + a / ex + ex / 4};
    }

    static std::pair<LD, LD> sine_node(long n, LD h, LD a)
    {
        const LD pi = std::numbers::pi_v<LD>;
        if (n == 0) {
            const LD ep0 = 2 + a + 0.25L;
            const LD node = pi / (ep0 * h);
            LD w = pi * boost::math::sin_pi(1 / (ep0 * h));
            w *= (1 - (0.25L - a) / (ep0 * ep0)) / 2;
            return {node, w};
        }
        const LD x = n * h;
        const auto [e, de] = eta(x, a);
        const LD em1 = std::expm1(-e);
        const LD em = std::exp(-e);
        const LD node = -n * pi / em1;
        const LD dphi = -(em1 + x * em * de) / (em1 * em1);
        LD s = pi;
        if (e > 1) {
            s *= boost::math::sin_pi(n / (1 / em - 1));
            if (n & 1) s = -s;
        } else if (e < -1) {
            s *= boost::math::sin_pi(n / (1 - em));
        } else {
            s *= boost::math::sin_pi(-n * em / em1);
            if (n & 1) s = -s;
        }
        return {node, s * dphi};
    }

    static std::pair<LD, LD> cosine_node(long n, LD h, LD a)
    {
        const LD pi = std::numbers::pi_v<LD>;
        const LD x = h * (n - 0.5L);
        const auto [e, de] = eta(x, a);
        const LD em1 = std::expm1(-e);
        const LD em = std::exp(-e);
        const LD node = pi * (0.5L - n) / em1;
        const LD dphi = -(em1 + x * em * de) / (em1 * em1);
        LD s = pi;
        if (e < -1) {
            s *= boost::math::cos_pi(-(n - 0.5L) / em1);
        } else {
            s *= boost::math::sin_pi(-(n - 0.5L) * em / em1);
            if (n & 1) s = -s;
        }
        return {node, s * dphi};
    }

    Level build_level(LD h) const
    {
        const LD a = ooura_alpha(h);
        const bool is_sine = kernel_ == FourierKernel::sine;
        auto node_at = [&](long n) { return is_sine ? sine_node(n, h, a) : cosine_node(n, h, a); };
        Level lv;
        double maxw = 1;
        // large nodes: the weights decay double-exponentially toward the zeros of the kernel
        for (long n = 0;; ++n) {
            const auto [nd, wt] = node_at(n);
            const double w = static_cast<double>(wt);
            lv.node.push_back(static_cast<double>(nd));
            lv.weight.push_back(w);
            maxw = std::max(maxw, std::fabs(w));
            if (!(std::fabs(w) > 1.1e-16 * maxw)) break;
        }
        // small nodes accumulate at the origin
        double last = -1;
        for (long n = -1;; --n) {
            const auto [nd, wt] = node_at(n);
            const double node = static_cast<double>(nd);
            const double w = static_cast<double>(wt);
            if (std::isnan(node) || (is_sine ? node <= 0 : node < 0) || node == last) break;
            lv.node.push_back(node);
            lv.weight.push_back(w);
            last = node;
            maxw = std::max(maxw, std::fabs(w));
            if (!(std::fabs(w) > DBL_MIN * maxw)) break;
        }
        return lv;
    }

    FourierKernel kernel_;
    std::vector<Level> levels_;
};

} // namespace stablenn::detail
