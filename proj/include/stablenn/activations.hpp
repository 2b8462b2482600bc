#pragma once

// Activation functions and the metadata the limit formulas need.
//
//   E1: |tau(z)| = O(|z|^beta), beta < 1
//   E2: |tau(z)| ~ |z|^gamma on both sides, increasing for |z| > a
//   E3: tau(z) ~ z^gamma for z -> +inf, |tau(z)| = O(|z|^beta) for z -> -inf, beta < gamma

#include "error.hpp"
#include "stable.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace stablenn {

enum class ActivationClass { E1, E2, E3 };

inline const char* to_string(ActivationClass c)
{
    switch (c) {
    case ActivationClass::E1: return "E1";
    case ActivationClass::E2: return "E2";
    case ActivationClass::E3: return "E3";
    }
    return "?";
}

class ActivationSpec {
public:
    enum class Kind { tanh, identity, relu, odd_power, positive_part_power, custom };

    /// User-defined activation with caller-declared class metadata.
    /// gamma is ignored for E1; beta_bound is ignored for E2.
    static ActivationSpec custom(std::string name, std::function<double(double)> fn, ActivationClass cls,
                                 double gamma, double beta_bound, double threshold)
    {
        detail::require(static_cast<bool>(fn), "activation: function is empty");
        ActivationSpec s(Kind::custom, std::move(name), cls, gamma, beta_bound, threshold);
        s.fn_ = std::move(fn);
        return s;
    }

    double operator()(double z) const
    {
        switch (kind_) {
        case Kind::tanh: return std::tanh(z);
        case Kind::identity: return z;
        case Kind::relu: return z > 0 ? z : 0.0;
        case Kind::odd_power: return z >= 0 ? std::pow(z, gamma_) : -std::pow(-z, gamma_);
        case Kind::positive_part_power: return z > 0 ? std::pow(z, gamma_) : 0.0;
        case Kind::custom: return fn_(z);
        }
        return 0;
    }

    Kind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    ActivationClass class_tag() const noexcept { return class_; }
    /// Growth exponent for E2/E3; 0 for E1.
    double gamma() const noexcept { return gamma_; }
    double beta_bound() const noexcept { return beta_bound_; }
    double threshold() const noexcept { return threshold_; }
    double c_tau() const noexcept { return class_ == ActivationClass::E3 ? 0.5 : 1.0; }
    bool power_like() const noexcept { return class_ != ActivationClass::E1; }

private:
    friend ActivationSpec builtin(const std::string&, double);

    ActivationSpec(Kind kind, std::string name, ActivationClass cls, double gamma, double beta_bound, double threshold)
        : kind_(kind), name_(std::move(name)), class_(cls), gamma_(gamma), beta_bound_(beta_bound),
          threshold_(threshold)
    {
        detail::require(!name_.empty(), "activation: name must not be empty");
        detail::require(threshold >= 0 && std::isfinite(threshold), "activation: threshold must be >= 0");
        switch (cls) {
        case ActivationClass::E1:
            detail::require(beta_bound >= 0 && beta_bound < 1, "activation: E1 requires 0 <= beta_bound < 1");
            gamma_ = 0;
            break;
        case ActivationClass::E2:
            detail::require(gamma > 0 && std::isfinite(gamma), "activation: gamma must be positive");
            beta_bound_ = 0;
            break;
        case ActivationClass::E3:
            detail::require(gamma > 0 && std::isfinite(gamma), "activation: gamma must be positive");
            detail::require(beta_bound >= 0 && beta_bound < gamma, "activation: E3 requires 0 <= beta_bound < gamma");
            break;
        }
    }

    Kind kind_;
    std::string name_;
    ActivationClass class_;
    double gamma_;
    double beta_bound_;
    double threshold_;
    std::function<double(double)> fn_;
};

/// Built-in activations: tanh, identity (alias id), relu, odd_power, positive_part_power.
/// gamma is read only by the two power families.
inline ActivationSpec builtin(const std::string& name, double gamma = 1.0)
{
    using K = ActivationSpec::Kind;
    if (name == "tanh") return {K::tanh, "tanh", ActivationClass::E1, 0, 0, 0};
    if (name == "identity" || name == "id") return {K::identity, "identity", ActivationClass::E2, 1, 0, 0};
    if (name == "relu") return {K::relu, "relu", ActivationClass::E3, 1, 0, 0};
    if (name == "odd_power" || name == "positive_part_power") {
        detail::require(gamma > 0 && std::isfinite(gamma), "activation: gamma must be positive");
        const bool odd = name == "odd_power";
        return {odd ? K::odd_power : K::positive_part_power, name, odd ? ActivationClass::E2 : ActivationClass::E3,
                gamma, 0, 0};
    }
    throw DomainError("activation: unknown builtin '" + name + "'");
}

/// Numeric spot checks of the declared metadata. Returns human-readable
/// warnings; an empty list means nothing looked off. Class membership is an
/// asymptotic statement, so nothing here is fatal.
inline std::vector<std::string> sanity_check(const ActivationSpec& spec)
{
    std::vector<std::string> warnings;
    std::vector<double> grid;
    const double start = std::max(1.0, spec.threshold());
    for (int i = 0; i <= 40; ++i) grid.push_back(start * std::pow(10.0, 6.0 * i / 40));

    if (spec.class_tag() == ActivationClass::E1) {
        // |tau(z)| / |z|^beta must stay bounded
        double first = 0, last = 0;
        for (double z : grid) {
            const double m = std::max(std::fabs(spec(z)), std::fabs(spec(-z))) / std::pow(z, spec.beta_bound());
            if (!std::isfinite(m)) {
                warnings.push_back("non-finite value at |z| = " + std::to_string(z));
                return warnings;
            }
            if (z == grid.front()) first = m;
            last = m;
        }
        if (last > 10 * std::max(first, 1.0)) warnings.push_back("growth exceeds the declared E1 bound");
        return warnings;
    }

    auto check_side = [&](double sign, const char* side) {
        double prev = spec(sign * grid.front());
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const double v = spec(sign * grid[i]);
            if (!(sign * v > sign * prev)) {
                warnings.push_back(std::string("not strictly increasing in |z| on the ") + side + " side");
                return;
            }
            prev = v;
        }
        const double ratio = std::fabs(spec(sign * grid.back())) / std::pow(grid.back(), spec.gamma());
        if (!(std::fabs(ratio - 1) < 0.05))
            warnings.push_back(std::string("|tau(z)|/|z|^gamma is ") + std::to_string(ratio) + " on the " + side +
                               " side, expected ~1");
    };
    check_side(1.0, "positive");
    if (spec.class_tag() == ActivationClass::E2) {
        check_side(-1.0, "negative");
    } else {
        const double z = grid.back();
        const double m = std::fabs(spec(-z)) / std::pow(z, spec.beta_bound());
        const double m0 = std::fabs(spec(-grid.front())) / std::pow(grid.front(), spec.beta_bound());
        if (m > 10 * std::max(m0, 1.0)) warnings.push_back("negative side grows faster than the declared beta_bound");
    }
    return warnings;
}

/// P(|tau(Y)| > t) ~ c_tau C_a sigma^a t^{-a/gamma} for Y ~ S_a(sigma).
inline TailAsymptote tau_tail_asymptote(const ActivationSpec& spec, double alpha, double sigma)
{
    detail::require(spec.power_like(), "tau_tail_asymptote: E1 activations have no power-law tail");
    detail::require(alpha > 0 && alpha < 2, "tau_tail_asymptote: alpha must lie in (0, 2)");
    detail::require(sigma > 0, "tau_tail_asymptote: sigma must be positive");
    return {alpha / spec.gamma(), spec.c_tau() * c_alpha(alpha) * std::pow(sigma, alpha), false,
            TailSide::magnitude};
}

} // namespace stablenn
