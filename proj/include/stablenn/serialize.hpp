#pragma once

// JSON views of predictions and reports (nlohmann::json).

#include "limit_theory.hpp"
#include "stable.hpp"
#include "verify.hpp"

#include <json.hpp>

#include <cmath>

namespace stablenn {

namespace detail {
inline nlohmann::json number(double v)
{
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}
} // namespace detail

inline nlohmann::json to_json(const TailAsymptote& t)
{
    return {{"index", t.index},
            {"constant", t.constant},
            {"log_factor", t.log_factor},
            {"side", t.side == TailSide::upper ? "upper" : "magnitude"}};
}

inline nlohmann::json to_json(const LayerScale& l)
{
    return {{"layer", l.layer},
            {"stability", l.stability},
            {"scale", l.scale},
            {"scaling_exponent", l.scaling_exponent},
            {"log_correction", l.log_correction}};
}

inline nlohmann::json to_json(const LimitPrediction& p, const LayerScaleSequence& per_layer = {})
{
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : per_layer) layers.push_back(to_json(l));
    return {{"stability", p.stability},
            {"scale", p.scale},
            {"scaling_exponent", p.scaling_exponent},
            {"log_correction", p.log_correction},
            {"centering", p.centering},
            {"skewness", p.skewness},
            {"per_layer", layers}};
}

inline nlohmann::json to_json(const TailRow& r)
{
    return {{"level", r.level},           {"z", r.z},
            {"survival", r.survival},     {"normalized", r.normalized},
            {"predicted", r.predicted},   {"ratio", r.ratio},
            {"exceedances", r.exceedances}};
}

inline nlohmann::json to_json(const Check& c)
{
    return {{"name", c.name},
            {"tolerance", c.tolerance},
            {"observed", detail::number(c.observed)},
            {"expected", c.expected},
            {"passed", c.passed}};
}

inline nlohmann::json to_json(const VerificationReport& r)
{
    nlohmann::json tail = nlohmann::json::array(), checks = nlohmann::json::array();
    for (const auto& t : r.tail_table) tail.push_back(to_json(t));
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"prediction", to_json(r.prediction)},
            {"alpha_hat", r.alpha_hat},
            {"sigma_hat", r.sigma_hat},
            {"ks_distance", r.ks_distance},
            {"hill_index", detail::number(r.hill_index)},
            {"tail_table", tail},
            {"checks", checks},
            {"passed", r.passed()},
            {"sample_count", r.sample_count},
            {"width", r.width},
            {"seed", r.seed.value}};
}

} // namespace stablenn
