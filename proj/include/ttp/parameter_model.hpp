#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "ttp/error.hpp"
#include "ttp/evolution.hpp"
#include "ttp/format.hpp"
#include "ttp/instance.hpp"
#include "ttp/sr/expr.hpp"

namespace ttp {

// Index k of a feature set's weight vector, or the percent term (index == arity).
inline std::string param_name(FeatureSet fs, std::size_t index)
{
    return index == feature_arity(fs) ? std::string("percent") : "w" + std::to_string(index);
}

inline std::optional<std::size_t> parse_param_name(FeatureSet fs, std::string_view s)
{
    if (s == "percent") {
        return feature_arity(fs);
    }
    if (s.size() >= 2 && s[0] == 'w') {
        auto v = parse_int(s.substr(1));
        if (v && *v >= 0 && static_cast<std::size_t>(*v) < feature_arity(fs)) {
            return static_cast<std::size_t>(*v);
        }
    }
    return std::nullopt;
}

// A function of the capacity factor C.
struct LinearCurve {
    double intercept = 0.0;
    double slope = 0.0;
};

// Values at C = 1..10, linearly interpolated, held constant outside the range.
struct PiecewiseLinearCurve {
    std::array<double, 10> values{};
};

// Evolved expression; variable x0 is the capacity factor.
struct ExprCurve {
    sr::ExprTree expr;
};

using Curve = std::variant<LinearCurve, PiecewiseLinearCurve, ExprCurve>;

inline double evaluate_curve(const Curve& curve, double c)
{
    return std::visit(
        [c](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, LinearCurve>) {
                return k.intercept + k.slope * c;
            } else if constexpr (std::is_same_v<T, PiecewiseLinearCurve>) {
                const double x = std::clamp(c, 1.0, 10.0);
                const auto lo = std::min<std::size_t>(static_cast<std::size_t>(std::floor(x)) - 1, 8);
                const double t = x - static_cast<double>(lo + 1);
                return k.values[lo] * (1.0 - t) + k.values[lo + 1] * t;
            } else {
                const double row[1] = {c};
                return sr::eval_expr(k.expr, row);
            }
        },
        curve);
}

inline std::string_view curve_kind(const Curve& curve)
{
    switch (curve.index()) {
    case 0: return "linear";
    case 1: return "pwl";
    default: return "expr";
    }
}

inline constexpr std::string_view kModelHeader = "# ttp-forge parameter model v1";

class ParameterModel {
public:
    using Key = std::tuple<FeatureSet, KpType, std::size_t>;

    void set(FeatureSet fs, KpType kp, std::size_t param, Curve curve) { cells_[{fs, kp, param}] = std::move(curve); }

    const Curve* find(FeatureSet fs, KpType kp, std::size_t param) const
    {
        auto it = cells_.find({fs, kp, param});
        return it == cells_.end() ? nullptr : &it->second;
    }

    bool covers(FeatureSet fs, KpType kp) const
    {
        for (std::size_t k = 0; k <= feature_arity(fs); ++k) {
            if (find(fs, kp, k) == nullptr) return false;
        }
        return true;
    }

    const std::map<Key, Curve>& cells() const noexcept { return cells_; }

    void write(std::ostream& os) const
    {
        os << kModelHeader << '\n' << "feature_set,kp_type,param,kind,coeffs...\n";
        for (const auto& [key, curve] : cells_) {
            const auto& [fs, kp, param] = key;
            os << feature_set_name(fs) << ',' << kp_tag(kp) << ',' << param_name(fs, param) << ','
               << curve_kind(curve);
            std::visit(
                [&os](const auto& k) {
                    using T = std::decay_t<decltype(k)>;
                    if constexpr (std::is_same_v<T, LinearCurve>) {
                        os << ',' << format_double(k.intercept) << ',' << format_double(k.slope);
                    } else if constexpr (std::is_same_v<T, PiecewiseLinearCurve>) {
                        for (double v : k.values) os << ',' << format_double(v);
                    } else {
                        os << ',' << sr::to_prefix(k.expr);
                    }
                },
                curve);
            os << '\n';
        }
    }

    static ParameterModel read(std::istream& in)
    {
        ParameterModel model;
        std::string line;
        std::size_t lineno = 0;
        bool saw_version = false;
        bool saw_columns = false;
        while (std::getline(in, line)) {
            ++lineno;
            const auto t = trim(line);
            if (t.empty()) continue;
            if (!saw_version) {
                if (t != kModelHeader) throw ParseError(lineno, "unsupported model version line");
                saw_version = true;
                continue;
            }
            if (!saw_columns) {
                if (t.rfind("feature_set,", 0) != 0) throw ParseError(lineno, "missing model column header");
                saw_columns = true;
                continue;
            }
            const auto f = split(t, ',');
            if (f.size() < 5) throw ParseError(lineno, "model row needs at least 5 fields");
            const auto fs = parse_feature_set(f[0]);
            if (!fs) throw ParseError(lineno, "unknown feature set " + f[0]);
            const auto kp = parse_kp_type(f[1]);
            if (!kp) throw ParseError(lineno, "unknown kp type " + f[1]);
            const auto param = parse_param_name(*fs, f[2]);
            if (!param) throw ParseError(lineno, "unknown parameter " + f[2]);
            if (f[3] == "linear") {
                if (f.size() != 6) throw ParseError(lineno, "linear curve needs 2 coefficients");
                auto a = parse_double(f[4]);
                auto b = parse_double(f[5]);
                if (!a || !b) throw ParseError(lineno, "malformed coefficient");
                model.set(*fs, *kp, *param, LinearCurve{*a, *b});
            } else if (f[3] == "pwl") {
                if (f.size() != 14) throw ParseError(lineno, "pwl curve needs 10 values");
                PiecewiseLinearCurve p;
                for (std::size_t i = 0; i < 10; ++i) {
                    auto v = parse_double(f[4 + i]);
                    if (!v) throw ParseError(lineno, "malformed coefficient");
                    p.values[i] = *v;
                }
                model.set(*fs, *kp, *param, p);
            } else if (f[3] == "expr") {
                if (f.size() != 5) throw ParseError(lineno, "expr curve needs one prefix expression");
                try {
                    model.set(*fs, *kp, *param, ExprCurve{sr::parse_prefix(f[4])});
                } catch (const std::invalid_argument& e) {
                    throw ParseError(lineno, e.what());
                }
            } else {
                throw ParseError(lineno, "unknown curve kind " + f[3]);
            }
        }
        if (!saw_version) throw ParseError(lineno, "empty model file");
        return model;
    }

private:
    std::map<Key, Curve> cells_;
};

// Weights evaluated then scaled to unit norm; percent clamped to [0, 1].
inline Genotype predict_genotype(const ParameterModel& model, FeatureSet fs, KpType kp, double capacity_factor)
{
    Genotype g;
    g.feature_set = fs;
    const auto k = feature_arity(fs);
    for (std::size_t i = 0; i <= k; ++i) {
        const Curve* c = model.find(fs, kp, i);
        if (c == nullptr) {
            throw ModelError("model has no curve for " + std::string(feature_set_name(fs)) + "/" +
                             std::string(kp_tag(kp)) + "/" + param_name(fs, i));
        }
        double v = evaluate_curve(*c, capacity_factor);
        if (!std::isfinite(v)) {
            v = 0.0;
        }
        if (i < k) {
            g.weights.push_back(v);
        } else {
            g.percent = std::clamp(v, 0.0, 1.0);
        }
    }
    return normalize_weights(std::move(g));
}

} // namespace ttp
