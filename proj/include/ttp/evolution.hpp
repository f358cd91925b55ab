#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ttp/error.hpp"
#include "ttp/features.hpp"
#include "ttp/instance.hpp"
#include "ttp/objective.hpp"
#include "ttp/random.hpp"
#include "ttp/tour.hpp"

namespace ttp {

// Monomial bases over x0 = standardized IPR and x1 = standardized rDist.
//   T3  {x0, x1}
//   T4  {x0, x1, x0x1}
//   T5A {x0, x1, x0x1, x0^2}
//   T5B {x0, x1, x0x1, x1^2}
//   T6  {x0, x1, x0x1, x0^2, x1^2}
enum class FeatureSet { T3, T4, T5A, T5B, T6 };

inline constexpr FeatureSet kAllFeatureSets[] = {FeatureSet::T3, FeatureSet::T4, FeatureSet::T5A,
                                                 FeatureSet::T5B, FeatureSet::T6};

inline std::string_view feature_set_name(FeatureSet fs)
{
    switch (fs) {
    case FeatureSet::T3: return "T3";
    case FeatureSet::T4: return "T4";
    case FeatureSet::T5A: return "T5A";
    case FeatureSet::T5B: return "T5B";
    case FeatureSet::T6: return "T6";
    }
    return "T3";
}

inline std::optional<FeatureSet> parse_feature_set(std::string_view s)
{
    for (auto fs : kAllFeatureSets) {
        if (feature_set_name(fs) == s) {
            return fs;
        }
    }
    return std::nullopt;
}

inline constexpr std::size_t feature_arity(FeatureSet fs)
{
    switch (fs) {
    case FeatureSet::T3: return 2;
    case FeatureSet::T4: return 3;
    case FeatureSet::T5A: return 4;
    case FeatureSet::T5B: return 4;
    case FeatureSet::T6: return 5;
    }
    return 2;
}

inline std::array<double, 5> feature_basis(FeatureSet fs, double x0, double x1)
{
    switch (fs) {
    case FeatureSet::T3: return {x0, x1, 0, 0, 0};
    case FeatureSet::T4: return {x0, x1, x0 * x1, 0, 0};
    case FeatureSet::T5A: return {x0, x1, x0 * x1, x0 * x0, 0};
    case FeatureSet::T5B: return {x0, x1, x0 * x1, x1 * x1, 0};
    case FeatureSet::T6: return {x0, x1, x0 * x1, x0 * x0, x1 * x1};
    }
    return {};
}

struct Genotype {
    FeatureSet feature_set = FeatureSet::T3;
    std::vector<double> weights;
    double percent = 0.5;

    static Genotype zero(FeatureSet fs, double percent = 0.5)
    {
        return {fs, std::vector<double>(feature_arity(fs), 0.0), percent};
    }
};

inline bool all_zero(std::span<const double> w)
{
    return std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; });
}

inline Genotype normalize_weights(Genotype g)
{
    double ss = 0.0;
    for (double w : g.weights) {
        ss += w * w;
    }
    if (ss == 0.0) {
        throw DegenerateGenotypeError("cannot normalize an all-zero weight vector");
    }
    const double norm = std::sqrt(ss);
    for (double& w : g.weights) {
        w /= norm;
    }
    return g;
}

inline std::vector<double> score_items(const ItemFeatureTable& features, FeatureSet fs,
                                       std::span<const double> weights)
{
    const auto k = feature_arity(fs);
    if (weights.size() != k) {
        throw std::invalid_argument("weight vector length " + std::to_string(weights.size()) +
                                    " does not match feature set arity " + std::to_string(k));
    }
    std::vector<double> scores(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto f = feature_basis(fs, features.ipr_std[i], features.rdist_std[i]);
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            s += weights[j] * f[j];
        }
        scores[i] = s;
    }
    return scores;
}

inline std::vector<double> score_items(const ItemFeatureTable& features, const Genotype& g)
{
    return score_items(features, g.feature_set, g.weights);
}

// Item ids by descending score, ties to the lower id.
inline std::vector<int> order_by_score(std::span<const double> scores)
{
    std::vector<int> ids(scores.size());
    std::iota(ids.begin(), ids.end(), 0);
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) { return scores[a] > scores[b]; });
    return ids;
}

// Walk items by descending score, packing every item that still fits under min(p W, W).
inline PackingPlan pack_sorted_by_percent(const TtpInstance& inst, std::span<const int> order, double percent)
{
    PackingPlan plan(inst);
    const double limit = std::min(percent, 1.0) * static_cast<double>(inst.capacity);
    std::int64_t weight = 0;
    for (int id : order) {
        const auto w = inst.items[id].weight;
        if (static_cast<double>(weight + w) <= limit) {
            plan.pack(inst, id);
            weight += w;
        }
    }
    return plan;
}

inline PackingPlan pack_by_percent(const TtpInstance& inst, std::span<const double> scores, double percent)
{
    const auto order = order_by_score(scores);
    return pack_sorted_by_percent(inst, order, percent);
}

struct PackingResult {
    PackingPlan plan;
    double objective = 0.0;
};

// Bit-flip (1+1) EA from the empty plan. Each bit flips with probability 1/m, resampled until at
// least one flips. Overweight offspring are discarded unevaluated; acceptance is strict.
inline PackingResult packing_ea(const TtpInstance& inst, const Tour& tour, std::uint64_t generations,
                                std::uint64_t seed, EvalCounter& counter)
{
    PackingPlan parent(inst);
    double best = evaluate(inst, tour, parent, counter);
    const int m = inst.m();
    if (m == 0) {
        return {parent, best};
    }
    Rng rng(seed);
    const double rate = 1.0 / m;
    std::bernoulli_distribution flip(rate);
    std::vector<std::uint8_t> bits = parent.bits();
    std::vector<int> flipped;
    for (std::uint64_t g = 0; g < generations; ++g) {
        flipped.clear();
        while (flipped.empty()) {
            for (int k = 0; k < m; ++k) {
                if (flip(rng)) {
                    flipped.push_back(k);
                }
            }
        }
        std::int64_t weight = parent.total_weight();
        for (int k : flipped) {
            weight += bits[k] ? -inst.items[k].weight : inst.items[k].weight;
        }
        if (weight > inst.capacity) {
            continue;
        }
        for (int k : flipped) {
            bits[k] ^= 1;
        }
        auto child = PackingPlan::from_bits(inst, bits);
        const double val = evaluate(inst, tour, child, counter);
        if (val > best) {
            best = val;
            parent = std::move(child);
        } else {
            for (int k : flipped) {
                bits[k] ^= 1;
            }
        }
    }
    return {parent, best};
}

struct MetaResult {
    Genotype genotype;   // weight-normalized unless still the zero vector
    double objective = 0.0;
    PackingPlan plan;
};

inline double evaluate_genotype(const TtpInstance& inst, const Tour& tour, const ItemFeatureTable& features,
                                const Genotype& g, EvalCounter& counter, PackingPlan* plan_out = nullptr)
{
    auto plan = pack_by_percent(inst, score_items(features, g), g.percent);
    const double val = evaluate(inst, tour, plan, counter);
    if (plan_out != nullptr) {
        *plan_out = std::move(plan);
    }
    return val;
}

// (1+1) EA over score weights plus the percent term. Starts from zero weights and p = 0.5;
// weights take N(0,1) noise, the percent N(0,0.1) clamped to [0,1].
inline MetaResult meta_ea(const TtpInstance& inst, const Tour& tour, const ItemFeatureTable& features, FeatureSet fs,
                          std::uint64_t generations, std::uint64_t seed, EvalCounter& counter)
{
    Genotype parent = Genotype::zero(fs, 0.5);
    PackingPlan best_plan;
    double best = evaluate_genotype(inst, tour, features, parent, counter, &best_plan);
    Rng rng(seed);
    Genotype child = parent;
    PackingPlan child_plan;
    for (std::uint64_t g = 0; g < generations; ++g) {
        for (std::size_t j = 0; j < parent.weights.size(); ++j) {
            child.weights[j] = parent.weights[j] + gaussian(rng, 1.0);
        }
        child.percent = std::clamp(parent.percent + gaussian(rng, 0.1), 0.0, 1.0);
        const double val = evaluate_genotype(inst, tour, features, child, counter, &child_plan);
        if (val > best) {
            best = val;
            parent = child;
            best_plan = child_plan;
        }
    }
    if (!all_zero(parent.weights)) {
        parent = normalize_weights(std::move(parent));
    }
    return {std::move(parent), best, std::move(best_plan)};
}

inline MetaResult meta_ea(const TtpInstance& inst, const Tour& tour, FeatureSet fs, std::uint64_t generations,
                          std::uint64_t seed, EvalCounter& counter)
{
    const auto features = compute_features(inst, tour);
    return meta_ea(inst, tour, features, fs, generations, seed, counter);
}

} // namespace ttp
