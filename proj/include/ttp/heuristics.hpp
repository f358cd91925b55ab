#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "ttp/error.hpp"
#include "ttp/evolution.hpp"
#include "ttp/features.hpp"
#include "ttp/objective.hpp"
#include "ttp/parameter_model.hpp"
#include "ttp/random.hpp"
#include "ttp/tour.hpp"

namespace ttp {

struct DoublingResult {
    PackingPlan plan;
    double objective = 0.0;
    std::size_t cutoff = 0;
    std::vector<std::size_t> probes; // cutoffs evaluated, in order, starting with the start cutoff
};

inline constexpr std::size_t kDoublingGrowth = 2;
inline constexpr std::size_t kDoublingShrink = 8;

// Searches the prefix-cutoff space of `sorted` starting at `start_count`. The plan at cutoff k
// packs, in order, every item among the first k that still fits. Per direction the step starts at
// 1, doubles after an improvement and is divided by 8 after a failure; a failure at step 1 ends the
// direction. Forward runs first, then backward, and directions keep alternating while the last one
// improved, so the result is never worse than either neighbour cutoff.
inline DoublingResult doubling_search(const TtpInstance& inst, const Tour& tour, std::span<const int> sorted,
                                      std::size_t start_count, EvalCounter& counter)
{
    const std::size_t m = sorted.size();
    start_count = std::min(start_count, m);
    std::size_t k = 0;
    std::int64_t prefix = 0;
    while (k < start_count && prefix + inst.items[sorted[k]].weight <= inst.capacity) {
        prefix += inst.items[sorted[k]].weight;
        ++k;
    }
    PackingPlan plan(inst);
    for (std::size_t i = 0; i < k; ++i) {
        plan.pack(inst, sorted[i]);
    }
    DoublingResult res;
    double best = evaluate(inst, tour, plan, counter);
    res.probes.push_back(k);

    std::vector<int> changed;
    // Moves the cutoff to `target`, recording touched items in `changed`.
    auto move_to = [&](std::size_t target) {
        changed.clear();
        if (target > k) {
            for (std::size_t i = k; i < target; ++i) {
                if (plan.pack(inst, sorted[i])) changed.push_back(sorted[i]);
            }
        } else {
            for (std::size_t i = target; i < k; ++i) {
                if (plan.contains(sorted[i])) {
                    plan.unpack(inst, sorted[i]);
                    changed.push_back(sorted[i]);
                }
            }
        }
    };
    auto undo = [&](bool forward) {
        for (int id : changed) {
            if (forward) plan.unpack(inst, id);
            else plan.pack(inst, id);
        }
    };
    auto run_direction = [&](bool forward) {
        bool improved = false;
        std::size_t step = 1;
        while (true) {
            const std::size_t target = forward ? std::min(k + step, m) : (k >= step ? k - step : 0);
            if (target == k) break;
            move_to(target);
            const double val = evaluate(inst, tour, plan, counter);
            res.probes.push_back(target);
            if (val > best) {
                best = val;
                k = target;
                step *= kDoublingGrowth;
                improved = true;
            } else {
                undo(forward);
                if (step == 1) break;
                step = std::max<std::size_t>(1, step / kDoublingShrink);
            }
        }
        return improved;
    };

    run_direction(true);
    bool forward = false;
    while (run_direction(forward)) {
        forward = !forward;
    }
    res.plan = std::move(plan);
    res.objective = best;
    res.cutoff = k;
    return res;
}

// Largest prefix of `sorted` whose cumulative weight stays within percent * W.
inline std::size_t percent_cutoff(const TtpInstance& inst, std::span<const int> sorted, double percent)
{
    const double limit = std::clamp(percent, 0.0, 1.0) * static_cast<double>(inst.capacity);
    std::int64_t w = 0;
    std::size_t k = 0;
    while (k < sorted.size() && static_cast<double>(w + inst.items[sorted[k]].weight) <= limit) {
        w += inst.items[sorted[k]].weight;
        ++k;
    }
    return k;
}

// Running estimate of the packed-weight fraction: average on a large deviation, replace otherwise.
inline double update_p_estimate(double p_hat, double p_sample, bool relative_threshold = true)
{
    const double threshold = relative_threshold ? 0.1 * p_hat : 0.1;
    if (std::abs(p_sample - p_hat) > threshold) {
        return 0.5 * (p_sample + p_hat);
    }
    return p_sample;
}

struct HeuristicOptions {
    bool relative_threshold = true;
    bool rejected_offspring_update_estimate = true;
    double mutation_sigma = 0.5;
};

struct HeuristicResult {
    PackingPlan plan;
    double objective = 0.0;
    std::uint64_t evals = 0;
    Genotype genotype;
    double p_hat = 0.0;
};

// Learned initializer: predicted genotype, pack toward p W, doubling search, then a (1+1) EA over
// the weights with N(0, 0.5) noise while p is tracked by a running estimate.
inline HeuristicResult run_heuristic(const TtpInstance& inst, const Tour& tour, FeatureSet fs,
                                     const ParameterModel& model, std::uint64_t generations, std::uint64_t seed,
                                     EvalCounter& counter, const HeuristicOptions& opts = {})
{
    const auto kp = inst.kp_type();
    if (!kp) {
        throw ModelError("instance has no recognised knapsack data type");
    }
    const auto start_evals = counter.count;
    const Genotype predicted = predict_genotype(model, fs, *kp, static_cast<double>(inst.capacity_factor()));
    const auto features = compute_features(inst, tour);
    double p_hat = predicted.percent;

    auto weight_fraction = [&](const PackingPlan& plan) {
        return inst.capacity > 0 ? static_cast<double>(plan.total_weight()) / static_cast<double>(inst.capacity) : 0.0;
    };
    auto run_individual = [&](std::span<const double> weights) {
        const auto order = order_by_score(score_items(features, fs, weights));
        return doubling_search(inst, tour, order, percent_cutoff(inst, order, p_hat), counter);
    };

    std::vector<double> parent = predicted.weights;
    DoublingResult best = run_individual(parent);
    p_hat = update_p_estimate(p_hat, weight_fraction(best.plan), opts.relative_threshold);

    Rng rng(seed);
    std::vector<double> child(parent.size());
    for (std::uint64_t g = 0; g < generations; ++g) {
        for (std::size_t j = 0; j < parent.size(); ++j) {
            child[j] = parent[j] + gaussian(rng, opts.mutation_sigma);
        }
        auto res = run_individual(child);
        const bool accepted = res.objective > best.objective;
        if (accepted || opts.rejected_offspring_update_estimate) {
            p_hat = update_p_estimate(p_hat, weight_fraction(res.plan), opts.relative_threshold);
        }
        if (accepted) {
            parent = child;
            best = std::move(res);
        }
    }
    HeuristicResult out;
    out.plan = std::move(best.plan);
    out.objective = best.objective;
    out.evals = counter.count - start_evals;
    out.genotype = Genotype{fs, parent, p_hat};
    out.p_hat = p_hat;
    return out;
}

} // namespace ttp
