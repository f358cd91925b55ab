#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "ttp/evolution.hpp"
#include "ttp/features.hpp"
#include "ttp/objective.hpp"
#include "ttp/tour.hpp"

namespace ttp {

struct PackIterativeConfig {
    double alpha_lo = 0.1;
    double alpha_hi = 5.0;
    int alpha_iters = 20;
    double batch_fraction = 0.01;
};

struct BaselineResult {
    PackingPlan plan;
    double objective = 0.0;
};

inline std::vector<double> pack_iterative_scores(const TtpInstance& inst, const ItemFeatureTable& f, double alpha)
{
    std::vector<double> s(inst.items.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const auto& it = inst.items[k];
        const double ratio = std::pow(static_cast<double>(it.profit) / static_cast<double>(it.weight), alpha);
        s[k] = ratio / std::max(f.rdist_raw[k], 1e-12);
    }
    return s;
}

// One packIterative pass for a fixed alpha. Batches of ceil(fraction * m) items are packed in score
// order; a batch that lowers the objective is reverted and the batch size halved.
inline BaselineResult pack_iterative_fixed(const TtpInstance& inst, const Tour& tour, const ItemFeatureTable& f,
                                           double alpha, double batch_fraction, EvalCounter& counter)
{
    const auto order = order_by_score(pack_iterative_scores(inst, f, alpha));
    const std::size_t m = order.size();
    PackingPlan plan(inst);
    double obj = evaluate(inst, tour, plan, counter);
    std::size_t step = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(batch_fraction * static_cast<double>(m))));
    std::size_t cursor = 0;
    std::vector<int> added;
    while (cursor < m) {
        added.clear();
        const std::size_t end = std::min(cursor + step, m);
        for (std::size_t i = cursor; i < end; ++i) {
            if (plan.pack(inst, order[i])) added.push_back(order[i]);
        }
        if (added.empty()) {
            // nothing in the batch fits now and never will as weight only grows
            cursor = end;
            continue;
        }
        const double val = evaluate(inst, tour, plan, counter);
        if (val > obj) {
            obj = val;
            cursor = end;
            continue;
        }
        for (int id : added) plan.unpack(inst, id);
        if (step == 1) break;
        step = std::max<std::size_t>(1, step / 2);
    }
    return {std::move(plan), obj};
}

// Golden-section search over alpha, keeping the best inner result seen at any probe.
inline BaselineResult pack_iterative(const TtpInstance& inst, const Tour& tour, const PackIterativeConfig& cfg,
                                     EvalCounter& counter)
{
    const auto f = compute_features(inst, tour);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    BaselineResult best;
    bool have = false;
    int probes = 0;
    auto probe = [&](double alpha) {
        ++probes;
        auto r = pack_iterative_fixed(inst, tour, f, alpha, cfg.batch_fraction, counter);
        const double v = r.objective;
        if (!have || v > best.objective) {
            best = std::move(r);
            have = true;
        }
        return v;
    };
    double a = cfg.alpha_lo;
    double b = cfg.alpha_hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = probe(x1);
    if (cfg.alpha_iters < 2) {
        return best;
    }
    double f2 = probe(x2);
    while (probes < cfg.alpha_iters) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = probe(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = probe(x2);
        }
    }
    return best;
}

// Estimated objective change from packing each item:
//  [0] from an empty knapsack, [1] into an otherwise full one, [2] with weight spread evenly along the tour.
inline std::array<std::vector<double>, 3> insertion_scores(const TtpInstance& inst, const Tour& tour,
                                                           const ItemFeatureTable& f)
{
    const double nu = inst.nu();
    const double W = static_cast<double>(inst.capacity);
    const double R = inst.renting_ratio;
    const double L = static_cast<double>(tour.total_length());
    auto speed = [&](double w) { return std::max(inst.v_max - nu * w, inst.v_min); };
    std::array<std::vector<double>, 3> out;
    for (auto& v : out) v.resize(inst.items.size());
    for (std::size_t k = 0; k < inst.items.size(); ++k) {
        const double p = static_cast<double>(inst.items[k].profit);
        const double w = static_cast<double>(inst.items[k].weight);
        const double d = f.rdist_raw[k];
        out[0][k] = p - R * d * (1.0 / speed(w) - 1.0 / inst.v_max);
        out[1][k] = p - R * d * (1.0 / inst.v_min - 1.0 / speed(W - w));
        const double carried = L > 0.0 ? W * (1.0 - d / L) : 0.0;
        out[2][k] = p - R * d * (1.0 / speed(carried + w) - 1.0 / speed(carried));
    }
    return out;
}

// For each of the three orderings, packs items while the true objective keeps improving; returns
// the best of the three plans. Overweight items are skipped without evaluation.
inline BaselineResult insertion(const TtpInstance& inst, const Tour& tour, EvalCounter& counter)
{
    const auto f = compute_features(inst, tour);
    const auto scores = insertion_scores(inst, tour, f);
    PackingPlan empty(inst);
    const double base = evaluate(inst, tour, empty, counter);
    BaselineResult best{empty, base};
    for (const auto& s : scores) {
        const auto order = order_by_score(s);
        PackingPlan plan(inst);
        double obj = base;
        for (int id : order) {
            if (!plan.pack(inst, id)) continue;
            const double val = evaluate(inst, tour, plan, counter);
            if (val > obj) {
                obj = val;
            } else {
                plan.unpack(inst, id);
                break;
            }
        }
        if (obj > best.objective) {
            best = {std::move(plan), obj};
        }
    }
    return best;
}

} // namespace ttp
