#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttp/instance.hpp"
#include "ttp/knapsack.hpp"
#include "ttp/objective.hpp"
#include "ttp/random.hpp"
#include "ttp/tour.hpp"

namespace ttp {

inline constexpr int kItemFactors[] = {1, 3, 5, 10};

inline bool valid_item_factor(int f)
{
    return std::find(std::begin(kItemFactors), std::end(kItemFactors), f) != std::end(kItemFactors);
}

inline bool valid_capacity_factor(int c) { return c >= 1 && c <= 10; }

// Coordinates wrapped as an item-free instance, enough for distances and tours.
inline TtpInstance coordinate_instance(const CoordinateSet& cs)
{
    TtpInstance inst;
    inst.name = cs.name;
    inst.coords = cs.coords;
    inst.edge_weight_kind = cs.edge_weight_kind;
    return inst;
}

inline std::string instance_name(const std::string& base, int m, KpType kp, int capacity_factor)
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d", capacity_factor);
    return base + "_n" + std::to_string(m) + "_" + std::string(kp_tag(kp)) + "_" + buf;
}

struct GenerationResult {
    TtpInstance instance;
    KpSolution kp_solution; // packing that fixed the renting ratio
};

// Places F items at every city but the first, sizes the knapsack at floor(C/11 * sum w) and
// sets R so the knapsack-optimal packing on `tour_order` scores zero.
inline GenerationResult generate_instance_detailed(const CoordinateSet& cs, int item_factor, KpType kp,
                                                   int capacity_factor, const std::vector<int>& tour_order,
                                                   std::uint64_t seed,
                                                   std::int64_t dp_budget = kDefaultDpWorkBudget)
{
    if (!valid_item_factor(item_factor)) {
        throw std::invalid_argument("item factor must be one of 1, 3, 5, 10");
    }
    if (!valid_capacity_factor(capacity_factor)) {
        throw std::invalid_argument("capacity factor must be in 1..10");
    }
    if (cs.coords.size() < 2) {
        throw std::invalid_argument("need at least 2 cities");
    }
    TtpInstance inst = coordinate_instance(cs);
    const int n = inst.n();
    inst.kp_text = std::string(kp_header_text(kp));

    Rng rng(seed);
    inst.items.reserve(static_cast<std::size_t>(item_factor) * (n - 1));
    for (int k = 0; k < item_factor; ++k) {
        for (int city = 2; city <= n; ++city) {
            Item it;
            it.city = city;
            it.id = static_cast<int>(inst.items.size());
            switch (kp) {
            case KpType::Uncorr:
                it.weight = uniform_int(rng, 1, 1000);
                it.profit = uniform_int(rng, 1, 1000);
                break;
            case KpType::UncorrSimilarWeights:
                it.weight = uniform_int(rng, 1000, 1010);
                it.profit = uniform_int(rng, 1, 1000);
                break;
            case KpType::BoundedStronglyCorr:
                it.weight = uniform_int(rng, 1, 1000);
                it.profit = 100 + it.weight;
                break;
            }
            inst.items.push_back(it);
        }
    }
    inst.capacity = static_cast<std::int64_t>(capacity_factor) * inst.total_item_weight() / 11;
    inst.name = instance_name(cs.name.empty() ? std::string("instance") : cs.name, inst.m(), kp, capacity_factor);

    const Tour tour(inst, tour_order);
    auto sol = kp_best_effort(inst.items, inst.capacity, dp_budget);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(inst.m()), 0);
    for (int id : sol.picked) {
        bits[id] = 1;
    }
    const auto plan = PackingPlan::from_bits(inst, std::move(bits));
    const double t = tour_time(inst, tour, plan);
    inst.renting_ratio = t > 0.0 ? static_cast<double>(sol.total_profit) / t : 0.0;
    validate(inst);
    return {std::move(inst), std::move(sol)};
}

inline TtpInstance generate_instance(const CoordinateSet& cs, int item_factor, KpType kp, int capacity_factor,
                                     const std::vector<int>& tour_order, std::uint64_t seed)
{
    return generate_instance_detailed(cs, item_factor, kp, capacity_factor, tour_order, seed).instance;
}

// Synthetic coordinate sources for desk-scale suites.
inline CoordinateSet uniform_coordinates(const std::string& name, int n, std::uint64_t seed, double side = 100.0)
{
    Rng rng(seed);
    CoordinateSet cs;
    cs.name = name;
    cs.coords.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double x = std::round(uniform_real(rng, 0.0, side));
        const double y = std::round(uniform_real(rng, 0.0, side));
        cs.coords.push_back({x, y});
    }
    return cs;
}

inline CoordinateSet clustered_coordinates(const std::string& name, int n, std::uint64_t seed, int clusters = 5,
                                           double side = 100.0)
{
    Rng rng(seed);
    std::vector<Point> centers;
    for (int c = 0; c < clusters; ++c) {
        centers.push_back({uniform_real(rng, 0.1 * side, 0.9 * side), uniform_real(rng, 0.1 * side, 0.9 * side)});
    }
    CoordinateSet cs;
    cs.name = name;
    for (int i = 0; i < n; ++i) {
        const auto& c = centers[static_cast<std::size_t>(i) % centers.size()];
        const double x = std::clamp(std::round(c.x + gaussian(rng, 0.06 * side)), 0.0, side);
        const double y = std::clamp(std::round(c.y + gaussian(rng, 0.06 * side)), 0.0, side);
        cs.coords.push_back({x, y});
    }
    return cs;
}

} // namespace ttp
