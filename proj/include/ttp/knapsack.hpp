#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "ttp/error.hpp"
#include "ttp/instance.hpp"

namespace ttp {

struct KpSolution {
    std::vector<int> picked; // item ids, ascending
    std::int64_t total_profit = 0;
    std::int64_t total_weight = 0;
};

inline constexpr std::int64_t kDefaultDpWorkBudget = 100'000'000;

// Exact 0-1 knapsack by DP over capacity. Reconstruction walks items backwards and prefers
// "not picked", so among co-optimal sets the one using lower ids wins.
inline KpSolution kp_dp_optimal(std::span<const Item> items, std::int64_t capacity,
                                std::int64_t work_budget = kDefaultDpWorkBudget)
{
    if (capacity < 0) {
        throw std::invalid_argument("knapsack capacity must be non-negative");
    }
    const auto m = static_cast<std::int64_t>(items.size());
    if (m > 0 && capacity > work_budget / m) {
        throw CapacityError("knapsack DP needs " + std::to_string(m) + "x" + std::to_string(capacity + 1) +
                            " cells, over the work budget; use kp_greedy instead");
    }
    KpSolution sol;
    if (m == 0 || capacity == 0) {
        return sol;
    }
    const auto cols = static_cast<std::size_t>(capacity + 1);
    std::vector<std::int64_t> best(cols, 0);
    // take[i * cols + c] set when item i improves capacity c
    std::vector<bool> take(static_cast<std::size_t>(m) * cols, false);
    for (std::int64_t i = 0; i < m; ++i) {
        const auto w = items[i].weight;
        const auto p = items[i].profit;
        const auto row = static_cast<std::size_t>(i) * cols;
        for (std::int64_t c = capacity; c >= w; --c) {
            const auto cand = best[c - w] + p;
            if (cand > best[c]) {
                best[c] = cand;
                take[row + static_cast<std::size_t>(c)] = true;
            }
        }
    }
    std::int64_t c = capacity;
    for (std::int64_t i = m - 1; i >= 0; --i) {
        if (take[static_cast<std::size_t>(i) * cols + static_cast<std::size_t>(c)]) {
            sol.picked.push_back(items[i].id);
            sol.total_profit += items[i].profit;
            sol.total_weight += items[i].weight;
            c -= items[i].weight;
        }
    }
    std::sort(sol.picked.begin(), sol.picked.end());
    return sol;
}

// Density-ordered greedy: p/w descending, then lighter first, then lower id.
inline KpSolution kp_greedy(std::span<const Item> items, std::int64_t capacity)
{
    if (capacity < 0) {
        throw std::invalid_argument("knapsack capacity must be non-negative");
    }
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = items[a];
        const auto& y = items[b];
        // compare p_x/w_x > p_y/w_y exactly in integers
        const auto lhs = static_cast<__int128>(x.profit) * y.weight;
        const auto rhs = static_cast<__int128>(y.profit) * x.weight;
        if (lhs != rhs) return lhs > rhs;
        if (x.weight != y.weight) return x.weight < y.weight;
        return x.id < y.id;
    });
    KpSolution sol;
    for (auto k : order) {
        if (sol.total_weight + items[k].weight <= capacity) {
            sol.total_weight += items[k].weight;
            sol.total_profit += items[k].profit;
            sol.picked.push_back(items[k].id);
        }
    }
    std::sort(sol.picked.begin(), sol.picked.end());
    return sol;
}

// DP when it fits the work budget, greedy otherwise.
inline KpSolution kp_best_effort(std::span<const Item> items, std::int64_t capacity,
                                 std::int64_t work_budget = kDefaultDpWorkBudget)
{
    const auto m = static_cast<std::int64_t>(items.size());
    if (m == 0 || capacity <= work_budget / std::max<std::int64_t>(m, 1)) {
        return kp_dp_optimal(items, capacity, work_budget);
    }
    return kp_greedy(items, capacity);
}

} // namespace ttp
