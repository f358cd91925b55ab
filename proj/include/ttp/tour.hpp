#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ttp/instance.hpp"

namespace ttp {

// A closed tour starting at city 1. Leg i runs from order[i] to order[(i+1) % n].
class Tour {
public:
    Tour() = default;

    Tour(const TtpInstance& inst, std::vector<int> order) : order_(std::move(order))
    {
        const int n = inst.n();
        if (static_cast<int>(order_.size()) != n) {
            throw std::invalid_argument("tour length does not match city count");
        }
        if (order_.empty() || order_.front() != 1) {
            throw std::invalid_argument("tour must start at city 1");
        }
        position_.assign(static_cast<std::size_t>(n) + 1, -1);
        for (int i = 0; i < n; ++i) {
            const int c = order_[i];
            if (c < 1 || c > n || position_[c] != -1) {
                throw std::invalid_argument("tour is not a permutation of 1..n");
            }
            position_[c] = i;
        }
        legs_.resize(n);
        total_length_ = 0;
        for (int i = 0; i < n; ++i) {
            legs_[i] = inst.distance(order_[i], order_[(i + 1) % n]);
            total_length_ += legs_[i];
        }
    }

    const std::vector<int>& order() const noexcept { return order_; }
    const std::vector<std::int64_t>& legs() const noexcept { return legs_; }
    std::int64_t total_length() const noexcept { return total_length_; }
    int size() const noexcept { return static_cast<int>(order_.size()); }

    // 0-based position of a 1-based city in the tour.
    int position_of(int city) const { return position_.at(static_cast<std::size_t>(city)); }

    friend bool operator==(const Tour& a, const Tour& b) { return a.order_ == b.order_; }

private:
    std::vector<int> order_;
    std::vector<int> position_;
    std::vector<std::int64_t> legs_;
    std::int64_t total_length_ = 0;
};

// Rotates a cyclic sequence so it begins at city 1.
inline std::vector<int> rotate_to_city_one(std::vector<int> order)
{
    auto it = std::find(order.begin(), order.end(), 1);
    std::rotate(order.begin(), it, order.end());
    return order;
}

// Greedy nearest-unvisited construction from `start`; ties go to the lower city index.
// The seed is accepted for interface symmetry; construction is deterministic.
inline Tour nearest_neighbor_tour(const TtpInstance& inst, int start = 1, std::uint64_t /*seed*/ = 0)
{
    const int n = inst.n();
    if (start < 1 || start > n) {
        throw std::invalid_argument("start city out of range");
    }
    std::vector<bool> visited(static_cast<std::size_t>(n) + 1, false);
    std::vector<int> order;
    order.reserve(n);
    int cur = start;
    visited[cur] = true;
    order.push_back(cur);
    for (int step = 1; step < n; ++step) {
        int best = -1;
        auto best_d = std::numeric_limits<std::int64_t>::max();
        for (int c = 1; c <= n; ++c) {
            if (visited[c]) {
                continue;
            }
            const auto d = inst.distance(cur, c);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        visited[best] = true;
        order.push_back(best);
        cur = best;
    }
    return Tour(inst, rotate_to_city_one(std::move(order)));
}

// First-improvement 2-opt, scanning i then j ascending. Position 0 (city 1) never moves.
inline Tour two_opt_improve(const TtpInstance& inst, const Tour& tour, int max_passes = 50)
{
    std::vector<int> order = tour.order();
    const int n = static_cast<int>(order.size());
    if (n < 4) {
        return tour;
    }
    auto d = [&](int a, int b) { return inst.distance(order[a], order[b % n]); };
    for (int pass = 0; pass < max_passes; ++pass) {
        bool improved = false;
        // reversing order[i+1..j] replaces edges (i,i+1),(j,j+1) with (i,j),(i+1,j+1)
        for (int i = 0; i < n - 2; ++i) {
            for (int j = i + 2; j < n; ++j) {
                if (i == 0 && j == n - 1) {
                    continue; // the two edges are adjacent through city order[0]
                }
                const auto delta = d(i, j) + d(i + 1, j + 1) - d(i, i + 1) - d(j, j + 1);
                if (delta < 0) {
                    std::reverse(order.begin() + i + 1, order.begin() + j + 1);
                    improved = true;
                }
            }
        }
        if (!improved) {
            break;
        }
    }
    return Tour(inst, std::move(order));
}

// Reference tour used throughout the harness: nearest neighbour followed by 2-opt.
inline Tour reference_tour(const TtpInstance& inst, int max_passes = 50)
{
    return two_opt_improve(inst, nearest_neighbor_tour(inst), max_passes);
}

} // namespace ttp
