#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ttp/error.hpp"
#include "ttp/instance.hpp"
#include "ttp/tour.hpp"

namespace ttp {

// Per-item packed bits with a cached total weight.
class PackingPlan {
public:
    PackingPlan() = default;
    explicit PackingPlan(const TtpInstance& inst) : bits_(static_cast<std::size_t>(inst.m()), 0) {}

    // Recomputes the weight; the result may exceed capacity (evaluate refuses it then).
    static PackingPlan from_bits(const TtpInstance& inst, std::vector<std::uint8_t> bits)
    {
        if (bits.size() != static_cast<std::size_t>(inst.m())) {
            throw std::invalid_argument("plan size does not match item count");
        }
        PackingPlan plan;
        plan.bits_ = std::move(bits);
        for (std::size_t k = 0; k < plan.bits_.size(); ++k) {
            if (plan.bits_[k]) {
                plan.bits_[k] = 1;
                plan.weight_ += inst.items[k].weight;
            }
        }
        return plan;
    }

    bool contains(int id) const { return bits_.at(static_cast<std::size_t>(id)) != 0; }
    std::int64_t total_weight() const noexcept { return weight_; }
    std::size_t size() const noexcept { return bits_.size(); }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    std::size_t packed_count() const
    {
        return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
    }

    // Refuses (returns false) when the item would push the weight over capacity.
    bool pack(const TtpInstance& inst, int id)
    {
        auto& b = bits_.at(static_cast<std::size_t>(id));
        if (b) {
            return true;
        }
        const auto w = inst.items[id].weight;
        if (weight_ + w > inst.capacity) {
            return false;
        }
        b = 1;
        weight_ += w;
        return true;
    }

    void unpack(const TtpInstance& inst, int id)
    {
        auto& b = bits_.at(static_cast<std::size_t>(id));
        if (b) {
            b = 0;
            weight_ -= inst.items[id].weight;
        }
    }

    std::int64_t total_profit(const TtpInstance& inst) const
    {
        std::int64_t s = 0;
        for (std::size_t k = 0; k < bits_.size(); ++k) {
            if (bits_[k]) {
                s += inst.items[k].profit;
            }
        }
        return s;
    }

    friend bool operator==(const PackingPlan& a, const PackingPlan& b) { return a.bits_ == b.bits_; }

private:
    std::vector<std::uint8_t> bits_;
    std::int64_t weight_ = 0;
};

// Counts full objective evaluations.
struct EvalCounter {
    std::uint64_t count = 0;
};

namespace detail {

inline void check_plan(const TtpInstance& inst, const Tour& tour, const PackingPlan& plan)
{
    if (plan.size() != static_cast<std::size_t>(inst.m())) {
        throw std::invalid_argument("plan size does not match item count");
    }
    if (tour.size() != inst.n()) {
        throw std::invalid_argument("tour size does not match city count");
    }
    if (plan.total_weight() > inst.capacity) {
        throw CapacityError("packing plan weight " + std::to_string(plan.total_weight()) +
                            " exceeds capacity " + std::to_string(inst.capacity));
    }
}

// Time spent on the tour with the given weight picked up per tour position.
inline double travel_time(const TtpInstance& inst, const Tour& tour, std::span<const std::int64_t> picked_at)
{
    const double nu = inst.nu();
    const auto& legs = tour.legs();
    double time = 0.0;
    std::int64_t carried = 0;
    for (int i = 0; i < tour.size(); ++i) {
        carried += picked_at[i];
        const double speed = std::max(inst.v_max - nu * static_cast<double>(carried), inst.v_min);
        time += static_cast<double>(legs[i]) / speed;
    }
    return time;
}

} // namespace detail

inline double tour_time(const TtpInstance& inst, const Tour& tour, const PackingPlan& plan)
{
    detail::check_plan(inst, tour, plan);
    std::vector<std::int64_t> picked_at(static_cast<std::size_t>(tour.size()), 0);
    const auto& bits = plan.bits();
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k]) {
            picked_at[tour.position_of(inst.items[k].city)] += inst.items[k].weight;
        }
    }
    return detail::travel_time(inst, tour, picked_at);
}

// Total packed profit minus R times travel time. Single sweep, O(n + m).
inline double evaluate(const TtpInstance& inst, const Tour& tour, const PackingPlan& plan, EvalCounter& counter)
{
    detail::check_plan(inst, tour, plan);
    std::vector<std::int64_t> picked_at(static_cast<std::size_t>(tour.size()), 0);
    std::int64_t profit = 0;
    const auto& bits = plan.bits();
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k]) {
            const auto& it = inst.items[k];
            picked_at[tour.position_of(it.city)] += it.weight;
            profit += it.profit;
        }
    }
    const double time = detail::travel_time(inst, tour, picked_at);
    ++counter.count;
    return static_cast<double>(profit) - inst.renting_ratio * time;
}

} // namespace ttp
