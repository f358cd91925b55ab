#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttp/format.hpp"
#include "ttp/instance.hpp"
#include "ttp/objective.hpp"
#include "ttp/tour.hpp"

namespace ttp {

// Midpoint of the two central order statistics for even lengths.
inline double median(std::vector<double> v)
{
    if (v.empty()) {
        throw std::invalid_argument("median of empty list");
    }
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) {
        return hi;
    }
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

// (v - median) / MAD, or all zeros when MAD is zero.
inline std::vector<double> robust_standardize(std::span<const double> values)
{
    if (values.empty()) {
        throw std::invalid_argument("robust_standardize needs a non-empty list");
    }
    const double med = median(std::vector<double>(values.begin(), values.end()));
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        dev[i] = std::abs(values[i] - med);
    }
    const double mad = median(dev);
    std::vector<double> out(values.size(), 0.0);
    if (mad == 0.0) {
        return out;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = (values[i] - med) / mad;
    }
    return out;
}

struct ItemFeatureTable {
    std::vector<double> ipr_raw;
    std::vector<double> rdist_raw;
    std::vector<double> ipr_std;
    std::vector<double> rdist_std;
    std::string tour_id;

    std::size_t size() const noexcept { return ipr_raw.size(); }
};

// Profit/weight ratio and remaining tour distance (including the closing leg) per item,
// both robustly standardized across the instance's items.
inline ItemFeatureTable compute_features(const TtpInstance& inst, const Tour& tour, std::string tour_id = {})
{
    const int n = tour.size();
    const auto& legs = tour.legs();
    // to_go[i]: distance from tour position i back to city 1
    std::vector<double> to_go(static_cast<std::size_t>(n), 0.0);
    double acc = 0.0;
    for (int i = n - 1; i >= 0; --i) {
        acc += static_cast<double>(legs[i]);
        to_go[i] = acc;
    }
    ItemFeatureTable t;
    t.tour_id = std::move(tour_id);
    t.ipr_raw.reserve(inst.items.size());
    t.rdist_raw.reserve(inst.items.size());
    for (const auto& it : inst.items) {
        t.ipr_raw.push_back(static_cast<double>(it.profit) / static_cast<double>(it.weight));
        t.rdist_raw.push_back(to_go[tour.position_of(it.city)]);
    }
    if (!inst.items.empty()) {
        t.ipr_std = robust_standardize(t.ipr_raw);
        t.rdist_std = robust_standardize(t.rdist_raw);
    }
    return t;
}

// Closed [-2, 2] box on both standardized features; analysis pipeline only.
inline std::vector<bool> analysis_mask(const ItemFeatureTable& t)
{
    std::vector<bool> keep(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        keep[k] = std::abs(t.ipr_std[k]) <= 2.0 && std::abs(t.rdist_std[k]) <= 2.0;
    }
    return keep;
}

// CSV rows item_id,ipr_std,rdist_std,packed
inline void write_feature_csv(std::ostream& os, const ItemFeatureTable& t, const PackingPlan& plan)
{
    os << "item_id,ipr_std,rdist_std,packed\n";
    for (std::size_t k = 0; k < t.size(); ++k) {
        os << k << ',' << format_double(t.ipr_std[k]) << ',' << format_double(t.rdist_std[k]) << ','
           << (plan.contains(static_cast<int>(k)) ? 1 : 0) << '\n';
    }
}

} // namespace ttp
