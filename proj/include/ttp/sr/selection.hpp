#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "ttp/random.hpp"

namespace ttp::sr {

// Per-case errors, stored case-major so one case's errors over the population are contiguous.
class ErrorMatrix {
public:
    ErrorMatrix() = default;
    ErrorMatrix(std::size_t individuals, std::size_t cases)
        : individuals_(individuals), cases_(cases), data_(individuals * cases, 0.0)
    {
    }

    std::size_t individuals() const noexcept { return individuals_; }
    std::size_t cases() const noexcept { return cases_; }

    double& at(std::size_t individual, std::size_t c) { return data_[c * individuals_ + individual]; }
    double at(std::size_t individual, std::size_t c) const { return data_[c * individuals_ + individual]; }
    const double* case_row(std::size_t c) const { return data_.data() + c * individuals_; }

    void set_individual(std::size_t individual, const std::vector<double>& errs)
    {
        for (std::size_t c = 0; c < cases_; ++c) {
            at(individual, c) = errs[c];
        }
    }

private:
    std::size_t individuals_ = 0;
    std::size_t cases_ = 0;
    std::vector<double> data_;
};

// Softmax weights below this fraction of the largest weight are dropped; their contribution sits
// far below double rounding of the dominant terms.
inline constexpr double kDalexWeightCutoff = 4e-18; // ~ e^-40

// DALex: one N(0, sigma) importance score per case, softmaxed, then the individual with the
// smallest weighted error sum wins (ties to the lower index).
inline std::size_t dalex_select(const ErrorMatrix& errors, double sigma, Rng& rng)
{
    const auto n = errors.individuals();
    const auto cases = errors.cases();
    if (n == 0 || cases == 0) {
        throw std::invalid_argument("dalex_select needs a non-empty error matrix");
    }
    if (sigma < 0.0) {
        throw std::invalid_argument("sigma must be non-negative");
    }
    thread_local std::vector<std::pair<std::size_t, double>> kept;
    thread_local std::vector<double> agg;
    const double log_cut = std::log(kDalexWeightCutoff);
    kept.clear();
    double total = 0.0;
    if (sigma == 0.0) {
        for (std::size_t c = 0; c < cases; ++c) kept.emplace_back(c, 1.0);
        total = static_cast<double>(cases);
    } else {
        // Only scores within -log_cut of the maximum survive, so sample those directly: the maximum
        // of `cases` iid normals by inverse CDF, then how many of the others land in the window
        // below it, then their values as truncated normals. Same law as drawing every score.
        const boost::math::normal_distribution<double> unit;
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const double k = static_cast<double>(cases);
        double u = u01(rng);
        while (u <= 0.0) u = u01(rng);
        const double tail_max = -std::expm1(std::log(u) / k); // P(Z > max)
        const double zmax = boost::math::quantile(boost::math::complement(unit, std::max(tail_max, 1e-300)));
        const std::size_t top_case = std::uniform_int_distribution<std::size_t>(0, cases - 1)(rng);
        kept.emplace_back(top_case, 1.0);
        total = 1.0;
        if (cases > 1) {
            const double zlow = zmax + log_cut / sigma;
            const double tail_hi = boost::math::cdf(boost::math::complement(unit, zmax));
            const double tail_lo = boost::math::cdf(boost::math::complement(unit, zlow));
            const double below = 1.0 - tail_hi;
            const double p_in = below > 0.0 ? std::clamp((tail_lo - tail_hi) / below, 0.0, 1.0) : 0.0;
            const auto extra = std::binomial_distribution<std::size_t>(cases - 1, p_in)(rng);
            std::uniform_int_distribution<std::size_t> pick(0, cases - 1);
            for (std::size_t e = 0; e < extra; ++e) {
                std::size_t c;
                bool fresh;
                do {
                    c = pick(rng);
                    fresh = true;
                    for (const auto& kc : kept) fresh = fresh && kc.first != c;
                } while (!fresh);
                const double t = tail_hi + u01(rng) * (tail_lo - tail_hi);
                const double z = boost::math::quantile(boost::math::complement(unit, std::clamp(t, 1e-300, 1.0)));
                const double w = std::exp(sigma * (std::min(z, zmax) - zmax));
                kept.emplace_back(c, w);
                total += w;
            }
        }
    }
    std::size_t best = 0;
    if (kept.size() == 1) {
        const double* row = errors.case_row(kept.front().first);
        for (std::size_t i = 1; i < n; ++i) {
            if (row[i] < row[best]) {
                best = i;
            }
        }
        return best;
    }
    agg.assign(n, 0.0);
    for (const auto& [c, w] : kept) {
        const double wn = w / total;
        const double* row = errors.case_row(c);
        for (std::size_t i = 0; i < n; ++i) {
            agg[i] += wn * row[i];
        }
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (agg[i] < agg[best]) {
            best = i;
        }
    }
    return best;
}

} // namespace ttp::sr
