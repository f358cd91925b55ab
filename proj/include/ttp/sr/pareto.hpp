#pragma once

#include <algorithm>
#include <vector>

#include "ttp/sr/expr.hpp"
#include "ttp/sr/polynomial.hpp"

namespace ttp::sr {

struct ParetoEntry {
    ExprTree expr;
    double loss = 0.0;
    std::size_t term_count = 0;
    TermSet terms;
};

// a dominates b: strictly better loss with no more terms.
inline bool dominates(const ParetoEntry& a, const ParetoEntry& b)
{
    return a.loss < b.loss && a.term_count <= b.term_count;
}

// Inserts the candidate unless an incumbent dominates it (or is the same point with the same
// term set), then evicts whatever the candidate dominates.
inline std::vector<ParetoEntry> pareto_update(std::vector<ParetoEntry> front, ParetoEntry candidate)
{
    for (const auto& e : front) {
        if (dominates(e, candidate)) {
            return front;
        }
        if (e.loss == candidate.loss && e.terms == candidate.terms) {
            return front;
        }
    }
    std::erase_if(front, [&](const ParetoEntry& e) { return dominates(candidate, e); });
    front.push_back(std::move(candidate));
    std::sort(front.begin(), front.end(), [](const ParetoEntry& a, const ParetoEntry& b) {
        if (a.term_count != b.term_count) return a.term_count < b.term_count;
        return a.loss < b.loss;
    });
    return front;
}

} // namespace ttp::sr
