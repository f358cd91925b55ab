#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "ttp/bench/csv.hpp"
#include "ttp/format.hpp"

namespace ttp::bench {

struct TrialRecord {
    std::string instance;
    std::string heuristic;
    std::uint64_t seed = 0;
    double objective = 0.0;
    std::uint64_t evals = 0;
    std::uint64_t wall_ms = 0;
};

inline const std::vector<std::string>& trial_columns()
{
    static const std::vector<std::string> cols{"instance", "heuristic", "seed", "objective", "evals", "wall_ms"};
    return cols;
}

// Canonical order: instance, seed, heuristic.
inline void sort_trials(std::vector<TrialRecord>& v)
{
    std::sort(v.begin(), v.end(), [](const TrialRecord& a, const TrialRecord& b) {
        return std::tie(a.instance, a.seed, a.heuristic) < std::tie(b.instance, b.seed, b.heuristic);
    });
}

inline CsvTable trials_table(const std::vector<TrialRecord>& v)
{
    CsvTable t;
    t.header = trial_columns();
    for (const auto& r : v) {
        t.rows.push_back({r.instance, r.heuristic, std::to_string(r.seed), format_double(r.objective),
                          std::to_string(r.evals), std::to_string(r.wall_ms)});
    }
    return t;
}

inline std::vector<TrialRecord> trials_from_table(const CsvTable& t)
{
    const auto ci = t.require("instance"), ch = t.require("heuristic"), cs = t.require("seed"),
               co = t.require("objective"), ce = t.require("evals"), cw = t.require("wall_ms");
    std::vector<TrialRecord> out;
    for (const auto& r : t.rows) {
        out.push_back({r[ci], r[ch], static_cast<std::uint64_t>(csv_int(r[cs], "seed")), csv_double(r[co], "objective"),
                       static_cast<std::uint64_t>(csv_int(r[ce], "evals")),
                       static_cast<std::uint64_t>(csv_int(r[cw], "wall_ms"))});
    }
    return out;
}

// 1-based ranks, best first; ties receive the mean of the ranks they span.
inline std::vector<double> average_ranks(const std::vector<double>& values, bool higher_is_better)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return higher_is_better ? values[a] > values[b] : values[a] < values[b];
    });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

// Competition ranking: 1 + number of strictly better entries (ties share the best rank they span).
inline std::vector<std::size_t> min_ranks(const std::vector<double>& values, bool higher_is_better)
{
    std::vector<std::size_t> ranks(values.size(), 1);
    for (std::size_t a = 0; a < values.size(); ++a) {
        for (std::size_t b = 0; b < values.size(); ++b) {
            if (higher_is_better ? values[b] > values[a] : values[b] < values[a]) ++ranks[a];
        }
    }
    return ranks;
}

struct RankRow {
    std::string instance;
    std::uint64_t seed = 0;
    std::string heuristic;
    double objective_rank = 0.0;
    double evals_rank = 0.0;
};

struct RankSummary {
    std::string heuristic;
    double mean_objective_rank = 0.0;
    double mean_evals_rank = 0.0;
    double best_objective_fraction = 0.0; // share of groups where no heuristic has a strictly better objective
    double median_evals = 0.0;
    std::size_t groups = 0;
};

struct RankTable {
    std::vector<std::string> heuristics; // sorted
    std::vector<RankRow> rows;           // canonical order
    std::vector<RankSummary> summary;    // one per heuristic
    // counts[h][r - 1]: groups in which heuristic h has competition rank r
    std::map<std::string, std::vector<std::size_t>> objective_rank_counts;
    std::map<std::string, std::vector<std::size_t>> evals_rank_counts;
};

inline double median_of(std::vector<double> v)
{
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Groups records by (instance, seed) and ranks heuristics within each group.
inline RankTable rank_trials(std::vector<TrialRecord> records)
{
    sort_trials(records);
    RankTable t;
    for (const auto& r : records) t.heuristics.push_back(r.heuristic);
    std::sort(t.heuristics.begin(), t.heuristics.end());
    t.heuristics.erase(std::unique(t.heuristics.begin(), t.heuristics.end()), t.heuristics.end());
    const std::size_t H = t.heuristics.size();
    for (const auto& h : t.heuristics) {
        t.objective_rank_counts[h].assign(H, 0);
        t.evals_rank_counts[h].assign(H, 0);
    }
    std::map<std::string, std::vector<double>> obj_ranks, eval_ranks, evals;
    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t j = i;
        while (j < records.size() && records[j].instance == records[i].instance && records[j].seed == records[i].seed) ++j;
        std::vector<double> obj, ev;
        for (std::size_t k = i; k < j; ++k) {
            obj.push_back(records[k].objective);
            ev.push_back(static_cast<double>(records[k].evals));
        }
        const auto ro = average_ranks(obj, true);
        const auto re = average_ranks(ev, false);
        const auto mo = min_ranks(obj, true);
        const auto me = min_ranks(ev, false);
        for (std::size_t k = i; k < j; ++k) {
            const auto& r = records[k];
            t.rows.push_back({r.instance, r.seed, r.heuristic, ro[k - i], re[k - i]});
            obj_ranks[r.heuristic].push_back(ro[k - i]);
            eval_ranks[r.heuristic].push_back(re[k - i]);
            evals[r.heuristic].push_back(ev[k - i]);
            ++t.objective_rank_counts[r.heuristic][mo[k - i] - 1];
            ++t.evals_rank_counts[r.heuristic][me[k - i] - 1];
        }
        i = j;
    }
    for (const auto& h : t.heuristics) {
        RankSummary s;
        s.heuristic = h;
        const auto& o = obj_ranks[h];
        s.groups = o.size();
        if (!o.empty()) {
            s.mean_objective_rank = std::accumulate(o.begin(), o.end(), 0.0) / static_cast<double>(o.size());
            s.mean_evals_rank = std::accumulate(eval_ranks[h].begin(), eval_ranks[h].end(), 0.0) /
                                static_cast<double>(o.size());
            s.best_objective_fraction = static_cast<double>(t.objective_rank_counts[h][0]) / static_cast<double>(o.size());
        }
        s.median_evals = median_of(evals[h]);
        t.summary.push_back(s);
    }
    return t;
}

inline CsvTable rank_rows_table(const RankTable& t)
{
    CsvTable out;
    out.header = {"instance", "seed", "heuristic", "objective_rank", "evals_rank"};
    for (const auto& r : t.rows) {
        out.rows.push_back({r.instance, std::to_string(r.seed), r.heuristic, format_double(r.objective_rank),
                            format_double(r.evals_rank)});
    }
    return out;
}

inline CsvTable rank_summary_table(const RankTable& t)
{
    CsvTable out;
    out.header = {"heuristic", "groups", "mean_objective_rank", "mean_evals_rank", "best_objective_fraction",
                  "median_evals"};
    for (const auto& s : t.summary) {
        out.rows.push_back({s.heuristic, std::to_string(s.groups), format_double(s.mean_objective_rank),
                            format_double(s.mean_evals_rank), format_double(s.best_objective_fraction),
                            format_double(s.median_evals)});
    }
    return out;
}

} // namespace ttp::bench
