#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttp/baselines.hpp"
#include "ttp/bench/csv.hpp"
#include "ttp/bench/parallel.hpp"
#include "ttp/bench/ranking.hpp"
#include "ttp/bench/suite.hpp"
#include "ttp/bench/svg.hpp"
#include "ttp/heuristics.hpp"
#include "ttp/random.hpp"

namespace ttp::bench {

inline const std::vector<std::string>& known_heuristics()
{
    static const std::vector<std::string> h = {"T3", "T4", "T5A", "T5B", "T6", "packIterative", "insertion"};
    return h;
}

inline bool is_baseline(const std::string& h) { return h == "packIterative" || h == "insertion"; }

inline std::vector<std::string> parse_heuristic_list(std::string_view text)
{
    std::vector<std::string> out;
    for (const auto& piece : split(text, ',')) {
        const std::string name(trim(piece));
        if (name.empty()) continue;
        if (std::find(known_heuristics().begin(), known_heuristics().end(), name) == known_heuristics().end()) {
            throw std::invalid_argument("unknown heuristic '" + name +
                                        "' (expected T3, T4, T5A, T5B, T6, packIterative or insertion)");
        }
        if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    }
    if (out.empty()) throw std::invalid_argument("no heuristics given");
    return out;
}

struct RunOutcome {
    double objective = 0.0;
    std::uint64_t evals = 0;
    PackingPlan plan;
};

// One heuristic on one instance with its own counter.
inline RunOutcome run_named_heuristic(const std::string& name, const TtpInstance& inst, const Tour& tour,
                                      const ParameterModel* model, std::uint64_t generations, std::uint64_t seed)
{
    EvalCounter counter;
    if (name == "packIterative") {
        auto r = pack_iterative(inst, tour, PackIterativeConfig{}, counter);
        return {r.objective, counter.count, std::move(r.plan)};
    }
    if (name == "insertion") {
        auto r = insertion(inst, tour, counter);
        return {r.objective, counter.count, std::move(r.plan)};
    }
    const auto fs = parse_feature_set(name);
    if (!fs) throw std::invalid_argument("unknown heuristic '" + name + "'");
    if (model == nullptr) throw ModelError("heuristic " + name + " needs a parameter model (--model)");
    auto r = run_heuristic(inst, tour, *fs, *model, generations, seed, counter);
    if (r.evals != counter.count) throw std::logic_error("evaluation count mismatch");
    return {r.objective, r.evals, std::move(r.plan)};
}

inline std::uint64_t trial_seed(std::uint64_t base, const std::string& instance, std::size_t trial)
{
    return derive_seed(base, {hash_text(instance), trial});
}

struct CompareConfig {
    std::vector<std::string> heuristics;
    std::size_t trials = 30;
    std::uint64_t seed = 1;
    std::uint64_t generations = 50;
};

// Trial matrix over instances x heuristics x trials. Learned heuristics run once per trial, the
// deterministic baselines once per instance with the result copied to every trial.
inline std::vector<TrialRecord> run_comparison(const std::vector<LoadedInstance>& instances,
                                               const CompareConfig& cfg, const ParameterModel* model)
{
    for (const auto& h : cfg.heuristics) {
        if (is_baseline(h)) continue;
        if (model == nullptr) throw ModelError("heuristic " + h + " needs a parameter model (--model)");
        for (const auto& li : instances) {
            const auto kp = li.instance.kp_type();
            if (!kp || !model->covers(*parse_feature_set(h), *kp)) {
                throw ModelError("model has no curves for " + h + " on " + li.instance.name);
            }
        }
    }
    std::vector<Tour> tours;
    for (const auto& li : instances) tours.push_back(reference_tour(li.instance));

    struct Task {
        std::size_t inst;
        std::string heuristic;
        std::size_t trial; // ignored for baselines
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        for (const auto& h : cfg.heuristics) {
            if (is_baseline(h)) {
                tasks.push_back({i, h, 0});
            } else {
                for (std::size_t t = 0; t < cfg.trials; ++t) tasks.push_back({i, h, t});
            }
        }
    }
    std::vector<std::vector<TrialRecord>> results(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t k) {
        const auto& task = tasks[k];
        const auto& inst = instances[task.inst].instance;
        const auto seed = trial_seed(cfg.seed, inst.name, task.trial);
        const auto start = std::chrono::steady_clock::now();
        const auto out = run_named_heuristic(task.heuristic, inst, tours[task.inst], model, cfg.generations, seed);
        const auto ms = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
        if (is_baseline(task.heuristic)) {
            for (std::size_t t = 0; t < cfg.trials; ++t) {
                results[k].push_back({inst.name, task.heuristic, trial_seed(cfg.seed, inst.name, t), out.objective,
                                      out.evals, ms});
            }
        } else {
            results[k].push_back({inst.name, task.heuristic, seed, out.objective, out.evals, ms});
        }
    });
    std::vector<TrialRecord> all;
    for (auto& r : results) {
        for (auto& x : r) all.push_back(std::move(x));
    }
    sort_trials(all);
    return all;
}

inline std::string rank_frequency_svg(const RankTable& t, bool objective)
{
    const std::size_t H = t.heuristics.size();
    std::vector<std::string> cats;
    for (std::size_t r = 1; r <= H; ++r) cats.push_back(std::to_string(r));
    std::vector<BarSeries> series;
    for (const auto& h : t.heuristics) {
        const auto& counts = objective ? t.objective_rank_counts.at(h) : t.evals_rank_counts.at(h);
        BarSeries s{h, {}};
        for (auto c : counts) s.values.push_back(static_cast<double>(c));
        series.push_back(std::move(s));
    }
    return bar_chart_svg(objective ? "Rank frequency by objective" : "Rank frequency by evaluations", cats, series,
                         "rank", "instance-trials");
}

inline RankTable write_comparison(const std::vector<TrialRecord>& records, const fs::path& out)
{
    write_csv_file(out / "trials.csv", trials_table(records));
    const auto ranks = rank_trials(records);
    write_csv_file(out / "ranks.csv", rank_rows_table(ranks));
    write_csv_file(out / "rank_summary.csv", rank_summary_table(ranks));
    std::ofstream(out / "objective_rank_frequency.svg", std::ios::binary) << rank_frequency_svg(ranks, true);
    std::ofstream(out / "evals_rank_frequency.svg", std::ios::binary) << rank_frequency_svg(ranks, false);
    return ranks;
}

} // namespace ttp::bench
