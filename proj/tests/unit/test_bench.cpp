#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ttp/bench/compare.hpp"
#include "ttp/bench/csv.hpp"
#include "ttp/bench/parallel.hpp"
#include "ttp/bench/pipeline.hpp"
#include "ttp/bench/ranking.hpp"
#include "ttp/bench/suite.hpp"
#include "ttp/bench/svg.hpp"

using namespace ttp;
using namespace ttp::bench;

namespace {

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("ttp_bench_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 1 + strictly better + half the other tied entries.
double reference_rank(const std::vector<double>& v, std::size_t i, bool higher_is_better)
{
    double better = 0.0, tied = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (j == i) continue;
        if (v[j] == v[i]) tied += 1.0;
        else if (higher_is_better ? v[j] > v[i] : v[j] < v[i]) better += 1.0;
    }
    return 1.0 + better + 0.5 * tied;
}

SuiteSpec small_spec(std::vector<int> factors = {1, 5, 10})
{
    SuiteSpec s;
    s.coordinate_sets.push_back(uniform_coordinates("uni12", 12, 5));
    s.item_factors = std::move(factors);
    s.seed = 9;
    return s;
}

Budget tiny_budget()
{
    return parse_budget("ea_gens=200,meta_gens=60,meta_runs=2,sr_gens=8,sr_runs=2,fit_runs=2,sr_pop=60,sr_rows=300,heur_gens=5");
}

} // namespace

TEST(Csv, RoundTripWithQuoting)
{
    CsvTable t;
    t.header = {"a", "b,c", "d"};
    t.rows = {{"plain", "with,comma", "with \"quote\""}, {"", "multi\nline", "x"}, {"1", "2", "3"}};
    std::stringstream ss;
    write_csv(ss, t);
    const auto back = read_csv(ss);
    EXPECT_EQ(back.header, t.header);
    EXPECT_EQ(back.rows, t.rows);
}

TEST(Csv, RaggedRowAndOpenQuoteRejected)
{
    std::istringstream a("x,y\n1,2\n3\n");
    try {
        read_csv(a);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    std::istringstream b("x,y\n1,\"2\n");
    EXPECT_THROW(read_csv(b), ParseError);
}

TEST(Csv, TrialsRoundTripExactly)
{
    std::vector<TrialRecord> v = {{"i1", "T6", 3, 1.0 / 3.0, 10, 4}, {"i1", "insertion", 3, -12345.678, 2, 0}};
    std::stringstream ss;
    write_csv(ss, trials_table(v));
    const auto t = read_csv(ss);
    EXPECT_EQ(t.header, trial_columns());
    const auto back = trials_from_table(t);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].objective, 1.0 / 3.0);
    EXPECT_EQ(back[1].heuristic, "insertion");
    EXPECT_EQ(back[1].evals, 2u);
}

TEST(Ranking, AverageRanksMatchReference)
{
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = std::uniform_int_distribution<int>(1, 9)(rng);
        std::vector<double> v(n);
        for (auto& x : v) x = std::uniform_int_distribution<int>(0, 4)(rng); // plenty of ties
        for (bool hib : {true, false}) {
            const auto r = average_ranks(v, hib);
            for (int i = 0; i < n; ++i) EXPECT_DOUBLE_EQ(r[i], reference_rank(v, i, hib));
        }
    }
}

TEST(Ranking, RandomRecordSetsMatchReference)
{
    std::mt19937_64 rng(8);
    const std::vector<std::string> hs = {"A", "B", "C", "D"};
    std::vector<TrialRecord> recs;
    for (int inst = 0; inst < 5; ++inst) {
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            for (const auto& h : hs) {
                recs.push_back({"i" + std::to_string(inst), h, seed,
                                static_cast<double>(std::uniform_int_distribution<int>(0, 3)(rng)),
                                static_cast<std::uint64_t>(std::uniform_int_distribution<int>(1, 4)(rng)), 0});
            }
        }
    }
    std::shuffle(recs.begin(), recs.end(), rng);
    const auto t = rank_trials(recs);
    ASSERT_EQ(t.rows.size(), recs.size());
    for (const auto& row : t.rows) {
        std::vector<double> obj, ev;
        std::size_t self = 0;
        for (const auto& r : recs) {
            if (r.instance != row.instance || r.seed != row.seed) continue;
            if (r.heuristic == row.heuristic) self = obj.size();
            obj.push_back(r.objective);
            ev.push_back(static_cast<double>(r.evals));
        }
        EXPECT_DOUBLE_EQ(row.objective_rank, reference_rank(obj, self, true));
        EXPECT_DOUBLE_EQ(row.evals_rank, reference_rank(ev, self, false));
    }
}

TEST(Ranking, SingleHeuristicAlwaysFirst)
{
    std::vector<TrialRecord> recs;
    for (std::uint64_t s = 0; s < 7; ++s) recs.push_back({"x", "T6", s, static_cast<double>(s), s + 1, 0});
    const auto t = rank_trials(recs);
    for (const auto& r : t.rows) {
        EXPECT_EQ(r.objective_rank, 1.0);
        EXPECT_EQ(r.evals_rank, 1.0);
    }
    EXPECT_EQ(t.summary.at(0).best_objective_fraction, 1.0);
}

TEST(Ranking, DominantHeuristicMeansOneAndTwo)
{
    std::vector<TrialRecord> recs;
    for (int i = 0; i < 3; ++i) {
        for (std::uint64_t s = 0; s < 10; ++s) {
            recs.push_back({"i" + std::to_string(i), "good", s, 100.0 + static_cast<double>(s), 5, 0});
            recs.push_back({"i" + std::to_string(i), "bad", s, 50.0, 9, 0});
        }
    }
    const auto t = rank_trials(recs);
    for (const auto& s : t.summary) {
        if (s.heuristic == "good") {
            EXPECT_EQ(s.mean_objective_rank, 1.0);
            EXPECT_EQ(s.mean_evals_rank, 1.0);
            EXPECT_EQ(s.best_objective_fraction, 1.0);
        } else {
            EXPECT_EQ(s.mean_objective_rank, 2.0);
            EXPECT_EQ(s.mean_evals_rank, 2.0);
            EXPECT_EQ(s.best_objective_fraction, 0.0);
        }
        EXPECT_EQ(s.groups, 30u);
    }
}

TEST(Ranking, RankSumPerTrialIsTriangular)
{
    std::mt19937_64 rng(12);
    for (std::size_t H = 1; H <= 7; ++H) {
        std::vector<TrialRecord> recs;
        for (std::uint64_t s = 0; s < 5; ++s) {
            for (std::size_t h = 0; h < H; ++h) {
                recs.push_back({"i", "h" + std::to_string(h), s,
                                static_cast<double>(std::uniform_int_distribution<int>(0, 2)(rng)),
                                static_cast<std::uint64_t>(std::uniform_int_distribution<int>(0, 2)(rng)), 0});
            }
        }
        const auto t = rank_trials(recs);
        std::map<std::uint64_t, std::pair<double, double>> sums;
        for (const auto& r : t.rows) {
            sums[r.seed].first += r.objective_rank;
            sums[r.seed].second += r.evals_rank;
        }
        const double want = static_cast<double>(H * (H + 1)) / 2.0;
        for (const auto& [seed, s] : sums) {
            EXPECT_DOUBLE_EQ(s.first, want);
            EXPECT_DOUBLE_EQ(s.second, want);
        }
        // rank-frequency counts cover every group once per heuristic
        for (const auto& h : t.heuristics) {
            std::size_t total = 0;
            for (auto c : t.objective_rank_counts.at(h)) total += c;
            EXPECT_EQ(total, 5u);
        }
    }
}

TEST(Ranking, RowAndSummaryTablesReparse)
{
    std::vector<TrialRecord> recs = {{"a", "x", 1, 2.0, 3, 0}, {"a", "y", 1, 2.0, 4, 0}};
    const auto t = rank_trials(recs);
    for (const auto& table : {rank_rows_table(t), rank_summary_table(t)}) {
        std::stringstream ss;
        write_csv(ss, table);
        const auto back = read_csv(ss);
        EXPECT_EQ(back.header, table.header);
        EXPECT_EQ(back.rows, table.rows);
    }
    EXPECT_EQ(t.rows[0].objective_rank, 1.5);
}

TEST(Parallel, CoversEveryIndexOnce)
{
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); }, 4);
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, RethrowsWorkerException)
{
    EXPECT_THROW(parallel_for(
                     50, [](std::size_t i) {
                         if (i == 17) throw std::runtime_error("boom");
                     },
                     3),
                 std::runtime_error);
}

TEST(Svg, BarAndScatterAreWellFormed)
{
    const auto bars = bar_chart_svg("t<1>", {"1", "2"}, {{"A&B", {3, 1}}, {"C", {0, 4}}}, "rank", "count");
    EXPECT_EQ(bars.rfind("<svg", 0), 0u);
    EXPECT_NE(bars.find("</svg>"), std::string::npos);
    EXPECT_NE(bars.find("A&amp;B"), std::string::npos);
    EXPECT_NE(bars.find("t&lt;1&gt;"), std::string::npos);
    const auto sc = scatter_chart_svg("s", {{"pts", {1, 2, NAN}, {3, 4, 5}, false}, {"line", {1, 2}, {3, 4}, true}},
                                      "x", "y");
    EXPECT_NE(sc.find("<polyline"), std::string::npos);
    EXPECT_EQ(sc.find("nan"), std::string::npos);
}

TEST(Budget, ParsesScaleAndOverrides)
{
    const auto d = parse_budget("");
    EXPECT_EQ(d.ea_gens, 10000u);
    EXPECT_EQ(d.meta_gens, 1000u);
    EXPECT_EQ(d.meta_runs, 4u);
    EXPECT_EQ(d.sr_gens, 300u);
    EXPECT_EQ(d.sr_runs, 5u);
    EXPECT_EQ(d.fit_runs, 10u);
    const auto b = parse_budget("0.1,sr_runs=2,ea_gens=7");
    EXPECT_EQ(b.ea_gens, 7u);
    EXPECT_EQ(b.meta_gens, 100u);
    EXPECT_EQ(b.sr_gens, 30u);
    EXPECT_EQ(b.sr_runs, 2u);
    EXPECT_THROW(parse_budget("bogus=1"), std::invalid_argument);
    EXPECT_THROW(parse_budget("-1"), std::invalid_argument);
    EXPECT_THROW(parse_budget("sr_runs=0"), std::invalid_argument);
    EXPECT_THROW(parse_budget("fit_runs=0"), std::invalid_argument);
}

TEST(Suite, FullFactorialIsNinetyFiles)
{
    const auto dir = scratch("suite90");
    const auto entries = generate_suite(small_spec(), dir);
    EXPECT_EQ(entries.size(), 90u);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir)) files += e.path().extension() == ".ttp";
    EXPECT_EQ(files, 90u);
    const auto manifest = read_manifest(dir);
    ASSERT_EQ(manifest.size(), 90u);
    EXPECT_EQ(read_csv_file(dir / "manifest.csv").header, manifest_columns());
    const auto loaded = load_instances(dir);
    for (const auto& li : loaded) {
        EXPECT_EQ(li.instance.m(), li.entry.item_factor * 11);
        EXPECT_EQ(li.instance.capacity_factor(), li.entry.capacity_factor);
        EXPECT_EQ(li.instance.kp_type(), li.entry.kp);
        EXPECT_EQ(li.instance.capacity, li.entry.capacity);
    }
}

TEST(Suite, SingleItemFactorGivesThirty)
{
    const auto dir = scratch("suite30");
    EXPECT_EQ(generate_suite(small_spec({1}), dir).size(), 30u);
}

TEST(Suite, RegenerationIsByteIdentical)
{
    const auto a = scratch("suite_a");
    const auto b = scratch("suite_b");
    generate_suite(small_spec({1, 5}), a);
    generate_suite(small_spec({1, 5}), b);
    for (const auto& e : fs::directory_iterator(a)) {
        EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
    }
}

TEST(Suite, CoordinateSources)
{
    const auto u = load_coordinate_source("uniform:30", 1);
    EXPECT_EQ(u.coords.size(), 30u);
    EXPECT_EQ(u.name, "uni30");
    const auto c = load_coordinate_source("clustered:40:7", 1);
    EXPECT_EQ(c.coords.size(), 40u);
    EXPECT_THROW(load_coordinate_source("uniform:x", 1), std::invalid_argument);
    EXPECT_THROW(load_coordinate_source("/nonexistent/file.tsp", 1), StageError);
}

TEST(Suite, MissingManifestNamed)
{
    const auto dir = scratch("nomanifest");
    try {
        read_manifest(dir);
        FAIL() << "expected StageError";
    } catch (const StageError& e) {
        EXPECT_NE(std::string(e.what()).find("manifest.csv"), std::string::npos);
    }
}

TEST(Pipeline, MissingPrerequisitesNamed)
{
    const auto out = scratch("prereq");
    try {
        stage_nlbc(out, tiny_budget(), 1);
        FAIL() << "expected StageError";
    } catch (const StageError& e) {
        EXPECT_NE(std::string(e.what()).find("summary.csv"), std::string::npos);
    }
    try {
        stage_fit_model(out, tiny_budget(), 1);
        FAIL() << "expected StageError";
    } catch (const StageError& e) {
        EXPECT_NE(std::string(e.what()).find("genotypes.csv"), std::string::npos);
    }
}

TEST(Pipeline, MetaDataRowsAreUnitNorm)
{
    const auto dir = scratch("meta_inst");
    auto spec = small_spec({1});
    spec.kp_types = {KpType::Uncorr};
    const auto instances = load_instances((generate_suite(spec, dir), dir));
    ASSERT_EQ(instances.size(), 10u);
    const auto out = scratch("meta_out");
    auto budget = tiny_budget();
    budget.meta_gens = Budget{}.meta_gens;
    budget.meta_runs = Budget{}.meta_runs;
    stage_meta_data(instances, out, budget, 3);
    const auto g = read_csv_file(out / "meta-data" / "genotypes.csv");
    EXPECT_EQ(g.header, genotype_columns());
    ASSERT_EQ(g.rows.size(), 10u * std::size(kAllFeatureSets));
    const auto cf = g.require("feature_set");
    for (FeatureSet fs : kAllFeatureSets) {
        std::size_t rows = 0;
        for (const auto& r : g.rows) {
            if (r[cf] != feature_set_name(fs)) continue;
            ++rows;
            double ss = 0.0;
            for (std::size_t k = 0; k < feature_arity(fs); ++k) {
                const double w = csv_double(r[g.require("w" + std::to_string(k))], "w");
                ss += w * w;
            }
            EXPECT_NEAR(ss, 1.0, 1e-12);
            const double p = csv_double(r[g.require("p")], "p");
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, 1.0);
        }
        EXPECT_EQ(rows, 10u);
    }
    const auto f = read_csv_file(out / "meta-data" / "instance_features.csv");
    EXPECT_EQ(f.rows.size(), 10u);
}

TEST(Pipeline, EndToEndSmallRun)
{
    const auto dir = scratch("e2e_inst");
    auto spec = small_spec({1, 5});
    const auto instances = load_instances((generate_suite(spec, dir), dir));
    const auto out = scratch("e2e_out");
    const auto budget = tiny_budget();
    stage_ea_data(instances, out, budget, 5);
    const auto summary = read_csv_file(out / "ea-data" / "summary.csv");
    EXPECT_EQ(summary.rows.size(), instances.size());
    stage_nlbc(out, budget, 5);
    const auto terms = read_csv_file(out / "nlbc" / "term_sets.csv");
    EXPECT_EQ(terms.header, (std::vector<std::string>{"kp_type", "size", "term_set", "count"}));
    const auto front = read_csv_file(out / "nlbc" / "uncorr_run0_pareto.csv");
    EXPECT_EQ(front.header, (std::vector<std::string>{"loss", "term_count", "term_set", "expr"}));
    stage_meta_data(instances, out, budget, 5);
    const auto cells = stage_fit_model(out, budget, 5);
    std::size_t expected = 0;
    for (FeatureSet fs : kAllFeatureSets) expected += 3 * (feature_arity(fs) + 1);
    EXPECT_EQ(cells.size(), expected);

    std::ifstream min(model_path(out));
    const auto model = ParameterModel::read(min);
    for (FeatureSet fs : kAllFeatureSets) {
        for (KpType kp : kAllKpTypes) EXPECT_TRUE(model.covers(fs, kp));
    }
    const auto curves = read_csv_file(out / "fit-model" / "param_curves.csv");
    const auto cp = curves.require("param"), cv = curves.require("value"), cc = curves.require("C");
    std::size_t percent_rows = 0;
    for (const auto& r : curves.rows) {
        const double c = csv_double(r[cc], "C");
        EXPECT_GE(c, 1.0);
        EXPECT_LE(c, 10.0);
        if (r[cp] != "percent") continue;
        ++percent_rows;
        const double v = csv_double(r[cv], "value");
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
    EXPECT_EQ(percent_rows, 5u * 3u * 19u);
    const auto freq = read_csv_file(out / "fit-model" / "variable_frequency.csv");
    EXPECT_EQ(freq.rows.size(), expected);
    const auto c5 = freq.require("x5"), c6 = freq.require("x6");
    for (const auto& r : freq.rows) {
        EXPECT_EQ(r[c5], ""); // speed bounds are constant and omitted
        EXPECT_EQ(r[c6], "");
    }
    EXPECT_TRUE(fs::exists(out / "fit-model" / "plots" / "T6_uncorr_percent.svg"));
}

TEST(Pipeline, NlbcOnSeparableDataFindsBothInputs)
{
    const auto out = scratch("nlbc_synth");
    const auto ea = out / "ea-data";
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    CsvTable summary;
    summary.header = {"instance", "kp_type", "F", "C", "m", "objective", "packed", "weight_fraction", "evals"};
    for (int i = 0; i < 4; ++i) {
        CsvTable t;
        t.header = {"item_id", "ipr_std", "rdist_std", "packed"};
        int k = 0;
        while (t.rows.size() < 150) {
            const double x = u(rng), y = u(rng);
            const double s = x - y;
            if (std::abs(s) < 0.2) continue;
            t.rows.push_back({std::to_string(k++), format_double(x), format_double(y), s > 0 ? "1" : "0"});
        }
        // outside the analysis box; must be ignored
        t.rows.push_back({std::to_string(k), "5", "0", "0"});
        const std::string name = "syn" + std::to_string(i);
        write_csv_file(ea / (name + ".csv"), t);
        summary.rows.push_back({name, "uncorr", "1", "1", "151", "0", "0", "0", "0"});
    }
    write_csv_file(ea / "summary.csv", summary);
    Budget budget; // default SR settings
    budget.sr_rows = 0;
    stage_nlbc(out, budget, 2);
    const auto t = read_csv_file(out / "nlbc" / "term_sets.csv");
    const auto ck = t.require("kp_type"), cs = t.require("size"), ct = t.require("term_set"), cn = t.require("count");
    std::string top;
    long long best = -1;
    for (const auto& r : t.rows) {
        if (r[ck] != "uncorr" || r[cs] != "2") continue;
        const auto n = csv_int(r[cn], "count");
        if (n > best) {
            best = n;
            top = r[ct];
        }
    }
    EXPECT_EQ(top, "{x0,x1}");
}

TEST(Compare, UnknownHeuristicIsArgumentError)
{
    EXPECT_THROW(parse_heuristic_list("T6,bogus"), std::invalid_argument);
    EXPECT_THROW(parse_heuristic_list(""), std::invalid_argument);
    EXPECT_EQ(parse_heuristic_list("T6, insertion,T6"), (std::vector<std::string>{"T6", "insertion"}));
}

TEST(Compare, LearnedHeuristicNeedsModel)
{
    const auto dir = scratch("cmp_nomodel");
    const auto instances = load_instances((generate_suite(small_spec({1}), dir), dir));
    CompareConfig cfg;
    cfg.heuristics = {"T4"};
    EXPECT_THROW(run_comparison(instances, cfg, nullptr), ModelError);
}

TEST(Compare, BaselinesReplicatedAndDeterministic)
{
    const auto dir = scratch("cmp_inst");
    auto spec = small_spec({1});
    spec.capacity_factors = {2, 7};
    const auto instances = load_instances((generate_suite(spec, dir), dir));
    ParameterModel model;
    for (KpType kp : kAllKpTypes) {
        for (std::size_t p = 0; p <= feature_arity(FeatureSet::T6); ++p) {
            model.set(FeatureSet::T6, kp, p, LinearCurve{p == 0 ? 1.0 : (p == 5 ? 0.5 : 0.0), 0.0});
        }
    }
    CompareConfig cfg;
    cfg.heuristics = {"T6", "packIterative", "insertion"};
    cfg.trials = 4;
    cfg.seed = 11;
    cfg.generations = 6;
    const auto a = run_comparison(instances, cfg, &model);
    EXPECT_EQ(a.size(), instances.size() * 3 * 4);
    std::map<std::pair<std::string, std::string>, std::set<double>> objectives;
    for (const auto& r : a) objectives[{r.instance, r.heuristic}].insert(r.objective);
    for (const auto& [key, vals] : objectives) {
        if (is_baseline(key.second)) {
            EXPECT_EQ(vals.size(), 1u) << key.first << " " << key.second;
        }
    }
    const auto b = run_comparison(instances, cfg, &model);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].instance, b[i].instance);
        EXPECT_EQ(a[i].heuristic, b[i].heuristic);
        EXPECT_EQ(a[i].seed, b[i].seed);
        EXPECT_EQ(a[i].objective, b[i].objective);
        EXPECT_EQ(a[i].evals, b[i].evals);
    }
    const auto out = scratch("cmp_out");
    const auto ranks = write_comparison(a, out);
    EXPECT_EQ(read_csv_file(out / "trials.csv").header, trial_columns());
    EXPECT_EQ(read_csv_file(out / "ranks.csv").rows.size(), a.size());
    EXPECT_TRUE(fs::exists(out / "objective_rank_frequency.svg"));
    EXPECT_TRUE(fs::exists(out / "evals_rank_frequency.svg"));
    EXPECT_EQ(ranks.heuristics.size(), 3u);
}

TEST(Compare, EvalsEqualCounterDelta)
{
    const auto cs = uniform_coordinates("u9", 9, 3);
    const auto tour_order = reference_tour(coordinate_instance(cs)).order();
    const auto inst = generate_instance(cs, 3, KpType::Uncorr, 4, tour_order, 4);
    const Tour tour(inst, tour_order);
    for (const char* h : {"packIterative", "insertion"}) {
        const auto r = run_named_heuristic(h, inst, tour, nullptr, 0, 1);
        EvalCounter c;
        const double again = evaluate(inst, tour, r.plan, c);
        EXPECT_DOUBLE_EQ(again, r.objective);
        EXPECT_GT(r.evals, 0u);
    }
}
