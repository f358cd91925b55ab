#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ttp/bench/compare.hpp"
#include "ttp/bench/pipeline.hpp"
#include "ttp/bench/suite.hpp"

namespace fs = std::filesystem;
using namespace ttp;
using namespace ttp::bench;

namespace {

// Integers from a file, with brackets, commas and whitespace all treated as separators.
std::vector<long long> read_index_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw StageError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    for (auto& c : text) {
        if (c == '[' || c == ']' || c == ',' || c == ';') c = ' ';
    }
    std::vector<long long> out;
    std::size_t line = 1;
    for (auto tok : split_ws(text)) {
        const auto v = parse_int(tok);
        if (!v) throw ParseError(line, "bad index '" + std::string(tok) + "' in " + path);
        out.push_back(*v);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* what)
{
    std::vector<int> out;
    for (const auto& piece : split(text, ',')) {
        const auto t = trim(piece);
        if (t.empty()) continue;
        const auto dash = t.find('-');
        if (dash != std::string_view::npos && dash > 0) {
            const auto a = parse_int(t.substr(0, dash));
            const auto b = parse_int(t.substr(dash + 1));
            if (!a || !b || *a > *b) throw std::invalid_argument(std::string("bad range in ") + what);
            for (auto v = *a; v <= *b; ++v) out.push_back(static_cast<int>(v));
            continue;
        }
        const auto v = parse_int(t);
        if (!v) throw std::invalid_argument(std::string("bad value in ") + what);
        out.push_back(static_cast<int>(*v));
    }
    return out;
}

ParameterModel load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw StageError("cannot open model " + path);
    return ParameterModel::read(in);
}

int run_generate(const std::vector<std::string>& coords, const std::string& out, std::uint64_t seed,
                 const std::string& item_factors, const std::string& capacity_factors, const std::string& kp_types)
{
    SuiteSpec spec;
    spec.seed = seed;
    for (const auto& c : coords) spec.coordinate_sets.push_back(load_coordinate_source(c, seed));
    spec.item_factors = parse_int_list(item_factors, "--item-factors");
    spec.capacity_factors = parse_int_list(capacity_factors, "--capacity-factors");
    spec.kp_types.clear();
    for (const auto& piece : split(kp_types, ',')) {
        const auto t = trim(piece);
        if (t.empty()) continue;
        if (t == "all") {
            spec.kp_types.assign(std::begin(kAllKpTypes), std::end(kAllKpTypes));
            continue;
        }
        const auto kp = parse_kp_type(t);
        if (!kp) throw std::invalid_argument("unknown knapsack type '" + std::string(t) + "'");
        spec.kp_types.push_back(*kp);
    }
    const auto entries = generate_suite(spec, out);
    std::cout << "wrote " << entries.size() << " instances and " << (fs::path(out) / "manifest.csv").string() << '\n';
    return 0;
}

int run_pipeline(const std::string& stage, const std::string& instances, const std::string& out, std::uint64_t seed,
                 const Budget& budget)
{
    std::vector<std::string> stages;
    if (stage == "all") {
        stages = pipeline_stages();
    } else {
        stages = {stage};
    }
    std::vector<LoadedInstance> loaded;
    auto need_instances = [&] {
        if (!loaded.empty()) return;
        if (instances.empty()) throw std::invalid_argument("stage needs --instances");
        loaded = load_instances(instances);
    };
    for (const auto& s : stages) {
        const auto t0 = std::chrono::steady_clock::now();
        if (s == "ea-data") {
            need_instances();
            stage_ea_data(loaded, out, budget, seed);
        } else if (s == "nlbc") {
            stage_nlbc(out, budget, seed);
        } else if (s == "meta-data") {
            need_instances();
            stage_meta_data(loaded, out, budget, seed);
        } else {
            stage_fit_model(out, budget, seed);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::fprintf(stderr, "stage %s done in %.1f s\n", s.c_str(), secs);
    }
    return 0;
}

int run_compare(const std::string& instances, const std::string& model_path, const std::string& heuristics,
                std::size_t trials, const std::string& out, std::uint64_t seed, const Budget& budget)
{
    CompareConfig cfg;
    cfg.heuristics = parse_heuristic_list(heuristics);
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.generations = budget.heur_gens;
    std::optional<ParameterModel> model;
    if (!model_path.empty()) model = load_model(model_path);
    for (const auto& h : cfg.heuristics) {
        if (!is_baseline(h) && !model) throw std::invalid_argument("heuristic " + h + " needs --model");
    }
    const auto loaded = load_instances(instances);
    const auto records = run_comparison(loaded, cfg, model ? &*model : nullptr);
    fs::create_directories(out);
    const auto ranks = write_comparison(records, out);
    write_csv(std::cout, rank_summary_table(ranks));
    return 0;
}

int run_evaluate(const std::string& instance_path, const std::string& tour_path, const std::string& plan_path,
                 const std::string& heuristic, const std::string& model_path, std::uint64_t seed, const Budget& budget)
{
    std::ifstream in(instance_path, std::ios::binary);
    if (!in) throw StageError("cannot open instance " + instance_path);
    const auto inst = parse_ttp(in);
    Tour tour;
    if (tour_path.empty()) {
        tour = reference_tour(inst);
    } else {
        std::vector<int> order;
        for (auto v : read_index_file(tour_path)) order.push_back(static_cast<int>(v));
        tour = Tour(inst, rotate_to_city_one(std::move(order)));
    }
    if (!plan_path.empty() && !heuristic.empty()) throw std::invalid_argument("give --plan or --heuristic, not both");
    TrialRecord rec;
    rec.instance = inst.name;
    rec.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    if (!heuristic.empty()) {
        parse_heuristic_list(heuristic);
        std::optional<ParameterModel> model;
        if (!is_baseline(heuristic)) {
            if (model_path.empty()) throw std::invalid_argument("heuristic " + heuristic + " needs --model");
            model = load_model(model_path);
        }
        const auto r = run_named_heuristic(heuristic, inst, tour, model ? &*model : nullptr, budget.heur_gens, seed);
        rec.heuristic = heuristic;
        rec.objective = r.objective;
        rec.evals = r.evals;
    } else {
        PackingPlan plan(inst);
        if (!plan_path.empty()) {
            std::vector<std::uint8_t> bits(static_cast<std::size_t>(inst.m()), 0);
            for (auto v : read_index_file(plan_path)) {
                if (v < 1 || v > inst.m()) throw std::invalid_argument("item index " + std::to_string(v) + " out of range");
                bits[static_cast<std::size_t>(v - 1)] = 1;
            }
            plan = PackingPlan::from_bits(inst, std::move(bits));
        }
        EvalCounter counter;
        rec.heuristic = plan_path.empty() ? "empty" : "plan";
        rec.objective = evaluate(inst, tour, plan, counter);
        rec.evals = counter.count;
    }
    rec.wall_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
    write_csv(std::cout, trials_table({rec}));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Traveling Thief Problem packing heuristics and experiment harness"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    std::string out = "ttp-out";
    std::string budget_text;

    auto* gen = app.add_subcommand("generate", "Write a benchmark instance suite and its manifest");
    std::vector<std::string> coords;
    std::string item_factors = "1,5,10", capacity_factors = "1-10", kp_types = "all";
    gen->add_option("--coords", coords, "uniform:N[:SEED], clustered:N[:SEED] or a coordinate file (repeatable)")
        ->required();
    gen->add_option("--item-factors", item_factors, "Items per city, e.g. 1,5,10");
    gen->add_option("--capacity-factors", capacity_factors, "Capacity factors, e.g. 1-10");
    gen->add_option("--kp-types", kp_types, "all, or a list of knapsack types");

    auto* pipe = app.add_subcommand("pipeline", "Run analysis stages: ea-data, nlbc, meta-data, fit-model");
    std::string stage = "all", instances;
    pipe->add_option("--stage", stage, "Stage name or all")
        ->check(CLI::IsMember({"ea-data", "nlbc", "meta-data", "fit-model", "all"}));
    pipe->add_option("--instances", instances, "Instance manifest or its directory");

    auto* cmp = app.add_subcommand("compare", "Run heuristics on instances and rank them");
    std::string model_path, heuristics = "T6,packIterative,insertion";
    std::size_t trials = 30;
    cmp->add_option("--instances", instances, "Instance manifest or its directory")->required();
    cmp->add_option("--model", model_path, "Parameter model file");
    cmp->add_option("--heuristics", heuristics, "Comma-separated heuristic names");
    cmp->add_option("--trials", trials, "Trials per instance")->check(CLI::PositiveNumber);

    auto* ev = app.add_subcommand("evaluate", "Evaluate a plan or run one heuristic on one instance");
    std::string instance_path, tour_path, plan_path, heuristic;
    ev->add_option("--instance", instance_path, "Instance file")->required();
    ev->add_option("--tour", tour_path, "Tour file with 1-based city indices (default: reference tour)");
    ev->add_option("--plan", plan_path, "File with 1-based indices of packed items");
    ev->add_option("--heuristic", heuristic, "Heuristic to run instead of evaluating a plan");
    ev->add_option("--model", model_path, "Parameter model file");

    for (auto* sub : {gen, pipe, cmp, ev}) {
        sub->add_option("--seed", seed, "Random seed");
    }
    for (auto* sub : {gen, pipe, cmp}) {
        sub->add_option("--out", out, "Output directory");
    }
    for (auto* sub : {pipe, cmp, ev}) {
        sub->add_option("--budget", budget_text, "Scale factor and/or key=value budget overrides");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const Budget budget = parse_budget(budget_text);
        if (gen->parsed()) return run_generate(coords, out, seed, item_factors, capacity_factors, kp_types);
        if (pipe->parsed()) return run_pipeline(stage, instances, out, seed, budget);
        if (cmp->parsed()) return run_compare(instances, model_path, heuristics, trials, out, seed, budget);
        return run_evaluate(instance_path, tour_path, plan_path, heuristic, model_path, seed, budget);
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << '\n';
        return 2;
    } catch (const StageError& e) {
        std::cerr << "stage error: " << e.what() << '\n';
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
