#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ttp/bench/csv.hpp"
#include "ttp/bench/parallel.hpp"
#include "ttp/bench/suite.hpp"
#include "ttp/bench/svg.hpp"
#include "ttp/error.hpp"
#include "ttp/evolution.hpp"
#include "ttp/features.hpp"
#include "ttp/parameter_model.hpp"
#include "ttp/random.hpp"
#include "ttp/sr/evolve.hpp"
#include "ttp/tour.hpp"

namespace ttp::bench {

struct Budget {
    std::uint64_t ea_gens = 10000;
    std::uint64_t meta_gens = 1000;
    std::size_t meta_runs = 4;
    std::size_t sr_gens = 300;
    std::size_t sr_runs = 5;  // nlbc
    std::size_t fit_runs = 10; // fit-model, per cell
    std::size_t sr_pop = 1000;
    std::size_t sr_rows = 2000;
    std::uint64_t heur_gens = 50;
};

// Comma-separated tokens. A bare number scales every generation count; key=value sets one field.
inline Budget parse_budget(std::string_view text)
{
    Budget b;
    for (const auto& piece : split(text, ',')) {
        const auto tok = trim(piece);
        if (tok.empty()) continue;
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos) {
            const auto f = parse_double(tok);
            if (!f || *f < 0.0) throw std::invalid_argument("bad budget scale '" + std::string(tok) + "'");
            auto scale = [&](auto& v) { v = static_cast<std::decay_t<decltype(v)>>(std::llround(static_cast<double>(v) * *f)); };
            scale(b.ea_gens);
            scale(b.meta_gens);
            scale(b.sr_gens);
            scale(b.heur_gens);
            continue;
        }
        const auto key = trim(tok.substr(0, eq));
        const auto val = parse_int(tok.substr(eq + 1));
        if (!val || *val < 0) throw std::invalid_argument("bad budget value in '" + std::string(tok) + "'");
        const auto v = static_cast<std::uint64_t>(*val);
        if (key == "ea_gens") b.ea_gens = v;
        else if (key == "meta_gens") b.meta_gens = v;
        else if (key == "meta_runs") b.meta_runs = v;
        else if (key == "sr_gens") b.sr_gens = v;
        else if (key == "sr_runs") b.sr_runs = v;
        else if (key == "fit_runs") b.fit_runs = v;
        else if (key == "sr_pop") b.sr_pop = v;
        else if (key == "sr_rows") b.sr_rows = v;
        else if (key == "heur_gens") b.heur_gens = v;
        else throw std::invalid_argument("unknown budget key '" + std::string(key) + "'");
    }
    if (b.meta_runs == 0 || b.sr_runs == 0 || b.fit_runs == 0 || b.sr_pop == 0) {
        throw std::invalid_argument("meta_runs, sr_runs, fit_runs and sr_pop must be positive");
    }
    return b;
}

inline void require_file(const fs::path& p, std::string_view stage)
{
    if (!fs::exists(p)) {
        throw StageError("stage " + std::string(stage) + " needs " + p.string() + " (run the earlier stage first)");
    }
}

inline void write_text_file(const fs::path& p, const std::string& text)
{
    std::error_code ec;
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    std::ofstream os(p, std::ios::binary);
    os << text;
    if (!os) throw StageError("cannot write " + p.string());
}

// ---- ea-data -------------------------------------------------------------------------------

inline void stage_ea_data(const std::vector<LoadedInstance>& instances, const fs::path& out, const Budget& budget,
                          std::uint64_t seed)
{
    const auto dir = out / "ea-data";
    fs::create_directories(dir / "plots");
    std::vector<std::vector<std::string>> rows(instances.size());
    parallel_for(instances.size(), [&](std::size_t i) {
        const auto& li = instances[i];
        const auto& inst = li.instance;
        const auto tour = reference_tour(inst);
        EvalCounter counter;
        const auto res = packing_ea(inst, tour, budget.ea_gens, derive_seed(seed, {hash_text(inst.name), 1}), counter);
        const auto f = compute_features(inst, tour);
        std::ostringstream os;
        write_feature_csv(os, f, res.plan);
        write_text_file(dir / (inst.name + ".csv"), os.str());

        const auto keep = analysis_mask(f);
        XYSeries packed{"packed", {}, {}, false};
        XYSeries unpacked{"not packed", {}, {}, false};
        for (std::size_t k = 0; k < f.size(); ++k) {
            if (!keep[k]) continue;
            auto& s = res.plan.contains(static_cast<int>(k)) ? packed : unpacked;
            s.x.push_back(f.ipr_std[k]);
            s.y.push_back(f.rdist_std[k]);
        }
        write_text_file(dir / "plots" / (inst.name + ".svg"),
                        scatter_chart_svg(inst.name, {unpacked, packed}, "standardized IPR", "standardized rDist"));

        const double frac = inst.capacity > 0 ? static_cast<double>(res.plan.total_weight()) /
                                                    static_cast<double>(inst.capacity)
                                              : 0.0;
        rows[i] = {inst.name,
                   std::string(kp_tag(li.entry.kp)),
                   std::to_string(li.entry.item_factor),
                   std::to_string(li.entry.capacity_factor),
                   std::to_string(inst.m()),
                   format_double(res.objective),
                   std::to_string(res.plan.packed_count()),
                   format_double(frac),
                   std::to_string(counter.count)};
    });
    CsvTable summary;
    summary.header = {"instance", "kp_type", "F", "C", "m", "objective", "packed", "weight_fraction", "evals"};
    summary.rows = std::move(rows);
    write_csv_file(dir / "summary.csv", summary);
}

// ---- nlbc ----------------------------------------------------------------------------------

struct NlbcRun {
    KpType kp;
    std::size_t run;
    sr::SrResult result;
};

inline sr::SrDataset nlbc_dataset(const fs::path& ea_dir, const CsvTable& summary, KpType kp, std::size_t max_rows,
                                  std::uint64_t seed)
{
    const auto ci = summary.require("instance");
    const auto ck = summary.require("kp_type");
    std::vector<std::vector<double>> inputs;
    std::vector<double> labels;
    for (const auto& r : summary.rows) {
        if (parse_kp_type(r[ck]) != kp) continue;
        const auto file = ea_dir / (r[ci] + ".csv");
        require_file(file, "nlbc");
        const auto t = read_csv_file(file);
        const auto cx = t.require("ipr_std"), cy = t.require("rdist_std"), cp = t.require("packed");
        for (const auto& row : t.rows) {
            const double x = csv_double(row[cx], "ipr_std");
            const double y = csv_double(row[cy], "rdist_std");
            if (std::abs(x) > 2.0 || std::abs(y) > 2.0) continue;
            inputs.push_back({x, y});
            labels.push_back(static_cast<double>(csv_int(row[cp], "packed")));
        }
    }
    if (max_rows > 0 && inputs.size() > max_rows) {
        std::vector<std::size_t> idx(inputs.size());
        std::iota(idx.begin(), idx.end(), 0);
        Rng rng(seed);
        for (std::size_t i = 0; i < max_rows; ++i) {
            std::swap(idx[i], idx[i + std::uniform_int_distribution<std::size_t>(0, idx.size() - i - 1)(rng)]);
        }
        idx.resize(max_rows);
        std::sort(idx.begin(), idx.end());
        std::vector<std::vector<double>> in2;
        std::vector<double> lab2;
        for (auto i : idx) {
            in2.push_back(inputs[i]);
            lab2.push_back(labels[i]);
        }
        inputs = std::move(in2);
        labels = std::move(lab2);
    }
    auto d = sr::SrDataset::from_rows(inputs, std::move(labels), sr::Task::BinaryBCE);
    d.names = {"ipr_std", "rdist_std"};
    return d;
}

inline CsvTable pareto_table(const std::vector<sr::ParetoEntry>& front)
{
    CsvTable t;
    t.header = {"loss", "term_count", "term_set", "expr"};
    for (const auto& e : front) {
        t.rows.push_back({format_double(e.loss), std::to_string(e.term_count), sr::term_set_string(e.terms),
                          sr::to_infix(e.expr)});
    }
    return t;
}

inline void stage_nlbc(const fs::path& out, const Budget& budget, std::uint64_t seed)
{
    const auto ea_dir = out / "ea-data";
    require_file(ea_dir / "summary.csv", "nlbc");
    const auto summary = read_csv_file(ea_dir / "summary.csv");
    const auto ck = summary.require("kp_type");
    std::vector<KpType> kps;
    for (KpType kp : kAllKpTypes) {
        for (const auto& r : summary.rows) {
            if (parse_kp_type(r[ck]) == kp) {
                kps.push_back(kp);
                break;
            }
        }
    }
    std::map<KpType, sr::SrDataset> data;
    for (KpType kp : kps) {
        data[kp] = nlbc_dataset(ea_dir, summary, kp, budget.sr_rows,
                                derive_seed(seed, {static_cast<std::uint64_t>(kp), 30}));
    }
    std::vector<NlbcRun> runs;
    for (KpType kp : kps) {
        for (std::size_t r = 0; r < budget.sr_runs; ++r) runs.push_back({kp, r, {}});
    }
    parallel_for(runs.size(), [&](std::size_t i) {
        auto cfg = sr::nlbc_config(derive_seed(seed, {static_cast<std::uint64_t>(runs[i].kp), runs[i].run, 3}));
        cfg.generations = budget.sr_gens;
        cfg.population = budget.sr_pop;
        runs[i].result = sr::evolve(data.at(runs[i].kp), cfg);
    });

    const auto dir = out / "nlbc";
    CsvTable table;
    table.header = {"kp_type", "size", "term_set", "count"};
    std::vector<std::vector<sr::ParetoEntry>> all;
    auto append = [&](const std::string& label, const std::vector<std::vector<sr::ParetoEntry>>& fronts) {
        for (const auto& c : sr::term_set_table(fronts)) {
            table.rows.push_back({label, std::to_string(c.size), sr::term_set_string(c.terms), std::to_string(c.count)});
        }
    };
    for (KpType kp : kps) {
        std::vector<std::vector<sr::ParetoEntry>> fronts;
        for (const auto& r : runs) {
            if (r.kp != kp) continue;
            write_csv_file(dir / (std::string(kp_tag(kp)) + "_run" + std::to_string(r.run) + "_pareto.csv"),
                           pareto_table(r.result.front));
            fronts.push_back(r.result.front);
            all.push_back(r.result.front);
        }
        append(std::string(kp_tag(kp)), fronts);
    }
    append("all", all);
    write_csv_file(dir / "term_sets.csv", table);
}

// ---- meta-data -----------------------------------------------------------------------------

inline constexpr std::size_t kMaxWeights = 5;

inline std::vector<std::string> genotype_columns()
{
    std::vector<std::string> h = {"instance", "kp_type", "C", "F", "feature_set"};
    for (std::size_t k = 0; k < kMaxWeights; ++k) h.push_back("w" + std::to_string(k));
    h.push_back("p");
    h.push_back("objective");
    return h;
}

// Instance-level regressors in their fixed x0..x7 order.
inline const std::vector<std::string>& instance_variable_names()
{
    static const std::vector<std::string> v = {"n", "m", "R", "W", "F", "vmax", "vmin", "C"};
    return v;
}

inline std::vector<double> instance_variables(const LoadedInstance& li)
{
    const auto& inst = li.instance;
    return {static_cast<double>(inst.n()),           static_cast<double>(inst.m()),
            inst.renting_ratio,                      static_cast<double>(inst.capacity),
            static_cast<double>(li.entry.item_factor), inst.v_max,
            inst.v_min,                              static_cast<double>(li.entry.capacity_factor)};
}

inline void stage_meta_data(const std::vector<LoadedInstance>& instances, const fs::path& out, const Budget& budget,
                            std::uint64_t seed)
{
    const std::size_t nfs = std::size(kAllFeatureSets);
    std::vector<std::vector<std::string>> rows(instances.size() * nfs);
    std::vector<Tour> tours;
    std::vector<ItemFeatureTable> feats;
    for (const auto& li : instances) {
        tours.push_back(reference_tour(li.instance));
        feats.push_back(compute_features(li.instance, tours.back()));
    }
    parallel_for(rows.size(), [&](std::size_t t) {
        const auto& li = instances[t / nfs];
        const FeatureSet fs = kAllFeatureSets[t % nfs];
        std::optional<MetaResult> best;
        for (std::size_t r = 0; r < budget.meta_runs; ++r) {
            EvalCounter counter;
            auto res = meta_ea(li.instance, tours[t / nfs], feats[t / nfs], fs, budget.meta_gens,
                               derive_seed(seed, {hash_text(li.instance.name), static_cast<std::uint64_t>(fs), r, 2}),
                               counter);
            if (!best || res.objective > best->objective) best = std::move(res);
        }
        std::vector<std::string> row = {li.instance.name, std::string(kp_tag(li.entry.kp)),
                                        std::to_string(li.entry.capacity_factor), std::to_string(li.entry.item_factor),
                                        std::string(feature_set_name(fs))};
        for (std::size_t k = 0; k < kMaxWeights; ++k) {
            row.push_back(k < best->genotype.weights.size() ? format_double(best->genotype.weights[k]) : "");
        }
        row.push_back(format_double(best->genotype.percent));
        row.push_back(format_double(best->objective));
        rows[t] = std::move(row);
    });
    CsvTable g;
    g.header = genotype_columns();
    g.rows = std::move(rows);
    write_csv_file(out / "meta-data" / "genotypes.csv", g);

    CsvTable f;
    f.header = {"instance", "kp_type"};
    for (const auto& n : instance_variable_names()) f.header.push_back(n);
    for (const auto& li : instances) {
        std::vector<std::string> row = {li.instance.name, std::string(kp_tag(li.entry.kp))};
        for (double v : instance_variables(li)) row.push_back(format_double(v));
        f.rows.push_back(std::move(row));
    }
    write_csv_file(out / "meta-data" / "instance_features.csv", f);
}

// ---- fit-model -----------------------------------------------------------------------------

inline constexpr std::size_t kCapacityVar = 7;
inline const std::vector<std::size_t> kFitLengthCaps = {20, 30, 40};

struct FitCell {
    FeatureSet fs;
    KpType kp;
    std::size_t param;
    std::vector<std::vector<double>> x; // full x0..x7 per row
    std::vector<double> y;
    // outputs
    std::vector<std::optional<double>> frequency; // empty when the variable was omitted
    std::size_t solutions = 0;
    Curve curve;
    std::string kind_note;
    double train_mae = 0.0;
};

inline LinearCurve least_squares_line(const std::vector<double>& c, const std::vector<double>& y)
{
    const double n = static_cast<double>(c.size());
    const double mc = std::accumulate(c.begin(), c.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        sxy += (c[i] - mc) * (y[i] - my);
        sxx += (c[i] - mc) * (c[i] - mc);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    return {my - slope * mc, slope};
}

// Median target at each integer C; missing levels are filled from the nearest present one.
inline PiecewiseLinearCurve median_curve(const std::vector<double>& c, const std::vector<double>& y)
{
    std::array<std::vector<double>, 10> groups;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto k = static_cast<std::size_t>(std::clamp(std::lround(c[i]), 1L, 10L) - 1);
        groups[k].push_back(y[i]);
    }
    PiecewiseLinearCurve p;
    std::array<bool, 10> have{};
    for (std::size_t k = 0; k < 10; ++k) {
        if (!groups[k].empty()) {
            p.values[k] = median(groups[k]);
            have[k] = true;
        }
    }
    for (std::size_t k = 0; k < 10; ++k) {
        if (have[k]) continue;
        for (std::size_t d = 1; d < 10; ++d) {
            if (k >= d && have[k - d]) {
                p.values[k] = p.values[k - d];
                break;
            }
            if (k + d < 10 && have[k + d]) {
                p.values[k] = p.values[k + d];
                break;
            }
        }
    }
    return p;
}

inline sr::SrConfig fit_config(const Budget& budget, std::uint64_t seed)
{
    sr::SrConfig cfg;
    cfg.generations = budget.sr_gens;
    cfg.population = budget.sr_pop;
    cfg.seed = seed;
    cfg.length_caps = kFitLengthCaps;
    return cfg;
}

inline sr::ExprTree remap_variables(const sr::ExprTree& e, const std::vector<std::size_t>& to_full)
{
    auto nodes = e.nodes();
    for (auto& n : nodes) {
        if (n.op == sr::Op::Var) n.var = static_cast<int>(to_full[static_cast<std::size_t>(n.var)]);
    }
    return sr::ExprTree(std::move(nodes));
}

inline void fit_cell(FitCell& cell, const Budget& budget, std::uint64_t seed)
{
    const std::size_t nvars = instance_variable_names().size();
    // Columns constant over the cell's rows carry no information and are left out.
    std::vector<std::size_t> used;
    for (std::size_t v = 0; v < nvars; ++v) {
        bool constant = true;
        for (const auto& r : cell.x) constant = constant && r[v] == cell.x.front()[v];
        if (!constant) used.push_back(v);
    }
    cell.frequency.assign(nvars, std::nullopt);
    const auto cell_seed = derive_seed(seed, {static_cast<std::uint64_t>(cell.fs), static_cast<std::uint64_t>(cell.kp),
                                              cell.param, 4});
    if (!used.empty()) {
        std::vector<std::vector<double>> rows;
        for (const auto& r : cell.x) {
            std::vector<double> row;
            for (auto v : used) row.push_back(r[v]);
            rows.push_back(std::move(row));
        }
        const auto data = sr::SrDataset::from_rows(rows, cell.y, sr::Task::RegressionMAE);
        std::vector<sr::ExprTree> solutions;
        for (std::size_t run = 0; run < budget.fit_runs; ++run) {
            auto res = sr::evolve(data, fit_config(budget, derive_seed(cell_seed, {run})));
            for (auto& s : res.capped_best) solutions.push_back(std::move(s));
        }
        cell.solutions = solutions.size();
        const auto freq = sr::variable_frequency(solutions, used.size());
        for (std::size_t i = 0; i < used.size(); ++i) cell.frequency[used[i]] = freq[i];
    }

    std::vector<double> c;
    for (const auto& r : cell.x) c.push_back(r[kCapacityVar]);
    std::vector<std::vector<double>> crow;
    for (double v : c) crow.push_back({v});
    const auto cdata = sr::SrDataset::from_rows(crow, cell.y, sr::Task::RegressionMAE);
    auto cfg = fit_config(budget, derive_seed(cell_seed, {1000}));
    cfg.length_caps = {kFitLengthCaps.front()};
    const auto res = sr::evolve(cdata, cfg);
    const sr::ExprTree expr = res.capped_best.empty() ? res.best : res.capped_best.front();

    std::vector<double> resid;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double row[1] = {c[i]};
        resid.push_back(std::abs(sr::eval_expr(expr, row) - cell.y[i]));
    }
    const auto med = median_curve(c, cell.y);
    bool finite = true;
    double dev = 0.0;
    int points = 0;
    for (int k = 0; k <= 90; ++k) {
        const double x = 1.0 + 0.1 * k;
        const double row[1] = {x};
        const double v = sr::eval_expr(expr, row);
        finite = finite && std::isfinite(v);
        dev += std::abs(v - evaluate_curve(med, x));
        ++points;
    }
    dev /= points;
    const double med_resid = median(resid);
    if (!finite) {
        cell.curve = med;
        cell.kind_note = "non-finite expression; median fallback";
    } else if (dev > 3.0 * med_resid + 1e-12) {
        cell.curve = least_squares_line(c, cell.y);
        cell.kind_note = "expression departs from per-C medians; line fit";
    } else {
        cell.curve = ExprCurve{expr};
        cell.kind_note = "";
    }
    double mae = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) mae += std::abs(evaluate_curve(cell.curve, c[i]) - cell.y[i]);
    cell.train_mae = c.empty() ? 0.0 : mae / static_cast<double>(c.size());
}

inline std::string curve_text(const Curve& curve)
{
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, LinearCurve>) {
                return format_double(k.intercept) + " + " + format_double(k.slope) + "*C";
            } else if constexpr (std::is_same_v<T, PiecewiseLinearCurve>) {
                std::string s = "pwl";
                for (double v : k.values) s += " " + format_double(v);
                return s;
            } else {
                auto text = sr::to_infix(k.expr);
                std::string out;
                for (std::size_t i = 0; i < text.size(); ++i) {
                    if (text[i] == 'x' && i + 1 < text.size() && text[i + 1] == '0') {
                        out += 'C';
                        ++i;
                    } else {
                        out += text[i];
                    }
                }
                return out;
            }
        },
        curve);
}

inline fs::path model_path(const fs::path& out) { return out / "models" / "parameter_model.txt"; }

inline std::vector<FitCell> stage_fit_model(const fs::path& out, const Budget& budget, std::uint64_t seed)
{
    const auto gpath = out / "meta-data" / "genotypes.csv";
    const auto fpath = out / "meta-data" / "instance_features.csv";
    require_file(gpath, "fit-model");
    require_file(fpath, "fit-model");
    const auto g = read_csv_file(gpath);
    const auto f = read_csv_file(fpath);
    std::map<std::string, std::vector<double>> vars;
    {
        const auto ci = f.require("instance");
        std::vector<std::size_t> cols;
        for (const auto& n : instance_variable_names()) cols.push_back(f.require(n));
        for (const auto& r : f.rows) {
            std::vector<double> v;
            for (auto c : cols) v.push_back(csv_double(r[c], "instance feature"));
            vars[r[ci]] = std::move(v);
        }
    }
    std::vector<FitCell> cells;
    std::map<std::tuple<FeatureSet, KpType, std::size_t>, std::size_t> index;
    const auto gi = g.require("instance"), gk = g.require("kp_type"), gf = g.require("feature_set"), gp = g.require("p");
    std::vector<std::size_t> gw;
    for (std::size_t k = 0; k < kMaxWeights; ++k) gw.push_back(g.require("w" + std::to_string(k)));
    for (const auto& r : g.rows) {
        const auto fs = parse_feature_set(r[gf]);
        const auto kp = parse_kp_type(r[gk]);
        if (!fs || !kp) throw ParseError(0, "bad feature_set or kp_type in " + gpath.string());
        auto it = vars.find(r[gi]);
        if (it == vars.end()) throw StageError("instance " + r[gi] + " missing from " + fpath.string());
        for (std::size_t p = 0; p <= feature_arity(*fs); ++p) {
            const double y = csv_double(p < feature_arity(*fs) ? r[gw[p]] : r[gp], "genotype value");
            const auto key = std::make_tuple(*fs, *kp, p);
            auto [pos, fresh] = index.try_emplace(key, cells.size());
            if (fresh) cells.push_back(FitCell{*fs, *kp, p, {}, {}, {}, 0, LinearCurve{}, {}, 0.0});
            cells[pos->second].x.push_back(it->second);
            cells[pos->second].y.push_back(y);
        }
    }
    std::sort(cells.begin(), cells.end(), [](const FitCell& a, const FitCell& b) {
        return std::tie(a.fs, a.kp, a.param) < std::tie(b.fs, b.kp, b.param);
    });
    parallel_for(cells.size(), [&](std::size_t i) { fit_cell(cells[i], budget, seed); });

    ParameterModel model;
    for (const auto& c : cells) model.set(c.fs, c.kp, c.param, c.curve);
    std::ostringstream ms;
    model.write(ms);
    write_text_file(model_path(out), ms.str());

    const auto dir = out / "fit-model";
    CsvTable freq;
    freq.header = {"feature_set", "kp_type", "param", "solutions"};
    for (std::size_t v = 0; v < instance_variable_names().size(); ++v) freq.header.push_back("x" + std::to_string(v));
    CsvTable fits;
    fits.header = {"feature_set", "kp_type", "param", "rows", "kind", "train_mae", "curve", "note"};
    CsvTable curves;
    curves.header = {"feature_set", "kp_type", "param", "C", "value"};
    for (const auto& c : cells) {
        const std::string fsn(feature_set_name(c.fs)), kpn(kp_tag(c.kp)), pn = param_name(c.fs, c.param);
        std::vector<std::string> row = {fsn, kpn, pn, std::to_string(c.solutions)};
        for (const auto& v : c.frequency) row.push_back(v ? format_double(*v) : "");
        freq.rows.push_back(std::move(row));
        fits.rows.push_back({fsn, kpn, pn, std::to_string(c.y.size()), std::string(curve_kind(c.curve)),
                             format_double(c.train_mae), curve_text(c.curve), c.kind_note});
    }
    // Effective model output: normalised weights and clamped percent, as the heuristics see them.
    std::map<std::pair<FeatureSet, KpType>, std::vector<std::pair<double, Genotype>>> predicted;
    for (const auto& c : cells) {
        auto& v = predicted[{c.fs, c.kp}];
        if (!v.empty() || !model.covers(c.fs, c.kp)) continue;
        for (int k = 0; k <= 18; ++k) {
            const double C = 1.0 + 0.5 * k;
            v.push_back({C, predict_genotype(model, c.fs, c.kp, C)});
        }
    }
    for (const auto& c : cells) {
        const auto it = predicted.find({c.fs, c.kp});
        if (it == predicted.end() || it->second.empty()) continue;
        XYSeries data{"meta EA optimum", {}, {}, false};
        for (std::size_t i = 0; i < c.y.size(); ++i) {
            data.x.push_back(c.x[i][kCapacityVar]);
            data.y.push_back(c.y[i]);
        }
        XYSeries line{"model", {}, {}, true};
        for (const auto& [C, gen] : it->second) {
            const double v = c.param < gen.weights.size() ? gen.weights[c.param] : gen.percent;
            curves.rows.push_back({std::string(feature_set_name(c.fs)), std::string(kp_tag(c.kp)),
                                   param_name(c.fs, c.param), format_double(C), format_double(v)});
            line.x.push_back(C);
            line.y.push_back(v);
        }
        const auto stem = std::string(feature_set_name(c.fs)) + "_" + std::string(kp_tag(c.kp)) + "_" +
                          param_name(c.fs, c.param);
        write_text_file(dir / "plots" / (stem + ".svg"),
                        scatter_chart_svg(stem, {data, line}, "capacity factor C", param_name(c.fs, c.param)));
    }
    write_csv_file(dir / "variable_frequency.csv", freq);
    write_csv_file(dir / "fits.csv", fits);
    write_csv_file(dir / "param_curves.csv", curves);
    return cells;
}

inline const std::vector<std::string>& pipeline_stages()
{
    static const std::vector<std::string> s = {"ea-data", "nlbc", "meta-data", "fit-model"};
    return s;
}

} // namespace ttp::bench
