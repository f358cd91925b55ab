#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ttp/random.hpp"
#include "ttp/sr/expr.hpp"
#include "ttp/sr/fitness.hpp"
#include "ttp/sr/pareto.hpp"
#include "ttp/sr/polynomial.hpp"
#include "ttp/sr/selection.hpp"

namespace ttp::sr {

// Defaults follow gplearn's, with DALex replacing tournaments and a hard depth cap. A non-zero
// parsimony (per node, added to every case error) only steers selection; losses stay raw.
struct SrConfig {
    std::size_t population = 1000;
    std::size_t generations = 20;
    std::vector<Op> function_set = {Op::Add, Op::Sub, Op::Mul, Op::Div};
    std::size_t max_depth = 8;
    std::size_t init_depth_min = 2;
    std::size_t init_depth_max = 6;
    double sigma = 200.0;
    // Added to every case error of an individual per node, for selection only (gplearn default).
    double parsimony = 0.0;
    std::uint64_t seed = 0;
    double p_crossover = 0.9;
    double p_subtree_mutation = 0.01;
    double p_hoist_mutation = 0.01;
    double p_point_mutation = 0.01;
    double p_point_replace = 0.05;
    double const_min = -1.0;
    double const_max = 1.0;
    bool use_constants = true;
    // Stop once the best loss drops below this value.
    std::optional<double> stop_loss;
    // Offer best-of-generation individuals to a monomial-count pareto front (BCE runs).
    bool track_pareto = false;
    // Keep the best individual with node count strictly below each cap.
    std::vector<std::size_t> length_caps;
};

inline SrConfig nlbc_config(std::uint64_t seed)
{
    SrConfig c;
    c.generations = 300;
    c.function_set = {Op::Add, Op::Sub, Op::Mul};
    c.seed = seed;
    c.track_pareto = true;
    c.parsimony = 0.001;
    return c;
}

struct SrResult {
    ExprTree best;
    double best_loss = std::numeric_limits<double>::infinity();
    std::vector<ParetoEntry> front;
    std::vector<ExprTree> capped_best; // distinct, in cap order
    std::vector<double> loss_history;  // best loss per generation
    std::size_t generations_run = 0;
};

class GpEngine {
public:
    GpEngine(const SrConfig& cfg, std::size_t n_vars) : cfg_(cfg), n_vars_(n_vars), rng_(cfg.seed)
    {
        if (cfg_.function_set.empty()) {
            throw std::invalid_argument("function set must not be empty");
        }
        if (n_vars_ == 0 && !cfg_.use_constants) {
            throw std::invalid_argument("no terminals available");
        }
    }

    Rng& rng() { return rng_; }

    Node random_terminal()
    {
        const std::size_t choices = n_vars_ + (cfg_.use_constants ? 1 : 0);
        const auto pick = std::uniform_int_distribution<std::size_t>(0, choices - 1)(rng_);
        if (pick < n_vars_) {
            return Node::variable(static_cast<int>(pick));
        }
        return Node::constant(uniform_real(rng_, cfg_.const_min, cfg_.const_max));
    }

    Node random_function()
    {
        const auto k = std::uniform_int_distribution<std::size_t>(0, cfg_.function_set.size() - 1)(rng_);
        return Node::function(cfg_.function_set[k]);
    }

    // gplearn build_program: full or grow to the given depth.
    ExprTree random_tree(std::size_t max_depth, bool full)
    {
        std::vector<Node> nodes;
        std::vector<std::size_t> pending; // remaining children per open function
        const std::size_t nf = cfg_.function_set.size();
        const std::size_t nt = n_vars_ + (cfg_.use_constants ? 1 : 0);
        nodes.push_back(random_function());
        pending.push_back(2);
        while (!pending.empty()) {
            const std::size_t depth = pending.size();
            const auto choice = std::uniform_int_distribution<std::size_t>(0, nf + nt - 1)(rng_);
            if (depth < max_depth && (full || choice < nf)) {
                nodes.push_back(random_function());
                pending.push_back(2);
            } else {
                nodes.push_back(random_terminal());
                while (!pending.empty()) {
                    if (--pending.back() == 0) {
                        pending.pop_back();
                    } else {
                        break;
                    }
                }
            }
        }
        return ExprTree(std::move(nodes));
    }

    ExprTree ramped_tree()
    {
        const auto d = std::uniform_int_distribution<std::size_t>(cfg_.init_depth_min, cfg_.init_depth_max)(rng_);
        const bool full = std::uniform_int_distribution<int>(0, 1)(rng_) == 1;
        return random_tree(d, full);
    }

    // Koza node choice: functions with probability 0.9, terminals 0.1.
    std::pair<std::size_t, std::size_t> random_subtree(std::span<const Node> nodes)
    {
        std::vector<double> w(nodes.size());
        double total = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            w[i] = nodes[i].is_terminal() ? 0.1 : 0.9;
            total += w[i];
        }
        double r = uniform_real(rng_, 0.0, total);
        std::size_t start = 0;
        for (; start + 1 < nodes.size(); ++start) {
            r -= w[start];
            if (r < 0.0) break;
        }
        return {start, ExprTree::subtree_end(nodes, start)};
    }

    ExprTree crossover(const ExprTree& parent, const ExprTree& donor)
    {
        const auto& p = parent.nodes();
        const auto& d = donor.nodes();
        auto [s, e] = random_subtree(p);
        auto [ds, de] = random_subtree(d);
        std::vector<Node> out(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(s));
        out.insert(out.end(), d.begin() + static_cast<std::ptrdiff_t>(ds), d.begin() + static_cast<std::ptrdiff_t>(de));
        out.insert(out.end(), p.begin() + static_cast<std::ptrdiff_t>(e), p.end());
        return ExprTree(std::move(out));
    }

    ExprTree subtree_mutation(const ExprTree& parent)
    {
        const auto chicken = ramped_tree();
        return crossover(parent, chicken);
    }

    ExprTree hoist_mutation(const ExprTree& parent)
    {
        const auto& p = parent.nodes();
        auto [s, e] = random_subtree(p);
        std::span<const Node> sub(p.data() + s, e - s);
        auto [hs, he] = random_subtree(sub);
        std::vector<Node> out(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(s));
        out.insert(out.end(), sub.begin() + static_cast<std::ptrdiff_t>(hs), sub.begin() + static_cast<std::ptrdiff_t>(he));
        out.insert(out.end(), p.begin() + static_cast<std::ptrdiff_t>(e), p.end());
        return ExprTree(std::move(out));
    }

    ExprTree point_mutation(const ExprTree& parent)
    {
        auto nodes = parent.nodes();
        for (auto& n : nodes) {
            if (uniform_real(rng_, 0.0, 1.0) < cfg_.p_point_replace) {
                n = n.is_terminal() ? random_terminal() : random_function();
            }
        }
        return ExprTree(std::move(nodes));
    }

private:
    const SrConfig& cfg_;
    std::size_t n_vars_;
    Rng rng_;
};

namespace detail {

inline std::optional<ParetoEntry> pareto_candidate(const ExprTree& expr, double loss)
{
    if (!std::isfinite(loss)) {
        return std::nullopt;
    }
    try {
        auto terms = expand_to_monomials(expr);
        ParetoEntry e;
        e.expr = expr;
        e.loss = loss;
        e.term_count = terms.size();
        e.terms = std::move(terms);
        return e;
    } catch (const UnsupportedExpansionError&) {
        return std::nullopt;
    }
}

} // namespace detail

// Generational GP with DALex parent selection and one elite. Deterministic given cfg.seed.
inline SrResult evolve(const SrDataset& data, const SrConfig& cfg)
{
    data.validate();
    if (cfg.population == 0) {
        throw std::invalid_argument("population must be positive");
    }
    GpEngine engine(cfg, data.vars());
    const auto pop_size = cfg.population;
    const auto cases = data.rows();

    std::vector<ExprTree> pop;
    pop.reserve(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
        pop.push_back(engine.ramped_tree());
    }

    SrResult result;
    std::vector<std::optional<std::pair<ExprTree, double>>> capped(cfg.length_caps.size());
    BatchEvaluator evaluator;
    std::vector<double> raw;
    std::vector<double> errs(cases);
    std::vector<double> losses(pop_size);
    ErrorMatrix errors(pop_size, cases);
    constexpr std::size_t kBlock = 8;
    std::vector<double> block(kBlock * cases);

    const std::size_t total_gens = std::max<std::size_t>(cfg.generations, 1);
    for (std::size_t gen = 0; gen < total_gens; ++gen) {
        // Blocks of individuals so each case row is written a cache line at a time.
        for (std::size_t i0 = 0; i0 < pop_size; i0 += kBlock) {
            const std::size_t width = std::min(kBlock, pop_size - i0);
            for (std::size_t j = 0; j < width; ++j) {
                const auto i = i0 + j;
                evaluator.evaluate(pop[i], data.inputs, raw);
                losses[i] = case_errors(raw, data, errs);
                const double pen = cfg.parsimony * static_cast<double>(pop[i].node_count());
                double* dst = block.data() + j * cases;
                for (std::size_t c = 0; c < cases; ++c) dst[c] = errs[c] + pen;
            }
            for (std::size_t c = 0; c < cases; ++c) {
                for (std::size_t j = 0; j < width; ++j) errors.at(i0 + j, c) = block[j * cases + c];
            }
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < pop_size; ++i) {
            if (losses[i] < losses[best]) best = i;
        }
        if (losses[best] < result.best_loss) {
            result.best_loss = losses[best];
            result.best = pop[best];
        }
        result.loss_history.push_back(losses[best]);
        for (std::size_t k = 0; k < cfg.length_caps.size(); ++k) {
            for (std::size_t i = 0; i < pop_size; ++i) {
                if (pop[i].node_count() < cfg.length_caps[k] &&
                    (!capped[k] || losses[i] < capped[k]->second)) {
                    capped[k] = std::make_pair(pop[i], losses[i]);
                }
            }
        }
        if (cfg.track_pareto) {
            if (auto cand = detail::pareto_candidate(pop[best], losses[best])) {
                result.front = pareto_update(std::move(result.front), std::move(*cand));
            }
        }
        result.generations_run = gen + 1;
        if (gen + 1 == total_gens || (cfg.stop_loss && losses[best] < *cfg.stop_loss)) {
            break;
        }

        std::vector<ExprTree> next;
        next.reserve(pop_size);
        next.push_back(pop[best]);
        const double c1 = cfg.p_crossover;
        const double c2 = c1 + cfg.p_subtree_mutation;
        const double c3 = c2 + cfg.p_hoist_mutation;
        const double c4 = c3 + cfg.p_point_mutation;
        while (next.size() < pop_size) {
            const auto& parent = pop[dalex_select(errors, cfg.sigma, engine.rng())];
            const double r = uniform_real(engine.rng(), 0.0, 1.0);
            ExprTree child;
            if (r < c1) {
                const auto& donor = pop[dalex_select(errors, cfg.sigma, engine.rng())];
                child = engine.crossover(parent, donor);
            } else if (r < c2) {
                child = engine.subtree_mutation(parent);
            } else if (r < c3) {
                child = engine.hoist_mutation(parent);
            } else if (r < c4) {
                child = engine.point_mutation(parent);
            } else {
                child = parent;
            }
            if (child.depth() > cfg.max_depth) {
                child = parent;
            }
            next.push_back(std::move(child));
        }
        pop = std::move(next);
    }
    for (auto& c : capped) {
        if (c && std::find(result.capped_best.begin(), result.capped_best.end(), c->first) == result.capped_best.end()) {
            result.capped_best.push_back(c->first);
        }
    }
    return result;
}

// Fraction of solutions whose tree references each input variable.
inline std::vector<double> variable_frequency(std::span<const ExprTree> solutions, std::size_t n_vars)
{
    std::vector<double> freq(n_vars, 0.0);
    if (solutions.empty()) {
        return freq;
    }
    for (const auto& s : solutions) {
        for (std::size_t v = 0; v < n_vars; ++v) {
            if (s.uses_variable(static_cast<int>(v))) {
                freq[v] += 1.0;
            }
        }
    }
    for (auto& f : freq) {
        f /= static_cast<double>(solutions.size());
    }
    return freq;
}

// Groups the term sets from a collection of fronts and counts identical sets per size.
struct TermSetCount {
    std::size_t size = 0;
    TermSet terms;
    std::size_t count = 0;
};

inline std::vector<TermSetCount> term_set_table(std::span<const std::vector<ParetoEntry>> fronts)
{
    std::map<TermSet, std::size_t> counts;
    for (const auto& f : fronts) {
        for (const auto& e : f) {
            ++counts[e.terms];
        }
    }
    std::vector<TermSetCount> out;
    for (const auto& [t, c] : counts) {
        out.push_back({t.size(), t, c});
    }
    std::sort(out.begin(), out.end(), [](const TermSetCount& a, const TermSetCount& b) {
        if (a.size != b.size) return a.size < b.size;
        if (a.count != b.count) return a.count > b.count;
        return a.terms < b.terms;
    });
    return out;
}

} // namespace ttp::sr
