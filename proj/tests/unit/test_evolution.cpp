#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"
#include "ttp/evolution.hpp"

using namespace ttp;

namespace {

ItemFeatureTable table_of(std::vector<double> x0, std::vector<double> x1)
{
    ItemFeatureTable t;
    t.ipr_raw = x0;
    t.rdist_raw = x1;
    t.ipr_std = std::move(x0);
    t.rdist_std = std::move(x1);
    return t;
}

bool within_fraction(double got, double best, double fraction)
{
    return got >= best - (1.0 - fraction) * std::abs(best) - 1e-9;
}

} // namespace

TEST(FeatureSets, NamesAndArity)
{
    EXPECT_EQ(feature_arity(FeatureSet::T3), 2u);
    EXPECT_EQ(feature_arity(FeatureSet::T4), 3u);
    EXPECT_EQ(feature_arity(FeatureSet::T5A), 4u);
    EXPECT_EQ(feature_arity(FeatureSet::T5B), 4u);
    EXPECT_EQ(feature_arity(FeatureSet::T6), 5u);
    for (auto fs : kAllFeatureSets) EXPECT_EQ(parse_feature_set(feature_set_name(fs)), fs);
    EXPECT_FALSE(parse_feature_set("T7").has_value());
    const auto b = feature_basis(FeatureSet::T6, 2.0, 3.0);
    EXPECT_EQ(b[0], 2.0);
    EXPECT_EQ(b[1], 3.0);
    EXPECT_EQ(b[2], 6.0);
    EXPECT_EQ(b[3], 4.0);
    EXPECT_EQ(b[4], 9.0);
    EXPECT_EQ(feature_basis(FeatureSet::T5B, 2.0, 3.0)[3], 9.0);
    EXPECT_EQ(feature_basis(FeatureSet::T5A, 2.0, 3.0)[3], 4.0);
}

TEST(ScoreItems, ZeroWeightsAndIdentity)
{
    const auto t = table_of({1.5, -0.5, 2.0}, {0.1, 0.2, -3.0});
    for (double s : score_items(t, Genotype::zero(FeatureSet::T6))) EXPECT_EQ(s, 0.0);
    const std::vector<double> w{1.0, 0.0};
    const auto s = score_items(t, FeatureSet::T3, w);
    EXPECT_EQ(s, t.ipr_std);
}

TEST(ScoreItems, T4Formula)
{
    const auto t = table_of({2.0}, {3.0});
    const std::vector<double> w{0.5, -1.0, 2.0};
    EXPECT_DOUBLE_EQ(score_items(t, FeatureSet::T4, w)[0], 0.5 * 2 - 3 + 2 * 6);
}

TEST(ScoreItems, ArityMismatch)
{
    const auto t = table_of({1.0}, {1.0});
    const std::vector<double> w{1.0, 2.0, 3.0};
    EXPECT_THROW(score_items(t, FeatureSet::T3, w), std::invalid_argument);
}

TEST(ScoreItems, PositiveScalingKeepsOrder)
{
    std::mt19937_64 rng(51);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> x0(40), x1(40);
    for (auto& v : x0) v = std::round(d(rng) * 4) / 4;
    for (auto& v : x1) v = std::round(d(rng) * 4) / 4;
    const auto t = table_of(x0, x1);
    for (int trial = 0; trial < 20; ++trial) {
        Genotype g{FeatureSet::T6, {d(rng), d(rng), d(rng), d(rng), d(rng)}, 0.5};
        const auto base = order_by_score(score_items(t, g));
        const auto unit = order_by_score(score_items(t, normalize_weights(g)));
        EXPECT_EQ(base, unit);
    }
    // exact ties fall back to ascending id
    const auto ties = order_by_score(std::vector<double>{1.0, 2.0, 1.0, 2.0});
    EXPECT_EQ(ties, (std::vector<int>{1, 3, 0, 2}));
}

TEST(NormalizeWeights, Cases)
{
    const auto g = normalize_weights(Genotype{FeatureSet::T3, {3.0, 4.0}, 0.3});
    EXPECT_DOUBLE_EQ(g.weights[0], 0.6);
    EXPECT_DOUBLE_EQ(g.weights[1], 0.8);
    EXPECT_EQ(g.percent, 0.3);
    const auto again = normalize_weights(g);
    EXPECT_DOUBLE_EQ(again.weights[0], 0.6);
    EXPECT_DOUBLE_EQ(again.weights[1], 0.8);
    EXPECT_THROW(normalize_weights(Genotype::zero(FeatureSet::T4)), DegenerateGenotypeError);
}

TEST(PackByPercent, Boundaries)
{
    std::mt19937_64 rng(52);
    auto inst = oracle::random_instance(rng, 5, 8);
    std::int64_t sw = 0;
    for (const auto& it : inst.items) sw += it.weight;
    std::vector<double> scores(8, 0.0);
    EXPECT_EQ(pack_by_percent(inst, scores, 0.0).packed_count(), 0u);
    inst.capacity = sw;
    EXPECT_EQ(pack_by_percent(inst, scores, 1.0).packed_count(), 8u);
}

TEST(PackByPercent, SkipAndContinue)
{
    TtpInstance inst;
    inst.coords = {{0, 0}, {1, 0}};
    inst.items = {Item{2, 5, 1, 0}, Item{2, 6, 1, 1}, Item{2, 3, 1, 2}};
    inst.capacity = 10;
    const std::vector<double> scores{3.0, 2.0, 1.0};
    const auto plan = pack_by_percent(inst, scores, 1.0);
    EXPECT_TRUE(plan.contains(0));
    EXPECT_FALSE(plan.contains(1));
    EXPECT_TRUE(plan.contains(2));
    EXPECT_EQ(plan.total_weight(), 8);
    // threshold 0.5 W = 5 admits only the first item
    EXPECT_EQ(pack_by_percent(inst, scores, 0.5).total_weight(), 5);
}

TEST(PackingEa, ZeroGenerations)
{
    std::mt19937_64 rng(53);
    const auto inst = oracle::random_instance(rng, 6, 8);
    const Tour t(inst, oracle::identity_tour(6));
    EvalCounter c;
    const auto r = packing_ea(inst, t, 0, 1, c);
    EXPECT_EQ(r.plan.packed_count(), 0u);
    EXPECT_EQ(c.count, 1u);
}

TEST(PackingEa, MonotoneAndDeterministic)
{
    std::mt19937_64 rng(54);
    const auto inst = oracle::random_instance(rng, 8, 12);
    const Tour t(inst, oracle::identity_tour(8));
    double prev = -1e300;
    for (std::uint64_t g : {0, 10, 100, 1000}) {
        EvalCounter c;
        const auto r = packing_ea(inst, t, g, 7, c);
        EXPECT_GE(r.objective, prev);
        EXPECT_LE(r.plan.total_weight(), inst.capacity);
        prev = r.objective;
    }
    EvalCounter c1, c2;
    EXPECT_EQ(packing_ea(inst, t, 500, 9, c1).plan, packing_ea(inst, t, 500, 9, c2).plan);
    EXPECT_EQ(c1.count, c2.count);
}

TEST(PackingEa, FindsExhaustiveOptimum)
{
    std::mt19937_64 rng(55);
    for (int inst_id = 0; inst_id < 3; ++inst_id) {
        const auto inst = oracle::random_instance(rng, 6, 10);
        const Tour t(inst, oracle::identity_tour(6));
        const double best = oracle::exhaustive_best_objective(inst, t.order());
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            EvalCounter c;
            if (packing_ea(inst, t, 20000, seed, c).objective >= best - 1e-9) ++hits;
        }
        EXPECT_GE(hits, 4);
    }
}

TEST(MetaEa, ZeroGenerations)
{
    std::mt19937_64 rng(56);
    const auto inst = oracle::random_instance(rng, 5, 4);
    const Tour t(inst, oracle::identity_tour(5));
    const auto f = compute_features(inst, t);
    EvalCounter c;
    const auto r = meta_ea(inst, t, f, FeatureSet::T4, 0, 3, c);
    EXPECT_TRUE(all_zero(r.genotype.weights));
    EXPECT_EQ(r.genotype.percent, 0.5);
    EvalCounter c2;
    EXPECT_DOUBLE_EQ(r.objective, evaluate(inst, t, pack_by_percent(inst, std::vector<double>(4, 0.0), 0.5), c2));
}

TEST(MetaEa, NearExhaustiveOnTinyInstances)
{
    std::mt19937_64 rng(57);
    for (int inst_id = 0; inst_id < 3; ++inst_id) {
        const auto inst = oracle::random_instance(rng, 5, 4);
        const Tour t(inst, oracle::identity_tour(5));
        const double best = oracle::exhaustive_best_objective(inst, t.order());
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            EvalCounter c;
            const auto r = meta_ea(inst, t, FeatureSet::T6, 4000, seed, c);
            EXPECT_EQ(c.count, 4001u);
            EXPECT_NEAR(std::inner_product(r.genotype.weights.begin(), r.genotype.weights.end(),
                                           r.genotype.weights.begin(), 0.0),
                        all_zero(r.genotype.weights) ? 0.0 : 1.0, 1e-12);
            if (within_fraction(r.objective, best, 0.95)) ++hits;
        }
        EXPECT_GE(hits, 8);
    }
}

TEST(MetaEa, MonotoneInGenerations)
{
    std::mt19937_64 rng(58);
    const auto inst = oracle::random_instance(rng, 10, 30);
    const Tour t(inst, oracle::identity_tour(10));
    double prev = -1e300;
    for (std::uint64_t g : {0, 5, 50, 500}) {
        EvalCounter c;
        const auto r = meta_ea(inst, t, FeatureSet::T3, g, 4, c);
        EXPECT_GE(r.objective, prev);
        EXPECT_GE(r.genotype.percent, 0.0);
        EXPECT_LE(r.genotype.percent, 1.0);
        prev = r.objective;
    }
}
