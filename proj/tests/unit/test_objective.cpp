#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"
#include "ttp/objective.hpp"

using namespace ttp;

namespace {

double rel_err(double a, double b)
{
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

std::vector<int> random_tour(std::mt19937_64& rng, int n)
{
    auto t = oracle::identity_tour(n);
    std::shuffle(t.begin() + 1, t.end(), rng);
    return t;
}

// Three cities on a line, one item of weight 5 at city 2, W = 10, R = 2.
TtpInstance three_city()
{
    TtpInstance inst;
    inst.coords = {{0, 0}, {3, 0}, {3, 4}};
    inst.items = {Item{2, 5, 20, 0}};
    inst.capacity = 10;
    inst.renting_ratio = 2.0;
    return inst;
}

} // namespace

TEST(Evaluate, EmptyPlan)
{
    const auto inst = three_city();
    const Tour t(inst, {1, 2, 3});
    EvalCounter c;
    EXPECT_DOUBLE_EQ(evaluate(inst, t, PackingPlan(inst), c), -2.0 * 12.0 / 1.0);
    EXPECT_DOUBLE_EQ(tour_time(inst, t, PackingPlan(inst)), 12.0);
}

TEST(Evaluate, ThreeCityHandComputation)
{
    const auto inst = three_city();
    const Tour t(inst, {1, 2, 3});
    PackingPlan plan(inst);
    ASSERT_TRUE(plan.pack(inst, 0));
    // legs 3 (empty), 4 and 5 carrying 5: speed 1 - 0.09*5 = 0.55
    const double expected = 20.0 - 2.0 * (3.0 + 4.0 / 0.55 + 5.0 / 0.55);
    EvalCounter c;
    EXPECT_NEAR(evaluate(inst, t, plan, c), expected, 1e-12);
    EXPECT_NEAR(evaluate(inst, t, plan, c), oracle::naive_objective(inst, t.order(), plan.bits()), 1e-12);
}

TEST(Evaluate, FullCapacityUsesMinSpeed)
{
    TtpInstance inst;
    inst.coords = {{0, 0}, {0, 7}};
    inst.items = {Item{2, 10, 50, 0}};
    inst.capacity = 10;
    inst.renting_ratio = 1.0;
    const Tour t(inst, {1, 2});
    PackingPlan plan(inst);
    ASSERT_TRUE(plan.pack(inst, 0));
    EXPECT_NEAR(tour_time(inst, t, plan), 7.0 + 7.0 / 0.1, 1e-9);
    EvalCounter c;
    EXPECT_NEAR(evaluate(inst, t, plan, c), oracle::naive_objective(inst, t.order(), plan.bits()), 1e-9);
}

TEST(Evaluate, OverCapacityRefusedWithoutCounting)
{
    const auto inst = three_city();
    const Tour t(inst, {1, 2, 3});
    auto over = inst;
    over.capacity = 4;
    const auto plan = PackingPlan::from_bits(over, {1});
    EvalCounter c;
    EXPECT_THROW(evaluate(over, t, plan, c), CapacityError);
    EXPECT_EQ(c.count, 0u);
}

TEST(Evaluate, CounterExact)
{
    const auto inst = three_city();
    const Tour t(inst, {1, 2, 3});
    EvalCounter c;
    for (int k = 0; k < 17; ++k) evaluate(inst, t, PackingPlan(inst), c);
    EXPECT_EQ(c.count, 17u);
}

TEST(Evaluate, MatchesNaiveOracle)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = std::uniform_int_distribution<int>(2, 10)(rng);
        const int m = std::uniform_int_distribution<int>(0, 10)(rng);
        auto inst = oracle::random_instance(rng, n, m);
        if (trial % 3 == 1) inst.edge_weight_kind = EdgeWeightKind::Euc2D;
        const auto order = random_tour(rng, n);
        const Tour t(inst, order);
        const auto mask = std::uniform_int_distribution<std::uint64_t>(0, (1ULL << m) - 1)(rng);
        if (oracle::plan_weight(inst, mask) > inst.capacity) continue;
        const auto bits = oracle::mask_bits(m, mask);
        EvalCounter c;
        const auto plan = PackingPlan::from_bits(inst, bits);
        EXPECT_LE(rel_err(evaluate(inst, t, plan, c), oracle::naive_objective(inst, order, bits)), 1e-9);
        EXPECT_LE(rel_err(evaluate(inst, t, plan, c),
                          static_cast<double>(plan.total_profit(inst)) - inst.renting_ratio * tour_time(inst, t, plan)),
                  1e-9);
    }
}

TEST(Evaluate, AddingItemNeverShortensTime)
{
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = oracle::random_instance(rng, 8, 10, 1.0);
        const Tour t(inst, random_tour(rng, 8));
        PackingPlan plan(inst);
        double prev = tour_time(inst, t, plan);
        for (int k = 0; k < inst.m(); ++k) {
            if (!plan.pack(inst, k)) continue;
            const double now = tour_time(inst, t, plan);
            EXPECT_GE(now, prev);
            prev = now;
        }
    }
}

TEST(PackingPlanType, PackRefusesOverflowAndTracksWeight)
{
    const auto inst = three_city();
    PackingPlan plan(inst);
    auto small = inst;
    small.capacity = 4;
    EXPECT_FALSE(plan.pack(small, 0));
    EXPECT_EQ(plan.total_weight(), 0);
    EXPECT_TRUE(plan.pack(inst, 0));
    EXPECT_EQ(plan.total_weight(), 5);
    EXPECT_TRUE(plan.contains(0));
    plan.unpack(inst, 0);
    EXPECT_EQ(plan.total_weight(), 0);
    EXPECT_EQ(plan.packed_count(), 0u);
}
