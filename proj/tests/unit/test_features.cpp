#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "ttp/features.hpp"

using namespace ttp;

namespace {

double sorted_median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

TEST(RobustStandardize, OddLength)
{
    const std::vector<double> v{1, 2, 3};
    const auto s = robust_standardize(v);
    EXPECT_DOUBLE_EQ(s[0], -1.0);
    EXPECT_DOUBLE_EQ(s[1], 0.0);
    EXPECT_DOUBLE_EQ(s[2], 1.0);
}

TEST(RobustStandardize, EvenLengthMidpoint)
{
    const std::vector<double> v{1, 2, 4, 7};
    const auto s = robust_standardize(v);
    EXPECT_NEAR(s[0], -4.0 / 3.0, 1e-15);
    EXPECT_NEAR(s[1], -2.0 / 3.0, 1e-15);
    EXPECT_NEAR(s[2], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(s[3], 8.0 / 3.0, 1e-15);
}

TEST(RobustStandardize, ConstantGivesZeros)
{
    const std::vector<double> v(9, 4.25);
    for (double x : robust_standardize(v)) EXPECT_EQ(x, 0.0);
}

TEST(RobustStandardize, ZeroMadWithSpreadStillZeros)
{
    // more than half the values equal the median, so MAD = 0
    const std::vector<double> v{5, 5, 5, 1, 100};
    for (double x : robust_standardize(v)) EXPECT_EQ(x, 0.0);
}

TEST(RobustStandardize, EmptyThrows)
{
    const std::vector<double> v;
    EXPECT_THROW(robust_standardize(v), std::invalid_argument);
}

TEST(RobustStandardize, MedianZeroMadOne)
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const int len = std::uniform_int_distribution<int>(2, 60)(rng);
        std::vector<double> v(len);
        std::lognormal_distribution<double> d(0.0, 2.0);
        for (auto& x : v) x = d(rng);
        const auto s = robust_standardize(v);
        const double med = sorted_median(s);
        std::vector<double> dev(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) dev[i] = std::abs(s[i] - med);
        EXPECT_NEAR(med, 0.0, 1e-12);
        EXPECT_NEAR(sorted_median(dev), 1.0, 1e-12);
    }
}

TEST(RobustStandardize, AffineEquivariant)
{
    std::mt19937_64 rng(42);
    std::normal_distribution<double> d(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(15);
        for (auto& x : v) x = d(rng);
        const double a = std::exp(d(rng));
        const double b = 10.0 * d(rng);
        std::vector<double> w(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) w[i] = a * v[i] + b;
        const auto sv = robust_standardize(v);
        const auto sw = robust_standardize(w);
        for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(sv[i], sw[i], 1e-9);
    }
}

TEST(ComputeFeatures, RawDefinitions)
{
    TtpInstance inst;
    inst.coords = {{0, 0}, {3, 0}, {3, 4}, {0, 4}};
    inst.items = {Item{2, 5, 5, 0}, Item{4, 2, 6, 1}, Item{2, 3, 1, 2}, Item{3, 4, 2, 3}};
    inst.capacity = 10;
    const Tour t(inst, {1, 2, 3, 4});
    const auto f = compute_features(inst, t, "ref");
    EXPECT_EQ(f.tour_id, "ref");
    EXPECT_DOUBLE_EQ(f.ipr_raw[0], 1.0);
    EXPECT_DOUBLE_EQ(f.ipr_raw[1], 3.0);
    // last tour city: only the closing leg remains
    EXPECT_DOUBLE_EQ(f.rdist_raw[1], 4.0);
    // same city, same distance to go
    EXPECT_DOUBLE_EQ(f.rdist_raw[0], f.rdist_raw[2]);
    EXPECT_DOUBLE_EQ(f.rdist_raw[0], 4.0 + 3.0 + 4.0);
    EXPECT_DOUBLE_EQ(f.rdist_raw[3], 3.0 + 4.0);
    const auto std_ipr = robust_standardize(f.ipr_raw);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(f.ipr_std[k], std_ipr[k]);
}

TEST(ComputeFeatures, DistanceToGoNonIncreasingAlongTour)
{
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const auto inst = oracle::random_instance(rng, 12, 30);
        auto order = oracle::identity_tour(12);
        std::shuffle(order.begin() + 1, order.end(), rng);
        const Tour t(inst, order);
        const auto f = compute_features(inst, t);
        for (int a = 0; a < inst.m(); ++a) {
            for (int b = 0; b < inst.m(); ++b) {
                if (t.position_of(inst.items[a].city) < t.position_of(inst.items[b].city)) {
                    EXPECT_GE(f.rdist_raw[a], f.rdist_raw[b]);
                }
            }
        }
    }
}

TEST(AnalysisMask, ClosedBox)
{
    ItemFeatureTable t;
    t.ipr_raw = {0, 0, 0, 0};
    t.rdist_raw = t.ipr_raw;
    t.ipr_std = {0.0, 2.0, 5.0, -2.0};
    t.rdist_std = {0.0, 0.0, 0.0, -2.0000001};
    const auto m = analysis_mask(t);
    EXPECT_TRUE(m[0]);
    EXPECT_TRUE(m[1]);
    EXPECT_FALSE(m[2]);
    EXPECT_FALSE(m[3]);
}

TEST(FeatureCsv, HeaderAndRows)
{
    TtpInstance inst;
    inst.coords = {{0, 0}, {3, 4}};
    inst.items = {Item{2, 1, 2, 0}, Item{2, 2, 2, 1}};
    inst.capacity = 5;
    const Tour t(inst, {1, 2});
    const auto f = compute_features(inst, t);
    auto plan = PackingPlan(inst);
    plan.pack(inst, 1);
    std::ostringstream os;
    write_feature_csv(os, f, plan);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "item_id,ipr_std,rdist_std,packed");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 2);
    EXPECT_NE(os.str().find(",1\n"), std::string::npos);
}
