#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "favard/rng.hpp"

using namespace favard;

TEST(NodePath, ChildrenAndParent)
{
    const NodePath root{1, 1};
    EXPECT_TRUE(root.valid());
    for (int a = 0; a < 4; ++a) {
        const NodePath c = root.child(a);
        EXPECT_EQ(c.depth, 2);
        EXPECT_EQ(c.index, static_cast<std::uint64_t>(1 + a));
        EXPECT_EQ(c.parent(), root);
    }
    const NodePath p{3, 5};
    EXPECT_EQ(p.child(0), (NodePath{4, 17}));
    EXPECT_EQ(p.child(3), (NodePath{4, 20}));
    EXPECT_FALSE((NodePath{3, 17}).valid());
    EXPECT_FALSE((NodePath{0, 1}).valid());
    EXPECT_FALSE((NodePath{kMaxDepth + 1, 1}).valid());
}

TEST(DeriveAngle, DeterministicPerPath)
{
    const SeedKey k(7);
    const double a = derive_angle(k, {1, 1});
    for (int i = 0; i < 10; ++i) EXPECT_EQ(derive_angle(k, {1, 1}), a);
    EXPECT_EQ(derive_angle(SeedKey(7), {1, 1}), a);
    EXPECT_NE(derive_angle(SeedKey(8), {1, 1}), a);
}

TEST(DeriveAngle, RangeAtDepthThree)
{
    const SeedKey k(123);
    std::set<double> seen;
    for (std::uint64_t j = 1; j <= 16; ++j) {
        const double a = derive_angle(k, {3, j});
        EXPECT_GE(a, 0.0);
        EXPECT_LT(a, kHalfPi);
        seen.insert(a);
    }
    EXPECT_EQ(seen.size(), 16u);
}

TEST(DeriveAngle, InvalidPathThrows)
{
    const SeedKey k(1);
    EXPECT_THROW((void)derive_angle(k, {3, 17}), std::domain_error);
    EXPECT_THROW((void)derive_angle(k, {3, 0}), std::domain_error);
    EXPECT_THROW((void)derive_angle(k, {0, 1}), std::domain_error);
    EXPECT_THROW((void)derive_angle(k, {16, 1}), std::domain_error);
}

// One-sample Kolmogorov-Smirnov against uniform [0, pi/2].
TEST(DeriveAngle, KolmogorovSmirnovUniform)
{
    const SeedKey k(2024);
    const std::size_t n = 100'000;
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = derive_angle(k, {10, i + 1}) / kHalfPi;
    std::sort(u.begin(), u.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d = std::max(d, static_cast<double>(i + 1) / n - u[i]);
        d = std::max(d, u[i] - static_cast<double>(i) / n);
    }
    const double critical_1pct = 1.6276 / std::sqrt(static_cast<double>(n));
    EXPECT_LT(d, critical_1pct);
}

TEST(DeriveAngle, KolmogorovSmirnovAcrossStreams)
{
    const SeedKey k(5);
    const std::size_t n = 20'000;
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i)
        u[i] = derive_angle(k.split("sample:" + std::to_string(i)), {1, 1}) / kHalfPi;
    std::sort(u.begin(), u.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        d = std::max({d, static_cast<double>(i + 1) / n - u[i], u[i] - static_cast<double>(i) / n});
    EXPECT_LT(d, 1.6276 / std::sqrt(static_cast<double>(n)));
}

TEST(Split, DistinctLabelsDistinctStreams)
{
    const SeedKey k(99);
    const SeedKey a = split(k, "sample:0");
    const SeedKey b = split(k, "sample:1");
    EXPECT_FALSE(a == b);
    EXPECT_NE(a.stream(), b.stream());
    EXPECT_NE(derive_angle(a, {1, 1}), derive_angle(b, {1, 1}));
    EXPECT_FALSE(a == k);
}

TEST(Split, NestedIsDeterministic)
{
    const SeedKey k(99);
    const SeedKey x = split(split(k, "a"), "b");
    const SeedKey y = split(split(SeedKey(99), "a"), "b");
    EXPECT_TRUE(x == y);
    EXPECT_EQ(x.label(), "a/b");
    EXPECT_EQ(derive_bits(x, {4, 33}), derive_bits(y, {4, 33}));
    EXPECT_FALSE(x == split(k, "a/b"));
}

TEST(Split, StreamsUncorrelated)
{
    const SeedKey k(31337);
    const SeedKey s0 = split(k, "s:0");
    const SeedKey s1 = split(k, "s:1");
    const std::size_t n = 10'000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const NodePath p{8, i + 1};
        const double x = derive_angle(s0, p);
        const double y = derive_angle(s1, p);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double nn = static_cast<double>(n);
    const double cov = sxy / nn - sx / nn * sy / nn;
    const double r = cov / std::sqrt((sxx / nn - sx * sx / nn / nn) * (syy / nn - sy * sy / nn / nn));
    EXPECT_LT(std::abs(r), 3.0 / std::sqrt(nn));
}

TEST(SeedKey, Descriptor)
{
    EXPECT_EQ(SeedKey(255).descriptor(), "seed=0xff");
    EXPECT_EQ(SeedKey(255).split("x").split("y").descriptor(), "seed=0xff;stream=x/y");
}

TEST(ParseSeed, DecimalAndHex)
{
    EXPECT_EQ(parse_seed("42"), 42u);
    EXPECT_EQ(parse_seed("0x2A"), 42u);
    EXPECT_EQ(parse_seed("0xffffffffffffffff"), ~std::uint64_t{0});
    EXPECT_THROW((void)parse_seed(""), std::invalid_argument);
    EXPECT_THROW((void)parse_seed("0x"), std::invalid_argument);
    EXPECT_THROW((void)parse_seed("12ab"), std::invalid_argument);
    EXPECT_THROW((void)parse_seed("-1"), std::invalid_argument);
}
