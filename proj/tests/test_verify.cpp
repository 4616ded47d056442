#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "favard/verify.hpp"

using namespace favard;

TEST(AtMostTwo, SpotAngles)
{
    EXPECT_EQ(sibling_max_multiplicity(0.0).count, 2);
    EXPECT_EQ(sibling_max_multiplicity(std::numbers::pi / 4).count, 2);
    const auto xs = sibling_intervals(0.0);
    const auto peak = sibling_max_multiplicity(0.0);
    EXPECT_EQ(multiplicity(xs, peak.at), 2);
}

TEST(AtMostTwo, FullGridPasses)
{
    const auto r = check_at_most_two(10'000);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.observed, 2.0);
    EXPECT_EQ(r.deviation, 0.0);
    EXPECT_THROW((void)check_at_most_two(0), std::domain_error);
}

TEST(ShiftLemma, FirstGenerationExact)
{
    const auto r = check_shift_lemma(1, 100, SeedKey(1));
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.deviation, 1e-15);
}

TEST(ShiftLemma, ZeroPsiIsIdentity)
{
    const auto r = check_shift_lemma(3, 1, SeedKey(2));
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.deviation, 1e-15);
}

TEST(ShiftLemma, DeepCoupledSubtree)
{
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto r = check_shift_lemma(4, 100, SeedKey(s));
        EXPECT_TRUE(r.pass);
        EXPECT_LE(r.deviation, kShiftTolerance);
    }
    EXPECT_TRUE(check_shift_lemma(8, 20, SeedKey(9)).pass);
}

TEST(ShiftLemma, UnionsShiftToo)
{
    // The interval unions (not just matched endpoints) coincide after the
    // shift, which is what the probability identity needs.
    const AngleTree sub = sample_tree(3, SeedKey(3));
    const double psi = 0.9;
    const auto base = projection(compass_part(0.0, 0, sub, 4), 0.0);
    const auto east = projection(compass_part(psi, 0, sub, 4), 0.0);
    const auto north = projection(compass_part(psi, 1, sub, 4), 0.0);
    ASSERT_EQ(base.intervals().size(), east.intervals().size());
    ASSERT_EQ(base.intervals().size(), north.intervals().size());
    for (std::size_t i = 0; i < base.intervals().size(); ++i) {
        EXPECT_NEAR(east.intervals()[i].lo + shift_s(psi), base.intervals()[i].lo, 1e-12);
        EXPECT_NEAR(north.intervals()[i].hi + shift_s(psi - kHalfPi), base.intervals()[i].hi, 1e-12);
    }
}

TEST(Jacobian, GridChecks)
{
    const auto with_mid = check_jacobian_bound(3);
    EXPECT_TRUE(with_mid.pass);
    EXPECT_NEAR(with_mid.observed, kJacobianBound, 1e-15);
    EXPECT_NEAR(with_mid.location, std::numbers::pi / 4, 1e-15);

    const auto ends = check_jacobian_bound(2);
    EXPECT_NEAR(ends.observed, 0.75, 1e-15);
    EXPECT_FALSE(ends.pass);

    const auto fine = check_jacobian_bound(100'001);
    EXPECT_TRUE(fine.pass);
    EXPECT_LE(fine.deviation, 1e-12);
    EXPECT_THROW((void)check_jacobian_bound(1), std::domain_error);
}

TEST(Nesting, TangentAtFirstTwoLevels)
{
    const AngleTree t = sample_tree(6, SeedKey(4));
    const auto r1 = check_nesting(t, 1);
    EXPECT_TRUE(r1.pass);
    EXPECT_NEAR(r1.observed, 0.0, 1e-15);
    const auto r2 = check_nesting(t, 2);
    EXPECT_TRUE(r2.pass);
    EXPECT_NEAR(r2.observed, 0.0, 1e-15);
    for (int k = 1; k <= 6; ++k) EXPECT_TRUE(check_nesting(t, k).pass);
    EXPECT_THROW((void)check_nesting(t, 7), std::domain_error);
    EXPECT_THROW((void)check_nesting(t, 0), std::domain_error);
}

TEST(SlabTest, Basic)
{
    const Square s{{0.0, 0.0}, {0, 1}};
    EXPECT_TRUE(line_meets_square(0.0, 0.5, s));
    EXPECT_FALSE(line_meets_square(0.0, 1.5, s));
    EXPECT_TRUE(line_meets_square(std::numbers::pi / 4, 1.0, s));
    EXPECT_FALSE(line_meets_square(0.0, 1.0, s, 1e-12));
}

TEST(TripleHit, SquaresHaveCertifiedWitness)
{
    for (int k : {2, 3}) {
        const auto r = find_triple_hit(k, 720, 4096);
        ASSERT_TRUE(r.pass) << "k=" << k;
        ASSERT_TRUE(r.witness.has_value());
        EXPECT_GE(r.witness->members.size(), 3u);
        const SquareSet s = quarter_corner(k);
        for (auto id : r.witness->members)
            EXPECT_TRUE(line_meets_square(r.witness->theta, r.witness->t, s.squares[id - 1], 1e-12));
    }
}

TEST(TripleHit, SiblingDisksHaveNone)
{
    const auto r = find_triple_hit_disks(10'000);
    EXPECT_TRUE(r.pass);
    EXPECT_FALSE(r.witness.has_value());
    EXPECT_LE(r.observed, 2.0);
}

TEST(Reports, Deterministic)
{
    const auto a = check_shift_lemma(4, 50, SeedKey(5));
    const auto b = check_shift_lemma(4, 50, SeedKey(5));
    EXPECT_EQ(a.deviation, b.deviation);
    EXPECT_EQ(a.location, b.location);
    const auto x = find_triple_hit(2);
    const auto y = find_triple_hit(2);
    EXPECT_EQ(x.witness->theta, y.witness->theta);
    EXPECT_EQ(x.witness->t, y.witness->t);
}
