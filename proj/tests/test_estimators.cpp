#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "favard/estimators.hpp"
#include "favard/verify.hpp"

using namespace favard;

namespace {

// (2/pi) * integral over [0, pi/2] of the first-generation closed form,
// composite midpoint rule; the integrand is piecewise smooth with a handful
// of kinks, so 10^6 cells are far more than enough.
double mean_first_generation_length()
{
    const int cells = 1'000'000;
    const double h = kHalfPi / cells;
    detail::CompensatedSum s;
    for (int i = 0; i < cells; ++i) s.add(closed_form_D1_length((i + 0.5) * h));
    return s.value() * h / kHalfPi;
}

} // namespace

TEST(EstimateDk, ZeroGenerationIsConstant)
{
    const Estimate e = estimate_Dk(3, 0, 0.0, 50, SeedKey(1));
    EXPECT_EQ(e.mean, 2.0);
    EXPECT_EQ(e.std_error, 0.0);
    EXPECT_EQ(e.samples, 50u);
}

TEST(EstimateDk, FirstGenerationMatchesIntegratedClosedForm)
{
    const Estimate e = estimate_Dk(1, 1, 0.0, 100'000, SeedKey(2));
    const double oracle = mean_first_generation_length();
    EXPECT_LE(std::abs(e.mean - oracle), kSigmaRule * e.std_error) << e.mean << " vs " << oracle;
    EXPECT_LT(e.mean, 2.0);
}

TEST(EstimateDk, LabelSeedAndErrors)
{
    const Estimate e = estimate_Dk(8, 5, 0.0, 4, SeedKey(7));
    EXPECT_EQ(e.label, "D_k, k=5, n=8, theta=0");
    EXPECT_EQ(e.seed, "seed=0x7");
    EXPECT_THROW((void)estimate_Dk(2, 3, 0.0, 10, SeedKey(1)), std::domain_error);
    EXPECT_THROW((void)estimate_Dk(2, 1, 0.0, 1, SeedKey(1)), std::domain_error);
}

TEST(EstimateDk, DeterministicAcrossWorkerCounts)
{
    const SeedKey k(42);
    const Estimate a = estimate_Dk(5, 5, 0.3, 64, k, TreeMode::independent, 1);
    const Estimate b = estimate_Dk(5, 5, 0.3, 64, k, TreeMode::independent, 4);
    const Estimate c = estimate_Dk(5, 5, 0.3, 64, k, TreeMode::independent, 7);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(a.mean, c.mean);
}

TEST(EstimateDk, StandardErrorScalesWithSamples)
{
    const Estimate small = estimate_Dk(3, 3, 0.0, 500, SeedKey(3));
    const Estimate large = estimate_Dk(3, 3, 0.0, 2000, SeedKey(3));
    const double ratio = small.std_error / large.std_error;
    EXPECT_GT(ratio, 1.0);
    EXPECT_LT(ratio, 4.0);
}

TEST(EstimateDk, StandardErrorDefinition)
{
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    const Estimate e = make_estimate(xs, "s", "l");
    EXPECT_DOUBLE_EQ(e.mean, 2.5);
    EXPECT_DOUBLE_EQ(e.std_error, std::sqrt(5.0 / 3.0) / 2.0);
}

TEST(EstimateDk, BoundsAndCoupledMonotone)
{
    const auto r = verify_recursion(5, 200, SeedKey(4));
    double prev = 2.0;
    for (const Estimate& e : r.levels) {
        EXPECT_GT(e.mean, 0.0);
        EXPECT_LE(e.mean, prev);
        prev = e.mean;
    }
}

TEST(Recursion, SecondGenerationRowPasses)
{
    const auto r = verify_recursion(2, 2000, SeedKey(5));
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].k, 1);
    EXPECT_TRUE(r.rows[0].pass) << r.rows[0].slack << " / " << r.rows[0].std_error;
    EXPECT_NEAR(r.c, 12 * std::sqrt(2.0), 1e-12);
}

TEST(Recursion, PlainMonotonicityAlwaysPasses)
{
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto r = verify_recursion(4, 50, SeedKey(s), 0.7, TreeMode::independent,
                                        std::numeric_limits<double>::infinity());
        for (const auto& row : r.rows) {
            EXPECT_TRUE(row.pass);
            EXPECT_GE(row.slack, 0.0);
        }
    }
}

TEST(Recursion, RowsAgreeWithStandaloneEstimates)
{
    const SeedKey k(6);
    const auto r = verify_recursion(4, 100, k);
    for (int kk = 1; kk <= 4; ++kk)
        EXPECT_EQ(r.levels[kk - 1].mean, estimate_Dk(4, kk, 0.0, 100, k).mean);
    for (const auto& row : r.rows)
        EXPECT_NEAR(row.slack, row.d_k - row.d_k * row.d_k / r.c - row.d_next, 1e-15);
}

TEST(Recursion, SixLevelsAllRowsPassAndInductionHolds)
{
    const auto r = verify_recursion(6, 2000, SeedKey(7));
    ASSERT_EQ(r.rows.size(), 5u);
    for (const auto& row : r.rows) EXPECT_TRUE(row.pass) << "k=" << row.k;
    EXPECT_TRUE(r.induction_holds);
    EXPECT_THROW((void)verify_recursion(1, 10, SeedKey(1)), std::domain_error);
}

TEST(Overlap, FixedQuarterPiRootAtFirstLevel)
{
    const AngleTree t = AngleTree::constant_per_level({kHalfPi / 2});
    EXPECT_NEAR(compass_overlap(t, 1), 0.5, 1e-12);
}

TEST(Overlap, CompassBlocksMatchExplicitParts)
{
    const AngleTree t = sample_tree(4, SeedKey(8));
    const DiskSet east = compass_part(t.angle(1, 1), 0, t.subtree({2, 1}), 4);
    const DiskSet north = compass_part(t.angle(1, 1), 1, t.subtree({2, 2}), 4);
    EXPECT_NEAR(compass_overlap(t, 4), overlap_length(east, north, 0.0), 1e-12);
}

// The overlap bound is derived by integrating over the root angle without
// dividing by the interval length, so it is the psi-integral (not the
// average) that dominates D_{k-1}^2 / c. The acceptance suite checks the
// averaged form as literally stated.
TEST(Overlap, PsiIntegralDominatesSquaredReference)
{
    for (int k = 1; k <= 3; ++k) {
        const auto r = check_overlap_bound(k, 2000, SeedKey(9));
        const double sigma = std::hypot(kHalfPi * r.overlap.std_error,
                                        2 * r.reference.mean * r.reference.std_error / kRecursionConstant);
        EXPECT_GE(r.psi_integral, r.rhs - kSigmaRule * sigma) << "k=" << k;
        EXPECT_GE(r.overlap.mean, 0.0);
    }
}

TEST(Overlap, FirstLevelAverageAgainstClosedForm)
{
    // At k = 1 the overlap of the East and North siblings at theta = 0 is
    // max(0, 1/2 - 3/4 |cos w - sin w|); its average is the oracle.
    const int cells = 200'000;
    const double h = kHalfPi / cells;
    double s = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double w = (i + 0.5) * h;
        s += std::max(0.0, 0.5 - 0.75 * std::abs(std::cos(w) - std::sin(w)));
    }
    const double oracle = s * h / kHalfPi;
    const Estimate e = estimate_overlap_expectation(1, 20'000, SeedKey(10));
    EXPECT_LE(std::abs(e.mean - oracle), kSigmaRule * e.std_error);
}

TEST(Favard, ZeroDepthAndBound)
{
    EXPECT_EQ(estimate_favard(0, 5, 10, SeedKey(1)).mean, 2.0);
    const Estimate e = estimate_favard(4, 500, 90, SeedKey(11));
    EXPECT_LE(e.mean, kRecursionConstant / 4 + kSigmaRule * e.std_error);
}

TEST(Favard, GridStability)
{
    const Estimate a = estimate_favard(4, 200, 90, SeedKey(12));
    const Estimate b = estimate_favard(4, 200, 180, SeedKey(12));
    EXPECT_LE(std::abs(a.mean - b.mean), std::max(1e-3, kSigmaRule * a.std_error));
}

TEST(Decay, RowsBoundedMonotoneAndBandReported)
{
    const DecayTable t = decay_table(6, 100, 45, SeedKey(13));
    ASSERT_EQ(t.rows.size(), 6u);
    for (const auto& r : t.rows) {
        EXPECT_LE(r.n_fav, kRecursionConstant + kSigmaRule * r.n_fav_stderr);
        EXPECT_DOUBLE_EQ(r.n_fav, r.n * r.fav.mean);
    }
    for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_LE(t.rows[i].fav.mean, t.rows[i - 1].fav.mean);
    EXPECT_EQ(t.monotone_violations, 0u);
    EXPECT_EQ(t.band_from, 4);
    EXPECT_EQ(t.band_to, 6);
    EXPECT_TRUE(std::isfinite(t.band_ratio));
    EXPECT_GE(t.band_ratio, 1.0);
}

TEST(Decay, MatchesStandaloneFavardEstimates)
{
    const SeedKey k(14);
    const DecayTable t = decay_table(3, 20, 30, k);
    for (const auto& r : t.rows) EXPECT_EQ(r.fav.mean, estimate_favard(r.n, 20, 30, k).mean);
}

TEST(ThetaInvariance, IndependentAndPerLevel)
{
    const std::vector<double> thetas = {0.0, 0.3, std::numbers::pi / 4};
    const auto a = theta_invariance_check(4, 2000, SeedKey(15), thetas);
    EXPECT_TRUE(a.pass);
    EXPECT_EQ(a.pairs.size(), 3u);
    const auto b = theta_invariance_check(4, 2000, SeedKey(15), thetas, TreeMode::per_level);
    EXPECT_TRUE(b.pass);
}

TEST(ThetaInvariance, SingleThetaIsVacuous)
{
    const std::vector<double> one = {0.2};
    const auto r = theta_invariance_check(3, 10, SeedKey(16), one);
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(r.pairs.empty());
}
