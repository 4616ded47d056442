#pragma once

/// \file estimators.hpp
/// Monte Carlo estimates of expected projection lengths, overlaps and
/// Favard lengths of the random disk model.
///
/// Sample i always uses the tree derived from key.split("sample:i"), and
/// angles are a pure function of the node path. A height-k estimate and a
/// height-n estimate with the same key therefore see the same trees truncated
/// at different depths, which is the coupling the recursion check relies on.
/// Samples run in parallel; every reduction is a compensated sum in sample
/// order, so results do not depend on the worker count.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "favard/detail/numeric.hpp"
#include "favard/detail/parallel.hpp"
#include "favard/geometry.hpp"
#include "favard/model.hpp"
#include "favard/rng.hpp"

namespace favard {

/// c = 12 sqrt 2, the recursion constant.
inline const double kRecursionConstant = 12.0 * std::numbers::sqrt2;

/// Number of standard errors allowed before an inequality verdict fails.
inline constexpr double kSigmaRule = 3.0;

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::string seed;
    std::string label;
};

namespace detail {

inline double sample_mean(std::span<const double> xs)
{
    return compensated_sum(xs) / static_cast<double>(xs.size());
}

/// Standard error of the mean, using the n-1 sample variance.
inline double standard_error(std::span<const double> xs, double mean)
{
    if (xs.size() < 2) return 0.0;
    CompensatedSum s;
    for (double x : xs) s.add((x - mean) * (x - mean));
    return std::sqrt(s.value() / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

inline SeedKey sample_key(const SeedKey& key, std::size_t i)
{
    return key.split("sample:" + std::to_string(i));
}

inline void require_samples(std::size_t samples)
{
    if (samples < 2) throw std::domain_error("estimator: samples must be >= 2");
}

inline std::string fmt_theta(double theta)
{
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, theta);
    return std::string(buf, r.ptr);
}

} // namespace detail

[[nodiscard]] inline Estimate make_estimate(std::span<const double> values, std::string seed, std::string label)
{
    if (values.empty()) throw std::domain_error("make_estimate: no samples");
    Estimate e;
    e.mean = detail::sample_mean(values);
    e.std_error = detail::standard_error(values, e.mean);
    e.samples = values.size();
    e.seed = std::move(seed);
    e.label = std::move(label);
    return e;
}

/// Per-sample projection lengths |proj_theta D_k(tree_i)|, i < samples.
[[nodiscard]] inline std::vector<double> sample_projection_lengths(int k, double theta, std::size_t samples,
                                                                   const SeedKey& key, TreeMode mode,
                                                                   unsigned workers = 0)
{
    if (k == 0) return std::vector<double>(samples, 2.0);
    return detail::parallel_map<double>(
        samples,
        [&](std::size_t i) {
            return projection_length(AngleTree::sample(k, detail::sample_key(key, i), mode), k, theta);
        },
        workers);
}

/// D_k = E |proj_theta D_k| over i.i.d. height-k trees. `n` is the height
/// of the ambient tree; D_k does not depend on it beyond k <= n.
[[nodiscard]] inline Estimate estimate_Dk(int n, int k, double theta, std::size_t samples, const SeedKey& key,
                                          TreeMode mode = TreeMode::independent, unsigned workers = 0)
{
    detail::require_samples(samples);
    if (k < 0) throw std::domain_error("estimate_Dk: k must be >= 0");
    if (k > n) throw std::domain_error("estimate_Dk: k exceeds n");
    if (n > kMaxDepth) throw std::domain_error("estimate_Dk: n exceeds depth cap");
    const auto xs = sample_projection_lengths(k, theta, samples, key, mode, workers);
    return make_estimate(xs, key.descriptor(),
                         "D_k, k=" + std::to_string(k) + ", n=" + std::to_string(n) + ", theta=" + detail::fmt_theta(theta));
}

struct RecursionRow {
    int k = 0;
    double d_k = 0.0;
    double d_next = 0.0;
    double slack = 0.0;  // d_k - d_k^2 / c - d_next
    double std_error = 0.0; // of the slack, from coupled samples
    bool pass = false;   // slack >= -3 std_error
};

struct RecursionReport {
    int n = 0;
    double c = 0.0;
    double theta = 0.0;
    std::size_t samples = 0;
    std::string seed;
    TreeMode mode = TreeMode::independent;
    std::vector<Estimate> levels; // D_1 .. D_n
    std::vector<RecursionRow> rows; // k = 1 .. n-1
    bool induction_holds = false;   // D_k <= c/k + 3 sigma for every k

    [[nodiscard]] bool all_pass() const noexcept
    {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

/// Check D_{k+1} <= D_k - D_k^2 / c on coupled samples: one height-n tree per
/// sample, truncated at every k. Pass `c = +inf` for the plain
/// monotonicity variant.
[[nodiscard]] inline RecursionReport verify_recursion(int n, std::size_t samples, const SeedKey& key, double theta = 0.0,
                                                      TreeMode mode = TreeMode::independent,
                                                      double c = kRecursionConstant, unsigned workers = 0)
{
    if (n < 2) throw std::domain_error("verify_recursion: n must be >= 2");
    if (n > kMaxDepth) throw std::domain_error("verify_recursion: n exceeds depth cap");
    detail::require_samples(samples);

    // per_sample[i][k-1] = |proj D_k(tree_i)|
    const auto per_sample = detail::parallel_map<std::vector<double>>(
        samples,
        [&](std::size_t i) {
            const AngleTree tree = AngleTree::sample(n, detail::sample_key(key, i), mode);
            std::vector<double> v(static_cast<std::size_t>(n));
            for (int k = 1; k <= n; ++k) v[static_cast<std::size_t>(k - 1)] = projection_length(tree, k, theta);
            return v;
        },
        workers);

    RecursionReport rep;
    rep.n = n;
    rep.c = c;
    rep.theta = theta;
    rep.samples = samples;
    rep.seed = key.descriptor();
    rep.mode = mode;

    std::vector<std::vector<double>> by_level(static_cast<std::size_t>(n), std::vector<double>(samples));
    for (std::size_t i = 0; i < samples; ++i)
        for (int k = 0; k < n; ++k) by_level[static_cast<std::size_t>(k)][i] = per_sample[i][static_cast<std::size_t>(k)];
    for (int k = 1; k <= n; ++k)
        rep.levels.push_back(make_estimate(by_level[static_cast<std::size_t>(k - 1)], rep.seed,
                                           "D_k, k=" + std::to_string(k) + ", n=" + std::to_string(n) +
                                               ", theta=" + detail::fmt_theta(theta)));

    const bool finite_c = std::isfinite(c);
    for (int k = 1; k < n; ++k) {
        const auto& xk = by_level[static_cast<std::size_t>(k - 1)];
        const auto& xn = by_level[static_cast<std::size_t>(k)];
        RecursionRow row;
        row.k = k;
        row.d_k = rep.levels[static_cast<std::size_t>(k - 1)].mean;
        row.d_next = rep.levels[static_cast<std::size_t>(k)].mean;
        row.slack = row.d_k - (finite_c ? row.d_k * row.d_k / c : 0.0) - row.d_next;
        // Delta method on the paired samples: the slack is linear in
        // (X_k, X_{k+1}) up to the d_k^2 term, whose derivative is 2 d_k / c.
        const double w = finite_c ? 1.0 - 2.0 * row.d_k / c : 1.0;
        std::vector<double> h(samples);
        for (std::size_t i = 0; i < samples; ++i) h[i] = w * xk[i] - xn[i];
        row.std_error = detail::standard_error(h, detail::sample_mean(h));
        row.pass = row.slack >= -kSigmaRule * row.std_error;
        rep.rows.push_back(row);
    }

    rep.induction_holds = true;
    if (finite_c)
        for (int k = 1; k <= n; ++k) {
            const Estimate& e = rep.levels[static_cast<std::size_t>(k - 1)];
            if (e.mean > c / k + kSigmaRule * e.std_error) rep.induction_holds = false;
        }
    return rep;
}

/// |proj_theta T_0^k ∩ proj_theta T_1^k| for one tree: the East and North
/// compass parts of D_k(tree), i.e. its first two blocks of 4^(k-1) disks.
[[nodiscard]] inline double compass_overlap(const AngleTree& tree, int k, double theta = 0.0)
{
    if (k < 1) throw std::domain_error("compass_overlap: k must be >= 1");
    const DiskSet all = build_generation(tree, k);
    const std::size_t part = all.disks.size() / 4;
    std::vector<Interval> east, north;
    east.reserve(part);
    north.reserve(part);
    for (std::size_t i = 0; i < part; ++i) {
        east.push_back(project_disk(all.disks[i], theta));
        north.push_back(project_disk(all.disks[part + i], theta));
    }
    return intersection(IntervalUnion::from(std::move(east)), IntervalUnion::from(std::move(north))).measure();
}

/// E |proj T_0^k ∩ proj T_1^k| at theta = 0, with the root angle and both
/// hanging subtrees drawn independently.
[[nodiscard]] inline Estimate estimate_overlap_expectation(int k, std::size_t samples, const SeedKey& key,
                                                           unsigned workers = 0)
{
    if (k < 1) throw std::domain_error("estimate_overlap_expectation: k must be >= 1");
    if (k > kMaxDepth) throw std::domain_error("estimate_overlap_expectation: k exceeds depth cap");
    detail::require_samples(samples);
    const auto xs = detail::parallel_map<double>(
        samples, [&](std::size_t i) { return compass_overlap(AngleTree::sample(k, detail::sample_key(key, i)), k); },
        workers);
    return make_estimate(xs, key.descriptor(), "overlap T0/T1, k=" + std::to_string(k) + ", theta=0");
}

struct OverlapBoundReport {
    int k = 0;
    Estimate overlap;
    Estimate reference; // D_{k-1}
    double rhs = 0.0;   // D_{k-1}^2 / c
    double std_error = 0.0; // combined, independent streams
    double margin = 0.0; // overlap - rhs
    /// The overlap integrated over psi in [0, pi/2] rather than averaged:
    /// (pi/2) * overlap.mean.
    double psi_integral = 0.0;
    bool pass = false; // margin >= -3 std_error
};

/// Compare E overlap with D_{k-1}^2 / c. The two sides use independent
/// streams key/"overlap" and key/"reference".
[[nodiscard]] inline OverlapBoundReport check_overlap_bound(int k, std::size_t samples, const SeedKey& key,
                                                            unsigned workers = 0)
{
    OverlapBoundReport r;
    r.k = k;
    r.overlap = estimate_overlap_expectation(k, samples, key.split("overlap"), workers);
    r.reference = estimate_Dk(k - 1, k - 1, 0.0, samples, key.split("reference"), TreeMode::independent, workers);
    const double c = kRecursionConstant;
    r.rhs = r.reference.mean * r.reference.mean / c;
    const double rhs_err = 2.0 * r.reference.mean * r.reference.std_error / c;
    r.std_error = std::hypot(r.overlap.std_error, rhs_err);
    r.margin = r.overlap.mean - r.rhs;
    r.psi_integral = kHalfPi * r.overlap.mean;
    r.pass = r.margin >= -kSigmaRule * r.std_error;
    return r;
}

/// E Fav(D_n) with the midpoint quadrature on `grid` directions.
[[nodiscard]] inline Estimate estimate_favard(int n, std::size_t samples, int grid, const SeedKey& key,
                                              TreeMode mode = TreeMode::independent, unsigned workers = 0)
{
    detail::require_samples(samples);
    if (grid < 1) throw std::domain_error("estimate_favard: grid must be >= 1");
    if (n < 0 || n > kMaxDepth) throw std::domain_error("estimate_favard: n out of range");
    const std::string label = "Fav, n=" + std::to_string(n) + ", grid=" + std::to_string(grid);
    if (n == 0) {
        const std::vector<double> xs(samples, 2.0);
        return make_estimate(xs, key.descriptor(), label);
    }
    const auto xs = detail::parallel_map<double>(
        samples,
        [&](std::size_t i) { return favard_length(AngleTree::sample(n, detail::sample_key(key, i), mode), n, grid); },
        workers);
    return make_estimate(xs, key.descriptor(), label);
}

struct DecayRow {
    int n = 0;
    Estimate fav;
    double n_fav = 0.0;
    double n_fav_stderr = 0.0;
};

struct DecayTable {
    std::vector<DecayRow> rows; // n = 1 .. n_max
    int grid = 0;
    std::size_t samples = 0;
    std::string seed;
    TreeMode mode = TreeMode::independent;
    int band_from = 0;
    int band_to = 0;
    double band_min = 0.0;
    double band_max = 0.0;
    double band_ratio = 0.0; // band_max / band_min
    /// Realizations with Fav(D_n) > Fav(D_{n-1}) + 1e-12 for some n, counting
    /// Fav(D_0) = 2.
    std::size_t monotone_violations = 0;
};

/// Fav(D_n) for n = 1..n_max, every sample tree shared across n so each
/// realization gives a full trajectory.
[[nodiscard]] inline DecayTable decay_table(int n_max, std::size_t samples, int grid, const SeedKey& key,
                                            TreeMode mode = TreeMode::independent, unsigned workers = 0)
{
    if (n_max < 2) throw std::domain_error("decay_table: n_max must be >= 2");
    if (n_max > kMaxDepth) throw std::domain_error("decay_table: n_max exceeds depth cap");
    if (grid < 1) throw std::domain_error("decay_table: grid must be >= 1");
    detail::require_samples(samples);

    const auto traj = detail::parallel_map<std::vector<double>>(
        samples,
        [&](std::size_t i) {
            const AngleTree tree = AngleTree::sample(n_max, detail::sample_key(key, i), mode);
            std::vector<double> v(static_cast<std::size_t>(n_max));
            for (int n = 1; n <= n_max; ++n) v[static_cast<std::size_t>(n - 1)] = favard_length(tree, n, grid);
            return v;
        },
        workers);

    DecayTable t;
    t.grid = grid;
    t.samples = samples;
    t.seed = key.descriptor();
    t.mode = mode;
    for (const auto& v : traj) {
        double prev = 2.0;
        bool ok = true;
        for (double f : v) {
            if (f > prev + 1e-12) ok = false;
            prev = f;
        }
        if (!ok) ++t.monotone_violations;
    }
    std::vector<double> col(samples);
    for (int n = 1; n <= n_max; ++n) {
        for (std::size_t i = 0; i < samples; ++i) col[i] = traj[i][static_cast<std::size_t>(n - 1)];
        DecayRow r;
        r.n = n;
        r.fav = make_estimate(col, t.seed, "Fav, n=" + std::to_string(n) + ", grid=" + std::to_string(grid));
        r.n_fav = n * r.fav.mean;
        r.n_fav_stderr = n * r.fav.std_error;
        t.rows.push_back(r);
    }
    t.band_from = n_max >= 4 ? 4 : 1;
    t.band_to = n_max;
    t.band_min = std::numeric_limits<double>::infinity();
    t.band_max = 0.0;
    for (const auto& r : t.rows)
        if (r.n >= t.band_from) {
            t.band_min = std::min(t.band_min, r.n_fav);
            t.band_max = std::max(t.band_max, r.n_fav);
        }
    t.band_ratio = t.band_max / t.band_min;
    return t;
}

struct ThetaPair {
    double theta_a = 0.0;
    double theta_b = 0.0;
    double diff = 0.0;
    double std_error = 0.0;
    bool pass = false;
};

struct ThetaInvarianceReport {
    int n = 0;
    std::vector<Estimate> estimates; // one per theta
    std::vector<ThetaPair> pairs;
    bool pass = true;
};

/// E |proj_theta D_n| should not depend on theta. The same trees are used
/// for every theta; each pairwise difference is judged against its paired
/// standard error.
[[nodiscard]] inline ThetaInvarianceReport theta_invariance_check(int n, std::size_t samples, const SeedKey& key,
                                                                  std::span<const double> thetas,
                                                                  TreeMode mode = TreeMode::independent,
                                                                  unsigned workers = 0)
{
    if (thetas.empty()) throw std::domain_error("theta_invariance_check: empty theta list");
    detail::require_samples(samples);
    if (n < 0 || n > kMaxDepth) throw std::domain_error("theta_invariance_check: n out of range");
    std::vector<std::vector<double>> cols;
    for (double th : thetas) cols.push_back(sample_projection_lengths(n, th, samples, key, mode, workers));

    ThetaInvarianceReport rep;
    rep.n = n;
    for (std::size_t a = 0; a < thetas.size(); ++a)
        rep.estimates.push_back(make_estimate(cols[a], key.descriptor(),
                                              "D_k, k=" + std::to_string(n) + ", n=" + std::to_string(n) +
                                                  ", theta=" + detail::fmt_theta(thetas[a])));
    std::vector<double> d(samples);
    for (std::size_t a = 0; a < thetas.size(); ++a)
        for (std::size_t b = a + 1; b < thetas.size(); ++b) {
            for (std::size_t i = 0; i < samples; ++i) d[i] = cols[a][i] - cols[b][i];
            ThetaPair p;
            p.theta_a = thetas[a];
            p.theta_b = thetas[b];
            p.diff = detail::sample_mean(d);
            p.std_error = detail::standard_error(d, p.diff);
            p.pass = std::abs(p.diff) <= kSigmaRule * p.std_error;
            rep.pass = rep.pass && p.pass;
            rep.pairs.push_back(p);
        }
    return rep;
}

} // namespace favard
