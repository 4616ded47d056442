#pragma once

/// \file verify.hpp
/// Exact (non-statistical) checks of the geometric facts the decay bound
/// rests on, plus the square-model counterexample.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "favard/geometry.hpp"
#include "favard/model.hpp"
#include "favard/rng.hpp"

namespace favard {

inline constexpr double kExactTolerance = 1e-12;
inline constexpr double kShiftTolerance = 1e-9;
inline const double kJacobianBound = 3.0 * std::numbers::sqrt2 / 4.0;

struct Witness {
    double theta = 0.0;
    double t = 0.0;
    std::vector<std::uint64_t> members; // ids of the hit squares/disks
};

/// Outcome of one check. For bound checks pass means deviation <= tolerance;
/// for existence searches it means a witness was found.
struct VerificationReport {
    std::string check;
    std::string grid;
    double observed = 0.0;  // the headline quantity (max multiplicity, max Jacobian, ...)
    double location = 0.0;  // where it was observed (omega, psi, ...)
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::optional<Witness> witness;
};

/// Uniform grid of `count` points on [0, pi/2], endpoints included.
[[nodiscard]] inline double quarter_grid(int i, int count)
{
    return count <= 1 ? 0.0 : kHalfPi * static_cast<double>(i) / static_cast<double>(count - 1);
}

/// Sibling projections of D_1(omega) onto the horizontal axis.
[[nodiscard]] inline std::vector<Interval> sibling_intervals(double omega)
{
    std::vector<Interval> out;
    for (const Disk& d : omega_set(1, 1, omega, Point{0.0, 0.0})) out.push_back(project_disk(d, 0.0));
    return out;
}

[[nodiscard]] inline MultiplicityPeak sibling_max_multiplicity(double omega)
{
    const auto xs = sibling_intervals(omega);
    return max_multiplicity(xs);
}

/// For every omega on the grid, the exact maximum over t of the number of
/// sibling projections covering t. Pass iff the global maximum is <= 2.
[[nodiscard]] inline VerificationReport check_at_most_two(int omega_grid)
{
    if (omega_grid < 1) throw std::domain_error("check_at_most_two: omega_grid must be >= 1");
    VerificationReport r;
    r.check = "at-most-two";
    r.grid = "omega: " + std::to_string(omega_grid) + " points on [0, pi/2]; t: all interval endpoints";
    r.tolerance = 0.0;
    int best = -1;
    for (int i = 0; i < omega_grid; ++i) {
        const double omega = quarter_grid(i, omega_grid);
        const MultiplicityPeak p = sibling_max_multiplicity(omega);
        if (p.count > best) {
            best = p.count;
            r.location = omega;
        }
    }
    r.observed = best;
    r.deviation = std::max(0, best - 2);
    r.pass = best <= 2;
    return r;
}

/// Pathwise form of the shift lemma. With one subtree shared by every
/// construction, moving the root angle from 0 to psi translates the
/// projection of the East part by -s(psi) and puts the North part at the
/// East part translated by -s(psi - pi/2):
///   proj T_0(psi) + s(psi)        == proj T_0(0)
///   proj T_1(psi) + s(psi - pi/2) == proj T_0(0)
/// Deviation is the largest endpoint mismatch over disks matched by id,
/// which bounds the Hausdorff distance between the two projections.
[[nodiscard]] inline VerificationReport check_shift_lemma(int k, int psi_grid, const SeedKey& key)
{
    if (k < 1) throw std::domain_error("check_shift_lemma: k must be >= 1");
    if (psi_grid < 1) throw std::domain_error("check_shift_lemma: psi_grid must be >= 1");
    const AngleTree tree = AngleTree::sample(std::max(k, 1), key);
    const AngleTree sub = k >= 2 ? tree.subtree({2, 1}) : tree;

    const auto base = project_all(compass_part(0.0, 0, sub, k), 0.0);
    VerificationReport r;
    r.check = "shift";
    r.grid = "k=" + std::to_string(k) + "; psi: " + std::to_string(psi_grid) + " points on [0, pi/2]; " + key.descriptor();
    r.tolerance = kShiftTolerance;
    double worst = 0.0;
    auto compare = [&](const std::vector<Interval>& moved, double shift, double psi) {
        for (std::size_t i = 0; i < base.size(); ++i) {
            const double d = std::max(std::abs(moved[i].lo + shift - base[i].lo), std::abs(moved[i].hi + shift - base[i].hi));
            if (d > worst) {
                worst = d;
                r.location = psi;
            }
        }
    };
    for (int i = 0; i < psi_grid; ++i) {
        const double psi = quarter_grid(i, psi_grid);
        compare(project_all(compass_part(psi, 0, sub, k), 0.0), shift_s(psi), psi);
        compare(project_all(compass_part(psi, 1, sub, k), 0.0), shift_s(psi - kHalfPi), psi);
    }
    r.deviation = worst;
    r.observed = worst;
    r.pass = worst <= kShiftTolerance;
    return r;
}

/// Largest Jacobian of the (psi, t) -> (u, v) substitution on a grid of
/// [0, pi/2]. Pass iff it never exceeds 3 sqrt 2 / 4 and comes within 1e-6
/// of it.
[[nodiscard]] inline VerificationReport check_jacobian_bound(int psi_grid)
{
    if (psi_grid < 2) throw std::domain_error("check_jacobian_bound: psi_grid must be >= 2");
    VerificationReport r;
    r.check = "jacobian";
    r.grid = "psi: " + std::to_string(psi_grid) + " points on [0, pi/2]";
    r.tolerance = kExactTolerance;
    double best = -1.0;
    for (int i = 0; i < psi_grid; ++i) {
        const double psi = quarter_grid(i, psi_grid);
        const double j = jacobian_det(psi);
        if (j > best) {
            best = j;
            r.location = psi;
        }
    }
    r.observed = best;
    r.deviation = std::abs(best - kJacobianBound);
    r.pass = best <= kJacobianBound + kExactTolerance && kJacobianBound - best <= 1e-6;
    return r;
}

/// Every disk of generation k sits inside its parent of generation k-1
/// (closed containment). Deviation is max(|c - c_parent| + r - r_parent).
[[nodiscard]] inline VerificationReport check_nesting(const AngleTree& tree, int k)
{
    if (k < 1 || k > tree.depth()) throw std::domain_error("check_nesting: k out of range");
    const DiskSet parents = build_generation(tree, k - 1);
    const DiskSet children = build_generation(tree, k);
    VerificationReport r;
    r.check = "nesting";
    r.grid = "k=" + std::to_string(k) + "; " + std::to_string(children.size()) + " disks";
    r.tolerance = kExactTolerance;
    double worst = -std::numeric_limits<double>::infinity();
    for (const Disk& c : children.disks) {
        const Disk& p = parents.disks[(c.id.number + 3) / 4 - 1];
        const double excess = std::abs(c.center - p.center) + c.radius() - p.radius();
        if (excess > worst) {
            worst = excess;
            r.location = static_cast<double>(c.id.number);
        }
    }
    r.observed = worst;
    r.deviation = std::max(0.0, worst);
    r.pass = worst <= kExactTolerance;
    return r;
}

/// Slab test: does the line {x : <x, u_theta> = t} meet the closed square?
/// Evaluated from all four corners, independently of project_square.
[[nodiscard]] inline bool line_meets_square(double theta, double t, const Square& s, double margin = 0.0)
{
    const Point u = direction(theta);
    const double side = s.side();
    const std::array<Point, 4> corners = {s.corner, s.corner + Point{side, 0.0}, s.corner + Point{0.0, side},
                                          s.corner + Point{side, side}};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Point& c : corners) {
        const double p = project_point(c, u);
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    return lo + margin < t && t < hi - margin;
}

/// Search lines needle_theta(t) for one that crosses >= 3 squares of the
/// 1/4-corner generation k. theta_i = i pi / theta_grid; t runs over cell
/// midpoints of the projection of the unit square. The first hit in
/// (theta, t) index order is re-checked by the slab test with a 1e-12
/// interior margin before it is reported.
[[nodiscard]] inline VerificationReport find_triple_hit(int k, int theta_grid = 720, int t_grid = 4096)
{
    if (k < 1) throw std::domain_error("find_triple_hit: k must be >= 1");
    if (theta_grid < 1 || t_grid < 1) throw std::domain_error("find_triple_hit: grids must be >= 1");
    const SquareSet squares = quarter_corner(k);
    VerificationReport r;
    r.check = "triple-hit";
    r.grid = "k=" + std::to_string(k) + "; theta: " + std::to_string(theta_grid) + " on [0, pi); t: " +
             std::to_string(t_grid) + " per direction";
    r.tolerance = kExactTolerance;
    for (int i = 0; i < theta_grid; ++i) {
        const double theta = std::numbers::pi * i / theta_grid;
        const auto xs = project_all(squares, theta);
        double lo = xs.front().lo, hi = xs.front().hi;
        for (const Interval& x : xs) {
            lo = std::min(lo, x.lo);
            hi = std::max(hi, x.hi);
        }
        for (int j = 0; j < t_grid; ++j) {
            const double t = lo + (j + 0.5) * (hi - lo) / t_grid;
            if (multiplicity(xs, t) < 3) continue;
            Witness w{theta, t, {}};
            for (const Square& s : squares.squares)
                if (line_meets_square(theta, t, s, kExactTolerance)) w.members.push_back(s.id.number);
            if (w.members.size() < 3) continue;
            r.observed = static_cast<double>(w.members.size());
            r.location = theta;
            r.witness = std::move(w);
            r.pass = true;
            return r;
        }
    }
    return r;
}

/// The disk counterpart at theta = 0: scan each sibling group D_1(omega)
/// for a point covered three times. Here pass means no such point exists.
[[nodiscard]] inline VerificationReport find_triple_hit_disks(int omega_grid)
{
    if (omega_grid < 1) throw std::domain_error("find_triple_hit_disks: omega_grid must be >= 1");
    VerificationReport r;
    r.check = "triple-hit-disks";
    r.grid = "omega: " + std::to_string(omega_grid) + " points on [0, pi/2]; theta=0; t: all interval endpoints";
    r.tolerance = 0.0;
    r.pass = true;
    for (int i = 0; i < omega_grid; ++i) {
        const double omega = quarter_grid(i, omega_grid);
        const auto xs = sibling_intervals(omega);
        const MultiplicityPeak p = max_multiplicity(xs);
        r.observed = std::max(r.observed, static_cast<double>(p.count));
        if (p.count >= 3) {
            Witness w{0.0, p.at, {}};
            for (std::size_t a = 0; a < xs.size(); ++a)
                if (xs[a].contains(p.at)) w.members.push_back(a + 1);
            r.location = omega;
            r.witness = std::move(w);
            r.pass = false;
            return r;
        }
    }
    return r;
}

} // namespace favard
