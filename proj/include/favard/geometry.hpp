#pragma once

/// \file geometry.hpp
/// Projections of disk and square families onto lines, exact union measure
/// of interval families, overlaps, covering multiplicity, and the midpoint
/// Favard quadrature.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "favard/detail/numeric.hpp"
#include "favard/detail/parallel.hpp"
#include "favard/model.hpp"

namespace favard {

/// Closed interval [lo, hi] on a projection line.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double length() const noexcept { return hi - lo; }
    [[nodiscard]] bool contains(double t) const noexcept { return lo <= t && t <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Unit direction of the projection line l_theta.
[[nodiscard]] inline Point direction(double theta)
{
    return {std::cos(theta), std::sin(theta)};
}

[[nodiscard]] inline double project_point(Point p, Point u) noexcept
{
    return p.real() * u.real() + p.imag() * u.imag();
}

[[nodiscard]] inline Interval project_disk(const Disk& d, double theta)
{
    const double c = project_point(d.center, direction(theta));
    const double r = d.radius();
    return {c - r, c + r};
}

[[nodiscard]] inline Interval project_square(const Square& s, double theta)
{
    const Point u = direction(theta);
    const double p0 = project_point(s.corner, u);
    const double side = s.side();
    const double cx = side * u.real();
    const double cy = side * u.imag();
    return {p0 + std::min(0.0, cx) + std::min(0.0, cy), p0 + std::max(0.0, cx) + std::max(0.0, cy)};
}

/// A finite union of closed intervals kept in merged form: sorted, pairwise
/// disjoint, with touching intervals joined.
class IntervalUnion {
  public:
    IntervalUnion() = default;

    /// Normalize an arbitrary (unsorted, overlapping) family. O(m log m).
    static IntervalUnion from(std::vector<Interval> xs)
    {
        for (const Interval& i : xs) {
            if (std::isnan(i.lo) || std::isnan(i.hi)) throw std::domain_error("interval endpoint is NaN");
            if (i.lo > i.hi) throw std::domain_error("interval with lo > hi");
        }
        std::sort(xs.begin(), xs.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        IntervalUnion u;
        for (const Interval& i : xs) {
            if (!u.parts_.empty() && i.lo <= u.parts_.back().hi)
                u.parts_.back().hi = std::max(u.parts_.back().hi, i.hi);
            else
                u.parts_.push_back(i);
        }
        return u;
    }

    static IntervalUnion from(std::span<const Interval> xs)
    {
        return from(std::vector<Interval>(xs.begin(), xs.end()));
    }

    [[nodiscard]] std::span<const Interval> intervals() const noexcept { return parts_; }
    [[nodiscard]] bool empty() const noexcept { return parts_.empty(); }

    [[nodiscard]] double measure() const noexcept
    {
        detail::CompensatedSum s;
        for (const Interval& i : parts_) s.add(i.length());
        return s.value();
    }

    [[nodiscard]] friend IntervalUnion intersection(const IntervalUnion& a, const IntervalUnion& b)
    {
        IntervalUnion out;
        std::size_t i = 0, j = 0;
        while (i < a.parts_.size() && j < b.parts_.size()) {
            const Interval& x = a.parts_[i];
            const Interval& y = b.parts_[j];
            const double lo = std::max(x.lo, y.lo);
            const double hi = std::min(x.hi, y.hi);
            if (lo <= hi) out.parts_.push_back({lo, hi});
            if (x.hi < y.hi)
                ++i;
            else
                ++j;
        }
        return out;
    }

  private:
    std::vector<Interval> parts_;
};

/// Lebesgue measure of the union of an arbitrary interval family.
[[nodiscard]] inline double union_measure(std::span<const Interval> xs)
{
    return IntervalUnion::from(xs).measure();
}

/// Measure of the union of intervals [c - r, c + r] over all centres. Sorts
/// `centres` in place.
[[nodiscard]] inline double equal_radius_union_length(std::vector<double>& centres, double r)
{
    if (centres.empty()) return 0.0;
    std::sort(centres.begin(), centres.end());
    const double width = 2.0 * r;
    detail::CompensatedSum s;
    s.add(width);
    for (std::size_t i = 1; i < centres.size(); ++i) s.add(std::min(centres[i] - centres[i - 1], width));
    return s.value();
}

[[nodiscard]] inline std::vector<Interval> project_all(const DiskSet& s, double theta)
{
    std::vector<Interval> out;
    out.reserve(s.disks.size());
    for (const Disk& d : s.disks) out.push_back(project_disk(d, theta));
    return out;
}

[[nodiscard]] inline std::vector<Interval> project_all(const SquareSet& s, double theta)
{
    std::vector<Interval> out;
    out.reserve(s.squares.size());
    for (const Square& q : s.squares) out.push_back(project_square(q, theta));
    return out;
}

[[nodiscard]] inline IntervalUnion projection(const DiskSet& s, double theta)
{
    return IntervalUnion::from(project_all(s, theta));
}

[[nodiscard]] inline IntervalUnion projection(const SquareSet& s, double theta)
{
    return IntervalUnion::from(project_all(s, theta));
}

/// |proj_theta S|
[[nodiscard]] inline double projection_length(const DiskSet& s, double theta)
{
    return union_measure(project_all(s, theta));
}

[[nodiscard]] inline double projection_length(const SquareSet& s, double theta)
{
    return union_measure(project_all(s, theta));
}

/// |proj_theta D_k(tree)| streamed straight from the tree. All disks share
/// one radius, so only the projected centres are sorted.
[[nodiscard]] inline double projection_length(const AngleTree& tree, int k, double theta)
{
    if (k == 0) return 2.0;
    thread_local std::vector<double> centres;
    centres.clear();
    centres.reserve(detail::pow4(k));
    const Point u = direction(theta);
    for_each_disk(tree, k, [&](const Disk& d) { centres.push_back(project_point(d.center, u)); });
    return equal_radius_union_length(centres, std::ldexp(1.0, -2 * k));
}

/// Projection length of D_1(omega) onto the horizontal axis, in closed form:
/// 2 minus the pairwise overlaps of the four sibling intervals.
[[nodiscard]] inline double closed_form_D1_length(double omega)
{
    const double c = std::cos(omega);
    const double s = std::sin(omega);
    return 2.0 - std::max(0.0, 0.5 - 1.5 * s) - std::max(0.0, 0.5 - 1.5 * c) -
           2.0 * std::max(0.0, 0.5 - 0.75 * std::abs(c - s));
}

/// |(U proj a) ∩ (U proj b)|
[[nodiscard]] inline double overlap_length(const DiskSet& a, const DiskSet& b, double theta)
{
    return intersection(projection(a, theta), projection(b, theta)).measure();
}

/// Number of intervals containing t (closed).
[[nodiscard]] inline int multiplicity(std::span<const Interval> xs, double t) noexcept
{
    int n = 0;
    for (const Interval& i : xs) n += i.contains(t) ? 1 : 0;
    return n;
}

struct MultiplicityPeak {
    int count = 0;
    double at = 0.0;
};

/// Maximum covering multiplicity over the whole line, found by an endpoint
/// sweep. At equal coordinates openings are processed before closings, so
/// closed intervals that merely touch count as overlapping there.
[[nodiscard]] inline MultiplicityPeak max_multiplicity(std::span<const Interval> xs)
{
    struct Event {
        double x;
        int delta;
    };
    std::vector<Event> ev;
    ev.reserve(2 * xs.size());
    for (const Interval& i : xs) {
        ev.push_back({i.lo, +1});
        ev.push_back({i.hi, -1});
    }
    std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
        return a.x < b.x || (a.x == b.x && a.delta > b.delta);
    });
    MultiplicityPeak best;
    int cur = 0;
    for (const Event& e : ev) {
        cur += e.delta;
        if (cur > best.count) best = {cur, e.x};
    }
    return best;
}

/// theta_i = (i + 1/2) pi / grid, i = 0 .. grid-1.
[[nodiscard]] inline double favard_node(int i, int grid) noexcept
{
    return (i + 0.5) * std::numbers::pi / grid;
}

namespace detail {

template <class LengthAt>
double midpoint_favard(int grid, LengthAt&& length_at, unsigned workers)
{
    if (grid < 1) throw std::domain_error("favard_length: grid_size must be >= 1");
    const auto lengths = parallel_map<double>(
        static_cast<std::size_t>(grid), [&](std::size_t i) { return length_at(favard_node(static_cast<int>(i), grid)); },
        workers);
    return compensated_sum(lengths) / grid;
}

} // namespace detail

/// Midpoint-rule Favard length (1/pi) ∫_0^pi |proj_theta S| dtheta.
/// Nodes may be evaluated concurrently; summation is in node order.
[[nodiscard]] inline double favard_length(const DiskSet& s, int grid, unsigned workers = 1)
{
    return detail::midpoint_favard(grid, [&](double th) { return projection_length(s, th); }, workers);
}

[[nodiscard]] inline double favard_length(const SquareSet& s, int grid, unsigned workers = 1)
{
    return detail::midpoint_favard(grid, [&](double th) { return projection_length(s, th); }, workers);
}

[[nodiscard]] inline double favard_length(const AngleTree& tree, int k, int grid, unsigned workers = 1)
{
    if (k == 0) {
        if (grid < 1) throw std::domain_error("favard_length: grid_size must be >= 1");
        return 2.0;
    }
    // Centres are generated once; each node only re-projects them.
    const DiskSet s = build_generation(tree, k);
    const double r = std::ldexp(1.0, -2 * k);
    return detail::midpoint_favard(
        grid,
        [&](double th) {
            thread_local std::vector<double> c;
            c.clear();
            const Point u = direction(th);
            for (const Disk& d : s.disks) c.push_back(project_point(d.center, u));
            return equal_radius_union_length(c, r);
        },
        workers);
}

/// s(psi) = 3/4 (1 - cos psi): how far the projection of an East compass
/// part moves (towards -t) when its parent angle goes from 0 to psi.
[[nodiscard]] inline double shift_s(double psi)
{
    return 0.75 * (1.0 - std::cos(psi));
}

/// |det| of (psi, t) -> (t + s(psi), t + s(psi - pi/2)), i.e.
/// (3/4)|cos psi + sin psi|.
[[nodiscard]] inline double jacobian_det(double psi)
{
    return 0.75 * std::abs(std::cos(psi) + std::sin(psi));
}

} // namespace favard
