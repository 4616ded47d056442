#pragma once

/// \file model.hpp
/// Finite generations of the random Cantor disk model, the per-level
/// (one angle per depth) variant, and the deterministic 1/4-corner squares.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "favard/rng.hpp"

namespace favard {

using Point = std::complex<double>;

enum class TreeMode { independent, per_level };

inline const char* to_string(TreeMode m) noexcept
{
    return m == TreeMode::independent ? "independent" : "per-level";
}

inline TreeMode parse_tree_mode(const std::string& s)
{
    if (s == "independent") return TreeMode::independent;
    if (s == "per-level") return TreeMode::per_level;
    throw std::invalid_argument("unknown mode '" + s + "' (expected independent|per-level)");
}

namespace detail {

// Number of nodes in a full 4-ary tree of height h: (4^h - 1) / 3.
constexpr std::uint64_t tree_size(int height) noexcept
{
    return (pow4(height) - 1) / 3;
}

} // namespace detail

/// Rooted 4-ary tree of rotation angles, stored level by level in the
/// k-depth enumeration order.
class AngleTree {
  public:
    /// Draw a height-n tree. In per-level mode every node at depth d carries
    /// the angle of node (d, 1).
    static AngleTree sample(int n, const SeedKey& key, TreeMode mode = TreeMode::independent)
    {
        check_height(n);
        AngleTree t(n, mode);
        for (int d = 1; d <= n; ++d) {
            const std::uint64_t width = detail::pow4(d - 1);
            double* level = t.angles_.data() + detail::tree_size(d - 1);
            if (mode == TreeMode::per_level) {
                const double a = derive_angle(key, {d, 1});
                for (std::uint64_t j = 0; j < width; ++j) level[j] = a;
            } else {
                for (std::uint64_t j = 0; j < width; ++j) level[j] = derive_angle(key, {d, j + 1});
            }
        }
        return t;
    }

    /// Build from explicit levels; levels[d-1] must hold 4^(d-1) angles in
    /// [0, pi/2].
    static AngleTree from_levels(const std::vector<std::vector<double>>& levels,
                                 TreeMode mode = TreeMode::independent)
    {
        check_height(static_cast<int>(levels.size()));
        AngleTree t(static_cast<int>(levels.size()), mode);
        for (std::size_t d = 0; d < levels.size(); ++d) {
            if (levels[d].size() != detail::pow4(static_cast<int>(d)))
                throw std::domain_error("AngleTree: level " + std::to_string(d + 1) +
                                        " must hold 4^" + std::to_string(d) + " angles");
            for (std::size_t j = 0; j < levels[d].size(); ++j) {
                const double a = levels[d][j];
                if (!(a >= 0.0 && a <= kHalfPi))
                    throw std::domain_error("AngleTree: angle outside [0, pi/2]");
                t.angles_[detail::tree_size(static_cast<int>(d)) + j] = a;
            }
        }
        return t;
    }

    /// Every node at depth d gets angles_per_depth[d-1].
    static AngleTree constant_per_level(const std::vector<double>& angles_per_depth,
                                        TreeMode mode = TreeMode::per_level)
    {
        std::vector<std::vector<double>> levels;
        for (std::size_t d = 0; d < angles_per_depth.size(); ++d)
            levels.emplace_back(detail::pow4(static_cast<int>(d)), angles_per_depth[d]);
        return from_levels(levels, mode);
    }

    [[nodiscard]] int depth() const noexcept { return depth_; }
    [[nodiscard]] TreeMode mode() const noexcept { return mode_; }
    [[nodiscard]] std::size_t size() const noexcept { return angles_.size(); }

    [[nodiscard]] double angle(int depth, std::uint64_t index) const
    {
        if (depth < 1 || depth > depth_ || index < 1 || index > detail::pow4(depth - 1))
            throw std::domain_error("AngleTree: node out of range");
        return angles_[detail::tree_size(depth - 1) + index - 1];
    }
    [[nodiscard]] double angle(NodePath p) const { return angle(p.depth, p.index); }

    /// Unchecked access for the hot generation loops.
    [[nodiscard]] const double* level(int depth) const noexcept
    {
        return angles_.data() + detail::tree_size(depth - 1);
    }

    /// The subtree rooted at `root`, re-indexed so that `root` becomes (1, 1).
    [[nodiscard]] AngleTree subtree(NodePath root) const
    {
        if (!root.valid() || root.depth > depth_) throw std::domain_error("AngleTree: bad subtree root");
        AngleTree t(depth_ - root.depth + 1, mode_);
        for (int d = 1; d <= t.depth_; ++d) {
            const std::uint64_t width = detail::pow4(d - 1);
            const std::uint64_t first = (root.index - 1) * width; // 0-based, at depth root.depth+d-1
            const double* src = level(root.depth + d - 1) + first;
            std::copy(src, src + width, t.angles_.begin() + static_cast<std::ptrdiff_t>(detail::tree_size(d - 1)));
        }
        return t;
    }

    [[nodiscard]] AngleTree truncated(int height) const
    {
        if (height < 1 || height > depth_) throw std::domain_error("AngleTree: bad truncation height");
        AngleTree t(height, mode_);
        std::copy(angles_.begin(), angles_.begin() + static_cast<std::ptrdiff_t>(t.angles_.size()), t.angles_.begin());
        return t;
    }

    /// Copy with one node's angle replaced.
    [[nodiscard]] AngleTree with_angle(NodePath p, double a) const
    {
        (void)angle(p);
        if (!(a >= 0.0 && a <= kHalfPi)) throw std::domain_error("AngleTree: angle outside [0, pi/2]");
        AngleTree t = *this;
        t.angles_[detail::tree_size(p.depth - 1) + p.index - 1] = a;
        return t;
    }

  private:
    AngleTree(int n, TreeMode mode) : depth_(n), mode_(mode), angles_(detail::tree_size(n)) {}

    static void check_height(int n)
    {
        if (n < 1) throw std::domain_error("AngleTree: height must be >= 1");
        if (n > kMaxDepth) throw std::domain_error("AngleTree: height exceeds depth cap");
    }

    int depth_;
    TreeMode mode_;
    std::vector<double> angles_;
};

[[nodiscard]] inline AngleTree sample_tree(int n, const SeedKey& key, TreeMode mode = TreeMode::independent)
{
    return AngleTree::sample(n, key, mode);
}

/// i^alpha * e^{-i omega}: quarter turns are applied exactly by swapping
/// components, so the unrotated sibling positions carry no rounding.
[[nodiscard]] inline Point unit_offset(int alpha, double omega)
{
    const double c = std::cos(omega);
    const double s = -std::sin(omega);
    switch (alpha & 3) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
    }
}

/// z/4 + (3/4) e^{(alpha pi/2 - omega) i}
[[nodiscard]] inline Point transform(Point z, int alpha, double omega)
{
    if (alpha < 0 || alpha > 3) throw std::domain_error("transform: alpha must be in {0,1,2,3}");
    return 0.25 * z + 0.75 * unit_offset(alpha, omega);
}

struct DiskId {
    int depth = 0;
    std::uint64_t number = 1;
    friend bool operator==(const DiskId&, const DiskId&) = default;
};

/// A disk of generation `id.depth`; its radius is 4^-depth exactly.
struct Disk {
    Point center;
    DiskId id;

    [[nodiscard]] double radius() const noexcept { return std::ldexp(1.0, -2 * id.depth); }
};

struct DiskSet {
    int depth = 0;
    std::vector<Disk> disks;

    [[nodiscard]] std::size_t size() const noexcept { return disks.size(); }
};

struct Square {
    Point corner; // lower-left
    DiskId id;

    [[nodiscard]] double side() const noexcept { return std::ldexp(1.0, -2 * id.depth); }
};

struct SquareSet {
    int depth = 0;
    std::vector<Square> squares;

    [[nodiscard]] std::size_t size() const noexcept { return squares.size(); }
};

/// The four disks of depth k replacing disk j of depth k-1, whose centre is
/// `attach_center`.
[[nodiscard]] inline std::vector<Disk> omega_set(int k, std::uint64_t j, double omega, Point attach_center)
{
    if (k < 1 || k > kMaxDepth) throw std::domain_error("omega_set: k out of range");
    if (j < 1 || j > detail::pow4(k - 1)) throw std::domain_error("omega_set: j out of range");
    const double arm = 0.75 * std::ldexp(1.0, -2 * (k - 1));
    std::vector<Disk> out;
    out.reserve(4);
    for (int a = 0; a < 4; ++a)
        out.push_back({attach_center + arm * unit_offset(a, omega), {k, 4 * j - 3 + static_cast<std::uint64_t>(a)}});
    return out;
}

namespace detail {

template <class Visitor>
void visit_disks(const AngleTree& tree, int k, int d, std::uint64_t j, Point c, Visitor& visit)
{
    // (d, j) is the disk being refined; its children live at depth d + 1.
    const double omega = tree.level(d + 1)[j - 1];
    const double arm = 0.75 * std::ldexp(1.0, -2 * d);
    for (int a = 0; a < 4; ++a) {
        const Point child = c + arm * unit_offset(a, omega);
        const std::uint64_t cj = 4 * j - 3 + static_cast<std::uint64_t>(a);
        if (d + 1 == k)
            visit(Disk{child, {k, cj}});
        else
            visit_disks(tree, k, d + 1, cj, child, visit);
    }
}

} // namespace detail

/// Walk the disks of generation k depth-first, in k-depth enumeration order,
/// without materializing intermediate generations.
template <class Visitor>
void for_each_disk(const AngleTree& tree, int k, Visitor&& visit)
{
    if (k < 0) throw std::domain_error("build_generation: k must be >= 0");
    if (k > tree.depth()) throw std::domain_error("build_generation: k exceeds tree depth");
    if (k == 0) {
        visit(Disk{Point{0.0, 0.0}, {0, 1}});
        return;
    }
    detail::visit_disks(tree, k, 0, 1, Point{0.0, 0.0}, visit);
}

[[nodiscard]] inline DiskSet unit_disk_set()
{
    return DiskSet{0, {Disk{Point{0.0, 0.0}, {0, 1}}}};
}

[[nodiscard]] inline DiskSet build_generation(const AngleTree& tree, int k)
{
    DiskSet out;
    out.depth = k;
    if (k >= 0 && k <= tree.depth()) out.disks.reserve(detail::pow4(k));
    for_each_disk(tree, k, [&](const Disk& d) { out.disks.push_back(d); });
    return out;
}

/// Scale a set by 1/4 and translate it to `origin`, shifting ids one level
/// down. This is the zoom that turns D_{k-1} of a subtree into one compass
/// part of D_k.
[[nodiscard]] inline DiskSet zoom_into(const DiskSet& s, Point origin)
{
    DiskSet out;
    out.depth = s.depth + 1;
    out.disks.reserve(s.disks.size());
    for (const Disk& d : s.disks) out.disks.push_back({origin + 0.25 * d.center, {d.id.depth + 1, d.id.number}});
    return out;
}

/// Compass part alpha of D_k: the subtree `sub` (height >= k-1) hung under
/// the first-level disk alpha, whose position is set by `root_angle`.
/// Ids are local to the part (1 .. 4^(k-1)).
[[nodiscard]] inline DiskSet compass_part(double root_angle, int alpha, const AngleTree& sub, int k)
{
    if (k < 1) throw std::domain_error("compass_part: k must be >= 1");
    const DiskSet inner = k == 1 ? unit_disk_set() : build_generation(sub, k - 1);
    return zoom_into(inner, transform(Point{0.0, 0.0}, alpha, root_angle));
}

/// Deterministic 1/4-corner Cantor squares in [0,1]^2. Children of a square
/// are numbered alpha = 0..3 at corners (0,0), (3/4,0), (0,3/4), (3/4,3/4)
/// relative to the parent.
namespace detail {
inline const Point kSquareCorner[4] = {{0.0, 0.0}, {0.75, 0.0}, {0.0, 0.75}, {0.75, 0.75}};
} // namespace detail

[[nodiscard]] inline SquareSet quarter_corner(int k)
{
    if (k < 1) throw std::domain_error("quarter_corner: k must be >= 1");
    if (k > kMaxDepth) throw std::domain_error("quarter_corner: k exceeds depth cap");
    SquareSet out{k, {}};
    out.squares.reserve(detail::pow4(k));
    auto rec = [&](auto& self, int d, std::uint64_t j, Point corner) -> void {
        const double side = std::ldexp(1.0, -2 * d); // parent side
        for (int a = 0; a < 4; ++a) {
            const Point c = corner + side * detail::kSquareCorner[a];
            const std::uint64_t cj = 4 * j - 3 + static_cast<std::uint64_t>(a);
            if (d + 1 == k)
                out.squares.push_back({c, {k, cj}});
            else
                self(self, d + 1, cj, c);
        }
    };
    rec(rec, 0, 1, Point{0.0, 0.0});
    return out;
}

} // namespace favard
