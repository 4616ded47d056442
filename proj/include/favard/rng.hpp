#pragma once

/// \file rng.hpp
/// Counter-based keyed randomness for angle trees.
///
/// Every node of an angle tree gets its angle from a pure function of
/// (stream key, depth, index). There is no generator state, so samples can be
/// produced in any order, on any number of workers, and a subtree can be
/// regenerated on its own with identical angles.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace favard {

/// Deepest supported generation. 4^15 disks is the most that is still
/// enumerable with 64-bit ids and a packed (depth, index) counter.
inline constexpr int kMaxDepth = 15;

inline constexpr double kHalfPi = std::numbers::pi / 2.0;

namespace detail {

// Stafford "mix13" finalizer, as used by SplitMix64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view bytes) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t pow4(int e) noexcept
{
    return std::uint64_t{1} << (2 * e);
}

} // namespace detail

/// Position of a node in the 4-ary angle tree: depth k >= 1 and the 1-based
/// index j in [1, 4^(k-1)]. The children of (k, j) are (k+1, 4j-3+alpha).
struct NodePath {
    int depth = 1;
    std::uint64_t index = 1;

    [[nodiscard]] constexpr bool valid() const noexcept
    {
        return depth >= 1 && depth <= kMaxDepth && index >= 1 &&
               index <= detail::pow4(depth - 1);
    }

    [[nodiscard]] constexpr NodePath child(int alpha) const noexcept
    {
        return {depth + 1, 4 * index - 3 + static_cast<std::uint64_t>(alpha)};
    }

    [[nodiscard]] constexpr NodePath parent() const noexcept
    {
        return {depth - 1, (index + 3) / 4};
    }

    friend constexpr bool operator==(const NodePath&, const NodePath&) = default;
};

/// A master seed plus a hierarchical stream label. Two keys with the same
/// seed and the same split history derive the same angles.
class SeedKey {
  public:
    explicit SeedKey(std::uint64_t master_seed = 0)
        : master_seed_(master_seed), stream_(detail::mix64(master_seed ^ 0x6a09e667f3bcc909ULL))
    {
    }

    [[nodiscard]] std::uint64_t master_seed() const noexcept { return master_seed_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

    /// Derive a child stream. The stream id chains hashes, so
    /// split(split(k, "a"), "b") differs from split(k, "a/b") even though
    /// both print the same label path.
    [[nodiscard]] SeedKey split(std::string_view label) const
    {
        SeedKey out = *this;
        out.stream_ = detail::mix64(stream_ + 0x9e3779b97f4a7c15ULL * (detail::fnv1a(label) | 1));
        out.label_ = label_.empty() ? std::string(label) : label_ + "/" + std::string(label);
        return out;
    }

    /// "seed=0x...;stream=<label path>"
    [[nodiscard]] std::string descriptor() const
    {
        char buf[17] = {};
        auto res = std::to_chars(buf, buf + 16, master_seed_, 16);
        std::string s = "seed=0x" + std::string(buf, res.ptr);
        if (!label_.empty()) s += ";stream=" + label_;
        return s;
    }

    friend bool operator==(const SeedKey& a, const SeedKey& b) noexcept
    {
        return a.master_seed_ == b.master_seed_ && a.stream_ == b.stream_;
    }

  private:
    std::uint64_t master_seed_;
    std::uint64_t stream_;
    std::string label_;
};

/// Raw 64-bit draw for a node; exposed for tests.
[[nodiscard]] inline std::uint64_t derive_bits(const SeedKey& key, NodePath path)
{
    if (!path.valid()) throw std::domain_error("derive_angle: invalid node path");
    const std::uint64_t counter = (static_cast<std::uint64_t>(path.depth) << 56) | path.index;
    return detail::mix64(key.stream() ^ detail::mix64(counter + 0x9e3779b97f4a7c15ULL));
}

/// Uniform angle in [0, pi/2) for one tree node. Uses the top 53 bits so the
/// mapping has no modulo bias.
[[nodiscard]] inline double derive_angle(const SeedKey& key, NodePath path)
{
    const double u = static_cast<double>(derive_bits(key, path) >> 11) * 0x1.0p-53;
    const double a = u * kHalfPi;
    return a < kHalfPi ? a : std::nextafter(kHalfPi, 0.0);
}

[[nodiscard]] inline SeedKey split(const SeedKey& key, std::string_view label)
{
    return key.split(label);
}

/// Parse a master seed given as decimal or 0x-prefixed hex.
[[nodiscard]] inline std::uint64_t parse_seed(std::string_view text)
{
    int base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        text.remove_prefix(2);
        base = 16;
    }
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("invalid seed: expected decimal or 0x-prefixed hex");
    return value;
}

} // namespace favard
