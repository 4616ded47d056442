#pragma once

/// \file cli.hpp
/// Command dispatch for the `favard` tool. Parsing lives in tools/; this
/// header maps a validated RunConfig onto library calls and serializers so
/// the same paths can be driven from tests.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "favard/estimators.hpp"
#include "favard/geometry.hpp"
#include "favard/io.hpp"
#include "favard/model.hpp"
#include "favard/rng.hpp"
#include "favard/verify.hpp"

namespace favard::cli {

enum class Model { disk, quarter_corner };
enum class Format { csv, json, svg };

enum ExitCode : int { kOk = 0, kFailedVerification = 1, kUsage = 2 };

/// Thrown for invalid configurations; maps to exit status 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Model parse_model(const std::string& s)
{
    if (s == "disk") return Model::disk;
    if (s == "quarter-corner") return Model::quarter_corner;
    throw UsageError("unknown model '" + s + "' (expected disk|quarter-corner)");
}

inline Format parse_format(const std::string& s)
{
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    if (s == "svg") return Format::svg;
    throw UsageError("unknown format '" + s + "' (expected csv|json|svg)");
}

struct RunConfig {
    std::string command;
    int depth = 4;
    std::optional<int> gen;
    double theta = 0.0;
    std::optional<int> theta_grid;
    std::optional<std::size_t> samples;
    std::uint64_t seed = 0;
    TreeMode mode = TreeMode::independent;
    Model model = Model::disk;
    Format format = Format::csv;
    std::string out;
    std::string check = "all";
    std::string quantity = "dk";
    unsigned workers = 0;

    [[nodiscard]] int generation() const { return gen.value_or(depth); }
};

/// Defaults: 2000 samples up to n = 6, 500 for n = 7, 8, and 200 beyond.
[[nodiscard]] inline std::size_t default_samples(int n)
{
    return n <= 6 ? 2000 : n <= 8 ? 500 : 200;
}

inline constexpr int kDefaultFavardGrid = 180;

inline void validate(const RunConfig& c)
{
    static const std::vector<std::string> commands = {"generate", "project", "favard", "estimate", "decay", "verify", "render"};
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
        throw UsageError("unknown command '" + c.command + "'");
    if (c.depth < 0 || c.depth > kMaxDepth) throw UsageError("--depth must be in [0, " + std::to_string(kMaxDepth) + "]");
    if (c.gen && (*c.gen < 0 || *c.gen > kMaxDepth)) throw UsageError("--gen must be in [0, 15]");
    if (c.gen && *c.gen > c.depth) throw UsageError("--gen exceeds --depth");
    if (c.samples && *c.samples < 1) throw UsageError("--samples must be >= 1");
    if (c.theta_grid && *c.theta_grid < 1) throw UsageError("--theta-grid must be >= 1");
    if (c.mode == TreeMode::per_level && c.model != Model::disk) throw UsageError("--mode per-level requires --model disk");
    if (c.model == Model::quarter_corner && c.generation() < 1) throw UsageError("quarter-corner sets need --depth >= 1");
}

namespace detail {

inline io::Metadata metadata(const RunConfig& c, std::initializer_list<std::pair<std::string, std::string>> extra = {})
{
    io::Metadata m = {{"command", c.command},
                      {"model", c.model == Model::disk ? "disk" : "quarter-corner"},
                      {"mode", to_string(c.mode)},
                      {"depth", std::to_string(c.depth)},
                      {"gen", std::to_string(c.generation())},
                      {"seed", std::to_string(c.seed)}};
    for (const auto& kv : extra) m.push_back(kv);
    return m;
}

inline void emit_json(std::ostream& os, const io::json& j)
{
    os << j.dump(2) << '\n';
}

inline DiskSet disk_generation(const RunConfig& c)
{
    if (c.depth == 0) return unit_disk_set();
    return build_generation(AngleTree::sample(c.depth, SeedKey(c.seed), c.mode), c.generation());
}

inline int cmd_generate(const RunConfig& c, std::ostream& os)
{
    const auto meta = metadata(c);
    if (c.model == Model::disk) {
        const DiskSet s = disk_generation(c);
        if (c.format == Format::csv) io::write_csv(os, s, meta);
        else if (c.format == Format::json) emit_json(os, io::to_json(s, meta));
        else os << io::render_svg(s, meta);
    } else {
        const SquareSet s = quarter_corner(c.generation());
        if (c.format == Format::csv) io::write_csv(os, s, meta);
        else if (c.format == Format::json) emit_json(os, io::to_json(s, meta));
        else os << io::render_svg(s, meta);
    }
    return kOk;
}

inline int cmd_render(const RunConfig& c, std::ostream& os)
{
    if (favard::detail::pow4(c.generation()) > io::kMaxRenderElements) throw UsageError("render: generation too large (more than 1e6 elements)");
    RunConfig svg = c;
    svg.format = Format::svg;
    return cmd_generate(svg, os);
}

inline int cmd_project(const RunConfig& c, std::ostream& os)
{
    const int k = c.generation();
    double length = 0.0;
    if (c.model == Model::disk)
        length = c.depth == 0 ? 2.0 : projection_length(AngleTree::sample(c.depth, SeedKey(c.seed), c.mode), k, c.theta);
    else
        length = projection_length(quarter_corner(k), c.theta);
    const auto meta = metadata(c, {{"theta", io::format_double(c.theta)}});
    if (c.format == Format::json) {
        emit_json(os, {{"meta", io::meta_json(meta)}, {"n", c.depth}, {"k", k}, {"theta", c.theta}, {"length", length}});
    } else {
        io::write_csv_meta(os, meta);
        os << "n,k,theta,length\n" << c.depth << ',' << k << ',' << io::format_double(c.theta) << ','
           << io::format_double(length) << '\n';
    }
    return kOk;
}

inline int cmd_favard(const RunConfig& c, std::ostream& os)
{
    const int k = c.generation();
    const int grid = c.theta_grid.value_or(kDefaultFavardGrid);
    double fav = 0.0;
    if (c.model == Model::disk)
        fav = c.depth == 0 ? favard_length(unit_disk_set(), grid)
                           : favard_length(AngleTree::sample(c.depth, SeedKey(c.seed), c.mode), k, grid, c.workers);
    else
        fav = favard_length(quarter_corner(k), grid, c.workers);
    const auto meta = metadata(c, {{"grid", std::to_string(grid)}});
    if (c.format == Format::json) {
        emit_json(os, {{"meta", io::meta_json(meta)}, {"n", c.depth}, {"k", k}, {"grid", grid}, {"favard_length", fav}});
    } else {
        io::write_csv_meta(os, meta);
        os << "n,k,grid,favard_length\n" << c.depth << ',' << k << ',' << grid << ',' << io::format_double(fav) << '\n';
    }
    return kOk;
}

inline int cmd_estimate(const RunConfig& c, std::ostream& os)
{
    if (c.model != Model::disk) throw UsageError("estimate supports --model disk only");
    const SeedKey key(c.seed);
    const int n = c.depth;
    const int k = c.generation();
    const std::size_t samples = c.samples.value_or(default_samples(n));

    if (c.quantity == "dk" || c.quantity == "favard") {
        Estimate e;
        std::optional<double> theta;
        io::Metadata meta;
        if (c.quantity == "dk") {
            e = estimate_Dk(n, k, c.theta, samples, key, c.mode, c.workers);
            theta = c.theta;
            meta = metadata(c, {{"quantity", "dk"}, {"theta", io::format_double(c.theta)}, {"samples", std::to_string(samples)}});
        } else {
            const int grid = c.theta_grid.value_or(kDefaultFavardGrid);
            e = estimate_favard(n, samples, grid, key, c.mode, c.workers);
            meta = metadata(c, {{"quantity", "favard"}, {"grid", std::to_string(grid)}, {"samples", std::to_string(samples)}});
        }
        const int kk = c.quantity == "dk" ? k : n;
        if (c.format == Format::json) {
            emit_json(os, {{"meta", io::meta_json(meta)}, {"estimate", io::to_json(e, n, kk, theta)}});
        } else {
            io::write_csv_meta(os, meta);
            os << io::kEstimateHeader << '\n';
            io::write_estimate_row(os, e, n, kk, theta ? io::format_double(*theta) : std::string{});
        }
        return kOk;
    }
    if (c.quantity == "recursion") {
        const auto r = verify_recursion(n, samples, key, c.theta, c.mode, kRecursionConstant, c.workers);
        const auto meta = metadata(c, {{"quantity", "recursion"}, {"theta", io::format_double(c.theta)}, {"samples", std::to_string(samples)}});
        if (c.format == Format::json) emit_json(os, io::to_json(r, meta));
        else io::write_csv(os, r, meta);
        return r.all_pass() ? kOk : kFailedVerification;
    }
    if (c.quantity == "overlap") {
        if (k < 1) throw UsageError("overlap needs --gen >= 1");
        const auto r = check_overlap_bound(k, samples, key, c.workers);
        const auto meta = metadata(c, {{"quantity", "overlap"}, {"samples", std::to_string(samples)}});
        if (c.format == Format::json) {
            emit_json(os, io::to_json(r, meta));
        } else {
            io::write_csv_meta(os, meta);
            os << io::kEstimateHeader << '\n';
            io::write_estimate_row(os, r.overlap, k, k, "0.0");
            io::write_estimate_row(os, r.reference, k - 1, k - 1, "0.0");
        }
        return r.pass ? kOk : kFailedVerification;
    }
    throw UsageError("unknown quantity '" + c.quantity + "' (expected dk|favard|recursion|overlap)");
}

inline int cmd_decay(const RunConfig& c, std::ostream& os)
{
    if (c.model != Model::disk) throw UsageError("decay supports --model disk only");
    const int grid = c.theta_grid.value_or(kDefaultFavardGrid);
    const std::size_t samples = c.samples.value_or(default_samples(c.depth));
    const auto t = decay_table(c.depth, samples, grid, SeedKey(c.seed), c.mode, c.workers);
    const auto meta = metadata(c, {{"grid", std::to_string(grid)}, {"samples", std::to_string(samples)}});
    if (c.format == Format::json) emit_json(os, io::to_json(t, meta));
    else io::write_csv(os, t, meta);
    return kOk;
}

inline std::vector<VerificationReport> run_checks(const RunConfig& c)
{
    const std::string& which = c.check;
    const bool all = which == "all";
    static const std::vector<std::string> known = {"all", "at-most-two", "shift", "jacobian", "nesting", "triple-hit"};
    if (std::find(known.begin(), known.end(), which) == known.end())
        throw UsageError("unknown check '" + which + "'");
    std::vector<VerificationReport> out;
    if (all || which == "at-most-two") out.push_back(check_at_most_two(10'000));
    if (all || which == "shift") out.push_back(check_shift_lemma(c.gen.value_or(4), 100, SeedKey(c.seed).split("shift")));
    if (all || which == "jacobian") out.push_back(check_jacobian_bound(100'001));
    if (all || which == "nesting") {
        if (c.depth < 1) throw UsageError("nesting needs --depth >= 1");
        const AngleTree tree = AngleTree::sample(c.depth, SeedKey(c.seed), c.mode);
        for (int k = 1; k <= c.depth; ++k) out.push_back(check_nesting(tree, k));
    }
    if (all || which == "triple-hit") {
        out.push_back(find_triple_hit(std::max(2, c.gen.value_or(2)), c.theta_grid.value_or(720), 4096));
        out.push_back(find_triple_hit_disks(10'000));
    }
    return out;
}

inline int cmd_verify(const RunConfig& c, std::ostream& os)
{
    const auto reports = run_checks(c);
    bool ok = true;
    for (const auto& r : reports) ok = ok && r.pass;
    if (c.format == Format::csv) {
        io::write_csv_meta(os, metadata(c, {{"check", c.check}}));
        os << "check,observed,location,deviation,tolerance,pass\n";
        for (const auto& r : reports)
            os << r.check << ',' << io::format_double(r.observed) << ',' << io::format_double(r.location) << ','
               << io::format_double(r.deviation) << ',' << io::format_double(r.tolerance) << ','
               << (r.pass ? "true" : "false") << '\n';
    } else {
        io::json arr = io::json::array();
        for (const auto& r : reports) arr.push_back(io::to_json(r));
        emit_json(os, {{"meta", io::meta_json(metadata(c, {{"check", c.check}}))}, {"reports", std::move(arr)}, {"pass", ok}});
    }
    return ok ? kOk : kFailedVerification;
}

} // namespace detail

/// Execute one command, writing its artifact to `os` and diagnostics to
/// `err`. Returns the process exit status.
inline int run(const RunConfig& c, std::ostream& os, std::ostream& err)
{
    try {
        validate(c);
        if (c.command == "generate") return detail::cmd_generate(c, os);
        if (c.command == "render") return detail::cmd_render(c, os);
        if (c.command == "project") return detail::cmd_project(c, os);
        if (c.command == "favard") return detail::cmd_favard(c, os);
        if (c.command == "estimate") return detail::cmd_estimate(c, os);
        if (c.command == "decay") return detail::cmd_decay(c, os);
        if (c.command == "verify") return detail::cmd_verify(c, os);
        throw UsageError("unknown command '" + c.command + "'");
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
    }
    return kUsage;
}

} // namespace favard::cli
