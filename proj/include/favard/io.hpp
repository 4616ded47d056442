#pragma once

/// \file io.hpp
/// CSV / JSON / SVG serialization. Floats are written in shortest
/// round-trip form with a '.' separator regardless of locale; integral
/// values keep a trailing ".0" so they still read as floating point.

#include <charconv>
#include <optional>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "favard/estimators.hpp"
#include "favard/model.hpp"
#include "favard/verify.hpp"

namespace favard::io {

using json = nlohmann::ordered_json;

inline constexpr std::size_t kMaxRenderElements = 1'000'000;

[[nodiscard]] inline std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    std::string s(buf, r.ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

/// key=value pairs written as "# k=v ..." before a CSV header and as the
/// "meta" object in JSON.
using Metadata = std::vector<std::pair<std::string, std::string>>;

inline void write_csv_meta(std::ostream& os, const Metadata& meta)
{
    os << "#";
    for (const auto& [k, v] : meta) os << ' ' << k << '=' << v;
    os << '\n';
}

[[nodiscard]] inline json meta_json(const Metadata& meta)
{
    json j = json::object();
    for (const auto& [k, v] : meta) j[k] = v;
    return j;
}

// -- disk and square sets ----------------------------------------------------

inline void write_csv(std::ostream& os, const DiskSet& s, const Metadata& meta)
{
    write_csv_meta(os, meta);
    os << "id,cx,cy,radius\n";
    for (const Disk& d : s.disks)
        os << d.id.number << ',' << format_double(d.center.real()) << ',' << format_double(d.center.imag()) << ','
           << format_double(d.radius()) << '\n';
}

inline void write_csv(std::ostream& os, const SquareSet& s, const Metadata& meta)
{
    write_csv_meta(os, meta);
    os << "id,x,y,side\n";
    for (const Square& q : s.squares)
        os << q.id.number << ',' << format_double(q.corner.real()) << ',' << format_double(q.corner.imag()) << ','
           << format_double(q.side()) << '\n';
}

[[nodiscard]] inline json to_json(const DiskSet& s, const Metadata& meta)
{
    json disks = json::array();
    for (const Disk& d : s.disks)
        disks.push_back({{"id", d.id.number}, {"cx", d.center.real()}, {"cy", d.center.imag()}, {"radius", d.radius()}});
    return {{"meta", meta_json(meta)}, {"depth", s.depth}, {"disks", std::move(disks)}};
}

[[nodiscard]] inline json to_json(const SquareSet& s, const Metadata& meta)
{
    json squares = json::array();
    for (const Square& q : s.squares)
        squares.push_back({{"id", q.id.number}, {"x", q.corner.real()}, {"y", q.corner.imag()}, {"side", q.side()}});
    return {{"meta", meta_json(meta)}, {"depth", s.depth}, {"squares", std::move(squares)}};
}

inline std::string svg_comment(const Metadata& meta)
{
    std::string s = "<!-- favard";
    for (const auto& [k, v] : meta) s += ' ' + k + '=' + v;
    return s + " -->\n";
}

/// Stroke-only SVG, one <circle> per disk in enumeration order. Coordinates
/// are mathematical (y up).
[[nodiscard]] inline std::string render_svg(const DiskSet& s, const Metadata& meta = {})
{
    if (s.disks.size() > kMaxRenderElements)
        throw std::invalid_argument("render: " + std::to_string(s.disks.size()) + " elements exceeds the limit of " +
                                    std::to_string(kMaxRenderElements));
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n";
    out += svg_comment(meta);
    out += "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"black\" stroke-width=\"0.5\">\n";
    for (const Disk& d : s.disks)
        out += "<circle cx=\"" + format_double(d.center.real()) + "\" cy=\"" + format_double(d.center.imag()) +
               "\" r=\"" + format_double(d.radius()) + "\" vector-effect=\"non-scaling-stroke\"/>\n";
    out += "</g>\n</svg>\n";
    return out;
}

[[nodiscard]] inline std::string render_svg(const SquareSet& s, const Metadata& meta = {})
{
    if (s.squares.size() > kMaxRenderElements)
        throw std::invalid_argument("render: " + std::to_string(s.squares.size()) + " elements exceeds the limit of " +
                                    std::to_string(kMaxRenderElements));
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-0.05 -0.05 1.1 1.1\">\n";
    out += svg_comment(meta);
    out += "<g transform=\"matrix(1 0 0 -1 0 1)\" fill=\"none\" stroke=\"black\" stroke-width=\"0.5\">\n";
    for (const Square& q : s.squares) {
        const std::string side = format_double(q.side());
        out += "<rect x=\"" + format_double(q.corner.real()) + "\" y=\"" + format_double(q.corner.imag()) +
               "\" width=\"" + side + "\" height=\"" + side + "\" vector-effect=\"non-scaling-stroke\"/>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

// -- estimates ---------------------------------------------------------------

inline constexpr const char* kEstimateHeader = "label,n,k,theta,mean,stderr,samples,seed";

/// One row of the estimate schema. `theta` is empty for theta-averaged
/// quantities.
inline void write_estimate_row(std::ostream& os, const Estimate& e, int n, int k, const std::string& theta)
{
    os << '"' << e.label << "\"," << n << ',' << k << ',' << theta << ',' << format_double(e.mean) << ','
       << format_double(e.std_error) << ',' << e.samples << ',' << e.seed << '\n';
}

[[nodiscard]] inline json to_json(const Estimate& e, int n, int k, std::optional<double> theta)
{
    json j = {{"label", e.label}, {"n", n}, {"k", k}};
    j["theta"] = theta ? json(*theta) : json(nullptr);
    j["mean"] = e.mean;
    j["stderr"] = e.std_error;
    j["samples"] = e.samples;
    j["seed"] = e.seed;
    return j;
}

inline void write_csv(std::ostream& os, const RecursionReport& r, const Metadata& meta)
{
    write_csv_meta(os, meta);
    os << "k,d_k,d_next,slack,stderr,pass\n";
    for (const auto& row : r.rows)
        os << row.k << ',' << format_double(row.d_k) << ',' << format_double(row.d_next) << ','
           << format_double(row.slack) << ',' << format_double(row.std_error) << ',' << (row.pass ? "true" : "false")
           << '\n';
}

[[nodiscard]] inline json to_json(const RecursionReport& r, const Metadata& meta)
{
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"k", row.k},
                        {"d_k", row.d_k},
                        {"d_next", row.d_next},
                        {"slack", row.slack},
                        {"stderr", row.std_error},
                        {"pass", row.pass}});
    json levels = json::array();
    for (std::size_t i = 0; i < r.levels.size(); ++i)
        levels.push_back(to_json(r.levels[i], r.n, static_cast<int>(i) + 1, r.theta));
    json j = {{"meta", meta_json(meta)}, {"n", r.n}};
    j["c"] = std::isfinite(r.c) ? json(r.c) : json(nullptr);
    j["levels"] = std::move(levels);
    j["rows"] = std::move(rows);
    j["induction_holds"] = r.induction_holds;
    j["pass"] = r.all_pass();
    return j;
}

[[nodiscard]] inline json to_json(const OverlapBoundReport& r, const Metadata& meta)
{
    return {{"meta", meta_json(meta)},
            {"k", r.k},
            {"overlap", to_json(r.overlap, r.k, r.k, 0.0)},
            {"reference", to_json(r.reference, r.k - 1, r.k - 1, 0.0)},
            {"rhs", r.rhs},
            {"stderr", r.std_error},
            {"margin", r.margin},
            {"psi_integral", r.psi_integral},
            {"pass", r.pass}};
}

inline constexpr const char* kDecayHeader = "n,fav,n_fav,stderr,samples,grid,seed";

inline void write_csv(std::ostream& os, const DecayTable& t, const Metadata& meta)
{
    write_csv_meta(os, meta);
    os << kDecayHeader << '\n';
    for (const auto& r : t.rows)
        os << r.n << ',' << format_double(r.fav.mean) << ',' << format_double(r.n_fav) << ','
           << format_double(r.fav.std_error) << ',' << r.fav.samples << ',' << t.grid << ',' << r.fav.seed << '\n';
}

[[nodiscard]] inline json to_json(const DecayTable& t, const Metadata& meta)
{
    json rows = json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"n", r.n},
                        {"fav", r.fav.mean},
                        {"n_fav", r.n_fav},
                        {"stderr", r.fav.std_error},
                        {"n_fav_stderr", r.n_fav_stderr}});
    return {{"meta", meta_json(meta)},
            {"grid", t.grid},
            {"samples", t.samples},
            {"seed", t.seed},
            {"rows", std::move(rows)},
            {"band", {{"from", t.band_from}, {"to", t.band_to}, {"min", t.band_min}, {"max", t.band_max}, {"ratio", t.band_ratio}}},
            {"monotone_violations", t.monotone_violations}};
}

[[nodiscard]] inline json to_json(const ThetaInvarianceReport& r)
{
    json ests = json::array();
    json pairs = json::array();
    for (const auto& e : r.estimates) ests.push_back(to_json(e, r.n, r.n, std::nullopt));
    for (const auto& p : r.pairs)
        pairs.push_back({{"theta_a", p.theta_a}, {"theta_b", p.theta_b}, {"diff", p.diff}, {"stderr", p.std_error}, {"pass", p.pass}});
    return {{"n", r.n}, {"estimates", std::move(ests)}, {"pairs", std::move(pairs)}, {"pass", r.pass}};
}

// -- verification ------------------------------------------------------------

[[nodiscard]] inline json to_json(const VerificationReport& r)
{
    json j = {{"check", r.check},     {"grid", r.grid},           {"observed", r.observed},
              {"location", r.location}, {"deviation", r.deviation}, {"tolerance", r.tolerance},
              {"pass", r.pass}};
    if (r.witness)
        j["witness"] = {{"theta", r.witness->theta}, {"t", r.witness->t}, {"members", r.witness->members}};
    else
        j["witness"] = nullptr;
    return j;
}

} // namespace favard::io
