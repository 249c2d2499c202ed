#pragma once

// File formats: versioned JSON for trellises and link parameters, CSV for
// contours, profiles, histograms, rate sweeps, SNR sweeps and symbol frames,
// hexadecimal text for shaper indices.
//
// Trellis JSON (version 1):
//   { "format": "klss-trellis", "version": 1, "kind": "ess" | "kess",
//     "N": int, "alphabet_levels": int, "e_max": int|null, "k4_max": int|null,
//     "cardinality": "<decimal>",
//     "layers": [ [ [e, "<count>"], ... ], ... ]          (ess)
//     "layers": [ [ [e, k, "<count>"], ... ], ... ] }     (kess)
// Layer n lists its stored nodes in ascending order; counts are decimal
// strings since they exceed 64 bits.

#include "klss/analytics.hpp"
#include "klss/ess.hpp"
#include "klss/kess.hpp"
#include "klss/nli.hpp"
#include "klss/pas.hpp"
#include "klss/setsearch.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cstdio>
#include <ostream>

namespace klss::io {

using nlohmann::json;

inline constexpr int trellis_format_version = 1;

inline std::string to_hex(const BigCount& v)
{
    if (v < 0) throw std::invalid_argument("to_hex: negative value");
    if (v == 0) return "0";
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    BigCount x = v;
    while (x > 0) {
        s.push_back(digits[static_cast<unsigned>(x & 0xF)]);
        x >>= 4;
    }
    return {s.rbegin(), s.rend()};
}

inline BigCount from_hex(std::string_view text)
{
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = text.size();
    while (j > i && std::isspace(static_cast<unsigned char>(text[j - 1]))) --j;
    text = text.substr(i, j - i);
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) text.remove_prefix(2);
    if (text.empty()) throw std::invalid_argument("empty hexadecimal index");
    BigCount v = 0;
    for (char c : text) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else throw std::invalid_argument("invalid hexadecimal digit '" + std::string(1, c) + "'");
        v <<= 4;
        v += d;
    }
    return v;
}

inline json optional_to_json(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }
inline std::optional<std::int64_t> optional_from_json(const json& j)
{
    if (j.is_null()) return std::nullopt;
    return j.get<std::int64_t>();
}

inline json to_json(const EssTrellis& t)
{
    json layers = json::array();
    for (int n = 0; n <= t.blocklength(); ++n) {
        json layer = json::array();
        for (const auto& node : t.column(n)) layer.push_back(json::array({node.energy, node.paths.str()}));
        layers.push_back(std::move(layer));
    }
    return {{"format", "klss-trellis"},
            {"version", trellis_format_version},
            {"kind", "ess"},
            {"N", t.blocklength()},
            {"alphabet_levels", t.alphabet().size()},
            {"e_max", optional_to_json(t.spec().e_max)},
            {"k4_max", nullptr},
            {"cardinality", t.cardinality().str()},
            {"layers", std::move(layers)}};
}

inline json to_json(const KessTrellis& t)
{
    json layers = json::array();
    for (int n = 0; n <= t.blocklength(); ++n) {
        json layer = json::array();
        for (const auto& node : t.plane(n))
            layer.push_back(json::array({node.energy, node.kurtosis_sum, node.paths.str()}));
        layers.push_back(std::move(layer));
    }
    return {{"format", "klss-trellis"},
            {"version", trellis_format_version},
            {"kind", "kess"},
            {"N", t.blocklength()},
            {"alphabet_levels", t.alphabet().size()},
            {"e_max", optional_to_json(t.spec().e_max)},
            {"k4_max", optional_to_json(t.spec().k4_max)},
            {"cardinality", t.cardinality().str()},
            {"layers", std::move(layers)}};
}

namespace detail {

inline void check_header(const json& j, std::string_view kind)
{
    if (j.value("format", "") != "klss-trellis") throw std::invalid_argument("not a klss trellis document");
    if (j.value("version", 0) != trellis_format_version)
        throw std::invalid_argument("unsupported trellis format version");
    if (j.value("kind", "") != kind) throw std::invalid_argument("trellis kind mismatch, expected " + std::string(kind));
}

}  // namespace detail

/// Loads and verifies an energy trellis document.
inline EssTrellis ess_trellis_from_json(const json& j)
{
    detail::check_header(j, "ess");
    std::vector<EssTrellis::Column> columns;
    for (const auto& layer : j.at("layers")) {
        EssTrellis::Column col;
        for (const auto& node : layer) col.push_back({node.at(0).get<Energy>(), BigCount(node.at(1).get<std::string>())});
        columns.push_back(std::move(col));
    }
    return EssTrellis::from_columns(j.at("N").get<int>(), AmplitudeAlphabet::with_levels(j.at("alphabet_levels").get<std::size_t>()),
                                    optional_from_json(j.at("e_max")), std::move(columns));
}

/// Loads and verifies an energy/kurtosis trellis document.
inline KessTrellis kess_trellis_from_json(const json& j)
{
    detail::check_header(j, "kess");
    std::vector<KessTrellis::Plane> planes;
    for (const auto& layer : j.at("layers")) {
        KessTrellis::Plane plane;
        for (const auto& node : layer)
            plane.push_back({node.at(0).get<Energy>(), node.at(1).get<KurtosisSum>(),
                             BigCount(node.at(2).get<std::string>())});
        planes.push_back(std::move(plane));
    }
    return KessTrellis::from_planes(j.at("N").get<int>(), AmplitudeAlphabet::with_levels(j.at("alphabet_levels").get<std::size_t>()),
                                    optional_from_json(j.at("e_max")), optional_from_json(j.at("k4_max")), planes);
}

// Link parameters:
//   { "chi0": x, "chi4": x, "chi4p": x, "chi6": x, "sigma2_ase": x,
//     "power_grid_dbm": [..] }   or "power_grid_w": [..]
inline nli::LinkNoiseParams link_params_from_json(const json& j)
{
    nli::LinkNoiseParams p;
    p.chi0 = j.at("chi0").get<double>();
    p.chi4 = j.value("chi4", 0.0);
    p.chi4p = j.value("chi4p", 0.0);
    p.chi6 = j.value("chi6", 0.0);
    p.sigma2_ase = j.at("sigma2_ase").get<double>();
    if (j.contains("power_grid_dbm") && j.contains("power_grid_w"))
        throw std::invalid_argument("give either power_grid_dbm or power_grid_w, not both");
    if (j.contains("power_grid_dbm")) p.set_grid_dbm(j.at("power_grid_dbm").get<std::vector<double>>());
    else if (j.contains("power_grid_w")) p.power_grid = j.at("power_grid_w").get<std::vector<double>>();
    p.validate();
    return p;
}

inline json to_json(const nli::LinkNoiseParams& p)
{
    return {{"chi0", p.chi0}, {"chi4", p.chi4}, {"chi4p", p.chi4p}, {"chi6", p.chi6},
            {"sigma2_ase", p.sigma2_ase}, {"power_grid_w", p.power_grid}};
}

inline std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string format_rational(const Rational& r) { return format_double(r.convert_to<double>()); }

inline std::string format_bound(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : "inf"; }

inline double log2_big(const BigCount& c)
{
    if (c <= 0) return -std::numeric_limits<double>::infinity();
    const unsigned top = floor_log2(c);
    if (top < 60) return std::log2(c.convert_to<double>());
    const BigCount head = c >> (top - 52);
    return std::log2(head.convert_to<double>()) + static_cast<double>(top - 52);
}

inline constexpr const char* profile_csv_header = "N,k,E_max,K_max,cardinality_bits,avg_energy,mu4_1d,mu4_2d,mu6_2d";

inline void write_profile_row(std::ostream& os, const ShapingSetSpec& spec, unsigned k, const MomentProfile& p)
{
    os << spec.N << ',' << k << ',' << format_bound(spec.e_max) << ',' << format_bound(spec.k4_max) << ','
       << format_double(log2_big(spec.cardinality)) << ',' << format_rational(p.avg_energy) << ','
       << format_rational(p.mu4_1d) << ',' << format_rational(p.mu4_2d) << ',' << format_rational(p.mu6_2d) << '\n';
}

inline void write_contour_csv(std::ostream& os, const RateContour& contour)
{
    os << profile_csv_header << '\n';
    const auto profiles = contour_profiles(contour);
    for (std::size_t i = 0; i < contour.points.size(); ++i)
        write_profile_row(os, contour.points[i].spec, contour.k, profiles[i]);
}

inline void write_histogram_csv(std::ostream& os, const KurtosisHistogram& h)
{
    os << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        os << (b == 0 ? std::string("-inf") : format_double(h.splits[b - 1])) << ','
           << (b == h.splits.size() ? std::string("inf") : format_double(h.splits[b])) << ',' << h.counts[b].str()
           << '\n';
    }
}

inline void write_rate_sweep_csv(std::ostream& os, const std::vector<RatePoint>& sweep)
{
    os << "N,k,rate,E_max,K_max,mu4_2d\n";
    for (const auto& rp : sweep)
        os << rp.spec.N << ',' << rp.k << ',' << format_double(rp.rate) << ',' << format_bound(rp.spec.e_max) << ','
           << format_bound(rp.spec.k4_max) << ',' << format_rational(rp.mu4_2d) << '\n';
}

inline void write_snr_csv(std::ostream& os, const std::vector<nli::SnrSample>& sweep)
{
    os << "power_dBm,sigma2_nli,snr_eff_dB\n";
    for (const auto& s : sweep)
        os << format_double(s.power_dbm) << ',' << format_double(s.sigma2_nli) << ',' << format_double(s.snr_eff_db)
           << '\n';
}

inline void write_frame_csv(std::ostream& os, const pas::SymbolFrame& f)
{
    os << "symbol,x_re,x_im,y_re,y_im\n";
    for (std::size_t i = 0; i < f.symbols.size(); ++i) {
        const auto& d = f.symbols[i].dims;
        os << i << ',' << d[0] << ',' << d[1] << ',' << d[2] << ',' << d[3] << '\n';
    }
}

inline json to_json(const pas::SymbolFrame& f)
{
    static constexpr const char* names[] = {"1d", "2d", "4d"};
    json symbols = json::array();
    for (const auto& s : f.symbols) symbols.push_back(json::array({s.dims[0], s.dims[1], s.dims[2], s.dims[3]}));
    return {{"mapping", names[static_cast<int>(f.strategy)]}, {"symbols", std::move(symbols)}};
}

}  // namespace klss::io
