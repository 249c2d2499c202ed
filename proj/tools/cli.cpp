#include "cli.hpp"

#include "klss/analytics.hpp"
#include "klss/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <variant>

namespace klss::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Scenario configuration

AmplitudeAlphabet ScenarioConfig::alphabet() const
{
    if (levels) return AmplitudeAlphabet::with_levels(*levels);
    if (m) return AmplitudeAlphabet(*m);
    throw ConfigError("alphabet missing: set m (bits per ASK symbol) or levels");
}

std::optional<unsigned> ScenarioConfig::input_bits() const
{
    std::optional<unsigned> from_rate;
    if (rate) {
        const double exact = *rate * N;
        const double rounded = std::round(exact);
        if (*rate < 0 || std::abs(exact - rounded) > 1e-9)
            throw ConfigError("rate " + io::format_double(*rate) + " times N=" + std::to_string(N) +
                              " is not a whole number of input bits");
        from_rate = static_cast<unsigned>(rounded);
    }
    if (k && from_rate && *k != *from_rate)
        throw ConfigError("k=" + std::to_string(*k) + " disagrees with rate*N=" + std::to_string(*from_rate));
    return k ? k : from_rate;
}

bool ScenarioConfig::uses_kurtosis_trellis() const
{
    if (kind == "kess") return true;
    if (kind == "ess") return false;
    return k4_max.has_value();
}

void ScenarioConfig::validate() const
{
    if (N < 1) throw ConfigError("N must be at least 1");
    if (m && levels && AmplitudeAlphabet(*m).size() != *levels)
        throw ConfigError("m=" + std::to_string(*m) + " and levels=" + std::to_string(*levels) + " disagree");
    try {
        (void)alphabet();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (kind != "ess" && kind != "kess" && kind != "auto")
        throw ConfigError("kind must be ess, kess or auto, got '" + kind + "'");
    if (kind == "ess" && k4_max) throw ConfigError("kind=ess cannot carry a kurtosis bound; use kess or drop k4_max");
    (void)input_bits();
    try {
        nli.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("nli: ") + e.what());
    }
}

std::uint64_t ScenarioConfig::require_seed(std::string_view command) const
{
    if (!seed) throw ConfigError(std::string(command) + " draws random numbers; pass --seed or set \"seed\"");
    return *seed;
}

std::vector<std::string> builtin_scenario_names()
{
    return {"fig5", "fig6", "n64-rate15-contour", "n108-rate15", "n108-rate10"};
}

ScenarioConfig builtin_scenario(const std::string& name)
{
    ScenarioConfig c;
    c.name = name;
    if (name == "fig5") {
        c.N = 3;
        c.levels = 3;
        c.e_max = 28;
        c.kind = "ess";
    } else if (name == "fig6") {
        c.N = 3;
        c.levels = 3;
        c.e_max = 28;
        c.k4_max = 626;
        c.kind = "kess";
    } else if (name == "n64-rate15-contour") {
        c.N = 64;
        c.m = 3;
        c.k = 96;
    } else if (name == "n108-rate15") {
        c.N = 108;
        c.m = 3;
        c.k = 162;
        c.e_max = 1156;
        c.k4_max = 16556;
        c.kind = "kess";
        c.seed = 1;
    } else if (name == "n108-rate10") {
        c.N = 108;
        c.m = 3;
        c.k = 108;
        c.e_max = 428;
        c.kind = "ess";
        c.seed = 1;
    } else {
        std::string known;
        for (const auto& n : builtin_scenario_names()) known += " " + n;
        throw ConfigError("unknown scenario '" + name + "'; built-in scenarios:" + known);
    }
    return c;
}

namespace {

ContourConvention parse_convention(const std::string& s)
{
    if (s == "tight") return ContourConvention::tight_kurtosis;
    if (s == "loose") return ContourConvention::loose_kurtosis;
    throw ConfigError("convention must be tight or loose, got '" + s + "'");
}

std::string convention_name(ContourConvention c) { return c == ContourConvention::tight_kurtosis ? "tight" : "loose"; }

template<class T>
std::optional<T> nullable(const json& v)
{
    if (v.is_null()) return std::nullopt;
    return v.get<T>();
}

}  // namespace

ScenarioConfig apply_json(ScenarioConfig c, const json& j)
{
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known{"scenario", "name",  "N",          "m",   "levels",           "k",
                                             "rate",     "e_max", "k4_max",     "kind", "seed",            "convention",
                                             "nli",      "outputs", "histogram_splits"};
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) {
            std::string list;
            for (const auto& k : known) list += " " + k;
            throw ConfigError("unknown config key '" + key + "'; known keys:" + list);
        }
    try {
        if (j.contains("scenario")) c = builtin_scenario(j.at("scenario").get<std::string>());
        if (j.contains("name")) c.name = j.at("name").get<std::string>();
        if (j.contains("N")) c.N = j.at("N").get<int>();
        if (j.contains("m")) {
            c.m = nullable<int>(j.at("m"));
            if (!j.contains("levels")) c.levels.reset();
        }
        if (j.contains("levels")) {
            c.levels = nullable<std::size_t>(j.at("levels"));
            if (!j.contains("m")) c.m.reset();
        }
        if (j.contains("k")) {
            c.k = nullable<unsigned>(j.at("k"));
            if (!j.contains("rate")) c.rate.reset();
        }
        if (j.contains("rate")) {
            c.rate = nullable<double>(j.at("rate"));
            if (!j.contains("k")) c.k.reset();
        }
        if (j.contains("e_max")) c.e_max = nullable<Energy>(j.at("e_max"));
        if (j.contains("k4_max")) c.k4_max = nullable<KurtosisSum>(j.at("k4_max"));
        if (j.contains("kind")) c.kind = j.at("kind").get<std::string>();
        if (j.contains("seed")) c.seed = nullable<std::uint64_t>(j.at("seed"));
        if (j.contains("convention")) c.convention = parse_convention(j.at("convention").get<std::string>());
        if (j.contains("histogram_splits")) c.histogram_splits = j.at("histogram_splits").get<std::vector<double>>();
        if (j.contains("nli")) {
            const auto& n = j.at("nli");
            if (n.is_string()) {
                if (n.get<std::string>() != "synthetic") throw ConfigError("nli preset must be \"synthetic\"");
                c.nli = nli::synthetic_preset();
            } else {
                c.nli = io::link_params_from_json(n);
            }
        }
        if (j.contains("outputs"))
            for (const auto& [key, path] : j.at("outputs").items()) c.outputs[key] = path.get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

json to_json(const ScenarioConfig& c)
{
    auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
    return {{"name", c.name},
            {"N", c.N},
            {"m", opt(c.m)},
            {"levels", opt(c.levels)},
            {"k", opt(c.k)},
            {"rate", opt(c.rate)},
            {"e_max", opt(c.e_max)},
            {"k4_max", opt(c.k4_max)},
            {"kind", c.kind},
            {"seed", opt(c.seed)},
            {"convention", convention_name(c.convention)},
            {"histogram_splits", c.histogram_splits},
            {"nli", io::to_json(c.nli)},
            {"outputs", c.outputs}};
}

// ---------------------------------------------------------------------------
// Commands

namespace {

using AnyTrellis = std::variant<EssTrellis, KessTrellis>;

struct Context {
    ScenarioConfig config;
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    std::optional<std::string> input_path;
};

/// Fills in a sphere bound from k when the scenario gives no bounds.
ShapingSetSpec resolve_bounds(const ScenarioConfig& c)
{
    ShapingSetSpec s;
    s.N = c.N;
    s.alphabet = c.alphabet();
    s.e_max = c.e_max;
    s.k4_max = c.k4_max;
    if (!s.e_max && !s.k4_max) {
        const auto k = c.input_bits();
        if (!k) throw ConfigError("set e_max and/or k4_max, or an input length (k or rate) to pick the sphere bound");
        s.e_max = min_energy_bound(c.N, s.alphabet, *k);
    }
    return s;
}

void check_input_bits(const ScenarioConfig& c, const ShapingSetSpec& built)
{
    if (built.empty()) throw EmptyShapingSet();
    const auto k = c.input_bits();
    if (!k) return;
    if (*built.input_bits < *k)
        throw InfeasibleShaping("the bounds give " + std::to_string(*built.input_bits) + " input bits, fewer than k=" +
                                std::to_string(*k));
    if (*built.input_bits > *k)
        throw ConfigError("the bounds give " + std::to_string(*built.input_bits) + " input bits, not k=" +
                          std::to_string(*k) + "; tighten the bounds or drop k");
}

AnyTrellis build_trellis(const ScenarioConfig& c)
{
    const auto s = resolve_bounds(c);
    if (c.uses_kurtosis_trellis()) {
        auto t = build_kess_trellis(c.N, s.alphabet, s.e_max, s.k4_max);
        check_input_bits(c, t.spec());
        return t;
    }
    if (s.k4_max) throw ConfigError("an energy trellis cannot carry a kurtosis bound");
    auto t = build_ess_trellis(c.N, s.alphabet, s.e_max);
    check_input_bits(c, t.spec());
    return t;
}

const ShapingSetSpec& spec_of(const AnyTrellis& t)
{
    return std::visit([](const auto& x) -> const ShapingSetSpec& { return x.spec(); }, t);
}

/// Runs `write` against the configured file for `key`, or against stdout.
void emit(const Context& ctx, const std::string& key, const std::function<void(std::ostream&)>& write)
{
    const auto it = ctx.config.outputs.find(key);
    if (it == ctx.config.outputs.end() || it->second.empty() || it->second == "-") {
        write(ctx.out);
        return;
    }
    std::ofstream f(it->second, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file '" + it->second + "' for " + key);
    write(f);
    if (!f) throw std::runtime_error("write to '" + it->second + "' failed");
}

template<class F>
void for_each_input_line(const Context& ctx, F&& f)
{
    std::ifstream file;
    std::istream* src = &ctx.in;
    if (ctx.input_path && *ctx.input_path != "-") {
        file.open(*ctx.input_path);
        if (!file) throw ConfigError("cannot open input file '" + *ctx.input_path + "'");
        src = &file;
    }
    std::string line;
    std::size_t number = 0;
    while (std::getline(*src, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            f(line);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("input line " + std::to_string(number) + ": " + e.what());
        }
    }
}

std::string join_amplitudes(const AmplitudeSequence& s)
{
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(s[i]);
    }
    return out;
}

AmplitudeSequence parse_amplitudes(const std::string& line)
{
    std::istringstream is(line);
    std::vector<int> v;
    std::string tok;
    while (is >> tok) {
        std::size_t used = 0;
        int x = 0;
        try {
            x = std::stoi(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw std::invalid_argument("'" + tok + "' is not an integer amplitude");
        v.push_back(x);
    }
    return AmplitudeSequence(std::move(v));
}

void cmd_build(const Context& ctx)
{
    const auto t = build_trellis(ctx.config);
    const auto& spec = spec_of(t);
    const auto layers = std::visit(
        [](const auto& x) {
            std::vector<std::size_t> sizes;
            for (int n = 0; n <= x.blocklength(); ++n) sizes.push_back(detail::layer_size(x, n));
            return sizes;
        },
        t);
    std::size_t nodes = 0;
    std::string per_layer;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        nodes += layers[i];
        per_layer += (i ? "," : "") + std::to_string(layers[i]);
    }
    ctx.out << "cardinality=" << spec.cardinality.str() << ", k=" << *spec.input_bits << '\n';
    ctx.out << "trellis=" << (std::holds_alternative<KessTrellis>(t) ? "kess" : "ess")
            << ", E_max=" << io::format_bound(spec.e_max) << ", K_max=" << io::format_bound(spec.k4_max)
            << ", nodes=" << nodes << ", layer_nodes=" << per_layer << '\n';
    if (ctx.config.outputs.contains("trellis"))
        emit(ctx, "trellis", [&](std::ostream& os) {
            std::visit([&](const auto& x) { os << io::to_json(x).dump() << '\n'; }, t);
        });
}

AmplitudeSequence encode_any(const AnyTrellis& t, const BigCount& i)
{
    return std::visit(
        [&](const auto& x) {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, EssTrellis>) return ess_encode(x, i);
            else return kess_encode(x, i);
        },
        t);
}

BigCount decode_any(const AnyTrellis& t, const AmplitudeSequence& s)
{
    return std::visit(
        [&](const auto& x) {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, EssTrellis>) return ess_decode(x, s);
            else return kess_decode(x, s);
        },
        t);
}

void cmd_encode(const Context& ctx, std::size_t random_count)
{
    const auto t = build_trellis(ctx.config);
    const unsigned k = *spec_of(t).input_bits;
    emit(ctx, "encoded", [&](std::ostream& os) {
        if (random_count > 0) {
            std::mt19937_64 rng(ctx.config.require_seed("encode --random"));
            for (std::size_t i = 0; i < random_count; ++i) os << join_amplitudes(encode_any(t, random_index(rng, k))) << '\n';
            return;
        }
        for_each_input_line(ctx, [&](const std::string& line) {
            os << join_amplitudes(encode_any(t, io::from_hex(line))) << '\n';
        });
    });
}

void cmd_decode(const Context& ctx)
{
    const auto t = build_trellis(ctx.config);
    emit(ctx, "decoded", [&](std::ostream& os) {
        for_each_input_line(ctx, [&](const std::string& line) {
            os << io::to_hex(decode_any(t, parse_amplitudes(line))) << '\n';
        });
    });
}

unsigned require_bits(const ScenarioConfig& c, std::string_view command)
{
    const auto k = c.input_bits();
    if (!k) throw ConfigError(std::string(command) + " needs an input length: set k or rate");
    return *k;
}

void cmd_contour(const Context& ctx)
{
    const auto& c = ctx.config;
    const auto contour = enumerate_contour(c.N, c.alphabet(), require_bits(c, "contour"), c.convention);
    emit(ctx, "contour", [&](std::ostream& os) { io::write_contour_csv(os, contour); });
}

void cmd_analyze(const Context& ctx, std::size_t samples)
{
    const auto& c = ctx.config;
    const auto bounds = resolve_bounds(c);
    const FinalPlaneCensus census(c.N, bounds.alphabet);
    ShapingSetSpec spec = bounds;
    spec.set_cardinality(census.cardinality(bounds.e_max, bounds.k4_max));
    check_input_bits(c, spec);
    const auto profile = census_profile(census, bounds.e_max, bounds.k4_max);
    const auto pairs = final_plane_multiplicities(census, bounds.e_max, bounds.k4_max);
    const auto hist = kurtosis_histogram(pairs, c.N, c.histogram_splits, spec);

    std::optional<SampledMoments> mc;
    if (samples > 0) {
        std::mt19937_64 rng(c.require_seed("analyze --samples"));
        const auto t = build_trellis(c);
        mc = std::visit([&](const auto& x) { return sampled_moments(x, samples, rng); }, t);
    }

    // Sections that share stdout are separated by a blank line.
    bool stdout_used = false;
    auto section = [&](const std::string& key, const std::function<void(std::ostream&)>& write) {
        const bool to_stdout = !c.outputs.contains(key);
        if (to_stdout && stdout_used) ctx.out << '\n';
        emit(ctx, key, write);
        stdout_used = stdout_used || to_stdout;
    };
    section("moments", [&](std::ostream& os) {
        os << io::profile_csv_header << '\n';
        io::write_profile_row(os, spec, *spec.input_bits, profile);
    });
    section("histogram", [&](std::ostream& os) { io::write_histogram_csv(os, hist); });
    if (mc) {
        section("samples", [&](std::ostream& os) {
            using io::format_double;
            os << "samples,avg_energy,avg_energy_se,mu4_1d,mu4_1d_se,mu4_2d,mu4_2d_se\n"
               << mc->samples << ',' << format_double(mc->avg_energy) << ',' << format_double(mc->avg_energy_se) << ','
               << format_double(mc->mu4_1d) << ',' << format_double(mc->mu4_1d_se) << ','
               << format_double(mc->mu4_2d) << ',' << format_double(mc->mu4_2d_se) << '\n';
        });
    }
}

void cmd_snr(const Context& ctx, std::optional<double> mu4, std::optional<double> mu6)
{
    const auto& c = ctx.config;
    if (mu4.has_value() != mu6.has_value()) throw ConfigError("give both --mu4 and --mu6, or neither");
    if (!mu4) {
        const auto bounds = resolve_bounds(c);
        const FinalPlaneCensus census(c.N, bounds.alphabet);
        const auto p = census_profile(census, bounds.e_max, bounds.k4_max);
        mu4 = p.mu4_2d.convert_to<double>();
        mu6 = p.mu6_2d.convert_to<double>();
    }
    if (c.nli.power_grid.empty()) throw ConfigError("nli power grid is empty");
    const auto sweep = nli::launch_power_sweep(c.nli, *mu4, *mu6);
    emit(ctx, "snr", [&](std::ostream& os) { io::write_snr_csv(os, sweep); });
    const auto opt = nli::optimal_launch_power(c.nli, *mu4, *mu6);
    ctx.err << "mu4_2d=" << io::format_double(*mu4) << ", mu6_2d=" << io::format_double(*mu6)
            << ", optimum power_dBm=" << io::format_double(opt.power_dbm())
            << ", snr_eff_dB=" << io::format_double(opt.snr_db) << (opt.on_boundary ? " (grid boundary)" : "") << '\n';
}

void cmd_sweep(const Context& ctx, const std::string& mode)
{
    SweepMode m;
    if (mode == "sphere") m = SweepMode::sphere;
    else if (mode == "klss") m = SweepMode::min_kurtosis_klss;
    else throw ConfigError("sweep mode must be sphere or klss, got '" + mode + "'");
    const auto sweep = rate_sweep(ctx.config.N, ctx.config.alphabet(), m);
    emit(ctx, "sweep", [&](std::ostream& os) { io::write_rate_sweep_csv(os, sweep); });
}

// ---------------------------------------------------------------------------
// Argument handling

struct Overrides {
    std::optional<std::string> scenario;
    std::optional<std::string> config;
    std::optional<int> N;
    std::optional<int> m;
    std::optional<std::size_t> levels;
    std::optional<unsigned> k;
    std::optional<double> rate;
    std::optional<std::string> e_max;
    std::optional<std::string> k4_max;
    std::optional<std::string> kind;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> nli;
    std::optional<std::string> output;
    std::optional<std::string> input;
};

std::optional<std::int64_t> parse_bound(const std::string& s, const char* what)
{
    if (s == "inf" || s == "none") return std::nullopt;
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw ConfigError(std::string(what) + " must be an integer or 'inf', got '" + s + "'");
    return v;
}

json read_json_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

/// Built-in scenario, then config file, then flags.
ScenarioConfig assemble(const Overrides& o, const std::string& primary_output)
{
    ScenarioConfig c;
    if (o.scenario) c = builtin_scenario(*o.scenario);
    if (o.config) c = apply_json(std::move(c), read_json_file(*o.config));
    if (o.N) c.N = *o.N;
    if (o.m) {
        c.m = o.m;
        if (!o.levels) c.levels.reset();
    }
    if (o.levels) {
        c.levels = o.levels;
        if (!o.m) c.m.reset();
    }
    if (o.k) {
        c.k = o.k;
        if (!o.rate) c.rate.reset();
    }
    if (o.rate) {
        c.rate = o.rate;
        if (!o.k) c.k.reset();
    }
    if (o.e_max) c.e_max = parse_bound(*o.e_max, "--e-max");
    if (o.k4_max) c.k4_max = parse_bound(*o.k4_max, "--k-max");
    if (o.kind) c.kind = *o.kind;
    if (o.seed) c.seed = o.seed;
    if (o.nli) c = apply_json(std::move(c), json{{"nli", *o.nli == "synthetic" ? json("synthetic") : read_json_file(*o.nli)}});
    if (o.output && !primary_output.empty()) c.outputs[primary_output] = *o.output;
    c.validate();
    return c;
}

void add_scenario_options(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("-s,--scenario", o.scenario, "Built-in scenario to start from")->group("Scenario");
    cmd->add_option("-c,--config", o.config, "JSON config file layered over the scenario")->group("Scenario");
    cmd->add_option("--N", o.N, "Blocklength in amplitudes")->group("Scenario");
    cmd->add_option("--m", o.m, "Bits per real ASK symbol (2^(m-1) amplitudes)")->group("Scenario");
    cmd->add_option("--levels", o.levels, "Number of amplitude levels {1,3,...}")->group("Scenario");
    cmd->add_option("--k", o.k, "Input length in bits")->group("Scenario");
    cmd->add_option("--rate", o.rate, "Shaping rate in bits per amplitude")->group("Scenario");
    cmd->add_option("--e-max", o.e_max, "Energy bound, or 'inf'")->group("Scenario");
    cmd->add_option("--k-max", o.k4_max, "Kurtosis-sum bound, or 'inf'")->group("Scenario");
    cmd->add_option("--kind", o.kind, "Trellis kind: ess, kess or auto")->group("Scenario");
    cmd->add_option("--seed", o.seed, "Random seed")->group("Scenario");
    cmd->add_option("--nli", o.nli, "Link parameter JSON file, or 'synthetic'")->group("Scenario");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Energy- and kurtosis-bounded enumerative amplitude shaping", "klss"};
    app.require_subcommand(1);
    Overrides o;

    auto* build = app.add_subcommand("build", "Build the scenario's trellis and print its size");
    add_scenario_options(build, o);
    build->add_option("-o,--output", o.output, "Write the trellis as JSON");

    auto* encode = app.add_subcommand("encode", "Hex indices (one per line) to amplitude sequences");
    add_scenario_options(encode, o);
    std::size_t random_count = 0;
    encode->add_option("--random", random_count, "Encode this many uniform random indices instead of reading input");
    encode->add_option("-i,--input", o.input, "Index file (default stdin)");
    encode->add_option("-o,--output", o.output, "Output file (default stdout)");

    auto* decode = app.add_subcommand("decode", "Amplitude sequences (one per line) to hex indices");
    add_scenario_options(decode, o);
    decode->add_option("-i,--input", o.input, "Sequence file (default stdin)");
    decode->add_option("-o,--output", o.output, "Output file (default stdout)");

    auto* contour = app.add_subcommand("contour", "Shaping sets on the constant-rate contour, as CSV");
    add_scenario_options(contour, o);
    std::optional<std::string> convention;
    contour->add_option("--convention", convention, "tight or loose");
    contour->add_option("-o,--output", o.output, "Output file (default stdout)");

    auto* analyze = app.add_subcommand("analyze", "Moments and per-sequence kurtosis histogram, as CSV");
    add_scenario_options(analyze, o);
    std::optional<std::vector<double>> splits;
    std::size_t samples = 0;
    std::optional<std::string> moments_out, histogram_out, samples_out;
    analyze->add_option("--splits", splits, "Histogram split points")->delimiter(',');
    analyze->add_option("--samples", samples, "Also estimate moments from this many encoded sequences");
    analyze->add_option("--moments-out", moments_out, "Moments CSV file");
    analyze->add_option("--histogram-out", histogram_out, "Histogram CSV file");
    analyze->add_option("--samples-out", samples_out, "Sampled moments CSV file");

    auto* snr = app.add_subcommand("snr", "Effective SNR over the launch-power grid, as CSV");
    add_scenario_options(snr, o);
    std::optional<double> mu4, mu6;
    std::optional<std::vector<double>> grid_dbm;
    snr->add_option("--mu4", mu4, "Use this 2D kurtosis instead of the scenario's set");
    snr->add_option("--mu6", mu6, "Use this 2D sixth moment instead of the scenario's set");
    snr->add_option("--grid-dbm", grid_dbm, "Launch powers in dBm")->delimiter(',');
    snr->add_option("-o,--output", o.output, "Output file (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "Kurtosis against shaping rate, as CSV");
    add_scenario_options(sweep, o);
    std::string mode = "sphere";
    sweep->add_option("--mode", mode, "sphere or klss");
    sweep->add_option("-o,--output", o.output, "Output file (default stdout)");

    auto* show = app.add_subcommand("show", "Print the resolved configuration as JSON");
    add_scenario_options(show, o);

    auto* list = app.add_subcommand("scenarios", "List the built-in scenarios");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            const auto subs = app.get_subcommands();
            out << (subs.empty() ? app.help() : subs.front()->help());
            return exit_ok;
        }
        err << "klss: " << e.what() << "\nRun with --help for usage.\n";
        return exit_config;
    }

    try {
        if (list->parsed()) {
            for (const auto& name : builtin_scenario_names()) out << name << '\n';
            return exit_ok;
        }
        std::string primary;
        if (build->parsed()) primary = "trellis";
        else if (encode->parsed()) primary = "encoded";
        else if (decode->parsed()) primary = "decoded";
        else if (contour->parsed()) primary = "contour";
        else if (snr->parsed()) primary = "snr";
        else if (sweep->parsed()) primary = "sweep";
        auto config = assemble(o, primary);
        if (convention) config.convention = parse_convention(*convention);
        if (splits) config.histogram_splits = *splits;
        if (moments_out) config.outputs["moments"] = *moments_out;
        if (histogram_out) config.outputs["histogram"] = *histogram_out;
        if (samples_out) config.outputs["samples"] = *samples_out;
        if (grid_dbm) config.nli.set_grid_dbm(*grid_dbm);
        config.validate();

        Context ctx{std::move(config), in, out, err, o.input};
        if (build->parsed()) cmd_build(ctx);
        else if (encode->parsed()) cmd_encode(ctx, random_count);
        else if (decode->parsed()) cmd_decode(ctx);
        else if (contour->parsed()) cmd_contour(ctx);
        else if (analyze->parsed()) cmd_analyze(ctx, samples);
        else if (snr->parsed()) cmd_snr(ctx, mu4, mu6);
        else if (sweep->parsed()) cmd_sweep(ctx, mode);
        else if (show->parsed()) out << to_json(ctx.config).dump(2) << '\n';
        return exit_ok;
    } catch (const InfeasibleShaping& e) {
        err << "klss: infeasible shaping parameters: " << e.what() << '\n';
        return exit_infeasible;
    } catch (const ConfigError& e) {
        err << "klss: " << e.what() << '\n';
        return exit_config;
    } catch (const std::invalid_argument& e) {
        err << "klss: " << e.what() << '\n';
        return exit_config;
    } catch (const nli::ModelOutOfDomain& e) {
        err << "klss: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << "klss: " << e.what() << '\n';
        return exit_failure;
    }
}

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, in, out, err);
}

}  // namespace klss::cli
