#pragma once

// Command-line front end. run() is the whole program; main() only forwards to
// it so that tests can drive commands in-process.

#include "klss/nli.hpp"
#include "klss/setsearch.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace klss::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_infeasible = 3;

/// Invalid or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One shaping scenario. The alphabet is given either as m bits per real ASK
/// symbol (2^(m-1) amplitudes) or directly as a number of amplitude levels.
struct ScenarioConfig {
    std::string name;
    int N = 0;
    std::optional<int> m;
    std::optional<std::size_t> levels;
    std::optional<unsigned> k;
    std::optional<double> rate;
    std::optional<Energy> e_max;
    std::optional<KurtosisSum> k4_max;
    /// "ess", "kess" or "auto" (kess exactly when a kurtosis bound is set).
    std::string kind = "auto";
    std::optional<std::uint64_t> seed;
    ContourConvention convention = ContourConvention::tight_kurtosis;
    std::vector<double> histogram_splits{1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0};
    nli::LinkNoiseParams nli = nli::synthetic_preset();
    /// Output paths keyed by artifact: trellis, contour, moments, histogram,
    /// samples, snr, sweep, encoded, decoded. Missing keys go to stdout.
    std::map<std::string, std::string> outputs;

    AmplitudeAlphabet alphabet() const;
    /// Input length from k or rate, checking that the two agree.
    std::optional<unsigned> input_bits() const;
    bool uses_kurtosis_trellis() const;
    void validate() const;
    std::uint64_t require_seed(std::string_view command) const;
};

std::vector<std::string> builtin_scenario_names();
ScenarioConfig builtin_scenario(const std::string& name);

/// Overlays the keys present in `j` onto `base`. A "scenario" key selects the
/// built-in starting point and must come from a fresh base.
ScenarioConfig apply_json(ScenarioConfig base, const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& c);

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace klss::cli
