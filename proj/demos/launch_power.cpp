// Effective SNR against launch power for the uniform, sphere-shaped and
// kurtosis-limited 64-QAM inputs under the synthetic link coefficients.

#include "klss/analytics.hpp"
#include "klss/nli.hpp"
#include "klss/setsearch.hpp"

#include <cstdio>

using namespace klss;

int main()
{
    const AmplitudeAlphabet alphabet(3);
    const FinalPlaneCensus census(108, alphabet);
    struct Input {
        const char* name;
        MomentProfile profile;
    };
    const Input inputs[] = {
        {"uniform", uniform_profile(alphabet)},
        {"sphere E<=860", census_profile(census, 860, std::nullopt)},
        {"K-ESS 1156/16556", census_profile(census, 1156, 16556)},
    };
    const auto link = nli::synthetic_preset();
    std::printf("%-18s %8s %8s %12s %12s\n", "input", "mu4_2d", "mu6_2d", "P_opt [dBm]", "SNR [dB]");
    for (const auto& in : inputs) {
        const double mu4 = in.profile.mu4_2d.convert_to<double>();
        const double mu6 = in.profile.mu6_2d.convert_to<double>();
        const auto opt = nli::optimal_launch_power(link, mu4, mu6);
        std::printf("%-18s %8.4f %8.4f %12.3f %12.3f\n", in.name, mu4, mu6, opt.power_dbm(), opt.snr_db);
    }
}
