// Walks the N=64, 96-bit contour from the sphere set to the kurtosis-limited
// set and prints how average energy and kurtosis trade off.

#include "klss/setsearch.hpp"

#include <cstdio>

using namespace klss;

int main()
{
    const auto contour = enumerate_contour(64, AmplitudeAlphabet(3), 96);
    const auto profiles = contour_profiles(contour);
    std::printf("%8s %8s %6s %10s %8s\n", "E_max", "K_max", "bits", "avg_energy", "mu4_2d");
    for (std::size_t i = 0; i < contour.points.size(); ++i) {
        const auto& p = contour.points[i];
        std::printf("%8lld %8lld %6u %10.5f %8.5f\n", static_cast<long long>(p.energy_level),
                    static_cast<long long>(p.kurtosis_level), *p.spec.input_bits,
                    profiles[i].avg_energy.convert_to<double>(), profiles[i].mu4_2d.convert_to<double>());
    }
    const auto best = min_kurtosis_point(contour);
    std::printf("lowest kurtosis at (%lld, %lld)\n", static_cast<long long>(best.energy_level),
                static_cast<long long>(best.kurtosis_level));
}
