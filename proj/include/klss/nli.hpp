#pragma once

// Enhanced Gaussian-noise (EGN) evaluation of nonlinear interference:
//     sigma2_nli = P^3 [chi0 + (mu4 - 2) chi4 + (mu4 - 2)^2 chi4' + mu6 chi6]
//     SNR_eff    = P / (sigma2_ase + sigma2_nli)
// The chi coefficients are fiber-determined inputs. Powers are linear watts
// internally; dBm helpers convert at the edges.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace klss::nli {

class ModelOutOfDomain : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

struct LinkNoiseParams {
    double chi0 = 0.0;
    double chi4 = 0.0;
    double chi4p = 0.0;
    double chi6 = 0.0;
    /// ASE noise variance, same power unit as the grid (W).
    double sigma2_ase = 1.0;
    /// Launch powers in W, strictly increasing.
    std::vector<double> power_grid;

    void set_grid_dbm(const std::vector<double>& dbm)
    {
        power_grid.clear();
        for (double d : dbm) power_grid.push_back(dbm_to_watt(d));
    }

    void validate() const
    {
        if (!(sigma2_ase > 0.0)) throw std::invalid_argument("sigma2_ase must be positive");
        for (std::size_t i = 0; i < power_grid.size(); ++i) {
            if (!(power_grid[i] > 0.0)) throw std::invalid_argument("launch powers must be positive");
            if (i > 0 && !(power_grid[i] > power_grid[i - 1]))
                throw std::invalid_argument("power grid must be strictly increasing");
        }
    }
};

/// Non-physical coefficients for tests and demos. chi4 >= 0 and chi4' < 0, so
/// for mu4 < 2 the NLI variance grows with mu4.
inline LinkNoiseParams synthetic_preset()
{
    LinkNoiseParams p;
    p.chi0 = 1.0e3;
    p.chi4 = 0.2e3;
    p.chi4p = -0.05e3;
    p.chi6 = 0.01e3;
    p.sigma2_ase = 1.0e-5;
    for (int dbm = -6; dbm <= 12; ++dbm) p.power_grid.push_back(dbm_to_watt(dbm));
    return p;
}

/// Modulation-dependent bracket of the NLI expression.
inline double nli_coefficient(const LinkNoiseParams& p, double mu4, double mu6)
{
    const double d = mu4 - 2.0;
    return p.chi0 + d * p.chi4 + d * d * p.chi4p + mu6 * p.chi6;
}

inline double nli_variance(const LinkNoiseParams& p, double p_tx, double mu4, double mu6)
{
    if (!(p_tx > 0.0)) throw std::invalid_argument("launch power must be positive");
    const double v = p_tx * p_tx * p_tx * nli_coefficient(p, mu4, mu6);
    if (v < 0.0)
        throw ModelOutOfDomain("negative NLI variance (" + std::to_string(v) + "); chi coefficients inconsistent");
    return v;
}

inline double effective_snr_linear(const LinkNoiseParams& p, double p_tx, double mu4, double mu6)
{
    if (!(p.sigma2_ase > 0.0)) throw std::invalid_argument("sigma2_ase must be positive");
    return p_tx / (p.sigma2_ase + nli_variance(p, p_tx, mu4, mu6));
}

inline double effective_snr_db(const LinkNoiseParams& p, double p_tx, double mu4, double mu6)
{
    return 10.0 * std::log10(effective_snr_linear(p, p_tx, mu4, mu6));
}

struct LaunchPowerOptimum {
    double power_w = 0.0;
    double snr_db = 0.0;
    /// Grid argmax sat on the first or last grid point; no interior maximum found.
    bool on_boundary = false;

    double power_dbm() const { return watt_to_dbm(power_w); }
};

/// Grid search for the SNR-maximizing launch power, refined by parabolic
/// interpolation around the best grid point (SNR in dB against power in dBm).
inline LaunchPowerOptimum optimal_launch_power(const LinkNoiseParams& p, double mu4, double mu6)
{
    p.validate();
    if (p.power_grid.size() < 3) throw std::invalid_argument("power grid needs at least three points");
    std::vector<double> snr(p.power_grid.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < snr.size(); ++i) {
        snr[i] = effective_snr_db(p, p.power_grid[i], mu4, mu6);
        if (snr[i] > snr[best]) best = i;
    }
    if (best == 0 || best + 1 == snr.size()) return {p.power_grid[best], snr[best], true};

    // Successive parabolic interpolation inside the bracketing triple.
    auto snr_at = [&](double dbm) { return effective_snr_db(p, dbm_to_watt(dbm), mu4, mu6); };
    double x0 = watt_to_dbm(p.power_grid[best - 1]), x1 = watt_to_dbm(p.power_grid[best]),
           x2 = watt_to_dbm(p.power_grid[best + 1]);
    double y0 = snr[best - 1], y1 = snr[best], y2 = snr[best + 1];
    for (int iter = 0; iter < 100 && x2 - x0 > 1e-9; ++iter) {
        const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
        const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
        if (den == 0.0) break;
        double xp = x1 - 0.5 * num / den;
        if (!(xp > x0 && xp < x2) || std::abs(xp - x1) < 1e-12) break;
        const double yp = snr_at(xp);
        if (xp < x1) {
            if (yp > y1) { x2 = x1; y2 = y1; x1 = xp; y1 = yp; }
            else { x0 = xp; y0 = yp; }
        } else {
            if (yp > y1) { x0 = x1; y0 = y1; x1 = xp; y1 = yp; }
            else { x2 = xp; y2 = yp; }
        }
    }
    return {dbm_to_watt(x1), y1, false};
}

struct SnrSample {
    double power_dbm;
    double sigma2_nli;
    double snr_eff_db;
};

inline std::vector<SnrSample> launch_power_sweep(const LinkNoiseParams& p, double mu4, double mu6)
{
    p.validate();
    std::vector<SnrSample> out;
    for (double w : p.power_grid) out.push_back({watt_to_dbm(w), nli_variance(p, w, mu4, mu6), effective_snr_db(p, w, mu4, mu6)});
    return out;
}

}  // namespace klss::nli
