#pragma once

// Exact statistics induced by a shaping set under uniform selection of its
// members: amplitude marginal, average energy, standardized moments of the
// signed 1D input and of the complex 2D input, and histograms of per-sequence
// kurtosis.
//
// For a real input with symmetric signs, mu_k = E[a^k] / E[a^2]^(k/2). The 2D
// moments assume I and Q carry independent amplitudes with the same marginal:
//     E|X|^2 = 2 m2,  E|X|^4 = 2 m4 + 2 m2^2,  E|X|^6 = 2 m6 + 6 m4 m2
// so mu4_2d = (mu4_1d + 1) / 2.

#include "klss/census.hpp"
#include "klss/core.hpp"
#include "klss/ess.hpp"
#include "klss/kess.hpp"

#include <cmath>
#include <random>

namespace klss {

struct MomentProfile {
    AmplitudeAlphabet alphabet{1};
    /// Probability of each amplitude, ascending amplitude order.
    std::vector<Rational> marginal;
    /// E[a^2] in unnormalized amplitude units.
    Rational avg_energy;
    Rational mu4_1d;
    Rational mu6_1d;
    Rational mu4_2d;
    Rational mu6_2d;
    /// Entropy of the signed 1D symbol in bits (1 sign bit + amplitude entropy).
    double entropy_bits = 0.0;
};

/// Moments of the marginal with the given (unnormalized) amplitude weights.
inline MomentProfile profile_from_weights(const AmplitudeAlphabet& alphabet, std::span<const BigCount> weights)
{
    if (weights.size() != alphabet.size()) throw std::invalid_argument("weight count does not match alphabet");
    BigCount total = 0;
    for (const auto& w : weights) total += w;
    if (total <= 0) throw std::invalid_argument("cannot profile an empty shaping set");

    MomentProfile p;
    p.alphabet = alphabet;
    Rational m2 = 0, m4 = 0, m6 = 0;
    double h = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        Rational prob(weights[i], total);
        const std::int64_t a2 = static_cast<std::int64_t>(alphabet[i]) * alphabet[i];
        m2 += prob * a2;
        m4 += prob * (a2 * a2);
        m6 += prob * (a2 * a2 * a2);
        const double pd = prob.convert_to<double>();
        if (pd > 0) h -= pd * std::log2(pd);
        p.marginal.push_back(std::move(prob));
    }
    p.avg_energy = m2;
    p.mu4_1d = m4 / (m2 * m2);
    p.mu6_1d = m6 / (m2 * m2 * m2);
    p.mu4_2d = (2 * m4 + 2 * m2 * m2) / (4 * m2 * m2);
    p.mu6_2d = (2 * m6 + 6 * m4 * m2) / (8 * m2 * m2 * m2);
    p.entropy_bits = 1.0 + h;
    return p;
}

namespace detail {

inline std::size_t layer_size(const EssTrellis& t, int n) { return t.column(n).size(); }
inline std::size_t layer_size(const KessTrellis& t, int n) { return t.plane(n).size(); }
inline EssTrellis::State node_state(const EssTrellis& t, int n, std::size_t i) { return t.column(n)[i].energy; }
inline KessTrellis::State node_state(const KessTrellis& t, int n, std::size_t i)
{
    const auto& node = t.plane(n)[i];
    return {node.energy, node.kurtosis_sum};
}

}  // namespace detail

/// Total occurrences of each amplitude over all positions of all set members:
///     occ(a) = sum_n sum_{nodes v in layer n} fwd(v) * paths(n+1, v + a).
template <typename Trellis>
std::vector<BigCount> amplitude_occurrences(const Trellis& t)
{
    const auto fwd = forward_counts(t);
    const auto levels = t.alphabet().amplitudes();
    std::vector<BigCount> occ(levels.size(), 0);
    for (int n = 0; n < t.blocklength(); ++n)
        for (std::size_t i = 0; i < detail::layer_size(t, n); ++i) {
            const BigCount& here = fwd[static_cast<std::size_t>(n)][i];
            if (here == 0) continue;
            const auto s = detail::node_state(t, n, i);
            for (std::size_t j = 0; j < levels.size(); ++j)
                if (const BigCount* c = t.paths_from(n + 1, t.advance(s, levels[j]))) occ[j] += here * *c;
        }
    return occ;
}

/// Marginal and moments over the full set, every member equally likely.
template <typename Trellis>
MomentProfile induced_marginal(const Trellis& t)
{
    if (t.empty()) throw std::invalid_argument("cannot profile an empty shaping set");
    const auto occ = amplitude_occurrences(t);
    return profile_from_weights(t.alphabet(), occ);
}

/// Same profile computed from a composition census restricted to A(E, K).
inline MomentProfile census_profile(const FinalPlaneCensus& census, std::optional<Energy> e_max,
                                    std::optional<KurtosisSum> k4_max)
{
    std::vector<BigCount> occ(census.alphabet().size(), 0);
    for (const auto& pc : census.classes()) {
        if (e_max && pc.energy > *e_max) break;
        if (k4_max && pc.kurtosis_sum > *k4_max) continue;
        for (std::size_t j = 0; j < occ.size(); ++j) occ[j] += pc.occurrences[j];
    }
    return profile_from_weights(census.alphabet(), occ);
}

/// Profile of the uniform N-cube: every amplitude equally likely.
inline MomentProfile uniform_profile(const AmplitudeAlphabet& alphabet)
{
    std::vector<BigCount> w(alphabet.size(), 1);
    return profile_from_weights(alphabet, w);
}

struct SequenceKurtosis {
    Rational mu4_1d;
    Rational mu4_2d;
};

/// Empirical kurtosis of a single sequence: N * sum a^4 / (sum a^2)^2.
inline Rational per_sequence_mu4(int N, SequenceStats s)
{
    return Rational(BigCount(N) * s.kurtosis_sum, BigCount(s.energy) * s.energy);
}

inline SequenceKurtosis sequence_kurtosis(const AmplitudeSequence& seq)
{
    if (seq.empty()) throw std::invalid_argument("sequence_kurtosis: empty sequence");
    const Rational mu4 = per_sequence_mu4(static_cast<int>(seq.size()), seq.stats());
    return {mu4, (mu4 + 1) / 2};
}

/// Counts of set members per bin of per-sequence 1D kurtosis. The split
/// points s_0 < s_1 < ... define bins (-inf, s_0), [s_0, s_1), ..., [s_last, inf).
struct KurtosisHistogram {
    std::vector<double> splits;
    std::vector<BigCount> counts;
    ShapingSetSpec source;

    BigCount total() const
    {
        BigCount t = 0;
        for (const auto& c : counts) t += c;
        return t;
    }
};

struct WeightedPair {
    SequenceStats stats;
    BigCount multiplicity;
};

inline KurtosisHistogram kurtosis_histogram(std::span<const WeightedPair> pairs, int N, std::vector<double> splits,
                                            ShapingSetSpec source)
{
    if (!std::is_sorted(splits.begin(), splits.end()) ||
        std::adjacent_find(splits.begin(), splits.end()) != splits.end())
        throw std::invalid_argument("histogram split points must be strictly increasing");
    std::vector<Rational> exact;
    exact.reserve(splits.size());
    for (double s : splits) exact.emplace_back(s);

    KurtosisHistogram h{std::move(splits), std::vector<BigCount>(exact.size() + 1, 0), std::move(source)};
    for (const auto& wp : pairs) {
        if (wp.multiplicity == 0) continue;
        const Rational mu = per_sequence_mu4(N, wp.stats);
        const auto bin = static_cast<std::size_t>(std::upper_bound(exact.begin(), exact.end(), mu) - exact.begin());
        h.counts[bin] += wp.multiplicity;
    }
    return h;
}

/// Multiplicity of each final-plane pair, read off the trellis forward counts.
inline std::vector<WeightedPair> final_plane_multiplicities(const KessTrellis& t)
{
    const auto fwd = forward_counts(t);
    const int N = t.blocklength();
    std::vector<WeightedPair> out;
    const auto& plane = t.plane(N);
    for (std::size_t i = 0; i < plane.size(); ++i)
        out.push_back({{plane[i].energy, plane[i].kurtosis_sum}, fwd[static_cast<std::size_t>(N)][i]});
    return out;
}

inline std::vector<WeightedPair> final_plane_multiplicities(const FinalPlaneCensus& census, std::optional<Energy> e_max,
                                                            std::optional<KurtosisSum> k4_max)
{
    std::vector<WeightedPair> out;
    for (const auto& pc : census.classes()) {
        if (e_max && pc.energy > *e_max) break;
        if (k4_max && pc.kurtosis_sum > *k4_max) continue;
        out.push_back({{pc.energy, pc.kurtosis_sum}, pc.multiplicity});
    }
    return out;
}

inline KurtosisHistogram kurtosis_histogram(const KessTrellis& t, std::vector<double> splits)
{
    if (t.empty()) throw std::invalid_argument("cannot build a histogram of an empty shaping set");
    const auto pairs = final_plane_multiplicities(t);
    return kurtosis_histogram(pairs, t.blocklength(), std::move(splits), t.spec());
}

/// Mean of the per-sequence 1D kurtosis over the set.
inline Rational mean_sequence_kurtosis(std::span<const WeightedPair> pairs, int N)
{
    Rational sum = 0;
    BigCount total = 0;
    for (const auto& wp : pairs) {
        if (wp.multiplicity == 0) continue;
        sum += per_sequence_mu4(N, wp.stats) * wp.multiplicity;
        total += wp.multiplicity;
    }
    if (total == 0) throw std::invalid_argument("mean kurtosis of an empty set");
    return sum / total;
}

/// Moment estimates from sequences emitted by the shaper for uniform k-bit
/// indices (the first 2^k members), with standard errors. Each sequence is one
/// sample of (mean a^2, mean a^4); the kurtosis error uses the delta method.
struct SampledMoments {
    std::size_t samples = 0;
    double avg_energy = 0.0;
    double avg_energy_se = 0.0;
    double mu4_1d = 0.0;
    double mu4_1d_se = 0.0;
    double mu4_2d = 0.0;
    double mu4_2d_se = 0.0;
};

/// Uniform integer in [0, 2^bits).
template <typename Rng>
BigCount random_index(Rng& rng, unsigned bits)
{
    BigCount v = 0;
    for (unsigned got = 0; got < bits; got += 32) {
        v <<= 32;
        v += static_cast<std::uint32_t>(rng());
    }
    const unsigned extra = (32 - bits % 32) % 32;
    return v >> extra;
}

template <typename Trellis, typename Rng>
SampledMoments sampled_moments(const Trellis& t, std::size_t samples, Rng& rng)
{
    if (t.empty()) throw std::invalid_argument("cannot sample an empty shaping set");
    if (samples < 2) throw std::invalid_argument("need at least two samples");
    const unsigned bits = *t.input_bits();
    const double N = t.blocklength();
    double s2 = 0, s4 = 0, s22 = 0, s44 = 0, s24 = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const auto seq = enumerative_encode(t, random_index(rng, bits));
        const double x = static_cast<double>(seq.energy()) / N;
        const double y = static_cast<double>(seq.kurtosis_sum()) / N;
        s2 += x;
        s4 += y;
        s22 += x * x;
        s44 += y * y;
        s24 += x * y;
    }
    const double n = static_cast<double>(samples);
    const double m2 = s2 / n, m4 = s4 / n;
    const double v22 = (s22 - n * m2 * m2) / (n - 1);
    const double v44 = (s44 - n * m4 * m4) / (n - 1);
    const double v24 = (s24 - n * m2 * m4) / (n - 1);
    const double g2 = -2.0 * m4 / (m2 * m2 * m2);
    const double g4 = 1.0 / (m2 * m2);
    const double var_mu4 = (g2 * g2 * v22 + 2 * g2 * g4 * v24 + g4 * g4 * v44) / n;

    SampledMoments r;
    r.samples = samples;
    r.avg_energy = m2;
    r.avg_energy_se = std::sqrt(v22 / n);
    r.mu4_1d = m4 / (m2 * m2);
    r.mu4_1d_se = std::sqrt(std::max(0.0, var_mu4));
    r.mu4_2d = (r.mu4_1d + 1) / 2;
    r.mu4_2d_se = r.mu4_1d_se / 2;
    return r;
}

}  // namespace klss
