#pragma once

// Exploration of the (E, K) design plane at a fixed input length k.
//
// A rate contour is the family of distinct shaping sets A(E, K) whose input
// length floor(log2 |A(E, K)|) equals k. Bounds are always snapped to
// achievable levels (sums realizable by N amplitudes), so every listed pair
// names a different set.

#include "klss/analytics.hpp"
#include "klss/census.hpp"
#include "klss/core.hpp"

#include <map>
#include <memory>
#include <set>

namespace klss {

/// Number of length-N sequences per exact value of sum a_i^power, ascending.
inline std::vector<std::pair<std::int64_t, BigCount>> power_sum_spectrum(int N, const AmplitudeAlphabet& alphabet,
                                                                         unsigned power)
{
    check_blocklength(N);
    std::map<std::int64_t, BigCount> cur{{0, 1}};
    for (int n = 0; n < N; ++n) {
        std::map<std::int64_t, BigCount> next;
        for (const auto& [v, c] : cur)
            for (int a : alphabet.amplitudes()) next[v + ipow(a, power)] += c;
        cur = std::move(next);
    }
    return {cur.begin(), cur.end()};
}

namespace detail {

inline std::int64_t min_bound_for_bits(int N, const AmplitudeAlphabet& alphabet, unsigned k, unsigned power)
{
    check_blocklength(N);
    const unsigned max_bits = max_input_bits(N, alphabet);
    if (k > max_bits)
        throw InfeasibleShaping("input length " + std::to_string(k) + " exceeds floor(N*log2(M/2)) = " +
                                std::to_string(max_bits));
    const BigCount target = pow2(k);
    BigCount cum = 0;
    for (const auto& [level, count] : power_sum_spectrum(N, alphabet, power)) {
        cum += count;
        if (cum >= target) return level;
    }
    throw std::logic_error("spectrum exhausted before reaching 2^k");
}

}  // namespace detail

/// Smallest achievable energy bound whose sphere set has at least 2^k members.
inline Energy min_energy_bound(int N, const AmplitudeAlphabet& alphabet, unsigned k)
{
    return detail::min_bound_for_bits(N, alphabet, k, 2);
}

/// Smallest achievable kurtosis-sum bound whose pure kurtosis-limited set has
/// at least 2^k members.
inline KurtosisSum min_kurtosis_bound(int N, const AmplitudeAlphabet& alphabet, unsigned k)
{
    return detail::min_bound_for_bits(N, alphabet, k, 4);
}

/// How the kurtosis bound is chosen for each energy level.
enum class ContourConvention {
    /// Smallest achievable K keeping at least 2^k members.
    tight_kurtosis,
    /// Largest achievable K keeping fewer than 2^(k+1) members.
    loose_kurtosis,
};

struct ContourPoint {
    /// Bounds as a set descriptor; an inactive bound is left empty.
    ShapingSetSpec spec;
    /// Tightest bounds describing the same set (max included e and k).
    Energy energy_level = 0;
    KurtosisSum kurtosis_level = 0;
    bool energy_active = false;
    bool kurtosis_active = false;

    bool both_active() const noexcept { return energy_active && kurtosis_active; }
};

struct RateContour {
    int N = 0;
    AmplitudeAlphabet alphabet{1};
    unsigned k = 0;
    ContourConvention convention = ContourConvention::tight_kurtosis;
    /// Distinct sets with exactly k input bits, by increasing E (decreasing K).
    std::vector<ContourPoint> points;
    /// Energy-only set at the minimum energy bound.
    ContourPoint sphere_endpoint;
    /// Kurtosis-only set at the minimum kurtosis bound.
    ContourPoint kurtosis_endpoint;
    std::shared_ptr<const FinalPlaneCensus> census;

    /// Number of sets on the contour where both bounds are active.
    std::size_t both_active_count() const
    {
        return static_cast<std::size_t>(
            std::count_if(points.begin(), points.end(), [](const ContourPoint& p) { return p.both_active(); }));
    }

    bool contains_pair(Energy e, KurtosisSum k4) const
    {
        return std::any_of(points.begin(), points.end(), [&](const ContourPoint& p) {
            return p.spec.e_max && p.spec.k4_max && *p.spec.e_max == e && *p.spec.k4_max == k4;
        });
    }
};

namespace detail {

/// Prefix sums of multiplicity over kurtosis ranks, with lower-bound search.
class KurtosisFenwick {
public:
    explicit KurtosisFenwick(std::size_t n) : tree_(n + 1, 0) {}

    void add(std::size_t rank, const BigCount& v)
    {
        for (std::size_t i = rank + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += v;
    }

    BigCount prefix(std::size_t rank) const
    {
        BigCount s = 0;
        for (std::size_t i = rank + 1; i > 0; i -= i & (~i + 1)) s += tree_[i];
        return s;
    }

    /// Smallest rank whose prefix sum reaches target; size() when none does.
    std::size_t lower_bound(const BigCount& target) const
    {
        std::size_t pos = 0;
        BigCount rem = target;
        std::size_t step = 1;
        while (step * 2 < tree_.size()) step *= 2;
        for (; step > 0; step /= 2)
            if (pos + step < tree_.size() && tree_[pos + step] < rem) {
                pos += step;
                rem -= tree_[pos];
            }
        return pos;
    }

    std::size_t size() const noexcept { return tree_.size() - 1; }

private:
    std::vector<BigCount> tree_;
};

inline ContourPoint make_point(const FinalPlaneCensus& census, Energy ce, KurtosisSum ck)
{
    ContourPoint p;
    p.energy_level = ce;
    p.kurtosis_level = ck;
    const BigCount both = census.cardinality(ce, ck);
    p.energy_active = census.cardinality(std::nullopt, ck) > both;
    p.kurtosis_active = census.cardinality(ce, std::nullopt) > both;
    p.spec.N = census.blocklength();
    p.spec.alphabet = census.alphabet();
    // A set that either bound alone describes is written as a sphere set.
    if (p.energy_active || !p.kurtosis_active) p.spec.e_max = ce;
    if (p.kurtosis_active) p.spec.k4_max = ck;
    p.spec.set_cardinality(both);
    return p;
}

/// Tightest (e, k) bounds describing A(E, K) within the census.
inline std::pair<Energy, KurtosisSum> canonical_bounds(const FinalPlaneCensus& census, std::optional<Energy> e_max,
                                                       std::optional<KurtosisSum> k4_max)
{
    Energy ce = -1;
    KurtosisSum ck = -1;
    for (const auto& pc : census.classes()) {
        if (e_max && pc.energy > *e_max) break;
        if (k4_max && pc.kurtosis_sum > *k4_max) continue;
        ce = std::max(ce, pc.energy);
        ck = std::max(ck, pc.kurtosis_sum);
    }
    return {ce, ck};
}

}  // namespace detail

/// Enumerates the rate-k contour over a census of all length-N sequences.
inline RateContour enumerate_contour(std::shared_ptr<const FinalPlaneCensus> census, unsigned k,
                                     ContourConvention convention = ContourConvention::tight_kurtosis)
{
    if (!census) throw std::invalid_argument("enumerate_contour: null census");
    if (census->bounds().e_max || census->bounds().k4_max)
        throw std::invalid_argument("enumerate_contour needs an unbounded census");
    const int N = census->blocklength();
    const auto& alphabet = census->alphabet();
    if (k > max_input_bits(N, alphabet)) throw InfeasibleShaping("input length exceeds floor(N*log2(M/2))");

    const BigCount lo = pow2(k);
    const BigCount hi = pow2(k + 1);
    const auto klevels = census->kurtosis_levels();
    auto rank_of = [&](KurtosisSum v) {
        return static_cast<std::size_t>(std::lower_bound(klevels.begin(), klevels.end(), v) - klevels.begin());
    };

    RateContour contour;
    contour.N = N;
    contour.alphabet = alphabet;
    contour.k = k;
    contour.convention = convention;

    // Sweep energy levels upward; the tree holds every class with e <= E.
    detail::KurtosisFenwick tree(klevels.size());
    std::vector<Energy> max_e_at_rank(klevels.size(), -1);
    std::set<std::pair<Energy, KurtosisSum>> seen;
    std::vector<std::pair<Energy, KurtosisSum>> canonical;
    BigCount total = 0;
    const auto& classes = census->classes();
    std::size_t next = 0;
    while (next < classes.size()) {
        const Energy E = classes[next].energy;
        for (; next < classes.size() && classes[next].energy == E; ++next) {
            const auto r = rank_of(classes[next].kurtosis_sum);
            tree.add(r, classes[next].multiplicity);
            max_e_at_rank[r] = E;
            total += classes[next].multiplicity;
        }
        if (total < lo) continue;

        std::size_t krank = 0;
        if (convention == ContourConvention::tight_kurtosis) {
            krank = tree.lower_bound(lo);
        } else if (total < hi) {
            krank = klevels.size() - 1;
        } else {
            const auto first_over = tree.lower_bound(hi);
            if (first_over == 0) continue;
            krank = first_over - 1;
        }
        const BigCount count = tree.prefix(krank);
        if (count < lo || count >= hi) continue;

        // Snap K down to the largest populated level, E to the largest energy
        // present below that level.
        const auto last_populated = tree.lower_bound(count);
        Energy ce = -1;
        for (std::size_t r = 0; r <= last_populated; ++r) ce = std::max(ce, max_e_at_rank[r]);
        const std::pair<Energy, KurtosisSum> key{ce, klevels[last_populated]};
        if (seen.insert(key).second) canonical.push_back(key);
    }

    const Energy e_min = min_energy_bound(N, alphabet, k);
    const KurtosisSum k_min = min_kurtosis_bound(N, alphabet, k);
    {
        const auto [ce, ck] = detail::canonical_bounds(*census, e_min, std::nullopt);
        contour.sphere_endpoint = detail::make_point(*census, ce, ck);
        contour.sphere_endpoint.spec.e_max = e_min;
        contour.sphere_endpoint.spec.k4_max.reset();
        if (contour.sphere_endpoint.spec.input_bits == k && seen.insert({ce, ck}).second) canonical.push_back({ce, ck});
    }
    {
        const auto [ce, ck] = detail::canonical_bounds(*census, std::nullopt, k_min);
        contour.kurtosis_endpoint = detail::make_point(*census, ce, ck);
        contour.kurtosis_endpoint.spec.k4_max = k_min;
        contour.kurtosis_endpoint.spec.e_max.reset();
        if (contour.kurtosis_endpoint.spec.input_bits == k && seen.insert({ce, ck}).second) canonical.push_back({ce, ck});
    }

    std::sort(canonical.begin(), canonical.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second > b.second;
    });
    for (const auto& [ce, ck] : canonical) contour.points.push_back(detail::make_point(*census, ce, ck));
    contour.census = std::move(census);
    return contour;
}

inline RateContour enumerate_contour(int N, const AmplitudeAlphabet& alphabet, unsigned k,
                                     ContourConvention convention = ContourConvention::tight_kurtosis)
{
    return enumerate_contour(std::make_shared<const FinalPlaneCensus>(N, alphabet), k, convention);
}

/// Exact moment profile of each contour point, aligned with contour.points.
inline std::vector<MomentProfile> contour_profiles(const RateContour& contour)
{
    std::vector<MomentProfile> out;
    out.reserve(contour.points.size());
    for (const auto& p : contour.points)
        out.push_back(census_profile(*contour.census, p.energy_level, p.kurtosis_level));
    return out;
}

/// The contour point whose induced channel-input kurtosis is smallest.
inline ContourPoint min_kurtosis_point(const RateContour& contour)
{
    if (contour.points.empty()) throw std::invalid_argument("min_kurtosis_point: empty contour");
    const auto profiles = contour_profiles(contour);
    std::size_t best = 0;
    for (std::size_t i = 1; i < profiles.size(); ++i)
        if (profiles[i].mu4_2d < profiles[best].mu4_2d) best = i;
    return contour.points[best];
}

enum class SweepMode { sphere, min_kurtosis_klss };

struct RatePoint {
    unsigned k = 0;
    double rate = 0.0;
    ShapingSetSpec spec;
    Rational mu4_2d;
};

/// Channel-input kurtosis against shaping rate, for k = 1 .. floor(N log2(M/2)).
inline std::vector<RatePoint> rate_sweep(int N, const AmplitudeAlphabet& alphabet, SweepMode mode)
{
    auto census = std::make_shared<const FinalPlaneCensus>(N, alphabet);
    const unsigned max_bits = max_input_bits(N, alphabet);
    std::vector<RatePoint> out;
    for (unsigned k = 1; k <= max_bits; ++k) {
        RatePoint rp;
        rp.k = k;
        rp.rate = static_cast<double>(k) / N;
        const Energy e = min_energy_bound(N, alphabet, k);
        rp.spec.N = N;
        rp.spec.alphabet = alphabet;
        rp.spec.e_max = e;
        rp.spec.set_cardinality(census->cardinality(e, std::nullopt));
        rp.mu4_2d = census_profile(*census, e, std::nullopt).mu4_2d;
        if (mode == SweepMode::min_kurtosis_klss) {
            // With coarse energy levels no set may have exactly k bits; the
            // sphere set (used through its first 2^k members) then stands.
            const auto contour = enumerate_contour(census, k);
            const auto profiles = contour_profiles(contour);
            for (std::size_t i = 0; i < profiles.size(); ++i)
                if (profiles[i].mu4_2d < rp.mu4_2d) {
                    rp.spec = contour.points[i].spec;
                    rp.mu4_2d = profiles[i].mu4_2d;
                }
        }
        out.push_back(std::move(rp));
    }
    return out;
}

}  // namespace klss
