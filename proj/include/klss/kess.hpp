#pragma once

// Bounded-energy and bounded-kurtosis enumerative amplitude trellis (K-ESS).
//
// Plane n holds the pairs (e, k) = (sum a_i^2, sum a_i^4) over the first n
// amplitudes that can still be completed within both bounds. Each node stores
//     F_N(e, k) = 1 for stored final pairs,   F_n(e, k) = sum_a F_{n+1}(e + a^2, k + a^4)
// and F_0(0, 0) is the cardinality of the kurtosis-limited set. Final-plane
// pairs are exactly the pairs realizable by some composition of N amplitudes
// (see final_plane_pairs); the forward reachability pass produces no others.

#include "klss/core.hpp"
#include "klss/enumerative.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace klss {

class KessTrellis;
KessTrellis build_kess_trellis(int N, const AmplitudeAlphabet& alphabet, std::optional<Energy> e_max,
                               std::optional<KurtosisSum> k4_max);

struct PlaneNode {
    Energy energy;
    KurtosisSum kurtosis_sum;
    BigCount paths;
};

class KessTrellis {
public:
    using State = SequenceStats;
    using Plane = std::vector<PlaneNode>;

    const ShapingSetSpec& spec() const noexcept { return spec_; }
    int blocklength() const noexcept { return spec_.N; }
    const AmplitudeAlphabet& alphabet() const noexcept { return spec_.alphabet; }
    const BigCount& cardinality() const noexcept { return spec_.cardinality; }
    std::optional<unsigned> input_bits() const noexcept { return spec_.input_bits; }
    bool empty() const noexcept { return spec_.empty(); }

    State start() const noexcept { return {0, 0}; }
    State advance(State s, int a) const noexcept
    {
        const Energy sq = static_cast<Energy>(a) * a;
        return {s.energy + sq, s.kurtosis_sum + sq * sq};
    }

    /// F_n(e, k), or nullptr for a node that is not stored (zero paths).
    const BigCount* paths_from(int n, State s) const
    {
        if (n < 0 || n > spec_.N) return nullptr;
        const auto& plane = planes_[static_cast<std::size_t>(n)];
        auto it = std::lower_bound(plane.begin(), plane.end(), s, [](const PlaneNode& node, const State& v) {
            return std::tie(node.energy, node.kurtosis_sum) < std::tie(v.energy, v.kurtosis_sum);
        });
        return (it != plane.end() && it->energy == s.energy && it->kurtosis_sum == s.kurtosis_sum) ? &it->paths
                                                                                                     : nullptr;
    }

    /// Nodes of plane n sorted by (energy, kurtosis sum).
    const Plane& plane(int n) const { return planes_.at(static_cast<std::size_t>(n)); }

    std::size_t node_count() const noexcept
    {
        std::size_t c = 0;
        for (const auto& p : planes_) c += p.size();
        return c;
    }

    /// Pairs of the final plane, ascending.
    std::vector<SequenceStats> final_pairs() const
    {
        std::vector<SequenceStats> v;
        for (const auto& node : planes_.back()) v.push_back({node.energy, node.kurtosis_sum});
        return v;
    }

    friend KessTrellis build_kess_trellis(int N, const AmplitudeAlphabet& alphabet, std::optional<Energy> e_max,
                                          std::optional<KurtosisSum> k4_max);

    /// Rebuilds a trellis from stored planes, checking them against a fresh build.
    static KessTrellis from_planes(int N, const AmplitudeAlphabet& alphabet, std::optional<Energy> e_max,
                                   std::optional<KurtosisSum> k4_max, const std::vector<Plane>& planes)
    {
        KessTrellis reference = build_kess_trellis(N, alphabet, e_max, k4_max);
        if (planes.size() != reference.planes_.size()) throw std::invalid_argument("trellis plane count mismatch");
        for (std::size_t n = 0; n < planes.size(); ++n) {
            const auto& got = planes[n];
            const auto& want = reference.planes_[n];
            if (got.size() != want.size()) throw std::invalid_argument("trellis plane " + std::to_string(n) + " size mismatch");
            for (std::size_t i = 0; i < got.size(); ++i)
                if (got[i].energy != want[i].energy || got[i].kurtosis_sum != want[i].kurtosis_sum ||
                    got[i].paths != want[i].paths)
                    throw std::invalid_argument("trellis plane " + std::to_string(n) + " content mismatch");
        }
        return reference;
    }

private:
    ShapingSetSpec spec_;
    std::vector<Plane> planes_;
};

inline KessTrellis build_kess_trellis(int N, const AmplitudeAlphabet& alphabet, std::optional<Energy> e_max,
                                      std::optional<KurtosisSum> k4_max)
{
    check_blocklength(N);
    KessTrellis t;
    t.spec_.N = N;
    t.spec_.alphabet = alphabet;
    t.spec_.e_max = e_max;
    t.spec_.k4_max = k4_max;
    t.planes_.resize(static_cast<std::size_t>(N) + 1);

    const Energy e_cap = e_max.value_or(std::numeric_limits<Energy>::max() / 4);
    const KurtosisSum k_cap = k4_max.value_or(std::numeric_limits<KurtosisSum>::max() / 4);
    const auto levels = alphabet.amplitudes();

    std::vector<std::vector<SequenceStats>> reach(static_cast<std::size_t>(N) + 1);
    if (e_cap >= N && k_cap >= N) reach[0].push_back({0, 0});
    for (int n = 0; n < N; ++n) {
        const std::int64_t slack = N - n - 1;
        auto& next = reach[static_cast<std::size_t>(n) + 1];
        next.reserve(reach[static_cast<std::size_t>(n)].size() * levels.size());
        for (const auto& s : reach[static_cast<std::size_t>(n)])
            for (int a : levels) {
                const auto ns = t.advance(s, a);
                if (ns.energy + slack <= e_cap && ns.kurtosis_sum + slack <= k_cap) next.push_back(ns);
            }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        next.shrink_to_fit();
    }

    auto& last = t.planes_[static_cast<std::size_t>(N)];
    last.reserve(reach[static_cast<std::size_t>(N)].size());
    for (const auto& s : reach[static_cast<std::size_t>(N)]) last.push_back({s.energy, s.kurtosis_sum, 1});
    reach[static_cast<std::size_t>(N)].clear();

    for (int n = N - 1; n >= 0; --n) {
        auto& plane = t.planes_[static_cast<std::size_t>(n)];
        auto& states = reach[static_cast<std::size_t>(n)];
        plane.reserve(states.size());
        for (const auto& s : states) {
            BigCount sum = 0;
            for (int a : levels)
                if (const BigCount* c = t.paths_from(n + 1, t.advance(s, a))) sum += *c;
            plane.push_back({s.energy, s.kurtosis_sum, std::move(sum)});
        }
        states.clear();
        states.shrink_to_fit();
    }

    const BigCount* root = t.paths_from(0, {0, 0});
    t.spec_.set_cardinality(root ? *root : BigCount(0));
    return t;
}

/// Number of root-to-node paths for every stored node, aligned with plane(n).
/// At the final plane this is the number of set members per (e, k) pair.
inline std::vector<std::vector<BigCount>> forward_counts(const KessTrellis& t)
{
    const int N = t.blocklength();
    std::vector<std::vector<BigCount>> fwd(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) fwd[static_cast<std::size_t>(n)].assign(t.plane(n).size(), 0);
    if (t.plane(0).empty()) return fwd;
    fwd[0][0] = 1;
    for (int n = 0; n < N; ++n) {
        const auto& plane = t.plane(n);
        const auto& next = t.plane(n + 1);
        for (std::size_t i = 0; i < plane.size(); ++i) {
            const BigCount& here = fwd[static_cast<std::size_t>(n)][i];
            if (here == 0) continue;
            for (int a : t.alphabet().amplitudes()) {
                const auto ns = t.advance({plane[i].energy, plane[i].kurtosis_sum}, a);
                auto it = std::lower_bound(next.begin(), next.end(), ns, [](const PlaneNode& node, const SequenceStats& v) {
                    return std::tie(node.energy, node.kurtosis_sum) < std::tie(v.energy, v.kurtosis_sum);
                });
                if (it != next.end() && it->energy == ns.energy && it->kurtosis_sum == ns.kurtosis_sum)
                    fwd[static_cast<std::size_t>(n) + 1][static_cast<std::size_t>(it - next.begin())] += here;
            }
        }
    }
    return fwd;
}

inline AmplitudeSequence kess_encode(const KessTrellis& t, const BigCount& index, IndexDomain domain = IndexDomain::shaper)
{
    return enumerative_encode(t, index, domain);
}

inline BigCount kess_decode(const KessTrellis& t, const AmplitudeSequence& seq, IndexDomain domain = IndexDomain::shaper)
{
    if (t.empty()) throw EmptyShapingSet();
    if (seq.size() == static_cast<std::size_t>(t.blocklength()) && seq.belongs_to(t.alphabet()) &&
        !t.spec().admits(seq.stats()))
        throw std::invalid_argument("sequence violates the energy or kurtosis bound");
    return enumerative_decode(t, seq, domain);
}

}  // namespace klss
