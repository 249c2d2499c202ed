#pragma once

// Bounded-energy enumerative amplitude trellis and the ESS index mapping.
//
// Column n holds the accumulated energies sum_{i<=n} a_i^2 that can still be
// completed within the bound; each node stores T_n(e), the number of ways to
// reach a final node from it:
//     T_N(e) = 1 for stored e,    T_n(e) = sum_a T_{n+1}(e + a^2).
// T_0(0) is the cardinality of the shaping set.

#include "klss/core.hpp"
#include "klss/enumerative.hpp"

#include <algorithm>
#include <limits>

namespace klss {

class EssTrellis;
EssTrellis build_ess_trellis(int N, const AmplitudeAlphabet& alphabet, std::optional<Energy> e_max);

struct EnergyNode {
    Energy energy;
    BigCount paths;
};

class EssTrellis {
public:
    using State = Energy;
    using Column = std::vector<EnergyNode>;

    const ShapingSetSpec& spec() const noexcept { return spec_; }
    int blocklength() const noexcept { return spec_.N; }
    const AmplitudeAlphabet& alphabet() const noexcept { return spec_.alphabet; }
    const BigCount& cardinality() const noexcept { return spec_.cardinality; }
    std::optional<unsigned> input_bits() const noexcept { return spec_.input_bits; }
    bool empty() const noexcept { return spec_.empty(); }

    State start() const noexcept { return 0; }
    State advance(State e, int a) const noexcept { return e + static_cast<Energy>(a) * a; }

    /// T_n(e), or nullptr when (n, e) is not a stored node (zero paths).
    const BigCount* paths_from(int n, State e) const
    {
        if (n < 0 || n > spec_.N) return nullptr;
        const auto& col = columns_[static_cast<std::size_t>(n)];
        auto it = std::lower_bound(col.begin(), col.end(), e,
                                   [](const EnergyNode& node, Energy v) { return node.energy < v; });
        return (it != col.end() && it->energy == e) ? &it->paths : nullptr;
    }

    const Column& column(int n) const { return columns_.at(static_cast<std::size_t>(n)); }
    std::size_t node_count() const noexcept
    {
        std::size_t c = 0;
        for (const auto& col : columns_) c += col.size();
        return c;
    }

    friend EssTrellis build_ess_trellis(int N, const AmplitudeAlphabet& alphabet, std::optional<Energy> e_max);

    /// Rebuilds a trellis from stored columns, checking the recursion and bound.
    static EssTrellis from_columns(int N, const AmplitudeAlphabet& alphabet, std::optional<Energy> e_max,
                                   std::vector<Column> columns)
    {
        EssTrellis reference = build_ess_trellis(N, alphabet, e_max);
        if (columns.size() != reference.columns_.size()) throw std::invalid_argument("trellis column count mismatch");
        for (std::size_t n = 0; n < columns.size(); ++n) {
            const auto& got = columns[n];
            const auto& want = reference.columns_[n];
            if (got.size() != want.size()) throw std::invalid_argument("trellis column " + std::to_string(n) + " size mismatch");
            for (std::size_t i = 0; i < got.size(); ++i)
                if (got[i].energy != want[i].energy || got[i].paths != want[i].paths)
                    throw std::invalid_argument("trellis column " + std::to_string(n) + " content mismatch");
        }
        return reference;
    }

private:
    ShapingSetSpec spec_;
    std::vector<Column> columns_;
};

inline EssTrellis build_ess_trellis(int N, const AmplitudeAlphabet& alphabet, std::optional<Energy> e_max)
{
    check_blocklength(N);
    EssTrellis t;
    t.spec_.N = N;
    t.spec_.alphabet = alphabet;
    t.spec_.e_max = e_max;
    t.columns_.resize(static_cast<std::size_t>(N) + 1);

    const Energy bound = e_max.value_or(std::numeric_limits<Energy>::max() / 4);
    const auto levels = alphabet.amplitudes();

    // Forward pass: energies reachable after n amplitudes that still leave room
    // for the N - n remaining amplitudes (each contributes at least 1).
    std::vector<std::vector<Energy>> reach(static_cast<std::size_t>(N) + 1);
    if (bound >= N) reach[0].push_back(0);
    for (int n = 0; n < N; ++n) {
        const Energy room = bound - (N - n - 1);
        auto& next = reach[static_cast<std::size_t>(n) + 1];
        for (Energy e : reach[static_cast<std::size_t>(n)])
            for (int a : levels) {
                const Energy ne = e + static_cast<Energy>(a) * a;
                if (ne <= room) next.push_back(ne);
            }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
    }

    for (Energy e : reach[static_cast<std::size_t>(N)]) t.columns_[static_cast<std::size_t>(N)].push_back({e, 1});
    for (int n = N - 1; n >= 0; --n) {
        auto& col = t.columns_[static_cast<std::size_t>(n)];
        col.reserve(reach[static_cast<std::size_t>(n)].size());
        for (Energy e : reach[static_cast<std::size_t>(n)]) {
            BigCount sum = 0;
            for (int a : levels)
                if (const BigCount* c = t.paths_from(n + 1, e + static_cast<Energy>(a) * a)) sum += *c;
            col.push_back({e, std::move(sum)});
        }
    }

    const BigCount* root = t.paths_from(0, 0);
    t.spec_.set_cardinality(root ? *root : BigCount(0));
    return t;
}

/// Number of paths from the root to every stored node, column by column,
/// aligned with EssTrellis::column(n).
inline std::vector<std::vector<BigCount>> forward_counts(const EssTrellis& t)
{
    const int N = t.blocklength();
    std::vector<std::vector<BigCount>> fwd(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) fwd[static_cast<std::size_t>(n)].assign(t.column(n).size(), 0);
    if (t.column(0).empty()) return fwd;
    fwd[0][0] = 1;
    for (int n = 0; n < N; ++n) {
        const auto& col = t.column(n);
        const auto& next = t.column(n + 1);
        for (std::size_t i = 0; i < col.size(); ++i) {
            if (fwd[static_cast<std::size_t>(n)][i] == 0) continue;
            for (int a : t.alphabet().amplitudes()) {
                const Energy ne = col[i].energy + static_cast<Energy>(a) * a;
                auto it = std::lower_bound(next.begin(), next.end(), ne,
                                           [](const EnergyNode& node, Energy v) { return node.energy < v; });
                if (it != next.end() && it->energy == ne)
                    fwd[static_cast<std::size_t>(n) + 1][static_cast<std::size_t>(it - next.begin())] +=
                        fwd[static_cast<std::size_t>(n)][i];
            }
        }
    }
    return fwd;
}

inline AmplitudeSequence ess_encode(const EssTrellis& t, const BigCount& index, IndexDomain domain = IndexDomain::shaper)
{
    return enumerative_encode(t, index, domain);
}

inline BigCount ess_decode(const EssTrellis& t, const AmplitudeSequence& seq, IndexDomain domain = IndexDomain::shaper)
{
    if (t.empty()) throw EmptyShapingSet();
    if (seq.size() == static_cast<std::size_t>(t.blocklength()) && t.spec().e_max && seq.energy() > *t.spec().e_max)
        throw std::invalid_argument("sequence energy exceeds the trellis bound");
    return enumerative_decode(t, seq, domain);
}

}  // namespace klss
