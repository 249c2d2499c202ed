#pragma once

// Composition (multiset) enumeration over the amplitude alphabet.
//
// Every length-N sequence has a composition (n_1, n_3, ..., n_{M-1}) that fixes
// its energy and kurtosis sum; the number of sequences sharing a composition
// is the multinomial N! / prod n_a!. Grouping compositions by their
// (energy, kurtosis sum) pair gives the exact final-plane census of the
// kurtosis trellis without walking the trellis.

#include "klss/core.hpp"

#include <limits>
#include <map>
#include <tuple>
#include <utility>

namespace klss {

struct CompositionBounds {
    std::optional<Energy> e_max;
    std::optional<KurtosisSum> k4_max;
};

/// Calls f(counts, energy, kurtosis_sum) for every composition of N amplitudes
/// whose sums respect the bounds. counts[i] is the multiplicity of alphabet[i].
template <typename F>
void for_each_composition(int N, const AmplitudeAlphabet& alphabet, CompositionBounds bounds, F&& f)
{
    check_blocklength(N);
    const std::size_t L = alphabet.size();
    const Energy e_cap = bounds.e_max.value_or(std::numeric_limits<Energy>::max() / 4);
    const KurtosisSum k_cap = bounds.k4_max.value_or(std::numeric_limits<KurtosisSum>::max() / 4);
    if (e_cap < N || k_cap < N) return;

    std::vector<int> counts(L, 0);
    std::vector<Energy> sq(L);
    std::vector<KurtosisSum> qu(L);
    for (std::size_t i = 0; i < L; ++i) {
        sq[i] = static_cast<Energy>(alphabet[i]) * alphabet[i];
        qu[i] = sq[i] * sq[i];
    }

    // Assign counts from the largest amplitude down; the leftover slots go to
    // amplitude 1, so partial sums plus the leftover are lower bounds.
    auto rec = [&](auto&& self, std::size_t i, int remaining, Energy e, KurtosisSum k) -> void {
        if (i == 0) {
            counts[0] = remaining;
            f(std::span<const int>(counts), e + remaining, k + remaining);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            const Energy ne = e + c * sq[i];
            const KurtosisSum nk = k + c * qu[i];
            if (ne + (remaining - c) > e_cap || nk + (remaining - c) > k_cap) break;
            counts[i] = c;
            self(self, i - 1, remaining - c, ne, nk);
        }
        counts[i] = 0;
    };
    rec(rec, L - 1, N, 0, 0);
}

/// All (energy, kurtosis sum) pairs realizable by N amplitudes within the
/// bounds, ascending by energy then kurtosis sum.
inline std::vector<SequenceStats> final_plane_pairs(int N, const AmplitudeAlphabet& alphabet,
                                                    std::optional<Energy> e_max, std::optional<KurtosisSum> k4_max)
{
    std::vector<SequenceStats> pairs;
    for_each_composition(N, alphabet, {e_max, k4_max},
                         [&](std::span<const int>, Energy e, KurtosisSum k) { pairs.push_back({e, k}); });
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

/// Binomial coefficients C(n, r) for 0 <= r <= n <= N.
class BinomialTable {
public:
    explicit BinomialTable(int N) : N_(N), rows_(static_cast<std::size_t>(N) + 1)
    {
        for (int n = 0; n <= N; ++n) {
            auto& row = rows_[static_cast<std::size_t>(n)];
            row.resize(static_cast<std::size_t>(n) + 1);
            row[0] = row[static_cast<std::size_t>(n)] = 1;
            for (int r = 1; r < n; ++r)
                row[static_cast<std::size_t>(r)] =
                    rows_[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(r) - 1] +
                    rows_[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(r)];
        }
    }
    const BigCount& operator()(int n, int r) const { return rows_.at(static_cast<std::size_t>(n)).at(static_cast<std::size_t>(r)); }

    BigCount multinomial(std::span<const int> counts) const
    {
        BigCount m = 1;
        int left = 0;
        for (int c : counts) left += c;
        if (left > N_) throw std::invalid_argument("multinomial: counts exceed table size");
        for (int c : counts) {
            m *= (*this)(left, c);
            left -= c;
        }
        return m;
    }

private:
    int N_;
    std::vector<std::vector<BigCount>> rows_;
};

/// Sequences sharing one final (energy, kurtosis sum) pair.
struct PairClass {
    Energy energy = 0;
    KurtosisSum kurtosis_sum = 0;
    /// Number of sequences with this pair.
    BigCount multiplicity = 0;
    /// Total occurrences of each amplitude summed over those sequences.
    std::vector<BigCount> occurrences;
    /// Sum over those sequences of sum_i a_i^6.
    BigCount sixth_power_sum = 0;
};

/// Final-plane census of all length-N sequences (optionally pre-bounded).
class FinalPlaneCensus {
public:
    FinalPlaneCensus(int N, const AmplitudeAlphabet& alphabet, CompositionBounds bounds = {})
        : N_(N), alphabet_(alphabet), bounds_(bounds)
    {
        const BinomialTable binom(N);
        std::map<std::pair<Energy, KurtosisSum>, std::size_t> index;
        const std::size_t L = alphabet.size();
        for_each_composition(N, alphabet, bounds, [&](std::span<const int> counts, Energy e, KurtosisSum k) {
            auto [it, inserted] = index.try_emplace({e, k}, classes_.size());
            if (inserted) {
                classes_.push_back({e, k, 0, std::vector<BigCount>(L, 0), 0});
            }
            PairClass& pc = classes_[it->second];
            const BigCount mult = binom.multinomial(counts);
            pc.multiplicity += mult;
            std::int64_t s6 = 0;
            for (std::size_t i = 0; i < L; ++i) {
                if (counts[i] == 0) continue;
                pc.occurrences[i] += mult * counts[i];
                s6 += counts[i] * ipow(alphabet[i], 6);
            }
            pc.sixth_power_sum += mult * s6;
        });
        std::sort(classes_.begin(), classes_.end(), [](const PairClass& a, const PairClass& b) {
            return std::tie(a.energy, a.kurtosis_sum) < std::tie(b.energy, b.kurtosis_sum);
        });
    }

    int blocklength() const noexcept { return N_; }
    const AmplitudeAlphabet& alphabet() const noexcept { return alphabet_; }
    const CompositionBounds& bounds() const noexcept { return bounds_; }
    /// Pair classes ascending by (energy, kurtosis sum).
    const std::vector<PairClass>& classes() const noexcept { return classes_; }

    /// |A(E, K)|; bounds tighter than the census bounds are honoured.
    BigCount cardinality(std::optional<Energy> e_max, std::optional<KurtosisSum> k4_max) const
    {
        BigCount total = 0;
        for (const auto& pc : classes_) {
            if (e_max && pc.energy > *e_max) break;
            if (k4_max && pc.kurtosis_sum > *k4_max) continue;
            total += pc.multiplicity;
        }
        return total;
    }

    /// Distinct achievable energies and kurtosis sums, ascending.
    std::vector<Energy> energy_levels() const
    {
        std::vector<Energy> v;
        for (const auto& pc : classes_)
            if (v.empty() || v.back() != pc.energy) v.push_back(pc.energy);
        return v;
    }
    std::vector<KurtosisSum> kurtosis_levels() const
    {
        std::vector<KurtosisSum> v;
        v.reserve(classes_.size());
        for (const auto& pc : classes_) v.push_back(pc.kurtosis_sum);
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

private:
    int N_;
    AmplitudeAlphabet alphabet_;
    CompositionBounds bounds_;
    std::vector<PairClass> classes_;
};

}  // namespace klss
