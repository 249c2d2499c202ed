#pragma once

// Shared domain types for kurtosis-limited sphere shaping: the ASK amplitude
// alphabet, amplitude sequences, exact big-integer counts and the descriptor
// of a shaping set (blocklength, alphabet, energy bound, kurtosis bound).

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace klss {

using BigCount = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Accumulated sum of squared amplitudes.
using Energy = std::int64_t;
/// Accumulated sum of fourth powers of amplitudes ("kurtosis sum").
using KurtosisSum = std::int64_t;

/// Raised when a shaping set is empty or an input length cannot be reached.
class InfeasibleShaping : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// floor(log2(x)) for x >= 1.
inline unsigned floor_log2(const BigCount& x)
{
    if (x <= 0) throw std::invalid_argument("floor_log2: argument must be positive");
    return static_cast<unsigned>(boost::multiprecision::msb(x));
}

inline BigCount pow2(unsigned k)
{
    BigCount r = 1;
    r <<= k;
    return r;
}

inline std::int64_t ipow(std::int64_t base, unsigned exp)
{
    std::int64_t r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

/// Positive half of an ASK alphabet, the odd levels {1, 3, ..., M-1}.
/// Usually M = 2^m; other even M (e.g. {1, 3, 5}) are accepted for toy
/// examples, but bit labeling needs a power of two.
class AmplitudeAlphabet {
public:
    static constexpr int max_bits = 12;

    /// The 2^(m-1) amplitudes of 2^m-ASK.
    explicit AmplitudeAlphabet(int bits_per_amplitude)
    {
        if (bits_per_amplitude < 1 || bits_per_amplitude > max_bits)
            throw std::invalid_argument("bits per amplitude must be in [1, " + std::to_string(max_bits) + "]");
        fill(std::size_t{1} << (bits_per_amplitude - 1));
    }

    /// The first `count` odd levels 1, 3, ..., 2 count - 1.
    static AmplitudeAlphabet with_levels(std::size_t count)
    {
        if (count == 0 || count > (std::size_t{1} << (max_bits - 1)))
            throw std::invalid_argument("alphabet size out of range");
        AmplitudeAlphabet a;
        a.fill(count);
        return a;
    }

    /// Builds an alphabet from an explicit level list; it must be {1,3,...,M-1}.
    static AmplitudeAlphabet from_levels(std::span<const int> levels)
    {
        if (levels.empty()) throw std::invalid_argument("amplitude alphabet must be nonempty");
        for (std::size_t j = 0; j < levels.size(); ++j)
            if (levels[j] != static_cast<int>(2 * j + 1))
                throw std::invalid_argument("alphabet must be the contiguous odd levels 1,3,...,M-1");
        return with_levels(levels.size());
    }

    static AmplitudeAlphabet from_levels(std::initializer_list<int> levels)
    {
        return from_levels(std::span<const int>(levels.begin(), levels.size()));
    }

    /// True when the full alphabet is 2^m-ASK.
    bool is_binary() const noexcept { return (levels_.size() & (levels_.size() - 1)) == 0; }

    /// m with M = 2^m; only for binary alphabets.
    int bits() const
    {
        if (!is_binary()) throw std::logic_error("alphabet size is not a power of two");
        int m = 1;
        while ((std::size_t{1} << (m - 1)) < levels_.size()) ++m;
        return m;
    }

    /// Constellation order M of the full ASK alphabet.
    int ask_order() const noexcept { return static_cast<int>(2 * levels_.size()); }
    std::size_t size() const noexcept { return levels_.size(); }
    std::span<const int> amplitudes() const noexcept { return levels_; }
    int operator[](std::size_t i) const { return levels_[i]; }
    int max_amplitude() const noexcept { return levels_.back(); }

    bool contains(int a) const noexcept { return a >= 1 && a <= max_amplitude() && (a & 1) == 1; }

    /// Position of amplitude a in ascending order.
    std::size_t index_of(int a) const
    {
        if (!contains(a)) throw std::invalid_argument("amplitude " + std::to_string(a) + " not in alphabet");
        return static_cast<std::size_t>((a - 1) / 2);
    }

    bool operator==(const AmplitudeAlphabet& o) const noexcept { return levels_.size() == o.levels_.size(); }

private:
    AmplitudeAlphabet() = default;

    void fill(std::size_t count)
    {
        levels_.clear();
        for (std::size_t j = 1; j <= count; ++j) levels_.push_back(static_cast<int>(2 * j - 1));
    }

    std::vector<int> levels_;
};

/// floor(log2 |A|^N): the largest input length any shaping set can reach.
inline unsigned max_input_bits(int N, const AmplitudeAlphabet& alphabet)
{
    BigCount total = 1;
    for (int n = 0; n < N; ++n) total *= alphabet.size();
    return floor_log2(total);
}

struct SequenceStats {
    Energy energy = 0;
    KurtosisSum kurtosis_sum = 0;
    auto operator<=>(const SequenceStats&) const = default;
};

/// A block of N amplitudes. Ordering is lexicographic in natural numeric order,
/// the order used for index assignment by every enumerative shaper here.
class AmplitudeSequence {
public:
    AmplitudeSequence() = default;
    explicit AmplitudeSequence(std::vector<int> values) : values_(std::move(values)) {}
    AmplitudeSequence(std::initializer_list<int> values) : values_(values) {}

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    int operator[](std::size_t i) const { return values_[i]; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }
    std::span<const int> values() const noexcept { return values_; }

    Energy energy() const noexcept
    {
        Energy e = 0;
        for (int a : values_) e += static_cast<Energy>(a) * a;
        return e;
    }

    KurtosisSum kurtosis_sum() const noexcept
    {
        KurtosisSum k = 0;
        for (int a : values_) k += ipow(a, 4);
        return k;
    }

    SequenceStats stats() const noexcept { return {energy(), kurtosis_sum()}; }

    bool belongs_to(const AmplitudeAlphabet& alphabet) const noexcept
    {
        return std::all_of(values_.begin(), values_.end(), [&](int a) { return alphabet.contains(a); });
    }

    auto operator<=>(const AmplitudeSequence&) const = default;
    bool operator==(const AmplitudeSequence&) const = default;

private:
    std::vector<int> values_;
};

/// Descriptor of one shaping set A(E, K). A missing bound is unconstrained:
/// no kurtosis bound is plain sphere shaping, no energy bound is a pure
/// kurtosis-limited set, neither is the uniform N-cube.
struct ShapingSetSpec {
    int N = 0;
    AmplitudeAlphabet alphabet = AmplitudeAlphabet(1);
    std::optional<Energy> e_max;
    std::optional<KurtosisSum> k4_max;
    BigCount cardinality = 0;
    /// floor(log2(cardinality)); empty when the set is empty.
    std::optional<unsigned> input_bits;

    bool empty() const noexcept { return cardinality == 0; }

    bool admits(SequenceStats s) const noexcept
    {
        return (!e_max || s.energy <= *e_max) && (!k4_max || s.kurtosis_sum <= *k4_max);
    }

    /// Fills cardinality and input_bits consistently.
    void set_cardinality(BigCount c)
    {
        cardinality = std::move(c);
        input_bits = cardinality > 0 ? std::optional<unsigned>(floor_log2(cardinality)) : std::nullopt;
    }

    /// Same underlying constraint parameters (ignores derived fields).
    bool same_bounds(const ShapingSetSpec& o) const noexcept
    {
        return N == o.N && alphabet == o.alphabet && e_max == o.e_max && k4_max == o.k4_max;
    }
};

inline void check_blocklength(int N)
{
    if (N < 1) throw std::invalid_argument("blocklength N must be at least 1");
}

/// True iff seq lies in the set described by spec.
inline bool validate_sequence(const AmplitudeSequence& seq, const ShapingSetSpec& spec)
{
    if (seq.size() != static_cast<std::size_t>(spec.N))
        throw std::invalid_argument("sequence length " + std::to_string(seq.size()) + " != N = " +
                                    std::to_string(spec.N));
    if (!seq.belongs_to(spec.alphabet)) throw std::invalid_argument("sequence has amplitudes outside the alphabet");
    return spec.admits(seq.stats());
}

/// Stats of the all-ones sequence, the minimum of both sums over any sequence.
inline SequenceStats min_sequence_stats(int N, const AmplitudeAlphabet& /*alphabet*/)
{
    check_blocklength(N);
    return {N, N};
}

inline std::string to_string(const AmplitudeSequence& seq)
{
    std::string s;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(seq[i]);
    }
    return s;
}

}  // namespace klss
