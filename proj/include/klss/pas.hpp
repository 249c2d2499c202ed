#pragma once

// Probabilistic amplitude shaping front end: signs, binary reflected Gray
// labels for M-ASK, and assignment of shaped amplitudes to the four real
// dimensions (xI, xQ, yI, yQ) of a dual-polarization symbol.

#include "klss/core.hpp"

#include <array>
#include <complex>
#include <cstdlib>

namespace klss::pas {

class SignSequence {
public:
    SignSequence() = default;
    explicit SignSequence(std::vector<int> signs) : s_(std::move(signs))
    {
        for (int v : s_)
            if (v != 1 && v != -1) throw std::invalid_argument("signs must be +1 or -1");
    }

    std::size_t size() const noexcept { return s_.size(); }
    int operator[](std::size_t i) const { return s_[i]; }
    std::span<const int> values() const noexcept { return s_; }

    static SignSequence all_plus(std::size_t n) { return SignSequence(std::vector<int>(n, 1)); }

private:
    std::vector<int> s_;
};

inline std::vector<int> apply_signs(const AmplitudeSequence& a, const SignSequence& s)
{
    if (a.size() != s.size()) throw std::invalid_argument("amplitude and sign sequences differ in length");
    std::vector<int> x(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) x[i] = s[i] * a[i];
    return x;
}

inline AmplitudeSequence amplitudes_of(std::span<const int> x)
{
    std::vector<int> a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = std::abs(x[i]);
    return AmplitudeSequence(std::move(a));
}

inline SignSequence signs_of(std::span<const int> x)
{
    std::vector<int> s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) throw std::invalid_argument("zero is not an ASK level");
        s[i] = x[i] < 0 ? -1 : 1;
    }
    return SignSequence(std::move(s));
}

enum class MappingStrategy {
    /// One independent shaped stream per real dimension.
    one_d,
    /// One independent shaped stream per polarization.
    two_d,
    /// A single stream, four consecutive amplitudes per symbol.
    four_d,
};

inline std::size_t stream_count(MappingStrategy m)
{
    switch (m) {
    case MappingStrategy::one_d: return 4;
    case MappingStrategy::two_d: return 2;
    case MappingStrategy::four_d: return 1;
    }
    return 0;
}

/// Dual-polarization channel input, real dimensions ordered (xI, xQ, yI, yQ).
struct Symbol4D {
    std::array<int, 4> dims{};

    std::complex<double> x_pol() const { return {static_cast<double>(dims[0]), static_cast<double>(dims[1])}; }
    std::complex<double> y_pol() const { return {static_cast<double>(dims[2]), static_cast<double>(dims[3])}; }
    bool operator==(const Symbol4D&) const = default;
};

struct SymbolFrame {
    MappingStrategy strategy = MappingStrategy::four_d;
    std::vector<Symbol4D> symbols;

    /// Sums of squares and fourth powers over every real dimension.
    SequenceStats stats() const
    {
        SequenceStats s;
        for (const auto& sym : symbols)
            for (int v : sym.dims) {
                s.energy += static_cast<Energy>(v) * v;
                s.kurtosis_sum += ipow(v, 4);
            }
        return s;
    }
};

inline SymbolFrame map_symbols(std::span<const std::vector<int>> streams, MappingStrategy strategy)
{
    if (streams.size() != stream_count(strategy))
        throw std::invalid_argument("mapping strategy expects " + std::to_string(stream_count(strategy)) + " streams, got " +
                                    std::to_string(streams.size()));
    const std::size_t len = streams.front().size();
    for (const auto& s : streams)
        if (s.size() != len) throw std::invalid_argument("streams must have equal length");

    SymbolFrame f;
    f.strategy = strategy;
    switch (strategy) {
    case MappingStrategy::one_d:
        for (std::size_t j = 0; j < len; ++j)
            f.symbols.push_back({{streams[0][j], streams[1][j], streams[2][j], streams[3][j]}});
        break;
    case MappingStrategy::two_d:
        if (len % 2 != 0) throw std::invalid_argument("2D mapping needs an even stream length");
        for (std::size_t j = 0; j < len; j += 2)
            f.symbols.push_back({{streams[0][j], streams[0][j + 1], streams[1][j], streams[1][j + 1]}});
        break;
    case MappingStrategy::four_d:
        if (len % 4 != 0) throw std::invalid_argument("4D mapping needs a stream length divisible by 4");
        for (std::size_t j = 0; j < len; j += 4)
            f.symbols.push_back({{streams[0][j], streams[0][j + 1], streams[0][j + 2], streams[0][j + 3]}});
        break;
    }
    return f;
}

/// As above, also checking every magnitude against the alphabet.
inline SymbolFrame map_symbols(std::span<const std::vector<int>> streams, MappingStrategy strategy,
                               const AmplitudeAlphabet& alphabet)
{
    for (const auto& s : streams)
        for (int v : s)
            if (!alphabet.contains(std::abs(v)))
                throw std::invalid_argument("value " + std::to_string(v) + " is not a signed alphabet level");
    return map_symbols(streams, strategy);
}

/// Inverse of map_symbols: recovers the signed streams.
inline std::vector<std::vector<int>> unmap_symbols(const SymbolFrame& f)
{
    std::vector<std::vector<int>> streams(stream_count(f.strategy));
    for (const auto& sym : f.symbols) {
        switch (f.strategy) {
        case MappingStrategy::one_d:
            for (std::size_t d = 0; d < 4; ++d) streams[d].push_back(sym.dims[d]);
            break;
        case MappingStrategy::two_d:
            streams[0].insert(streams[0].end(), {sym.dims[0], sym.dims[1]});
            streams[1].insert(streams[1].end(), {sym.dims[2], sym.dims[3]});
            break;
        case MappingStrategy::four_d:
            streams[0].insert(streams[0].end(), sym.dims.begin(), sym.dims.end());
            break;
        }
    }
    return streams;
}

// Gray labeling. ASK levels -(M-1), ..., -1, 1, ..., M-1 carry index
// i = (x + M - 1) / 2 and label i ^ (i >> 1). The most significant bit is
// the sign; the remaining m - 1 bits depend on |x| only.

namespace detail {

inline void require_binary(const AmplitudeAlphabet& alphabet)
{
    if (!alphabet.is_binary()) throw std::invalid_argument("Gray labeling needs a 2^m-ASK alphabet");
}

}  // namespace detail

inline unsigned gray_label(int level, const AmplitudeAlphabet& alphabet)
{
    detail::require_binary(alphabet);
    const int M = alphabet.ask_order();
    if (level == 0 || !alphabet.contains(std::abs(level)))
        throw std::invalid_argument("level " + std::to_string(level) + " is not an ASK point");
    const auto i = static_cast<unsigned>((level + M - 1) / 2);
    return i ^ (i >> 1);
}

inline int gray_unlabel(unsigned label, const AmplitudeAlphabet& alphabet)
{
    detail::require_binary(alphabet);
    const int M = alphabet.ask_order();
    if (label >= static_cast<unsigned>(M)) throw std::invalid_argument("label wider than log2(M) bits");
    unsigned i = label;
    for (unsigned shift = label >> 1; shift != 0; shift >>= 1) i ^= shift;
    return 2 * static_cast<int>(i) - (M - 1);
}

inline bool sign_bit(unsigned label, const AmplitudeAlphabet& alphabet)
{
    return (label >> (alphabet.bits() - 1)) & 1U;
}

/// The m - 1 amplitude bits of a label; identical for +a and -a.
inline unsigned amplitude_label(int amplitude, const AmplitudeAlphabet& alphabet)
{
    const unsigned mask = (1U << (alphabet.bits() - 1)) - 1U;
    return gray_label(std::abs(amplitude), alphabet) & mask;
}

inline std::string to_bit_string(unsigned label, int width)
{
    std::string s(static_cast<std::size_t>(width), '0');
    for (int b = 0; b < width; ++b)
        if ((label >> (width - 1 - b)) & 1U) s[static_cast<std::size_t>(b)] = '1';
    return s;
}

}  // namespace klss::pas
