#pragma once

// Lexicographic index <-> sequence mapping over a counting trellis. Works for
// any trellis exposing a state type, a transition and a per-node path count;
// both the energy trellis and the energy/kurtosis trellis plug in here.

#include "klss/core.hpp"

#include <concepts>

namespace klss {

/// Which indices an enumerative shaper accepts.
enum class IndexDomain {
    /// The first 2^k sequences, k = floor(log2 |A|): the shaper's binary input.
    shaper,
    /// All |A| ranks.
    unrestricted,
};

/// Thrown when encode/decode is asked of an empty shaping set.
class EmptyShapingSet : public InfeasibleShaping {
public:
    EmptyShapingSet() : InfeasibleShaping("shaping set is empty; encode/decode unavailable") {}
};

template <typename T>
concept CountingTrellis = requires(const T& t, typename T::State s, int n, int a) {
    { t.blocklength() } -> std::convertible_to<int>;
    { t.alphabet() } -> std::convertible_to<const AmplitudeAlphabet&>;
    { t.start() } -> std::same_as<typename T::State>;
    { t.advance(s, a) } -> std::same_as<typename T::State>;
    { t.paths_from(n, s) } -> std::same_as<const BigCount*>;
    { t.cardinality() } -> std::convertible_to<const BigCount&>;
};

namespace detail {

template <CountingTrellis T>
const BigCount& paths_or_zero(const T& t, int n, typename T::State s)
{
    static const BigCount zero = 0;
    const BigCount* c = t.paths_from(n, s);
    return c ? *c : zero;
}

template <CountingTrellis T>
BigCount index_limit(const T& t, IndexDomain domain)
{
    if (t.cardinality() == 0) throw EmptyShapingSet();
    return domain == IndexDomain::shaper ? pow2(floor_log2(t.cardinality())) : BigCount(t.cardinality());
}

}  // namespace detail

/// Returns the index-th member of the trellis set in ascending lexicographic order.
template <CountingTrellis T>
AmplitudeSequence enumerative_encode(const T& trellis, const BigCount& index,
                                     IndexDomain domain = IndexDomain::shaper)
{
    const BigCount limit = detail::index_limit(trellis, domain);
    if (index < 0 || index >= limit) throw std::invalid_argument("index out of range for shaping set");

    const int N = trellis.blocklength();
    const auto levels = trellis.alphabet().amplitudes();
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(N));

    BigCount residual = index;
    auto state = trellis.start();
    for (int n = 0; n < N; ++n) {
        bool placed = false;
        for (int a : levels) {
            const auto next = trellis.advance(state, a);
            const BigCount& c = detail::paths_or_zero(trellis, n + 1, next);
            if (residual < c) {
                out.push_back(a);
                state = next;
                placed = true;
                break;
            }
            residual -= c;
        }
        if (!placed) throw std::logic_error("enumerative_encode: trellis counts inconsistent");
    }
    return AmplitudeSequence(std::move(out));
}

/// Lexicographic rank of seq within the trellis set.
template <CountingTrellis T>
BigCount enumerative_decode(const T& trellis, const AmplitudeSequence& seq,
                            IndexDomain domain = IndexDomain::shaper)
{
    const BigCount limit = detail::index_limit(trellis, domain);
    const int N = trellis.blocklength();
    if (seq.size() != static_cast<std::size_t>(N)) throw std::invalid_argument("sequence length mismatch");
    if (!seq.belongs_to(trellis.alphabet())) throw std::invalid_argument("sequence has amplitudes outside the alphabet");

    BigCount rank = 0;
    auto state = trellis.start();
    for (int n = 0; n < N; ++n) {
        for (int a : trellis.alphabet().amplitudes()) {
            if (a == seq[static_cast<std::size_t>(n)]) break;
            rank += detail::paths_or_zero(trellis, n + 1, trellis.advance(state, a));
        }
        state = trellis.advance(state, seq[static_cast<std::size_t>(n)]);
        if (detail::paths_or_zero(trellis, n + 1, state) == 0)
            throw std::invalid_argument("sequence is not a member of the shaping set");
    }
    if (rank >= limit) throw std::invalid_argument("sequence rank lies outside the shaper index domain");
    return rank;
}

}  // namespace klss
