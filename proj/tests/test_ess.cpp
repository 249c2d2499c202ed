#include "klss/ess.hpp"

#include "oracle.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <random>

using namespace klss;
using testutil::random_below;

namespace {

AmplitudeAlphabet three() { return AmplitudeAlphabet::with_levels(3); }

}  // namespace

TEST(EssTrellis, ThreeLevelCardinality)
{
    const auto t = build_ess_trellis(3, three(), 28);
    EXPECT_EQ(t.cardinality(), 11);
    EXPECT_EQ(t.input_bits(), 3u);
    // The E = 27 parameterization describes the same set.
    EXPECT_EQ(build_ess_trellis(3, three(), 27).cardinality(), 11);
    // Final column: energies 3, 11, 19, 27.
    std::vector<Energy> finals;
    for (const auto& node : t.column(3)) finals.push_back(node.energy);
    EXPECT_EQ(finals, (std::vector<Energy>{3, 11, 19, 27}));
}

TEST(EssTrellis, SmallCases)
{
    EXPECT_EQ(build_ess_trellis(3, three(), 3).cardinality(), 1);
    EXPECT_EQ(build_ess_trellis(4, AmplitudeAlphabet(1 + 1), 20).cardinality(), 11);
    EXPECT_EQ(build_ess_trellis(4, AmplitudeAlphabet(2), std::nullopt).cardinality(), 16);
}

TEST(EssTrellis, EmptySetIsTypedCondition)
{
    const auto t = build_ess_trellis(5, AmplitudeAlphabet(3), 4);
    EXPECT_TRUE(t.empty());
    EXPECT_FALSE(t.input_bits().has_value());
    EXPECT_THROW(ess_encode(t, 0), EmptyShapingSet);
    EXPECT_THROW(ess_decode(t, {1, 1, 1, 1, 1}), EmptyShapingSet);
}

TEST(EssTrellis, RecursionAndTerminalInvariants)
{
    const auto t = build_ess_trellis(6, AmplitudeAlphabet(3), 90);
    for (const auto& node : t.column(6)) {
        EXPECT_EQ(node.paths, 1);
        EXPECT_LE(node.energy, 90);
        EXPECT_EQ((node.energy - 6) % 8, 0);
    }
    for (int n = 0; n < 6; ++n)
        for (const auto& node : t.column(n)) {
            BigCount sum = 0;
            for (int a : t.alphabet().amplitudes())
                if (const auto* c = t.paths_from(n + 1, node.energy + a * a)) sum += *c;
            EXPECT_EQ(node.paths, sum);
        }
}

TEST(EssEncode, ThreeLevelExamples)
{
    const auto t = build_ess_trellis(3, three(), 28);
    EXPECT_EQ(ess_encode(t, 0), (AmplitudeSequence{1, 1, 1}));
    EXPECT_EQ(ess_encode(t, 7), (AmplitudeSequence{3, 1, 3}));
    EXPECT_EQ(ess_encode(t, 9, IndexDomain::unrestricted), (AmplitudeSequence{3, 3, 3}));
    EXPECT_THROW(ess_encode(t, 9), std::invalid_argument);  // only 2^3 = 8 shaper indices
    EXPECT_THROW(ess_encode(t, 11, IndexDomain::unrestricted), std::invalid_argument);
    EXPECT_THROW(ess_encode(t, -1, IndexDomain::unrestricted), std::invalid_argument);
}

TEST(EssDecode, ThreeLevelExamples)
{
    const auto t = build_ess_trellis(3, three(), 28);
    EXPECT_EQ(ess_decode(t, {1, 1, 1}), 0);
    EXPECT_EQ(ess_decode(t, {3, 3, 3}, IndexDomain::unrestricted), 9);
    EXPECT_EQ(ess_decode(t, {5, 1, 1}, IndexDomain::unrestricted), 10);
    EXPECT_THROW(ess_decode(t, {5, 1, 1}), std::invalid_argument);  // rank beyond 2^k
    EXPECT_THROW(ess_decode(t, {5, 3, 1}, IndexDomain::unrestricted), std::invalid_argument);
    EXPECT_THROW(ess_decode(t, {1, 1}, IndexDomain::unrestricted), std::invalid_argument);
}

TEST(EssTrellis, MatchesBruteForceSetAndOrder)
{
    for (std::size_t levels = 1; levels <= 4; ++levels) {
        const auto alphabet = AmplitudeAlphabet::with_levels(levels);
        const int half = static_cast<int>(levels);
        const int max_n = levels == 4 ? 6 : 8;
        for (int N = 1; N <= max_n; ++N) {
            const Energy cube_max = static_cast<Energy>(N) * alphabet.max_amplitude() * alphabet.max_amplitude();
            for (Energy e = N - 1; e <= cube_max; e += 12) {
                const auto want = oracle::members(N, half, e, std::nullopt);
                const auto t = build_ess_trellis(N, alphabet, e);
                ASSERT_EQ(t.cardinality(), want.size()) << "N=" << N << " L=" << levels << " E=" << e;
                for (std::size_t i = 0; i < want.size(); ++i) {
                    ASSERT_EQ(ess_encode(t, i, IndexDomain::unrestricted), AmplitudeSequence(want[i]));
                    ASSERT_EQ(ess_decode(t, AmplitudeSequence(want[i]), IndexDomain::unrestricted), i);
                }
            }
        }
    }
}

TEST(EssTrellis, ColumnIdentity)
{
    const auto t = build_ess_trellis(10, AmplitudeAlphabet(3), 170);
    const auto fwd = forward_counts(t);
    for (int n = 0; n <= 10; ++n) {
        BigCount total = 0;
        const auto& col = t.column(n);
        for (std::size_t i = 0; i < col.size(); ++i) total += fwd[static_cast<std::size_t>(n)][i] * col[i].paths;
        EXPECT_EQ(total, t.cardinality()) << "column " << n;
    }
}

TEST(EssEncode, RandomRoundTripAndMonotone)
{
    std::mt19937_64 rng(2024);
    for (int inst = 0; inst < 20; ++inst) {
        const int N = 1 + static_cast<int>(rng() % 12);
        const AmplitudeAlphabet alphabet(1 + static_cast<int>(rng() % 3));
        const Energy top = static_cast<Energy>(N) * alphabet.max_amplitude() * alphabet.max_amplitude();
        const Energy e = N + static_cast<Energy>(rng() % static_cast<std::uint64_t>(top - N + 1));
        const auto t = build_ess_trellis(N, alphabet, e);
        ASSERT_FALSE(t.empty());
        const BigCount limit = pow2(*t.input_bits());
        for (int trial = 0; trial < 500; ++trial) {
            const BigCount i = random_below(rng, limit);
            const auto seq = ess_encode(t, i);
            ASSERT_LE(seq.energy(), e);
            ASSERT_EQ(ess_decode(t, seq), i);
            if (i + 1 < limit) {
                ASSERT_LT(seq, ess_encode(t, i + 1));
            }
        }
    }
}

TEST(EssTrellis, LargeBlockBuildsQuickly)
{
    const auto start = std::chrono::steady_clock::now();
    const auto t = build_ess_trellis(108, AmplitudeAlphabet(3), 860);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    EXPECT_EQ(t.input_bits(), 162u);
    EXPECT_LT(std::chrono::duration<double>(elapsed).count(), 5.0);
    // One level lower no longer supports 162 bits.
    EXPECT_LT(*build_ess_trellis(108, AmplitudeAlphabet(3), 852).input_bits(), 162u);
}
