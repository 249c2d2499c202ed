#include "klss/kess.hpp"
#include "klss/pas.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <random>

using namespace klss;
using namespace klss::pas;

TEST(Signs, Examples)
{
    const AmplitudeSequence a{1, 3, 5};
    EXPECT_EQ(apply_signs(a, SignSequence({1, -1, 1})), (std::vector<int>{1, -3, 5}));
    EXPECT_EQ(apply_signs(a, SignSequence::all_plus(3)), (std::vector<int>{1, 3, 5}));
    const auto neg = apply_signs(a, SignSequence({-1, -1, -1}));
    EXPECT_EQ(neg, (std::vector<int>{-1, -3, -5}));
    EXPECT_EQ(amplitudes_of(neg).stats(), a.stats());
    EXPECT_THROW(apply_signs(a, SignSequence({1, 1})), std::invalid_argument);
    EXPECT_THROW(SignSequence({1, 0}), std::invalid_argument);
}

TEST(Signs, SplitRoundTrip)
{
    const std::vector<int> x{-7, 5, -1, 3};
    EXPECT_EQ(apply_signs(amplitudes_of(x), signs_of(x)), x);
}

TEST(MapSymbols, FourDimensionalExample)
{
    const std::vector<std::vector<int>> one{{1, -3, 5, -7, 1, 1, 1, 1}};
    const auto f = map_symbols(one, MappingStrategy::four_d);
    ASSERT_EQ(f.symbols.size(), 2u);
    EXPECT_EQ(f.symbols[0].x_pol(), std::complex<double>(1, -3));
    EXPECT_EQ(f.symbols[0].y_pol(), std::complex<double>(5, -7));
    EXPECT_EQ(f.symbols[1].x_pol(), std::complex<double>(1, 1));
    EXPECT_EQ(f.symbols[1].y_pol(), std::complex<double>(1, 1));
}

TEST(MapSymbols, OneDimensionalConstantStreams)
{
    const std::vector<std::vector<int>> s{{3, 3, 3}, {-1, -1, -1}, {5, 5, 5}, {1, 1, 1}};
    const auto f = map_symbols(s, MappingStrategy::one_d);
    ASSERT_EQ(f.symbols.size(), 3u);
    for (const auto& sym : f.symbols) EXPECT_EQ(sym, f.symbols.front());
    EXPECT_EQ(f.symbols[0].dims, (std::array<int, 4>{3, -1, 5, 1}));
}

TEST(MapSymbols, TwoAndFourDimensionalUseSameMagnitudes)
{
    std::mt19937 rng(9);
    std::vector<int> all(32);
    for (auto& v : all) v = (2 * static_cast<int>(rng() % 4) + 1) * (rng() % 2 ? 1 : -1);
    const std::vector<std::vector<int>> one{all};
    const std::vector<std::vector<int>> two{{all.begin(), all.begin() + 16}, {all.begin() + 16, all.end()}};
    auto tally = [](const SymbolFrame& f) {
        std::map<int, int> t;
        for (const auto& s : f.symbols)
            for (int v : s.dims) ++t[std::abs(v)];
        return t;
    };
    const auto f4 = map_symbols(one, MappingStrategy::four_d);
    const auto f2 = map_symbols(two, MappingStrategy::two_d);
    EXPECT_EQ(tally(f4), tally(f2));
    EXPECT_EQ(f4.symbols.size() * 4, all.size());
    EXPECT_EQ(f2.symbols.size() * 4, all.size());
}

TEST(MapSymbols, ShapeErrors)
{
    const std::vector<std::vector<int>> one{{1, 1, 1}};
    EXPECT_THROW(map_symbols(one, MappingStrategy::four_d), std::invalid_argument);
    EXPECT_THROW(map_symbols(one, MappingStrategy::two_d), std::invalid_argument);
    const std::vector<std::vector<int>> two{{1, 1}, {1}};
    EXPECT_THROW(map_symbols(two, MappingStrategy::two_d), std::invalid_argument);
    const std::vector<std::vector<int>> bad{{1, 3, 9, 1}};
    EXPECT_THROW(map_symbols(bad, MappingStrategy::four_d, AmplitudeAlphabet(3)), std::invalid_argument);
}

TEST(GrayLabel, AdjacentLevelsDifferInOneBit)
{
    for (int m = 1; m <= 6; ++m) {
        const AmplitudeAlphabet a(m);
        const int M = a.ask_order();
        std::set<unsigned> seen;
        for (int x = -(M - 1); x <= M - 1; x += 2) {
            const unsigned g = gray_label(x, a);
            EXPECT_LT(g, static_cast<unsigned>(M));
            EXPECT_TRUE(seen.insert(g).second);
            EXPECT_EQ(gray_unlabel(g, a), x);
            if (x + 2 <= M - 1) {
                EXPECT_EQ(std::popcount(g ^ gray_label(x + 2, a)), 1);
            }
        }
    }
}

TEST(GrayLabel, SignAndAmplitudeBitsSeparate)
{
    const AmplitudeAlphabet a(3);
    for (int amp : a.amplitudes()) {
        const unsigned pos = gray_label(amp, a), neg = gray_label(-amp, a);
        EXPECT_TRUE(sign_bit(pos, a));
        EXPECT_FALSE(sign_bit(neg, a));
        EXPECT_EQ(pos & 3U, neg & 3U);
        EXPECT_EQ(amplitude_label(amp, a), amplitude_label(-amp, a));
    }
    EXPECT_EQ(to_bit_string(gray_label(-7, a), 3), "000");
    EXPECT_EQ(to_bit_string(gray_label(7, a), 3), "100");
    EXPECT_THROW(gray_label(2, a), std::invalid_argument);
    EXPECT_THROW(gray_label(9, a), std::invalid_argument);
    EXPECT_THROW(gray_label(1, AmplitudeAlphabet::with_levels(3)), std::invalid_argument);
}

TEST(EndToEnd, IndexSurvivesSymbolMapping)
{
    const AmplitudeAlphabet alphabet(3);
    const auto t = build_kess_trellis(16, alphabet, 200, 3000);
    const unsigned k = *t.input_bits();
    std::mt19937_64 rng(2718);
    for (auto strategy : {MappingStrategy::one_d, MappingStrategy::two_d, MappingStrategy::four_d}) {
        const std::size_t streams = stream_count(strategy);
        for (int trial = 0; trial < 10000; ++trial) {
            std::vector<BigCount> idx;
            std::vector<std::vector<int>> signed_streams;
            for (std::size_t s = 0; s < streams; ++s) {
                idx.push_back(testutil::random_below(rng, pow2(k)));
                const auto amps = kess_encode(t, idx.back());
                std::vector<int> signs(amps.size());
                for (auto& v : signs) v = rng() % 2 ? 1 : -1;
                signed_streams.push_back(apply_signs(amps, SignSequence(signs)));
            }
            const auto frame = map_symbols(signed_streams, strategy, alphabet);
            const auto back = unmap_symbols(frame);
            ASSERT_EQ(back, signed_streams);
            SequenceStats total;
            for (std::size_t s = 0; s < streams; ++s) {
                const auto amps = amplitudes_of(back[s]);
                ASSERT_EQ(kess_decode(t, amps), idx[s]);
                total.energy += amps.energy();
                total.kurtosis_sum += amps.kurtosis_sum();
            }
            EXPECT_EQ(frame.stats(), total);
        }
    }
}
