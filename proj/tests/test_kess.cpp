#include "klss/analytics.hpp"
#include "klss/census.hpp"
#include "klss/ess.hpp"
#include "klss/kess.hpp"
#include "klss/setsearch.hpp"

#include "oracle.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace klss;
using testutil::random_below;

namespace {

AmplitudeAlphabet three() { return AmplitudeAlphabet::with_levels(3); }

std::vector<SequenceStats> pairs(std::initializer_list<SequenceStats> v) { return v; }

}  // namespace

TEST(FinalPlanePairs, ThreeLevelSphere)
{
    EXPECT_EQ(final_plane_pairs(3, three(), 28, std::nullopt),
              pairs({{3, 3}, {11, 83}, {19, 163}, {27, 243}, {27, 627}}));
    EXPECT_EQ(final_plane_pairs(3, three(), 28, 626), pairs({{3, 3}, {11, 83}, {19, 163}, {27, 243}}));
    EXPECT_EQ(final_plane_pairs(1, AmplitudeAlphabet(2), 9, 81), pairs({{1, 1}, {9, 81}}));
}

TEST(FinalPlanePairs, EqualTrellisFinalPlane)
{
    for (std::size_t levels = 1; levels <= 4; ++levels)
        for (int N = 1; N <= 7; ++N)
            for (Energy e : {Energy{N}, Energy{4 * N}, Energy{12 * N}, Energy{30 * N}})
                for (KurtosisSum k : {KurtosisSum{N}, KurtosisSum{40 * N}, KurtosisSum{400 * N}}) {
                    const auto alphabet = AmplitudeAlphabet::with_levels(levels);
                    EXPECT_EQ(build_kess_trellis(N, alphabet, e, k).final_pairs(), final_plane_pairs(N, alphabet, e, k));
                }
}

TEST(KessTrellis, ThreeLevelCardinality)
{
    EXPECT_EQ(build_kess_trellis(3, three(), 28, 626).cardinality(), 8);
    EXPECT_EQ(build_kess_trellis(3, three(), 28, std::nullopt).cardinality(), 11);
    EXPECT_EQ(build_kess_trellis(2, AmplitudeAlphabet(2), 2, 2).cardinality(), 1);
    // Kurtosis-only set.
    EXPECT_EQ(build_kess_trellis(3, three(), std::nullopt, 243).cardinality(), 8);
}

TEST(KessTrellis, RecursionAndTerminalInvariants)
{
    const auto t = build_kess_trellis(6, AmplitudeAlphabet(3), 110, 3000);
    for (const auto& node : t.plane(6)) {
        EXPECT_EQ(node.paths, 1);
        EXPECT_LE(node.energy, 110);
        EXPECT_LE(node.kurtosis_sum, 3000);
    }
    for (int n = 0; n < 6; ++n)
        for (const auto& node : t.plane(n)) {
            BigCount sum = 0;
            for (int a : t.alphabet().amplitudes())
                if (const auto* c = t.paths_from(n + 1, t.advance({node.energy, node.kurtosis_sum}, a))) sum += *c;
            EXPECT_EQ(node.paths, sum);
        }
}

// Without a kurtosis bound the completion count ignores the kurtosis sum, so
// every node (e, k) carries T_n(e) and forward counts project onto e.
TEST(KessTrellis, ProjectsOntoEnergyTrellis)
{
    const auto kt = build_kess_trellis(7, AmplitudeAlphabet(3), 150, std::nullopt);
    const auto et = build_ess_trellis(7, AmplitudeAlphabet(3), 150);
    const auto kf = forward_counts(kt);
    const auto ef = forward_counts(et);
    for (int n = 0; n <= 7; ++n) {
        std::map<Energy, BigCount> reached;
        const auto& plane = kt.plane(n);
        for (std::size_t i = 0; i < plane.size(); ++i) {
            const auto* t = et.paths_from(n, plane[i].energy);
            ASSERT_NE(t, nullptr);
            EXPECT_EQ(plane[i].paths, *t);
            reached[plane[i].energy] += kf[static_cast<std::size_t>(n)][i];
        }
        const auto& col = et.column(n);
        ASSERT_EQ(reached.size(), col.size());
        for (std::size_t i = 0; i < col.size(); ++i) EXPECT_EQ(reached[col[i].energy], ef[static_cast<std::size_t>(n)][i]);
    }
}

TEST(KessEncode, ThreeLevelExamples)
{
    const auto t = build_kess_trellis(3, three(), 28, 626);
    EXPECT_EQ(t.input_bits(), 3u);
    EXPECT_EQ(kess_encode(t, 0), (AmplitudeSequence{1, 1, 1}));
    EXPECT_EQ(kess_encode(t, 7), (AmplitudeSequence{3, 3, 3}));
    EXPECT_EQ(kess_decode(t, {3, 1, 3}), 5);
    EXPECT_THROW(kess_encode(t, 8), std::invalid_argument);
    EXPECT_THROW(kess_decode(t, {1, 1, 5}, IndexDomain::unrestricted), std::invalid_argument);
}

TEST(KessTrellis, EmptySetIsTypedCondition)
{
    const auto t = build_kess_trellis(4, AmplitudeAlphabet(2), 20, 3);
    EXPECT_TRUE(t.empty());
    EXPECT_THROW(kess_encode(t, 0), EmptyShapingSet);
    EXPECT_THROW(kess_decode(t, {1, 1, 1, 1}), EmptyShapingSet);
}

TEST(KessTrellis, MatchesBruteForceSetAndOrder)
{
    for (std::size_t levels = 1; levels <= 4; ++levels) {
        const auto alphabet = AmplitudeAlphabet::with_levels(levels);
        const int max_n = levels == 4 ? 6 : 8;
        for (int N = 1; N <= max_n; ++N) {
            const auto census = FinalPlaneCensus(N, alphabet);
            const auto elevels = census.energy_levels();
            const auto klevels = census.kurtosis_levels();
            const std::size_t estep = std::max<std::size_t>(1, elevels.size() / 5);
            const std::size_t kstep = std::max<std::size_t>(1, klevels.size() / 5);
            for (std::size_t i = 0; i < elevels.size(); i += estep)
                for (std::size_t j = 0; j < klevels.size(); j += kstep) {
                    const auto want = oracle::members(N, static_cast<int>(levels), elevels[i], klevels[j]);
                    const auto t = build_kess_trellis(N, alphabet, elevels[i], klevels[j]);
                    ASSERT_EQ(t.cardinality(), want.size());
                    for (std::size_t r = 0; r < want.size(); ++r) {
                        ASSERT_EQ(kess_encode(t, r, IndexDomain::unrestricted), AmplitudeSequence(want[r]));
                        ASSERT_EQ(kess_decode(t, AmplitudeSequence(want[r]), IndexDomain::unrestricted), r);
                    }
                }
        }
    }
}

TEST(KessTrellis, EnergyOnlyCaseAgreesWithEss)
{
    for (std::size_t levels = 1; levels <= 4; ++levels) {
        const auto alphabet = AmplitudeAlphabet::with_levels(levels);
        for (int N = 1; N <= 8; ++N) {
            const Energy top = static_cast<Energy>(N) * alphabet.max_amplitude() * alphabet.max_amplitude();
            for (Energy e = N; e <= top; e += 16) {
                const auto et = build_ess_trellis(N, alphabet, e);
                const auto kt = build_kess_trellis(N, alphabet, e, std::nullopt);
                ASSERT_EQ(kt.cardinality(), et.cardinality());
                const auto limit = et.cardinality();
                const BigCount step = limit / 200 + 1;
                for (BigCount i = 0; i < limit; i += step)
                    ASSERT_EQ(kess_encode(kt, i, IndexDomain::unrestricted), ess_encode(et, i, IndexDomain::unrestricted));
            }
        }
    }
}

TEST(KessEncode, RandomRoundTripAndMonotone)
{
    std::mt19937_64 rng(77);
    for (int inst = 0; inst < 20; ++inst) {
        const int N = 1 + static_cast<int>(rng() % 12);
        const AmplitudeAlphabet alphabet(1 + static_cast<int>(rng() % 3));
        const FinalPlaneCensus census(N, alphabet);
        const auto el = census.energy_levels();
        const auto kl = census.kurtosis_levels();
        const Energy e = el[rng() % el.size()];
        const KurtosisSum k = kl[rng() % kl.size()];
        const auto t = build_kess_trellis(N, alphabet, e, k);
        if (t.empty()) continue;
        const BigCount limit = pow2(*t.input_bits());
        for (int trial = 0; trial < 300; ++trial) {
            const BigCount i = random_below(rng, limit);
            const auto seq = kess_encode(t, i);
            ASSERT_TRUE(t.spec().admits(seq.stats()));
            ASSERT_EQ(kess_decode(t, seq), i);
            if (i + 1 < limit) {
                ASSERT_LT(seq, kess_encode(t, i + 1));
            }
        }
    }
}

TEST(KessTrellis, CardinalityMonotoneInBothBounds)
{
    const AmplitudeAlphabet alphabet(3);
    const int N = 6;
    BigCount prev_row = -1;
    for (Energy e = 6; e <= 294; e += 24) {
        BigCount prev = -1;
        for (KurtosisSum k = 6; k <= 14406; k += 480) {
            const BigCount c = build_kess_trellis(N, alphabet, e, k).cardinality();
            EXPECT_GE(c, prev);
            prev = c;
        }
        EXPECT_GE(prev, prev_row);
        prev_row = prev;
    }
}

// A kurtosis-active contour set usually has a smaller mean per-sequence
// kurtosis than the sphere set of the same input length, but not always.
// Exhaustively over N <= 8 exactly three sets break the ordering; they are
// pinned here so any change in the search or the statistic shows up.
TEST(KessTrellis, KurtosisBoundMeanSequenceKurtosisVsSphere)
{
    struct Case {
        std::size_t levels;
        int N;
        unsigned k;
        Energy e;
        KurtosisSum k4;
        auto operator<=>(const Case&) const = default;
    };
    std::vector<Case> above;
    std::size_t checked = 0;
    for (std::size_t levels = 2; levels <= 4; ++levels) {
        const auto alphabet = AmplitudeAlphabet::with_levels(levels);
        for (int N = 1; N <= 8; ++N) {
            auto census = std::make_shared<const FinalPlaneCensus>(N, alphabet);
            for (unsigned k = 1; k <= max_input_bits(N, alphabet); ++k) {
                const auto contour = enumerate_contour(census, k);
                const auto sphere_pairs =
                    final_plane_multiplicities(*census, contour.sphere_endpoint.energy_level, std::nullopt);
                const Rational sphere_mean = mean_sequence_kurtosis(sphere_pairs, N);
                for (const auto& p : contour.points) {
                    if (!p.kurtosis_active) continue;
                    ++checked;
                    const auto wp = final_plane_multiplicities(*census, p.energy_level, p.kurtosis_level);
                    if (mean_sequence_kurtosis(wp, N) > sphere_mean)
                        above.push_back({levels, N, k, p.energy_level, p.kurtosis_level});
                }
            }
        }
    }
    EXPECT_EQ(checked, 108u);
    const std::vector<Case> known{{3, 6, 9, 86, 1878}, {3, 8, 12, 104, 2120}, {4, 6, 11, 126, 4966}};
    EXPECT_EQ(above, known);
}
