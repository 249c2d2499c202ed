#include "klss/io.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace klss;

TEST(Hex, RoundTrip)
{
    EXPECT_EQ(io::to_hex(0), "0");
    EXPECT_EQ(io::to_hex(255), "ff");
    EXPECT_EQ(io::from_hex(" 0xFF\r"), 255);
    EXPECT_EQ(io::from_hex("1"), 1);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        const BigCount v = random_index(rng, 1 + static_cast<unsigned>(rng() % 300));
        EXPECT_EQ(io::from_hex(io::to_hex(v)), v);
    }
    EXPECT_THROW(io::from_hex(""), std::invalid_argument);
    EXPECT_THROW(io::from_hex("12g"), std::invalid_argument);
    EXPECT_THROW(io::to_hex(-1), std::invalid_argument);
}

TEST(TrellisJson, EnergyTrellisRoundTrip)
{
    const auto t = build_ess_trellis(20, AmplitudeAlphabet(3), 200);
    const auto text = io::to_json(t).dump();
    const auto back = io::ess_trellis_from_json(nlohmann::json::parse(text));
    EXPECT_EQ(back.cardinality(), t.cardinality());
    EXPECT_EQ(back.spec().e_max, t.spec().e_max);
    EXPECT_EQ(back.alphabet(), t.alphabet());
    EXPECT_EQ(io::to_json(back).dump(), text);
    EXPECT_THROW(io::kess_trellis_from_json(nlohmann::json::parse(text)), std::invalid_argument);
}

TEST(TrellisJson, KurtosisTrellisRoundTrip)
{
    const auto t = build_kess_trellis(3, AmplitudeAlphabet::with_levels(3), 28, 626);
    const auto j = io::to_json(t);
    EXPECT_EQ(j.at("cardinality"), "8");
    EXPECT_EQ(j.at("alphabet_levels"), 3);
    const auto back = io::kess_trellis_from_json(j);
    EXPECT_EQ(back.cardinality(), 8);
    EXPECT_EQ(back.spec().k4_max, 626);
    for (BigCount i = 0; i < 8; ++i) EXPECT_EQ(kess_encode(back, i), kess_encode(t, i));
}

TEST(TrellisJson, RejectsTamperedDocuments)
{
    auto j = io::to_json(build_kess_trellis(3, AmplitudeAlphabet::with_levels(3), 28, 626));
    auto bad_version = j;
    bad_version["version"] = 99;
    EXPECT_THROW(io::kess_trellis_from_json(bad_version), std::invalid_argument);
    auto bad_count = j;
    bad_count["layers"][0][0][2] = "9";
    EXPECT_THROW(io::kess_trellis_from_json(bad_count), std::invalid_argument);
}

TEST(LinkParamsJson, GridUnits)
{
    const auto p = io::link_params_from_json(
        nlohmann::json::parse(R"({"chi0": 2, "chi4": 0.1, "sigma2_ase": 1e-4, "power_grid_dbm": [0, 10]})"));
    EXPECT_DOUBLE_EQ(p.chi0, 2.0);
    EXPECT_DOUBLE_EQ(p.chi4p, 0.0);
    ASSERT_EQ(p.power_grid.size(), 2u);
    EXPECT_NEAR(p.power_grid[1], 1e-2, 1e-15);
    const auto back = io::link_params_from_json(io::to_json(p));
    EXPECT_EQ(back.power_grid, p.power_grid);
    EXPECT_THROW(io::link_params_from_json(nlohmann::json::parse(
                     R"({"chi0": 1, "sigma2_ase": 1, "power_grid_dbm": [0], "power_grid_w": [1]})")),
                 std::invalid_argument);
    EXPECT_THROW(io::link_params_from_json(nlohmann::json::parse(R"({"chi0": 1, "sigma2_ase": 0})")),
                 std::invalid_argument);
}

TEST(Csv, HeadersAndRows)
{
    std::ostringstream contour;
    io::write_contour_csv(contour, enumerate_contour(3, AmplitudeAlphabet::with_levels(3), 3));
    const auto text = contour.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), io::profile_csv_header);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);

    std::ostringstream hist;
    io::write_histogram_csv(hist, kurtosis_histogram(build_kess_trellis(3, AmplitudeAlphabet::with_levels(3), 28, std::nullopt), {2.0}));
    EXPECT_EQ(hist.str(), "bin_lo,bin_hi,count\n-inf,2,5\n2,inf,6\n");

    std::ostringstream snr;
    io::write_snr_csv(snr, nli::launch_power_sweep(nli::synthetic_preset(), 1.4, 2.0));
    EXPECT_EQ(snr.str().substr(0, snr.str().find('\n')), "power_dBm,sigma2_nli,snr_eff_dB");

    std::ostringstream frame;
    const std::vector<std::vector<int>> s{{1, -3, 5, -7}};
    io::write_frame_csv(frame, pas::map_symbols(s, pas::MappingStrategy::four_d));
    EXPECT_EQ(frame.str(), "symbol,x_re,x_im,y_re,y_im\n0,1,-3,5,-7\n");
}

TEST(Format, LargeCountsToLog2)
{
    EXPECT_DOUBLE_EQ(io::log2_big(8), 3.0);
    EXPECT_NEAR(io::log2_big(pow2(200) * 3), 200 + std::log2(3.0), 1e-12);
}
