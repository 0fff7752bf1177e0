//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tests/test_cli_args.cpp
//---------------------------------------------------------------------------//
#include "cli_args.hpp"

#include <gtest/gtest.h>

namespace compton::cli
{
namespace
{
constexpr double deg = pi / 180;

TEST(Energy, units)
{
    EXPECT_DOUBLE_EQ(parse_energy("1"), 1);
    EXPECT_DOUBLE_EQ(parse_energy("511keV"), 1);
    EXPECT_DOUBLE_EQ(parse_energy("340.667keV"), 340.667 / 511);
    EXPECT_DOUBLE_EQ(parse_energy("0.6667"), 0.6667);
    for (auto bad : {"0", "-1", "abc", "1MeV", "", "keV"})
        EXPECT_THROW(parse_energy(bad), Error) << bad;
}

TEST(Angle, units)
{
    EXPECT_DOUBLE_EQ(parse_angle("85"), 85 * deg);
    EXPECT_DOUBLE_EQ(parse_angle("85deg"), 85 * deg);
    EXPECT_DOUBLE_EQ(parse_angle("1.5rad"), 1.5);
    EXPECT_THROW(parse_angle("85grad"), Error);
    EXPECT_THROW(parse_angle("nan"), Error);
}

TEST(Grid, ranges)
{
    auto const g = parse_angle_grid("0:180:0.01deg");
    ASSERT_EQ(g.values.size(), 18001u);
    EXPECT_DOUBLE_EQ(g.values.front(), 0);
    EXPECT_NEAR(g.values.back(), pi, 1e-12);
    EXPECT_DOUBLE_EQ(g.scale, deg);

    auto const d = parse_angle_grid("0:90", 10);
    EXPECT_EQ(d.values.size(), 10u);
    auto const one = parse_angle_grid("45");
    ASSERT_EQ(one.values.size(), 1u);
    EXPECT_DOUBLE_EQ(one.values[0], 45 * deg);
    auto const r = parse_angle_grid("0:1:0.5rad");
    EXPECT_EQ(r.values.size(), 3u);
    EXPECT_DOUBLE_EQ(r.scale, 1);

    for (auto bad : {"10:0", "0:10:0", "0:10:-1", "0:1:2:3", "a:b"})
    {
        try
        {
            parse_angle_grid(bad);
            FAIL() << bad;
        }
        catch (Error const& e)
        {
            EXPECT_EQ(e.code(), ErrorCode::bad_spec);
        }
    }
}

TEST(Window, pairs)
{
    auto const [lo, hi] = parse_angle_pair("80:84");
    EXPECT_DOUBLE_EQ(lo, 80 * deg);
    EXPECT_DOUBLE_EQ(hi, 84 * deg);
    auto const r = parse_angle_pair("1:1.5rad");
    EXPECT_DOUBLE_EQ(r.second, 1.5);
    for (auto bad : {"80", "80:84:1", "a:84", ":"})
        EXPECT_THROW(parse_angle_pair(bad), Error) << bad;
}

}  // namespace
}  // namespace compton::cli
