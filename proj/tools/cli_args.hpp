//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tools/cli_args.hpp
//! Unit-aware argument parsing for the command-line front end.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "compton/qcore.hpp"

namespace compton::cli
{
inline bool ends_with(std::string_view s, std::string_view suffix)
{
    return s.size() >= suffix.size()
           && s.substr(s.size() - suffix.size()) == suffix;
}

inline double to_number(std::string_view text)
{
    std::string s(text);
    std::size_t used = 0;
    double v = 0;
    try
    {
        v = std::stod(s, &used);
    }
    catch (std::exception const&)
    {
        used = 0;
    }
    if (s.empty() || used != s.size() || !std::isfinite(v))
    {
        throw Error(ErrorCode::bad_spec, "not a number: '" + s + "'");
    }
    return v;
}

//! Energy in units of the electron rest energy; "511keV" == "1".
inline double parse_energy(std::string_view text)
{
    constexpr double kev_per_unit = 511.0;
    double k = 0;
    if (ends_with(text, "keV"))
        k = to_number(text.substr(0, text.size() - 3)) / kev_per_unit;
    else
        k = to_number(text);
    if (!(k > 0))
    {
        throw Error(ErrorCode::bad_spec, "energy must be positive");
    }
    return k;
}

//! Strip a trailing unit; bare angles are degrees.
inline double angle_scale(std::string_view& text)
{
    constexpr double deg = 3.14159265358979323846 / 180;
    if (ends_with(text, "deg"))
    {
        text.remove_suffix(3);
        return deg;
    }
    if (ends_with(text, "rad"))
    {
        text.remove_suffix(3);
        return 1;
    }
    return deg;
}

//! Angle in radians from "85", "85deg" or "1.48rad".
inline double parse_angle(std::string_view text)
{
    double const scale = angle_scale(text);
    return to_number(text) * scale;
}

struct Grid
{
    std::vector<double> values;  //!< radians for angles
    double scale = 1;  //!< multiply radians by 1/scale for display units
};

/*!
 * Inclusive grid "lo:hi[:step]" with an optional unit suffix on the whole
 * expression ("0:180:0.01deg"). A single value gives a one-point grid.
 */
inline Grid parse_angle_grid(std::string_view text, double default_step = 1)
{
    double const scale = angle_scale(text);
    std::vector<double> parts;
    std::size_t begin = 0;
    while (true)
    {
        auto const colon = text.find(':', begin);
        parts.push_back(to_number(text.substr(begin, colon - begin)));
        if (colon == std::string_view::npos)
            break;
        begin = colon + 1;
    }
    Grid g;
    g.scale = scale;
    if (parts.size() == 1)
    {
        g.values.push_back(parts[0] * scale);
        return g;
    }
    if (parts.size() > 3)
    {
        throw Error(ErrorCode::bad_spec, "range must be lo:hi[:step]");
    }
    double const lo = parts[0];
    double const hi = parts[1];
    double const step = parts.size() == 3 ? parts[2] : default_step;
    if (!(step > 0) || !(hi >= lo))
    {
        throw Error(ErrorCode::bad_spec,
                    "range needs lo <= hi and a positive step");
    }
    auto const n = static_cast<std::size_t>(
                       std::floor((hi - lo) / step + 1e-9))
                   + 1;
    g.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        g.values.push_back((lo + step * static_cast<double>(i)) * scale);
    return g;
}

//! Pair "lo:hi" with an optional unit suffix; returns radians.
inline std::pair<double, double> parse_angle_pair(std::string_view text)
{
    double const scale = angle_scale(text);
    auto const colon = text.find(':');
    if (colon == std::string_view::npos
        || text.find(':', colon + 1) != std::string_view::npos)
    {
        throw Error(ErrorCode::bad_spec, "expected lo:hi");
    }
    return {to_number(text.substr(0, colon)) * scale,
            to_number(text.substr(colon + 1)) * scale};
}

}  // namespace compton::cli
