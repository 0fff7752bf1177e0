//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tests/test_kinematics.cpp
//---------------------------------------------------------------------------//
#include "compton/kinematics.hpp"

#include <gtest/gtest.h>

#include "compton/rng.hpp"

namespace compton
{
namespace
{
Direction random_direction(CounterRng& rng)
{
    return Direction(std::acos(2 * rng.uniform() - 1), 2 * pi * rng.uniform());
}

cplx dot_real(Real3 const& k, PolVector const& e)
{
    return k[0] * e[0] + k[1] * e[1] + k[2] * e[2];
}

PolVector negated(PolVector v)
{
    for (auto& z : v.components)
        z = -z;
    return v;
}

TEST(Direction, normalizes)
{
    Direction d(4.0, -0.5);
    EXPECT_DOUBLE_EQ(d.theta(), pi);
    EXPECT_NEAR(d.phi(), 2 * pi - 0.5, 1e-15);
    EXPECT_GE(Direction(1, 2 * pi).phi(), 0.0);
    EXPECT_LT(Direction(1, 2 * pi).phi(), 2 * pi);
}

TEST(PolVector, along_z)
{
    double const r = 1 / std::sqrt(2.0);
    auto e = pol_vector(Direction(0, 0), 1);
    EXPECT_NEAR(std::abs(e[0] - cplx(-r, 0)), 0, 1e-15);
    EXPECT_NEAR(std::abs(e[1] - cplx(0, -r)), 0, 1e-15);
    EXPECT_NEAR(std::abs(e[2]), 0, 1e-15);
    EXPECT_THROW(pol_vector(Direction(0, 0), 0), Error);
    EXPECT_THROW(pol_vector(Direction(0, 0), 2), Error);
}

TEST(PolVector, along_x)
{
    // theta = pi/2, phi = 0: (0, -i, 1)/sqrt2 for lambda = +1
    double const r = 1 / std::sqrt(2.0);
    auto e = pol_vector(Direction(pi / 2, 0), 1);
    EXPECT_NEAR(std::abs(e[0]), 0, 1e-15);
    EXPECT_NEAR(std::abs(e[1] - cplx(0, -r)), 0, 1e-15);
    EXPECT_NEAR(std::abs(e[2] - cplx(r, 0)), 0, 1e-15);
}

TEST(PolVector, transversality_and_helicity)
{
    CounterRng rng(21, 0);
    for (int n = 0; n < 10000; ++n)
    {
        auto const d = random_direction(rng);
        auto const k = d.unit_vector();
        for (int lambda : {1, -1})
        {
            auto const e = pol_vector(d, lambda);
            EXPECT_LT(std::abs(dot_real(k, e)), 1e-12);
            EXPECT_NEAR(std::abs(dot_conj(e, e)), 1.0, 1e-12);
            // i k x eps
            Complex3 ikx{cplx{0, 1} * (k[1] * e[2] - k[2] * e[1]),
                         cplx{0, 1} * (k[2] * e[0] - k[0] * e[2]),
                         cplx{0, 1} * (k[0] * e[1] - k[1] * e[0])};
            double err = 0;
            for (int i = 0; i < 3; ++i)
                err += std::norm(ikx[i] - static_cast<double>(lambda) * e[i]);
            EXPECT_LT(std::sqrt(err), 1e-12);
        }
        EXPECT_LT(std::abs(dot_conj(pol_vector(d, 1), pol_vector(d, -1))),
                  1e-12);
    }
}

TEST(LinearPol, relations)
{
    CounterRng rng(22, 0);
    for (int n = 0; n < 1000; ++n)
    {
        auto const d = random_direction(rng);
        auto const [h, v] = linear_pol_vectors(d);
        EXPECT_EQ(v[2], cplx(0, 0));
        auto const p = pol_vector(d, 1);
        auto const m = pol_vector(d, -1);
        for (int i = 0; i < 3; ++i)
            EXPECT_NEAR(std::abs(h[i] - (p[i] - m[i]) / std::sqrt(2.0)), 0,
                        1e-12);
        EXPECT_LT(std::abs(dot_conj(h, v)), 1e-12);
        EXPECT_LT(std::abs(dot_real(d.unit_vector(), h)), 1e-12);
        EXPECT_LT(std::abs(dot_real(d.unit_vector(), v)), 1e-12);
    }
    auto const [h0, v0] = linear_pol_vectors(Direction(0, 0));
    EXPECT_NEAR(h0[0].real(), -1, 1e-15);
    EXPECT_NEAR(std::abs(v0[1]), 1, 1e-15);
}

TEST(ScatteringAngle, vector_oracle)
{
    ScatterGeometry g{1, Direction(0, 0.3), Direction(pi / 2, 1.0)};
    EXPECT_NEAR(scattering_angle(g), pi / 2, 1e-15);
    EXPECT_NEAR(scattering_angle(Direction(1, 2), Direction(1, 2)), 0, 1e-7);

    Direction a(pi / 3, 0.2);
    Direction b(1.1, 2.5);
    double const c = dot(a.unit_vector(), b.unit_vector());
    EXPECT_NEAR(scattering_angle(a, b), std::acos(c), 1e-14);
}

TEST(Amplitudes, in_plane_and_forward)
{
    for (double theta : {0.3, 1.0, 2.0})
    {
        ScatterGeometry g{1, Direction(0, 0.7), Direction(theta, 0.7)};
        auto f = amplitudes(g);
        EXPECT_NEAR(std::abs(f.hh - std::cos(scattering_angle(g))), 0, 1e-14);
        EXPECT_NEAR(std::abs(f.hv), 0, 1e-14);
        EXPECT_NEAR(std::abs(f.vh), 0, 1e-14);
        EXPECT_NEAR(std::abs(f.vv + 1.0), 0, 1e-14);
    }
    ScatterGeometry same{1, Direction(0.4, 1.2), Direction(0.4, 1.2)};
    auto f = amplitudes(same);
    EXPECT_NEAR(std::abs(f.hh - 1.0), 0, 1e-14);
    EXPECT_NEAR(std::abs(f.vv + 1.0), 0, 1e-14);
}

TEST(Amplitudes, match_polarization_dot_products)
{
    // Outgoing reference basis (eps'_H, -eps'_V)
    CounterRng rng(23, 0);
    for (int n = 0; n < 2000; ++n)
    {
        ScatterGeometry g{1, random_direction(rng), random_direction(rng)};
        auto const [h, v] = linear_pol_vectors(g.dir_in);
        auto const [ho, vo_raw] = linear_pol_vectors(g.dir_out);
        auto const vo = negated(vo_raw);
        auto const f = amplitudes(g);
        EXPECT_LT(std::abs(f.hh - dot_conj(ho, h)), 1e-12);
        EXPECT_LT(std::abs(f.hv - dot_conj(ho, v)), 1e-12);
        EXPECT_LT(std::abs(f.vh - dot_conj(vo, h)), 1e-12);
        EXPECT_LT(std::abs(f.vv - dot_conj(vo, v)), 1e-12);
        double const sum_f = std::norm(f.hh) + std::norm(f.hv)
                             + std::norm(f.vh) + std::norm(f.vv);
        double const sum_dot
            = std::norm(dot_conj(ho, h)) + std::norm(dot_conj(ho, v))
              + std::norm(dot_conj(vo_raw, h)) + std::norm(dot_conj(vo_raw, v));
        EXPECT_NEAR(sum_f, sum_dot, 1e-12);
        EXPECT_NEAR(std::abs(f.hh), f_hh_magnitude(g), 1e-10);
    }
}

}  // namespace
}  // namespace compton
