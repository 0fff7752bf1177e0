//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tests/test_states.cpp
//---------------------------------------------------------------------------//
#include "compton/states.hpp"

#include <gtest/gtest.h>

#include "compton/channel.hpp"
#include "compton/state_spec.hpp"

namespace compton
{
namespace
{
double const r = 1 / std::sqrt(2.0);
constexpr BellKind all_kinds[]
    = {BellKind::psi_plus, BellKind::psi_minus, BellKind::phi_plus,
       BellKind::phi_minus};
constexpr PolBasis all_bases[]
    = {PolBasis::lin, PolBasis::circ, PolBasis::diag};

double min_pt_eigenvalue(DensityMatrix const& rho)
{
    return eigvals_hermitian(partial_transpose(rho, 1)).back();
}

TEST(Bell, hand_built_amplitudes)
{
    cplx const i{0, 1};
    // R = (H + iV)/sqrt2, L = (-H + iV)/sqrt2
    std::vector<cplx> phi_minus_circ = {0, i, i, 0};
    std::vector<cplx> psi_plus_lin = {0, r, r, 0};
    EXPECT_TRUE(equal_up_to_phase(bell({BellKind::psi_plus, PolBasis::lin}),
                                  PureState(psi_plus_lin)));
    EXPECT_TRUE(
        equal_up_to_phase(bell({BellKind::phi_minus, PolBasis::circ}).amplitudes(),
                          std::span<cplx const>(phi_minus_circ)));
    // D = (H + V)/sqrt2, A = (H - V)/sqrt2: DD - AA = HV + VH
    EXPECT_TRUE(equal_up_to_phase(bell({BellKind::phi_minus, PolBasis::diag}),
                                  PureState(psi_plus_lin)));
    EXPECT_TRUE(equal_up_to_phase(bell({BellKind::psi_minus, PolBasis::lin}),
                                  PureState({0, r, -r, 0})));
    EXPECT_TRUE(equal_up_to_phase(bell({BellKind::phi_plus, PolBasis::lin}),
                                  PureState({r, 0, 0, r})));
}

TEST(Bell, orthonormal_within_basis)
{
    for (auto b : all_bases)
        for (auto x : all_kinds)
            for (auto y : all_kinds)
            {
                auto const ip = inner(bell({x, b}).amplitudes(),
                                      bell({y, b}).amplitudes());
                EXPECT_NEAR(std::abs(ip), x == y ? 1 : 0, 1e-14);
            }
}

TEST(Bell, basis_change_closure)
{
    for (auto x : all_kinds)
        for (auto b : all_bases)
        {
            auto const psi = bell({x, b});
            // Re-expand the coefficients through each basis and back
            for (auto other : all_bases)
            {
                auto const c = coefficients_in(psi, other);
                auto const e = basis_vectors(other);
                std::vector<cplx> back(4, 0);
                for (int u = 0; u < 2; ++u)
                    for (int v = 0; v < 2; ++v)
                    {
                        auto const t = tensor(std::span<cplx const>(e[u]),
                                              std::span<cplx const>(e[v]));
                        for (int n = 0; n < 4; ++n)
                            back[n] += c[2 * u + v] * t[n];
                    }
                EXPECT_TRUE(equal_up_to_phase(psi.amplitudes(),
                                              std::span<cplx const>(back)));
            }
        }
}

TEST(Isotropic, endpoints_and_ppt_boundary)
{
    EXPECT_LT(max_abs_diff(isotropic(0).matrix(),
                           ComplexMatrix::identity(4) * cplx{0.25}),
              1e-15);
    EXPECT_LT(
        max_abs_diff(isotropic(1).matrix(),
                     bell({BellKind::psi_plus, PolBasis::lin}).projector()),
        1e-15);
    EXPECT_NEAR(min_pt_eigenvalue(isotropic(1.0 / 3)), 0, 1e-12);
    for (int i = 0; i <= 30; ++i)
    {
        double const p = i / 30.0;
        bool const ppt = is_ppt(isotropic(p));
        EXPECT_EQ(ppt, p <= 1.0 / 3 + 1e-9) << p;
        // Oracle: smallest PT eigenvalue (1 - 3p)/4
        EXPECT_NEAR(min_pt_eigenvalue(isotropic(p)), (1 - 3 * p) / 4, 1e-12);
    }
    EXPECT_TRUE(is_ppt(isotropic(1.0 / 3 - 1e-9)));
    EXPECT_FALSE(is_ppt(isotropic(1.0 / 3 + 1e-6)));
}

TEST(Isotropic, bad_weight)
{
    for (double p : {-0.1, 1.1, std::nan("")})
    {
        try
        {
            isotropic(p);
            FAIL() << p;
        }
        catch (Error const& e)
        {
            EXPECT_EQ(e.code(), ErrorCode::bad_weight);
        }
    }
}

TEST(Ortho, weights)
{
    auto const half = ortho_reduced(0.5);
    EXPECT_NEAR(half.p_plus, 2.0 / 3, 1e-15);
    EXPECT_NEAR(half.p_minus, 1.0 / 6, 1e-15);
    EXPECT_NEAR(std::abs(half.c_plus), 1, 1e-15);
    EXPECT_NEAR(half.c_plus, -half.c_minus, 1e-15);

    auto const zero = ortho_reduced(0);
    EXPECT_NEAR(zero.p_plus, 5.0 / 6, 1e-15);
    EXPECT_NEAR(zero.p_minus, 0, 1e-15);

    // p = 1/2 is Bell diagonal: off-diagonal weight only on HH-VV and HV-VH
    auto const& m = half.rho.matrix();
    EXPECT_NEAR(std::abs(m(0, 1)), 0, 1e-15);
    EXPECT_NEAR(std::abs(m(0, 2)), 0, 1e-15);
    EXPECT_NEAR(std::abs(m(1, 3)), 0, 1e-15);
    EXPECT_NEAR(m(1, 1).real(), 1.0 / 12, 1e-15);
    EXPECT_NEAR(m(1, 2).real(), 1.0 / 12, 1e-15);
}

TEST(Ortho, valid_for_all_weights)
{
    for (int i = 0; i <= 20; ++i)
    {
        double const p = i / 20.0;
        auto const o = ortho_reduced(p);
        EXPECT_NEAR(1.0 / 6 + o.p_plus + o.p_minus, 1, 1e-14);
        EXPECT_GE(o.p_minus, -1e-15);
        EXPECT_NEAR(o.rho.matrix().trace().real(), 1, 1e-14);
        EXPECT_GE(eigvals_hermitian(o.rho.matrix()).back(), -1e-14);
        // psi~+ and psi~- are orthogonal: c+ c- = -1
        EXPECT_NEAR(o.c_plus * o.c_minus, -1, 1e-12);
    }
    EXPECT_THROW(ortho_reduced(1.5), Error);
}

TEST(Concurrence, values)
{
    EXPECT_NEAR(concurrence(DensityMatrix(
                    bell({BellKind::psi_plus, PolBasis::lin}))),
                1, 1e-9);
    EXPECT_NEAR(concurrence(DensityMatrix::maximally_mixed(4)), 0, 1e-12);
    for (auto b : separable_basis())
        EXPECT_NEAR(concurrence(DensityMatrix(b)), 0, 1e-9);
    for (int i = 0; i <= 20; ++i)
        EXPECT_NEAR(concurrence(ortho_reduced(i / 20.0).rho), 1.0 / 3, 1e-9)
            << i;
    // Isotropic oracle: max(0, (3p - 1)/2)
    for (double p : {0.1, 0.5, 0.8})
        EXPECT_NEAR(concurrence(isotropic(p)), std::max(0.0, (3 * p - 1) / 2),
                    1e-9);
    EXPECT_THROW(concurrence(DensityMatrix::maximally_mixed(2)), Error);
}

TEST(Bose, parity_states)
{
    auto const states = bose_parity_states();
    ASSERT_EQ(states.size(), 2u);
    EXPECT_TRUE(equal_up_to_phase(states.at(+1),
                                  bell({BellKind::psi_plus, PolBasis::circ})));
    EXPECT_TRUE(equal_up_to_phase(states.at(-1),
                                  bell({BellKind::psi_minus, PolBasis::circ})));

    auto const u = opposite_axis_to_common_frame().matrix();
    auto const converted = u.apply(states.at(-1).amplitudes());
    EXPECT_TRUE(equal_up_to_phase(std::span<cplx const>(converted),
                                  bell({BellKind::psi_plus, PolBasis::lin})
                                      .amplitudes()));
    EXPECT_TRUE(equal_up_to_phase(std::span<cplx const>(converted),
                                  bell({BellKind::phi_minus, PolBasis::circ})
                                      .amplitudes()));

    // Polarization exchange sign times spatial sign is +1
    auto const swap = swap_operator();
    for (auto const& [parity, psi] : states)
    {
        auto const swapped = swap.apply(psi.amplitudes());
        cplx const ev = inner(psi.amplitudes(), swapped);
        EXPECT_NEAR(std::abs(ev), 1, 1e-14);
        EXPECT_NEAR(ev.real() * spatial_exchange_sign(parity), 1, 1e-14);
    }
}

TEST(Bose, parity_involution)
{
    auto const p = parity_operator();
    EXPECT_LT(max_abs_diff(p * p, ComplexMatrix::identity(2)), 1e-15);
    auto const e = basis_vectors(PolBasis::circ);
    auto const pr = p.apply(e[0]);
    for (int i = 0; i < 2; ++i)
        EXPECT_NEAR(std::abs(pr[i] + e[1][i]), 0, 1e-15);
}

TEST(Separable, basis_and_channel)
{
    auto const b = separable_basis();
    for (int i = 0; i < 4; ++i)
    {
        for (int j = 0; j < 4; ++j)
            EXPECT_NEAR(std::abs(inner(b[i].amplitudes(), b[j].amplitudes())),
                        i == j ? 1 : 0, 1e-15);
        // Schmidt rank 1: reshaped 2x2 amplitude matrix has zero determinant
        auto const& a = b[i].amplitudes();
        EXPECT_NEAR(std::abs(a[0] * a[3] - a[1] * a[2]), 0, 1e-15);
    }
    // HV: F_a F_b / 4 (1 - Va cos 2da)(1 + Vb cos 2db)
    TwoPhotonSetting s{1, 0.8, 1.3, 1.5, 0.4, 2.0, 0.1};
    double const va = visibility(1, 1.3);
    double const vb = visibility(0.8, 1.5);
    double const expected = envelope(1, 1.3) * envelope(0.8, 1.5) / 4
                            * (1 - va * std::cos(2 * (0.4 - 0.1)))
                            * (1 + vb * std::cos(2 * (2.0 - 0.1)));
    EXPECT_NEAR(sigma_two_photon(DensityMatrix(b[1]), s).value, expected,
                1e-14);
}

TEST(StateSpec, grammar)
{
    auto same = [](DensityMatrix const& a, DensityMatrix const& b) {
        return max_abs_diff(a.matrix(), b.matrix()) < 1e-14;
    };
    DensityMatrix psi(bell({BellKind::psi_plus, PolBasis::lin}));
    EXPECT_TRUE(same(parse_state("bell:psi+:lin"), psi));
    EXPECT_TRUE(same(parse_state("bell:psi+"), psi));
    EXPECT_TRUE(same(parse_state("bell:phi-:circ"), psi));
    EXPECT_TRUE(same(parse_state("iso:0.5"), isotropic(0.5)));
    EXPECT_TRUE(same(parse_state("ortho:0.25"), ortho_reduced(0.25).rho));
    EXPECT_TRUE(same(parse_state("prod:HV"), DensityMatrix(separable_basis()[1])));
    EXPECT_TRUE(same(parse_state("mixed"), DensityMatrix::maximally_mixed(4)));

    auto mix = parse_state("mix:0.5*prod:HV+0.5*prod:VH");
    EXPECT_NEAR(mix(1, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(mix(2, 2).real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(mix(1, 2)), 0, 1e-15);
    // Bell labels containing '+' inside a mixture
    auto mb = parse_state("mix:0.25*bell:psi+:lin+0.75*mixed");
    EXPECT_TRUE(same(mb, isotropic(0.25)));

    auto d = parse_single_state("D");
    EXPECT_NEAR(d(0, 1).real(), 0.5, 1e-15);
    EXPECT_TRUE(same(parse_single_state("mixed"),
                     DensityMatrix::maximally_mixed(2)));
}

TEST(StateSpec, errors)
{
    auto code_of = [](char const* spec) {
        try
        {
            parse_state(spec);
        }
        catch (Error const& e)
        {
            return e.code();
        }
        return ErrorCode::invalid_state;
    };
    for (auto spec : {"bell:psi", "bell:psi+:polar", "iso:abc", "prod:HX",
                      "prod:H", "foo", "mix:0.5prod:HV", ""})
        EXPECT_EQ(code_of(spec), ErrorCode::bad_spec) << spec;
    EXPECT_EQ(code_of("iso:2"), ErrorCode::bad_weight);
    EXPECT_THROW(parse_single_state("HV"), Error);
}

}  // namespace
}  // namespace compton
