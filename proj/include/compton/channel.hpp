//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file compton/channel.hpp
//! Klein-Nishina scattering as a Kraus-type channel.
//!
//! Energies are in units of m_e c^2 (511 keV == 1) and cross sections in
//! units of r0^2 per photon pair (r0 == 1).
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "kinematics.hpp"
#include "qcore.hpp"
#include "states.hpp"

namespace compton
{
//! Outgoing photon energy for incoming energy k and scattering angle theta.
inline double k_out(double k_in, double theta)
{
    return 1 / (1 - std::cos(theta) + 1 / k_in);
}

//! k/k' + k'/k (>= 2)
inline double gamma_factor(double k_in, double theta)
{
    double const kp = k_out(k_in, theta);
    return k_in / kp + kp / k_in;
}

//! Interference contrast of the scattering process.
inline double visibility(double k_in, double theta)
{
    double const s2 = std::pow(std::sin(theta), 2);
    return s2 / (gamma_factor(k_in, theta) - s2);
}

//! Polarization-independent angular shape of the cross section.
inline double envelope(double k_in, double theta)
{
    double const r = k_out(k_in, theta) / k_in;
    return r * r * (gamma_factor(k_in, theta) - std::pow(std::sin(theta), 2));
}

//---------------------------------------------------------------------------//
/*!
 * Kraus pair for one scattering vertex in the {H, V} basis.
 *
 * K1 = sqrt(gamma - 2) 1 and K2 = sqrt(2) F with F the amplitude matrix.
 * No completeness relation holds since the energy ratio is factored out.
 */
struct KrausPair
{
    ComplexMatrix k1;
    ComplexMatrix k2;
    ScatterGeometry geometry;
};

inline KrausPair kraus_pair(ScatterGeometry const& g)
{
    double const theta = scattering_angle(g);
    double const g2 = std::max(gamma_factor(g.k_in, theta) - 2, 0.0);
    auto const f = amplitudes(g);
    double const r2 = std::sqrt(2.0);
    KrausPair kp;
    kp.k1 = ComplexMatrix::identity(2) * cplx{std::sqrt(g2)};
    kp.k2 = ComplexMatrix{{r2 * f.hh, r2 * f.hv}, {r2 * f.vh, r2 * f.vv}};
    kp.geometry = g;
    return kp;
}

//! Sum_i K_i^dagger K_i, the effect operator of one vertex.
inline ComplexMatrix effect(KrausPair const& kp)
{
    return kp.k1.adjoint() * kp.k1 + kp.k2.adjoint() * kp.k2;
}

//! Differential cross section split as value = envelope * probability part.
struct CrossSectionPoint
{
    double value = 0;
    double envelope = 0;
    double probability_part = 0;
};

/*!
 * Single-photon cross section in closed form.
 *
 * Phi is the azimuth of the scattering plane measured from the {H, V}
 * reference frame (phi_out - phi_frame for a photon along +z).
 */
inline CrossSectionPoint
sigma_single(DensityMatrix const& rho, double k_in, double theta, double Phi)
{
    if (rho.dim() != 2)
    {
        throw Error(ErrorCode::dim_mismatch, "single-photon state must be 2x2");
    }
    double const lin = (rho(0, 0) - rho(1, 1)).real();
    double const circ = 2 * rho(0, 1).imag();
    CrossSectionPoint p;
    p.envelope = envelope(k_in, theta);
    p.probability_part
        = 0.5
          * (1
             - visibility(k_in, theta)
                   * (lin * std::cos(2 * Phi) + circ * std::sin(2 * Phi)));
    p.value = p.envelope * p.probability_part;
    return p;
}

//! Photon along +z with frame azimuth phi_frame scattered to (theta, Phi).
inline ScatterGeometry
single_photon_geometry(double k_in, double theta, double Phi, double frame_phi)
{
    return {k_in, Direction(0, frame_phi), Direction(theta, frame_phi + Phi)};
}

/*!
 * Cross section for z photons (z = 1..3) from the tensor-product Kraus form.
 *
 * Prefactor (1/2)^z prod (k'/k)^2 with r0 == 1; the probability part is the
 * value divided by the product of envelopes.
 */
inline CrossSectionPoint sigma_multi(DensityMatrix const& rho,
                                     std::span<ScatterGeometry const> geoms)
{
    std::size_t const z = geoms.size();
    if (z == 0 || z > 3 || rho.dim() != (std::size_t{1} << z))
    {
        throw Error(ErrorCode::dim_mismatch,
                    "state dimension must be 2^(number of photons)");
    }
    double prefactor = 1;
    double env = 1;
    ComplexMatrix total_effect;
    for (std::size_t i = 0; i < z; ++i)
    {
        auto const& g = geoms[i];
        double const theta = scattering_angle(g);
        double const r = k_out(g.k_in, theta) / g.k_in;
        prefactor *= 0.5 * r * r;
        env *= envelope(g.k_in, theta);
        auto e = effect(kraus_pair(g));
        total_effect = i == 0 ? e : tensor(total_effect, e);
    }
    // Sum over Kraus index strings of Tr(K rho K^dag) = Tr(rho (x)_i E_i)
    CrossSectionPoint p;
    p.value = prefactor * rho.expectation(total_effect).real();
    p.envelope = env;
    p.probability_part = env > 0 ? p.value / env : 0;
    return p;
}

//! Same quantity summed explicitly over all 2^z Kraus index strings.
inline double sigma_multi_explicit(DensityMatrix const& rho,
                                   std::span<ScatterGeometry const> geoms)
{
    std::size_t const z = geoms.size();
    if (z == 0 || z > 3 || rho.dim() != (std::size_t{1} << z))
    {
        throw Error(ErrorCode::dim_mismatch,
                    "state dimension must be 2^(number of photons)");
    }
    std::vector<KrausPair> kps;
    double prefactor = 1;
    for (auto const& g : geoms)
    {
        double const r = k_out(g.k_in, scattering_angle(g)) / g.k_in;
        prefactor *= 0.5 * r * r;
        kps.push_back(kraus_pair(g));
    }
    double total = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << z); ++mask)
    {
        ComplexMatrix k;
        for (std::size_t i = 0; i < z; ++i)
        {
            auto const& ki = (mask >> i) & 1 ? kps[i].k2 : kps[i].k1;
            k = i == 0 ? ki : tensor(k, ki);
        }
        total += (k * rho.matrix() * k.adjoint()).trace().real();
    }
    return prefactor * total;
}

//---------------------------------------------------------------------------//
/*!
 * Back-to-back two-photon kinematics.
 *
 * Photon a travels along +z with frame azimuth phi (so the {H, V} frame is
 * fixed by phi); photon b arrives from (pi, phi + pi). The scattered
 * photons are given by their scattering angles and lab azimuths.
 */
struct TwoPhotonSetting
{
    double k_a = 1;
    double k_b = 1;
    double theta_a = pi / 2;  //!< scattering angle of photon a
    double theta_b = pi / 2;  //!< scattering angle of photon b
    double phi_a = 0;
    double phi_b = 0;
    double frame_phi = 0;
};

inline std::array<ScatterGeometry, 2>
back_to_back_geometry(TwoPhotonSetting const& s)
{
    ScatterGeometry a{s.k_a,
                      Direction(0, s.frame_phi),
                      Direction(s.theta_a, s.phi_a)};
    ScatterGeometry b{s.k_b,
                      Direction(pi, s.frame_phi + pi),
                      Direction(pi - s.theta_b, s.phi_b)};
    return {a, b};
}

inline CrossSectionPoint
sigma_two_photon(DensityMatrix const& rho, TwoPhotonSetting const& s)
{
    auto const g = back_to_back_geometry(s);
    return sigma_multi(rho, g);
}

//! Direction obtained by scattering dir_in through angle theta at azimuth
//! psi about the incoming axis (psi = 0 in the H plane of dir_in).
inline Direction
scattered_direction(Direction const& dir_in, double theta, double psi)
{
    double const ct = std::cos(dir_in.theta());
    double const st = std::sin(dir_in.theta());
    double const cp = std::cos(dir_in.phi());
    double const sp = std::sin(dir_in.phi());
    Real3 const k = dir_in.unit_vector();
    Real3 const e1{ct * cp, ct * sp, -st};
    Real3 const e2{-sp, cp, 0};
    Real3 out;
    for (int i = 0; i < 3; ++i)
    {
        out[i] = std::cos(theta) * k[i]
                 + std::sin(theta)
                       * (std::cos(psi) * e1[i] + std::sin(psi) * e2[i]);
    }
    double const r = std::hypot(out[0], out[1]);
    return Direction(std::atan2(r, out[2]), std::atan2(out[1], out[0]));
}

/*!
 * Planar three-photon kinematics with 120 degree opening angles.
 *
 * Photon a along +z, b and c in the x-z plane. Each photon scatters through
 * theta[i] at azimuth psi[i] about its own axis.
 */
inline std::array<ScatterGeometry, 3>
planar_three_photon_geometry(double k_in,
                             std::array<double, 3> const& theta,
                             std::array<double, 3> const& psi)
{
    std::array<Direction, 3> const in{Direction(0, 0),
                                      Direction(2 * pi / 3, 0),
                                      Direction(2 * pi / 3, pi)};
    std::array<ScatterGeometry, 3> g;
    for (std::size_t i = 0; i < 3; ++i)
    {
        g[i] = {k_in, in[i], scattered_direction(in[i], theta[i], psi[i])};
    }
    return g;
}

//---------------------------------------------------------------------------//
// CLOSED FORMS FOR BACK-TO-BACK PHOTONS
//---------------------------------------------------------------------------//
/*!
 * Bell states in the linear basis:
 * F_a F_b / 4 {1 -+ V_a V_b cos 2[(phi_a - phi) - alpha (phi_b - phi)]},
 * minus for psi and plus for phi, alpha = +-1.
 */
inline double sigma_bell_closed(BellKind kind, TwoPhotonSetting const& s)
{
    bool const is_psi
        = kind == BellKind::psi_plus || kind == BellKind::psi_minus;
    double const alpha
        = (kind == BellKind::psi_plus || kind == BellKind::phi_plus) ? 1 : -1;
    double const sign = is_psi ? -1 : 1;
    double const da = s.phi_a - s.frame_phi;
    double const db = s.phi_b - s.frame_phi;
    double const vv = visibility(s.k_a, s.theta_a)
                      * visibility(s.k_b, s.theta_b);
    return envelope(s.k_a, s.theta_a) * envelope(s.k_b, s.theta_b) * 0.25
           * (1 + sign * vv * std::cos(2 * (da - alpha * db)));
}

/*!
 * Linear product states |XY>, X, Y in {H = 0, V = 1}:
 * F_a F_b / 4 (1 -+ V_a cos 2(phi_a - phi)) (1 -+ V_b cos 2(phi_b - phi)),
 * minus for H and plus for V.
 */
inline double sigma_product_closed(int x, int y, TwoPhotonSetting const& s)
{
    double const sa = x == 0 ? -1 : 1;
    double const sb = y == 0 ? -1 : 1;
    return envelope(s.k_a, s.theta_a) * envelope(s.k_b, s.theta_b) * 0.25
           * (1 + sa * visibility(s.k_a, s.theta_a)
                      * std::cos(2 * (s.phi_a - s.frame_phi)))
           * (1 + sb * visibility(s.k_b, s.theta_b)
                      * std::cos(2 * (s.phi_b - s.frame_phi)));
}

}  // namespace compton
