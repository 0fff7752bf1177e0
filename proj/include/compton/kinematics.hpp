//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file compton/kinematics.hpp
//! Photon directions, polarization vectors and Klein-Nishina amplitudes.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cmath>

#include "qcore.hpp"

namespace compton
{
using Real3 = std::array<double, 3>;
using Complex3 = std::array<cplx, 3>;

//---------------------------------------------------------------------------//
/*!
 * Propagation direction in spherical coordinates.
 *
 * The polar angle is clamped to [0, pi] and the azimuth wrapped to [0, 2pi).
 */
class Direction
{
  public:
    Direction() = default;
    Direction(double theta, double phi)
        : theta_(std::clamp(theta, 0.0, pi)), phi_(wrap(phi))
    {
    }

    double theta() const noexcept { return theta_; }
    double phi() const noexcept { return phi_; }

    Real3 unit_vector() const
    {
        return {std::sin(theta_) * std::cos(phi_),
                std::sin(theta_) * std::sin(phi_),
                std::cos(theta_)};
    }

    //! Wrap an azimuth to [0, 2pi)
    static double wrap(double phi)
    {
        double w = std::fmod(phi, 2 * pi);
        if (w < 0)
            w += 2 * pi;
        if (w >= 2 * pi)
            w = 0;
        return w;
    }

  private:
    double theta_ = 0;
    double phi_ = 0;
};

//! Three-component complex polarization vector.
struct PolVector
{
    Complex3 components{};

    cplx operator[](std::size_t i) const { return components[i]; }
};

//! Hermitian product a^* . b
inline cplx dot_conj(PolVector const& a, PolVector const& b)
{
    cplx s{0, 0};
    for (std::size_t i = 0; i < 3; ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

//! Incoming energy (units of m_e c^2) and incoming/outgoing directions.
struct ScatterGeometry
{
    double k_in = 1;
    Direction dir_in;
    Direction dir_out;
};

//---------------------------------------------------------------------------//
/*!
 * Circular polarization vector for helicity lambda = +-1 (global phase 0).
 *
 * Satisfies i k x eps = lambda eps.
 */
inline PolVector pol_vector(Direction const& dir, int lambda)
{
    if (lambda != 1 && lambda != -1)
    {
        throw Error(ErrorCode::bad_lambda, "helicity must be +1 or -1");
    }
    double const l = lambda;
    double const ct = std::cos(dir.theta());
    double const st = std::sin(dir.theta());
    double const cp = std::cos(dir.phi());
    double const sp = std::sin(dir.phi());
    double const norm = 1 / std::sqrt(2.0);
    return PolVector{{cplx{-l * ct * cp, sp} * norm,
                      cplx{-l * ct * sp, -cp} * norm,
                      cplx{l * st, 0} * norm}};
}

//! Linear polarization vectors (eps_H, eps_V) relative to the propagation
//! direction; eps_V has no z component.
inline std::pair<PolVector, PolVector> linear_pol_vectors(Direction const& dir)
{
    double const ct = std::cos(dir.theta());
    double const st = std::sin(dir.theta());
    double const cp = std::cos(dir.phi());
    double const sp = std::sin(dir.phi());
    PolVector h{{cplx{-ct * cp}, cplx{-ct * sp}, cplx{st}}};
    cplx const mi{0, -1};
    PolVector v{{mi * -sp, mi * cp, cplx{0}}};
    return {h, v};
}

//! Scattering angle between incoming and outgoing directions (clamped acos).
inline double scattering_angle(Direction const& in, Direction const& out)
{
    double const c = std::cos(out.theta()) * std::cos(in.theta())
                     + std::cos(in.phi() - out.phi()) * std::sin(out.theta())
                           * std::sin(in.theta());
    return std::acos(std::clamp(c, -1.0, 1.0));
}

inline double scattering_angle(ScatterGeometry const& g)
{
    return scattering_angle(g.dir_in, g.dir_out);
}

/*!
 * Linear-basis transition amplitudes f_XY = eps'_X^* . eps_Y.
 *
 * The outgoing V reference vector is taken as -eps_V(k'), which gives
 * f_VV = -1 in the scattering plane. Outgoing phases drop out of every
 * cross section since final polarizations are summed.
 */
struct Amplitudes
{
    cplx hh;
    cplx hv;
    cplx vh;
    cplx vv;
};

inline Amplitudes amplitudes(ScatterGeometry const& g)
{
    double const t = g.dir_in.theta();
    double const tp = g.dir_out.theta();
    double const dphi = g.dir_in.phi() - g.dir_out.phi();
    Amplitudes f;
    f.hh = std::cos(tp) * std::cos(t) * std::cos(dphi)
           + std::sin(tp) * std::sin(t);
    f.vh = cplx{0, std::cos(t) * std::sin(dphi)};
    f.hv = cplx{0, -std::cos(tp) * std::sin(dphi)};
    f.vv = -std::cos(dphi);
    return f;
}

//! Square-root form of |f_HH|; agrees in magnitude with the product form.
inline double f_hh_magnitude(ScatterGeometry const& g)
{
    double const ct = std::cos(scattering_angle(g));
    double const s
        = std::sin(g.dir_in.phi() - g.dir_out.phi());
    double const arg = ct * ct
                       - 0.5
                             * (std::cos(2 * g.dir_in.theta())
                                + std::cos(2 * g.dir_out.theta()))
                             * s * s;
    return std::sqrt(std::max(arg, 0.0));
}

inline Real3 cross(Real3 const& a, Real3 const& b)
{
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

inline double dot(Real3 const& a, Real3 const& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace compton
