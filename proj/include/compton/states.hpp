//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file compton/states.hpp
//! Two-photon polarization state families and entanglement measures.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>

#include "qcore.hpp"

namespace compton
{
//---------------------------------------------------------------------------//
// SINGLE-PHOTON BASES
//---------------------------------------------------------------------------//
enum class PolBasis
{
    lin,  //!< {H, V}
    circ,  //!< {R, L}
    diag,  //!< {+45, -45}
};

/*!
 * The two vectors of a single-photon basis in {H, V} components.
 *
 * Circular states follow |H> = (|R> - |L>)/sqrt2, i|V> = (|R> + |L>)/sqrt2.
 */
inline std::array<std::array<cplx, 2>, 2> basis_vectors(PolBasis b)
{
    double const r = 1 / std::sqrt(2.0);
    cplx const i{0, 1};
    switch (b)
    {
        case PolBasis::lin: return {{{1, 0}, {0, 1}}};
        case PolBasis::circ: return {{{r, i * r}, {-r, i * r}}};
        case PolBasis::diag: return {{{r, r}, {r, -r}}};
    }
    return {};
}

//! Unitary whose columns are the basis vectors
inline Unitary basis_unitary(PolBasis b)
{
    auto const v = basis_vectors(b);
    return Unitary(ComplexMatrix{{v[0][0], v[1][0]}, {v[0][1], v[1][1]}});
}

//---------------------------------------------------------------------------//
// BELL STATES
//---------------------------------------------------------------------------//
enum class BellKind
{
    psi_plus,
    psi_minus,
    phi_plus,
    phi_minus,
};

struct BellLabel
{
    BellKind kind = BellKind::psi_plus;
    PolBasis basis = PolBasis::lin;
};

//! Bell state built from the given single-photon basis, in {H,V} ordering.
inline PureState bell(BellLabel label)
{
    auto const e = basis_vectors(label.basis);
    auto prod = [&](int x, int y) {
        return tensor(std::span<cplx const>(e[x]), std::span<cplx const>(e[y]));
    };
    double const sign = (label.kind == BellKind::psi_plus
                         || label.kind == BellKind::phi_plus)
                            ? 1.0
                            : -1.0;
    bool const psi = label.kind == BellKind::psi_plus
                     || label.kind == BellKind::psi_minus;
    auto a = psi ? prod(0, 1) : prod(0, 0);
    auto b = psi ? prod(1, 0) : prod(1, 1);
    std::vector<cplx> amps(4);
    for (std::size_t i = 0; i < 4; ++i)
        amps[i] = (a[i] + sign * b[i]) / std::sqrt(2.0);
    return PureState::normalized(std::move(amps));
}

//! Coefficients <e_i e_j|psi> of a two-photon state in a product basis.
inline std::vector<cplx> coefficients_in(PureState const& psi, PolBasis b)
{
    auto const e = basis_vectors(b);
    std::vector<cplx> c;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
        {
            auto v = tensor(std::span<cplx const>(e[x]),
                            std::span<cplx const>(e[y]));
            c.push_back(inner(v, psi.amplitudes()));
        }
    return c;
}

//! Compare after dividing each vector by its first nonzero amplitude.
inline bool equal_up_to_phase(std::span<cplx const> a,
                              std::span<cplx const> b,
                              double tolerance = 1e-12)
{
    if (a.size() != b.size())
        return false;
    std::size_t k = 0;
    while (k < a.size() && std::abs(a[k]) < 1e-9)
        ++k;
    if (k == a.size() || std::abs(b[k]) < 1e-9)
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        if (std::abs(a[i] / a[k] - b[i] / b[k]) > tolerance)
            return false;
    }
    return true;
}

inline bool equal_up_to_phase(PureState const& a,
                              PureState const& b,
                              double tolerance = 1e-12)
{
    return equal_up_to_phase(a.amplitudes(), b.amplitudes(), tolerance);
}

//---------------------------------------------------------------------------//
// MIXED FAMILIES
//---------------------------------------------------------------------------//
//! (1-p)/4 * 1 + p |psi+><psi+|
inline DensityMatrix isotropic(double p)
{
    if (!(p >= 0 && p <= 1))
    {
        throw Error(ErrorCode::bad_weight, "isotropic weight outside [0,1]");
    }
    auto m = ComplexMatrix::identity(4) * cplx{(1 - p) / 4}
             + bell({BellKind::psi_plus, PolBasis::lin}).projector()
                   * cplx{p};
    return DensityMatrix(std::move(m));
}

/*!
 * Reduced two-photon polarization state of the symmetric ortho-positronium
 * decay for spin-mixing weight p.
 */
struct OrthoReduced
{
    double p = 0;
    DensityMatrix rho = DensityMatrix::maximally_mixed(4);
    double p_plus = 0;
    double p_minus = 0;
    //! |psi~_+-> proportional to c_+- |HH> + |VV>
    double c_plus = 0;
    double c_minus = 0;
};

inline OrthoReduced ortho_reduced(double p)
{
    if (!(p >= 0 && p <= 1))
    {
        throw Error(ErrorCode::bad_weight, "spin mixing outside [0,1]");
    }
    double const root = std::sqrt(25 + 64 * p * (p - 1));
    OrthoReduced o;
    o.p = p;
    o.p_plus = (5 + root) / 12;
    o.p_minus = (5 - root) / 12;
    o.c_plus = (8 * (p - 0.5) + root) / 3;
    o.c_minus = (8 * (p - 0.5) - root) / 3;

    auto hh_vv = [](double c) {
        return PureState::normalized({c, 0, 0, 1}).projector();
    };
    auto m = bell({BellKind::psi_plus, PolBasis::lin}).projector()
                 * cplx{1.0 / 6}
             + hh_vv(o.c_plus) * cplx{o.p_plus}
             + hh_vv(o.c_minus) * cplx{o.p_minus};
    o.rho = DensityMatrix(std::move(m));
    return o;
}

//! Product basis {HH, HV, VH, VV}
inline std::array<PureState, 4> separable_basis()
{
    return {PureState({1, 0, 0, 0}),
            PureState({0, 1, 0, 0}),
            PureState({0, 0, 1, 0}),
            PureState({0, 0, 0, 1})};
}

//---------------------------------------------------------------------------//
// ENTANGLEMENT MEASURES
//---------------------------------------------------------------------------//
/*!
 * Wootters concurrence.
 *
 * The spin flip is rho~ = (sy x sy) rho^* (sy x sy) with sy = [[0,-i],[i,0]]
 * in the {H, V} ordering; the overall sign of sy x sy cancels.
 */
inline double concurrence(DensityMatrix const& rho)
{
    if (rho.dim() != 4)
    {
        throw Error(ErrorCode::bad_dim, "concurrence needs a two-qubit state");
    }
    auto const yy = tensor(pauli::y(), pauli::y());
    ComplexMatrix const flipped = yy * rho.matrix().conj() * yy;

    auto const eig = eigh(rho.matrix());
    std::vector<double> sq;
    // Round-off eigenvalues would otherwise enter as ~1e-8 square roots
    for (double v : eig.values)
        sq.push_back(v > 1e-14 ? std::sqrt(v) : 0.0);
    ComplexMatrix const sqrt_rho = eig.vectors
                                   * ComplexMatrix::diagonal(sq)
                                   * eig.vectors.adjoint();
    ComplexMatrix r = sqrt_rho * flipped * sqrt_rho;
    r = (r + r.adjoint()) * cplx{0.5};
    auto lam = eigvals_hermitian(r);
    for (auto& l : lam)
        l = l > 1e-14 ? std::sqrt(l) : 0.0;
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

//! True when the partial transpose has no eigenvalue below -tolerance.
inline bool is_ppt(DensityMatrix const& rho, double tolerance = 1e-9)
{
    return eigvals_hermitian(partial_transpose(rho, 1)).back() >= -tolerance;
}

//---------------------------------------------------------------------------//
// BOSE SYMMETRY AND PARITY
//---------------------------------------------------------------------------//
//! Single-photon parity on {H,V} components: P|lambda> = -|-lambda>.
inline ComplexMatrix parity_operator()
{
    auto const e = basis_vectors(PolBasis::circ);
    // -(|R><L| + |L><R|)
    auto rl = ComplexMatrix::outer(e[0], e[1]);
    auto lr = ComplexMatrix::outer(e[1], e[0]);
    return (rl + lr) * cplx{-1};
}

/*!
 * Map photon b's helicity states from its own propagation axis (-k) to the
 * common frame of photon a, using eps(-k, lambda) = -eps(k, -lambda).
 */
inline Unitary opposite_axis_to_common_frame()
{
    return Unitary(tensor(ComplexMatrix::identity(2), parity_operator()));
}

/*!
 * Polarization parts of the Bose-symmetric two-photon parity eigenstates in
 * the helicity basis of each photon's own axis.
 *
 * Parity +1 pairs with a symmetric spatial factor and |psi+>_circ, parity -1
 * with an antisymmetric spatial factor and |psi->_circ.
 */
inline std::map<int, PureState> bose_parity_states()
{
    return {{+1, bell({BellKind::psi_plus, PolBasis::circ})},
            {-1, bell({BellKind::psi_minus, PolBasis::circ})}};
}

//! Sign of the spatial factor under exchange of the two photon momenta.
inline int spatial_exchange_sign(int parity)
{
    return parity;
}

}  // namespace compton
