//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file compton/witness.hpp
//! MUB and SIC entanglement witnesses, ideal and Compton-damped.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "channel.hpp"
#include "optimize.hpp"
#include "qcore.hpp"
#include "states.hpp"

namespace compton
{
//---------------------------------------------------------------------------//
// MEASUREMENT BASES
//---------------------------------------------------------------------------//
/*!
 * Up to three single-photon measurement bases; each unitary's columns are
 * the basis vectors in {H, V} components.
 */
struct MubSet
{
    std::vector<Unitary> bases;

    std::size_t size() const noexcept { return bases.size(); }
};

//! Max deviation of |<i|j>|^2 from 1/2 across distinct bases.
inline double unbiasedness_defect(MubSet const& set)
{
    double worst = 0;
    for (std::size_t a = 0; a < set.size(); ++a)
        for (std::size_t b = a + 1; b < set.size(); ++b)
        {
            auto const overlap = set.bases[a].matrix().adjoint()
                                 * set.bases[b].matrix();
            for (auto z : overlap.data())
                worst = std::max(worst, std::abs(std::norm(z) - 0.5));
        }
    return worst;
}

//! Eigenbases of sigma_z, sigma_x, sigma_y: linear, diagonal, circular.
inline MubSet standard_mub_triple()
{
    return {{basis_unitary(PolBasis::lin),
             basis_unitary(PolBasis::diag),
             basis_unitary(PolBasis::circ)}};
}

/*!
 * The rotation triple that maximizes the damped witness for |psi+>_lin.
 *
 * The state is rotated by R_k (x) R'_k and measured in {H, V}; the returned
 * bases are the equivalent measurement bases R_k^dagger. Photon b uses the
 * complex conjugate of the third rotation.
 */
inline std::pair<MubSet, MubSet> rotation_triple()
{
    double const r = 1 / std::sqrt(2.0);
    ComplexMatrix const r2{{r, -r}, {r, r}};
    ComplexMatrix const r3{{cplx{0.5, 0.5}, cplx{0.5, -0.5}},
                           {cplx{0.5, -0.5}, cplx{0.5, 0.5}}};
    MubSet a{{Unitary::identity(2),
              Unitary(r2.adjoint()),
              Unitary(r3.adjoint())}};
    MubSet b{{Unitary::identity(2),
              Unitary(r2.adjoint()),
              Unitary(r3.conj().adjoint())}};
    return {a, b};
}

//---------------------------------------------------------------------------//
// CORRELATION FUNCTION
//---------------------------------------------------------------------------//
/*!
 * Operator whose expectation in the computational basis gives the paired
 * joint probability P(1,1) + P(2,2), normalized over all four outcomes.
 */
struct CorrelationKernel
{
    ComplexMatrix same = ComplexMatrix::identity(4);
};

//! Unsharp {H, V} measurement on each photon with the given visibilities.
inline CorrelationKernel damped_kernel(double va, double vb)
{
    auto damped = [](std::size_t l, double v) {
        ComplexMatrix d = ComplexMatrix::identity(2) * cplx{(1 - v) / 2};
        d(l, l) += v;
        return d;
    };
    CorrelationKernel k;
    k.same = tensor(damped(0, va), damped(0, vb))
             + tensor(damped(1, va), damped(1, vb));
    return k;
}

/*!
 * Kernel realized by the Compton channel: paired azimuth windows at
 * (phi_a, phi_b) and (phi_a + pi/2, phi_b + pi/2), normalized by the sum
 * over all four window combinations.
 */
inline CorrelationKernel compton_kernel(TwoPhotonSetting const& s)
{
    auto effect_at = [](ScatterGeometry const& g) {
        return effect(kraus_pair(g));
    };
    auto const g0 = back_to_back_geometry(s);
    TwoPhotonSetting s90 = s;
    s90.phi_a += pi / 2;
    s90.phi_b += pi / 2;
    auto const g1 = back_to_back_geometry(s90);
    auto const ea0 = effect_at(g0[0]);
    auto const eb0 = effect_at(g0[1]);
    auto const ea1 = effect_at(g1[0]);
    auto const eb1 = effect_at(g1[1]);
    ComplexMatrix same = tensor(ea0, eb0) + tensor(ea1, eb1);
    ComplexMatrix all = same + tensor(ea0, eb1) + tensor(ea1, eb0);
    // all is proportional to the identity
    double const norm = all.trace().real() / 4;
    CorrelationKernel k;
    k.same = same * cplx{1 / norm};
    return k;
}

//! Setting with photons exchanged: (theta_a, phi_a) <-> (theta_b, phi_b).
inline TwoPhotonSetting swapped(TwoPhotonSetting s)
{
    std::swap(s.k_a, s.k_b);
    std::swap(s.theta_a, s.theta_b);
    std::swap(s.phi_a, s.phi_b);
    return s;
}

namespace detail
{
//! Tr(rho A) for raw matrices
inline double trace_product(ComplexMatrix const& rho, ComplexMatrix const& a)
{
    cplx s{0, 0};
    for (std::size_t i = 0; i < rho.rows(); ++i)
        for (std::size_t j = 0; j < rho.cols(); ++j)
            s += rho(i, j) * a(j, i);
    return s.real();
}

//! Tr(rho W K W^dagger)
inline double rotated_expectation(ComplexMatrix const& rho,
                                  ComplexMatrix const& w,
                                  ComplexMatrix const& k)
{
    return trace_product(rho, w * k * w.adjoint());
}
}  // namespace detail

/*!
 * Correlation P(a_1, b_1) + P(a_2, b_2) with the fixed pairing 1<->1, 2<->2.
 */
inline double correlation(DensityMatrix const& rho,
                          Unitary const& basis_a,
                          Unitary const& basis_b,
                          CorrelationKernel const& kernel = {
                              damped_kernel(1, 1)})
{
    if (rho.dim() != 4)
    {
        throw Error(ErrorCode::bad_dim, "correlation needs two photons");
    }
    auto const w = tensor(basis_a.matrix(), basis_b.matrix());
    return detail::rotated_expectation(rho.matrix(), w, kernel.same);
}

//! Sum over paired bases of the label-optimized correlation, ideal
//! visibility.
inline double
mub_witness(DensityMatrix const& rho, MubSet const& a, MubSet const& b)
{
    if (a.size() != b.size() || a.size() < 1 || a.size() > 3)
    {
        throw Error(ErrorCode::size_mismatch,
                    "MUB sets must have equal size in 1..3");
    }
    double total = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        double const c = correlation(rho, a.bases[k], b.bases[k]);
        total += std::max(c, 1 - c);
    }
    return total;
}

//---------------------------------------------------------------------------//
// BOUNDS
//---------------------------------------------------------------------------//
struct Bounds
{
    double sep_lo = 0;
    double sep_hi = 0;
    double ent_lo = 0;
    double ent_hi = 0;
};

//! Separable and entangled ranges of I_3 for visibility product v.
inline Bounds mub_bounds(double v, std::size_t m)
{
    if (m != 3)
    {
        throw Error(ErrorCode::unsupported, "closed-form bounds need m = 3");
    }
    return {0.5 * (3 - v), 0.5 * (3 + v), 0.5 * (3 - 3 * v), 0.5 * (3 + 3 * v)};
}

//---------------------------------------------------------------------------//
// WITNESS EVALUATION AND OPTIMIZATION
//---------------------------------------------------------------------------//
struct WitnessReport
{
    double value = 0;
    std::size_t n_settings = 3;
    std::vector<double> params;
    double sep_lo = 0;
    double sep_hi = 0;
    double ent_lo = 0;
    double ent_hi = 0;
    double visibility_product = 1;
    std::size_t evaluations = 0;
};

struct ComptonWitnessOptions
{
    double k_a = 1;
    double k_b = 1;
    double theta_a = pi / 2;
    double theta_b = pi / 2;
    double frame_phi = 0;
    bool enforce_bose = true;
    bool optimize = true;
    std::size_t n_restarts = 64;
    std::uint64_t seed = 0;
    std::size_t m = 3;  //!< number of bases from the triple
    //! Use visibilities directly instead of the channel (both arms)
    bool ideal = false;

    TwoPhotonSetting setting() const
    {
        return {k_a, k_b, theta_a, theta_b, frame_phi, frame_phi, frame_phi};
    }
    double visibility_product() const
    {
        return ideal ? 1.0
                     : visibility(k_a, theta_a) * visibility(k_b, theta_b);
    }
};

/*!
 * Witness functional over local-unitary parameters.
 *
 * params[0..2] and params[3..5] are Euler angles of a common local unitary
 * per side applied ahead of every basis of the triple, so the bases stay
 * mutually unbiased. With Bose enforcement each correlation is averaged with
 * the exchanged configuration (geometry swapped, rho_ab -> rho_ba).
 */
class MubFunctional
{
  public:
    MubFunctional(ComplexMatrix rho,
                  ComptonWitnessOptions const& opts,
                  std::pair<MubSet, MubSet> triple = rotation_triple())
        : rho_(std::move(rho))
        , triple_(std::move(triple))
        , bose_(opts.enforce_bose)
        , m_(opts.m)
    {
        if (triple_.first.size() != triple_.second.size()
            || m_ > triple_.first.size() || m_ < 1)
        {
            throw Error(ErrorCode::size_mismatch, "basis count");
        }
        auto const s = swap_operator();
        rho_swapped_ = s * rho_ * s;
        if (opts.ideal)
        {
            k_ab_ = k_ba_ = damped_kernel(1, 1);
        }
        else
        {
            k_ab_ = compton_kernel(opts.setting());
            k_ba_ = compton_kernel(swapped(opts.setting()));
        }
    }

    //! Correlation of setting k with fixed pairing
    double correlation(std::size_t k,
                       ComplexMatrix const& ua,
                       ComplexMatrix const& ub) const
    {
        auto const w = tensor(ua.adjoint() * triple_.first.bases[k].matrix(),
                              ub.adjoint()
                                  * triple_.second.bases[k].matrix());
        double c = detail::rotated_expectation(rho_, w, k_ab_.same);
        if (bose_)
        {
            c = 0.5
                * (c + detail::rotated_expectation(rho_swapped_, w,
                                                   k_ba_.same));
        }
        return c;
    }

    //! Label-optimized sum over the first m settings
    double operator()(std::vector<double> const& p) const
    {
        auto const [ua, ub] = unitaries(p);
        double total = 0;
        for (std::size_t k = 0; k < m_; ++k)
        {
            double const c = correlation(k, ua, ub);
            total += std::max(c, 1 - c);
        }
        return total;
    }

    //! Label choice minimizing each correlation, for lower range ends
    double label_min(std::vector<double> const& p) const
    {
        auto const [ua, ub] = unitaries(p);
        double total = 0;
        for (std::size_t k = 0; k < m_; ++k)
        {
            double const c = correlation(k, ua, ub);
            total += std::min(c, 1 - c);
        }
        return total;
    }

    void set_state(ComplexMatrix rho)
    {
        auto const s = swap_operator();
        rho_ = std::move(rho);
        rho_swapped_ = s * rho_ * s;
    }

    static std::pair<ComplexMatrix, ComplexMatrix>
    unitaries(std::vector<double> const& p)
    {
        if (p.size() < 6)
            return {ComplexMatrix::identity(2), ComplexMatrix::identity(2)};
        return {su2(p[0], p[1], p[2]).matrix(),
                su2(p[3], p[4], p[5]).matrix()};
    }

  private:
    ComplexMatrix rho_;
    ComplexMatrix rho_swapped_;
    std::pair<MubSet, MubSet> triple_;
    CorrelationKernel k_ab_;
    CorrelationKernel k_ba_;
    bool bose_;
    std::size_t m_;
};

namespace detail
{
inline void fill_bounds(WitnessReport& r, ComptonWitnessOptions const& opts)
{
    r.visibility_product = opts.visibility_product();
    r.n_settings = opts.m;
    if (opts.m == 3)
    {
        auto const b = mub_bounds(r.visibility_product, 3);
        r.sep_lo = b.sep_lo;
        r.sep_hi = b.sep_hi;
        r.ent_lo = b.ent_lo;
        r.ent_hi = b.ent_hi;
    }
    else
    {
        double const m = static_cast<double>(opts.m);
        double const v = r.visibility_product;
        r.sep_lo = 0.5 * (m - v);
        r.sep_hi = 0.5 * (m + v);
        r.ent_lo = 0.5 * (m - m * v);
        r.ent_hi = 0.5 * (m + m * v);
    }
}

inline RestartOptions restart_options(ComptonWitnessOptions const& opts,
                                      std::size_t n_params)
{
    RestartOptions ro;
    ro.n_restarts = opts.n_restarts;
    ro.seed = opts.seed;
    ro.first_start.assign(n_params, 0.0);
    return ro;
}

inline ComplexMatrix product_state(double ta, double pa, double tb, double pb)
{
    auto ket = [](double t, double p) {
        return std::vector<cplx>{std::cos(t / 2),
                                 std::polar(std::sin(t / 2), p)};
    };
    auto const v = tensor(std::span<cplx const>(ket(ta, pa)),
                          std::span<cplx const>(ket(tb, pb)));
    return ComplexMatrix::outer(v, v);
}
}  // namespace detail

//! Maximize a witness functional over local unitaries (6 Euler angles).
inline OptimizeResult optimize_local_unitaries(Objective const& objective,
                                               std::size_t n_restarts,
                                               std::uint64_t seed,
                                               std::size_t n_params = 6)
{
    RestartOptions ro;
    ro.n_restarts = n_restarts;
    ro.seed = seed;
    ro.first_start.assign(n_params, 0.0);
    return maximize(objective, n_params, ro);
}

/*!
 * Compton-damped I_m of a two-photon state.
 *
 * Without optimization the rotation triple is used as is; with it the
 * functional is maximized over one local unitary per side.
 */
inline WitnessReport
mub_witness_compton(DensityMatrix const& rho, ComptonWitnessOptions const& opts)
{
    if (rho.dim() != 4)
    {
        throw Error(ErrorCode::bad_dim, "witness needs a two-photon state");
    }
    MubFunctional const f(rho.matrix(), opts);
    WitnessReport r;
    if (opts.optimize)
    {
        auto best = optimize_local_unitaries(
            [&f](std::vector<double> const& p) { return f(p); },
            opts.n_restarts,
            opts.seed);
        r.value = best.value;
        r.params = best.params;
        r.evaluations = best.evaluations;
    }
    else
    {
        r.params.assign(6, 0.0);
        r.value = f(r.params);
        r.evaluations = 1;
    }
    detail::fill_bounds(r, opts);
    return r;
}

/*!
 * Best separable value of the same functional: maximized over pure product
 * states (4 Bloch angles); local unitaries are absorbed into the states.
 */
inline WitnessReport separable_mub_max(ComptonWitnessOptions const& opts)
{
    MubFunctional f(ComplexMatrix::identity(4) * cplx{0.25}, opts);
    auto objective = [&f](std::vector<double> const& p) {
        MubFunctional local = f;
        local.set_state(detail::product_state(p[0], p[1], p[2], p[3]));
        return local(std::vector<double>{});
    };
    auto best = optimize_local_unitaries(objective, opts.n_restarts,
                                         opts.seed, 4);
    WitnessReport r;
    r.value = best.value;
    r.params = best.params;
    r.evaluations = best.evaluations;
    detail::fill_bounds(r, opts);
    return r;
}

struct Range
{
    double lo = 0;
    double hi = 0;
};

//! Lowest and highest label-optimized sums over local unitaries.
inline Range mub_entangled_range(DensityMatrix const& rho,
                                 ComptonWitnessOptions const& opts)
{
    MubFunctional const f(rho.matrix(), opts);
    auto hi = optimize_local_unitaries(
        [&f](std::vector<double> const& p) { return f(p); },
        opts.n_restarts, opts.seed);
    auto lo = optimize_local_unitaries(
        [&f](std::vector<double> const& p) { return -f.label_min(p); },
        opts.n_restarts, opts.seed);
    return {-lo.value, hi.value};
}

//! Same range over pure product states.
inline Range mub_separable_range(ComptonWitnessOptions const& opts)
{
    MubFunctional const f(ComplexMatrix::identity(4) * cplx{0.25}, opts);
    auto with_state = [&f](std::vector<double> const& p) {
        MubFunctional local = f;
        local.set_state(detail::product_state(p[0], p[1], p[2], p[3]));
        return local;
    };
    auto hi = optimize_local_unitaries(
        [&](std::vector<double> const& p) { return with_state(p)({}); },
        opts.n_restarts, opts.seed, 4);
    auto lo = optimize_local_unitaries(
        [&](std::vector<double> const& p) {
            return -with_state(p).label_min({});
        },
        opts.n_restarts, opts.seed, 4);
    return {-lo.value, hi.value};
}

//---------------------------------------------------------------------------//
// SIC WITNESS
//---------------------------------------------------------------------------//
/*!
 * Qubit SIC (regular tetrahedron) generated from a seed state.
 */
struct SicSet
{
    PureState seed;
    std::array<PureState, 4> states;
};

//! The three generators acting on |H>; rows 2 and 3 normalized by 1/sqrt3.
inline std::array<Unitary, 3> sic_generators()
{
    double const s2 = std::sqrt(2.0);
    double const n = 1 / std::sqrt(3.0);
    cplx const w = std::polar(1.0, pi / 3);  // (-1)^(1/3)
    cplx const w2 = w * w;  // (-1)^(2/3)
    return {Unitary(ComplexMatrix{{n, n * s2}, {n * s2, -n}}),
            Unitary(ComplexMatrix{{n, n * s2}, {-w * s2 * n, w * n}}),
            Unitary(ComplexMatrix{{n, n * s2}, {w2 * s2 * n, -w2 * n}})};
}

/*!
 * SIC states W U_l |H> where W maps |H> to the seed, so the tetrahedron is
 * regular for every seed.
 */
inline SicSet make_sic(PureState const& seed)
{
    if (seed.dim() != 2)
    {
        throw Error(ErrorCode::bad_dim, "SIC seed must be a qubit");
    }
    cplx const a = seed[0];
    cplx const b = seed[1];
    ComplexMatrix const w{{a, -std::conj(b)}, {b, std::conj(a)}};
    auto const gens = sic_generators();
    std::vector<cplx> const h{1, 0};
    auto state = [&](ComplexMatrix const& u) {
        return PureState::normalized((w * u).apply(h));
    };
    return {seed,
            {state(ComplexMatrix::identity(2)),
             state(gens[0].matrix()),
             state(gens[1].matrix()),
             state(gens[2].matrix())}};
}

inline SicSet default_sic()
{
    return make_sic(PureState({1, 0}));
}

//! Largest deviation of |<s_l|s_l'>|^2 from 1/3 over l != l'.
inline double sic_defect(SicSet const& sic)
{
    double worst = 0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            worst = std::max(
                worst,
                std::abs(std::norm(inner(sic.states[i], sic.states[j]))
                         - 1.0 / 3));
    return worst;
}

//! Normalization that reproduces the tabulated SIC witness values.
inline constexpr double sic_prefactor = 1.5;

/*!
 * sigma_z-twisted SIC sum over the first m states,
 * (3/2) sum_i Tr[D_a(s_i) (x) sz D_b(s_i) sz rho], with unsharp projectors
 * D(s) = V|s><s| + (1-V)/2.
 *
 * With \c conjugate_b photon b uses the mirrored tetrahedron s_i^*.
 */
class SicFunctional
{
  public:
    SicFunctional(SicSet const& sic,
                  std::size_t m,
                  double va,
                  double vb,
                  bool conjugate_b = false)
        : m_(m)
    {
        if (m < 1 || m > 4)
        {
            throw Error(ErrorCode::bad_count, "SIC count must be in 1..4");
        }
        auto const z = pauli::z();
        auto const half_id = ComplexMatrix::identity(2);
        op_ = ComplexMatrix(4, 4);
        for (std::size_t i = 0; i < m; ++i)
        {
            auto const p = sic.states[i].projector();
            auto const pb = conjugate_b ? p.conj() : p;
            auto const da = p * cplx{va} + half_id * cplx{(1 - va) / 2};
            auto const db = z * pb * z * cplx{vb}
                            + half_id * cplx{(1 - vb) / 2};
            op_ += tensor(da, db);
        }
        op_ *= cplx{sic_prefactor};
    }

    double operator()(ComplexMatrix const& rho) const
    {
        return detail::trace_product(rho, op_);
    }

    //! Value on (Ua x Ub) rho (Ua x Ub)^dagger with Euler-angle parameters
    double rotated(ComplexMatrix const& rho, std::vector<double> const& p) const
    {
        auto const [ua, ub] = MubFunctional::unitaries(p);
        auto const w = tensor(ua, ub);
        return detail::trace_product(w * rho * w.adjoint(), op_);
    }

    ComplexMatrix const& operator_matrix() const { return op_; }
    std::size_t count() const { return m_; }

  private:
    ComplexMatrix op_;
    std::size_t m_;
};

inline double sic_witness(DensityMatrix const& rho,
                          SicSet const& sics,
                          std::size_t m,
                          double va = 1,
                          double vb = 1)
{
    if (rho.dim() != 4)
    {
        throw Error(ErrorCode::bad_dim, "SIC witness needs two photons");
    }
    return SicFunctional(sics, m, va, vb)(rho.matrix());
}

/*!
 * Min/max of the SIC witness over local unitaries applied to rho and over
 * both orientations of photon b's tetrahedron.
 */
inline Range sic_entangled_range(DensityMatrix const& rho,
                                 std::size_t m,
                                 double va,
                                 double vb,
                                 std::size_t n_restarts = 64,
                                 std::uint64_t seed = 0)
{
    ComplexMatrix const r = rho.matrix();
    Range result{std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity()};
    for (bool conj_b : {false, true})
    {
        SicFunctional const f(default_sic(), m, va, vb, conj_b);
        auto hi = optimize_local_unitaries(
            [&](std::vector<double> const& p) { return f.rotated(r, p); },
            n_restarts, seed);
        auto lo = optimize_local_unitaries(
            [&](std::vector<double> const& p) { return -f.rotated(r, p); },
            n_restarts, seed);
        result.lo = std::min(result.lo, -lo.value);
        result.hi = std::max(result.hi, hi.value);
    }
    return result;
}

/*!
 * Min/max of the SIC witness over pure product states, evaluated through
 * Bloch vectors: (3/2) sum_i (1 + Va s_i.a)(1 + Vb s~_i.b)/4 where s~ is the
 * Bloch vector of sz|s>.
 */
class SicProductFunctional
{
  public:
    SicProductFunctional(SicSet const& sic, std::size_t m, double va, double vb)
        : m_(m), va_(va), vb_(vb)
    {
        if (m < 1 || m > 4)
        {
            throw Error(ErrorCode::bad_count, "SIC count must be in 1..4");
        }
        for (std::size_t i = 0; i < 4; ++i)
        {
            cplx const a = sic.states[i][0];
            cplx const b = sic.states[i][1];
            cplx const ab = std::conj(a) * b;
            s_[i] = {2 * ab.real(), 2 * ab.imag(), std::norm(a) - std::norm(b)};
            // sz flips the x and y components
            t_[i] = {-s_[i][0], -s_[i][1], s_[i][2]};
        }
    }

    double operator()(std::vector<double> const& p) const
    {
        Real3 const a{std::sin(p[0]) * std::cos(p[1]),
                      std::sin(p[0]) * std::sin(p[1]),
                      std::cos(p[0])};
        Real3 const b{std::sin(p[2]) * std::cos(p[3]),
                      std::sin(p[2]) * std::sin(p[3]),
                      std::cos(p[2])};
        double sum = 0;
        for (std::size_t i = 0; i < m_; ++i)
            sum += (1 + va_ * dot(s_[i], a)) * (1 + vb_ * dot(t_[i], b));
        return sic_prefactor * 0.25 * sum;
    }

  private:
    std::array<Real3, 4> s_;
    std::array<Real3, 4> t_;
    std::size_t m_;
    double va_;
    double vb_;
};

inline Range sic_separable_range(std::size_t m,
                                 double va,
                                 double vb,
                                 std::size_t n_restarts = 64,
                                 std::uint64_t seed = 0)
{
    SicProductFunctional const f(default_sic(), m, va, vb);
    auto hi = optimize_local_unitaries(f, n_restarts, seed, 4);
    auto lo = optimize_local_unitaries(
        [&f](std::vector<double> const& p) { return -f(p); },
        n_restarts, seed, 4);
    return {-lo.value, hi.value};
}

//! Which source to trust for the m = 2 separable upper bound.
enum class SicUpperBoundSource
{
    brute_force,  //!< ((1+sqrt3)/2)^2, reproduced by product optimization
    alternative,  //!< ((1+sqrt3)/3)^2
};

namespace sic_bounds
{
inline constexpr std::array<double, 4> lower{0, 0, 0.4, 1};
inline double const upper_m2_brute_force
    = std::pow((1 + std::sqrt(3.0)) / 2, 2);
inline double const upper_m2_text = std::pow((1 + std::sqrt(3.0)) / 3, 2);
}  // namespace sic_bounds

//! Ideal-visibility separable bounds for m SIC states.
inline Range sic_separable_bounds(std::size_t m,
                                  SicUpperBoundSource source
                                  = SicUpperBoundSource::brute_force)
{
    if (m < 1 || m > 4)
    {
        throw Error(ErrorCode::bad_count, "SIC count must be in 1..4");
    }
    std::array<double, 4> upper{0,
                                source == SicUpperBoundSource::brute_force
                                    ? sic_bounds::upper_m2_brute_force
                                    : sic_bounds::upper_m2_text,
                                2,
                                2};
    return {sic_bounds::lower[m - 1], upper[m - 1]};
}

//---------------------------------------------------------------------------//
// PROTOCOL THRESHOLDS
//---------------------------------------------------------------------------//
struct VisibilityOptimum
{
    double theta = 0;
    double value = 0;
};

//! Scattering angle of maximal visibility at energy k.
inline VisibilityOptimum max_visibility(double k_in)
{
    auto neg = [k_in](double t) { return -visibility(k_in, t); };
    std::uintmax_t iters = 200;
    auto const r = boost::math::tools::brent_find_minima(
        neg, 1e-6, pi - 1e-6, 52, iters);
    return {r.first, -r.second};
}

struct Thresholds
{
    double k_ent = 0;  //!< max V^2 = 1/3
    double k_tel = 0;  //!< max V^2 = 2/3
    double k_chsh = 0;  //!< max V^2 = 1/sqrt2
};

//! Energy at which the equal-angle visibility product max V^2 hits target.
inline double energy_for_visibility_product(double target)
{
    auto f = [target](double k) {
        double const v = max_visibility(k).value;
        return v * v - target;
    };
    std::uintmax_t iters = 200;
    auto const r = boost::math::tools::toms748_solve(
        f, 1e-3, 50.0, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (r.first + r.second);
}

inline Thresholds protocol_thresholds()
{
    return {energy_for_visibility_product(1.0 / 3),
            energy_for_visibility_product(2.0 / 3),
            energy_for_visibility_product(1 / std::sqrt(2.0))};
}

inline constexpr double kev_per_unit = 511.0;

//---------------------------------------------------------------------------//
// CHSH
//---------------------------------------------------------------------------//
//! Maximal CHSH value 2 sqrt(t1 + t2) from the two largest eigenvalues of
//! T^T T.
inline double chsh_value(DensityMatrix const& rho)
{
    auto const t = correlation_tensor(rho);
    ComplexMatrix ttt(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
        {
            double s = 0;
            for (int k = 0; k < 3; ++k)
                s += t[k][i] * t[k][j];
            ttt(i, j) = s;
        }
    auto const ev = eigvals_hermitian(ttt);
    return 2 * std::sqrt(std::max(ev[0] + ev[1], 0.0));
}

}  // namespace compton
