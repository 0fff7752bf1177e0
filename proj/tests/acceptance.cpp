//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tests/acceptance.cpp
//! End-to-end acceptance checks; one PASS/FAIL line per criterion.
//---------------------------------------------------------------------------//
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "compton/channel.hpp"
#include "compton/kinematics.hpp"
#include "compton/montecarlo.hpp"
#include "compton/state_spec.hpp"
#include "compton/states.hpp"
#include "compton/witness.hpp"

using namespace compton;

namespace
{

struct Outcome
{
    bool pass = true;
    std::string detail;

    void check(bool ok, std::string const& what)
    {
        pass = pass && ok;
        if (!detail.empty())
            detail += "; ";
        detail += what + (ok ? "" : " [miss]");
    }
};

std::string fmt(char const* f, double a, double b = 0, double c = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

bool near(double x, double target, double tol)
{
    return std::abs(x - target) <= tol;
}

int run(int id, double limit_s, std::function<Outcome()> const& body)
{
    auto const start = std::chrono::steady_clock::now();
    Outcome r;
    try
    {
        r = body();
    }
    catch (std::exception const& e)
    {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    double const secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (limit_s > 0)
        r.check(secs < limit_s, fmt("runtime %.2f s < %.0f s", secs, limit_s));
    else
        r.detail += fmt(" (%.2f s)", secs);
    std::printf("criterion %2d: %s  %s\n", id, r.pass ? "PASS" : "FAIL",
                r.detail.c_str());
    std::fflush(stdout);
    return r.pass ? 0 : 1;
}

//! Argmax of V(k, theta) on a 0.01 deg grid over [0, 180] deg
std::pair<double, double> scan_peak(double k)
{
    double best_t = 0;
    double best_v = -1;
    for (int i = 0; i <= 18000; ++i)
    {
        double const t = i * 0.01 * deg;
        double const v = visibility(k, t);
        if (v > best_v)
        {
            best_v = v;
            best_t = t;
        }
    }
    return {best_t, best_v};
}

ComptonWitnessOptions at_optimum(double k)
{
    ComptonWitnessOptions o;
    o.k_a = o.k_b = k;
    o.theta_a = o.theta_b = max_visibility(k).theta;
    return o;
}

DensityMatrix psi_plus()
{
    return DensityMatrix(bell({BellKind::psi_plus, PolBasis::lin}));
}

std::array<double, 4> random_setting_values(CounterRng& rng)
{
    return {0.05 + 3 * rng.uniform(), pi * rng.uniform(),
            2 * pi * rng.uniform(), 2 * pi * rng.uniform()};
}

}  // namespace

int main()
{
    int failures = 0;

    failures += run(1, 1, [] {
        Outcome r;
        auto const [t, v] = scan_peak(1);
        r.check(near(t / deg, 81.67, 0.05),
                fmt("argmax %.2f deg (81.67 +- 0.05)", t / deg));
        r.check(near(v, 0.69, 0.005), fmt("V = %.5f (0.69 +- 0.005)", v));
        return r;
    });

    failures += run(2, 1, [] {
        Outcome r;
        auto const [t, v] = scan_peak(2.0 / 3);
        r.check(near(t / deg, 85, 1.0),
                fmt("argmax %.2f deg (near 85, +- 1)", t / deg));
        r.check(near(v, 0.80, 0.005), fmt("V = %.5f (0.80 +- 0.005)", v));
        double const v85 = visibility(2.0 / 3, 85 * deg);
        r.check(near(v85, 0.80, 0.005),
                fmt("V(85 deg) = %.5f (0.80 +- 0.005)", v85));
        return r;
    });

    failures += run(3, 60, [] {
        Outcome r;
        auto o = at_optimum(1);
        o.n_restarts = 64;
        auto const ent = mub_witness_compton(psi_plus(), o);
        r.check(near(ent.value, 2.21789, 1e-3),
                fmt("I3(psi+) = %.5f (2.21789 +- 1e-3)", ent.value));
        auto const sep = separable_mub_max(o);
        r.check(near(sep.value, 1.7393, 1e-3),
                fmt("separable max = %.5f (1.7393 +- 1e-3)", sep.value));
        o.ideal = true;
        auto const ideal = mub_witness_compton(psi_plus(), o);
        r.check(near(ideal.value, 3, 1e-6),
                fmt("ideal optimum = %.8f (3 +- 1e-6)", ideal.value));
        double const at_triple
            = MubFunctional(psi_plus().matrix(), o)(std::vector<double>(6, 0.0));
        r.check(near(at_triple, 3, 1e-6),
                fmt("rotation triple attains %.8f", at_triple));
        return r;
    });

    failures += run(4, 60, [] {
        Outcome r;
        ComptonWitnessOptions o;
        o.k_a = o.k_b = 2.0 / 3;
        o.theta_a = o.theta_b = 85 * deg;
        for (double p : {0.0, 0.25, 0.5, 0.75, 1.0})
        {
            auto const w = mub_witness_compton(ortho_reduced(p).rho, o);
            r.check(near(w.value, 2.14, 0.01),
                    fmt("I3(p=%.2f) = %.4f (2.14 +- 0.01)", p, w.value));
        }
        auto const sep = separable_mub_max(o);
        r.check(near(sep.value, 1.82, 0.01),
                fmt("separable max = %.4f (1.82 +- 0.01)", sep.value));
        return r;
    });

    failures += run(5, 5, [] {
        Outcome r;
        auto const t = protocol_thresholds();
        r.check(near(t.k_ent, 1.45, 0.01),
                fmt("k_ent = %.4f (%.0f keV)", t.k_ent, t.k_ent * kev_per_unit));
        r.check(near(t.k_tel, 0.63, 0.01),
                fmt("k_tel = %.4f (%.0f keV)", t.k_tel, t.k_tel * kev_per_unit));
        r.check(near(t.k_chsh, 0.56, 0.01),
                fmt("k_chsh = %.4f (%.0f keV)", t.k_chsh,
                    t.k_chsh * kev_per_unit));
        return r;
    });

    failures += run(6, 0, [] {
        Outcome r;
        double worst = 0;
        for (int i = 0; i <= 20; ++i)
            worst = std::max(
                worst, std::abs(concurrence(ortho_reduced(i / 20.0).rho) - 1.0 / 3));
        r.check(worst <= 1e-9, fmt("max |C - 1/3| = %.2e over 21 points", worst));
        return r;
    });

    failures += run(7, 0, [] {
        Outcome r;
        CounterRng rng(7001, 0);
        auto const sep = separable_basis();
        double worst = 0;
        for (int n = 0; n < 1000; ++n)
        {
            auto const a = random_setting_values(rng);
            auto const b = random_setting_values(rng);
            TwoPhotonSetting s{a[0], b[0], a[1], b[1], a[2], b[2], a[3]};
            auto const g = back_to_back_geometry(s);
            for (auto kind : {BellKind::psi_plus, BellKind::psi_minus,
                              BellKind::phi_plus, BellKind::phi_minus})
            {
                DensityMatrix rho(bell({kind, PolBasis::lin}));
                worst = std::max(worst, std::abs(sigma_bell_closed(kind, s)
                                                 - sigma_multi(rho, g).value));
            }
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                {
                    DensityMatrix rho(sep[2 * x + y]);
                    worst = std::max(
                        worst, std::abs(sigma_product_closed(x, y, s)
                                        - sigma_multi(rho, g).value));
                }
        }
        r.check(worst <= 1e-12,
                fmt("max |closed - Kraus| = %.2e over 1000 configs x 8 states",
                    worst));
        return r;
    });

    failures += run(8, 0, [] {
        Outcome r;
        auto const mix = parse_state("mix:0.5*prod:HV+0.5*prod:VH");
        double const t = max_visibility(1).theta;
        double worst = 0;
        for (double frame : {0.0, 0.7})
            for (int i = 0; i < 360; ++i)
            {
                double const d = i * deg;
                TwoPhotonSetting s{1, 1, t, t, frame + d, frame, frame};
                worst = std::max(worst,
                                 std::abs(sigma_two_photon(mix, s).value
                                          - sigma_two_photon(psi_plus(), s).value));
            }
        r.check(worst <= 1e-12, fmt("max curve difference = %.2e", worst));
        auto const w = mub_witness_compton(mix, at_optimum(1));
        r.check(w.value <= 1.7393 + 1e-3,
                fmt("optimized I3(mixture) = %.5f (<= 1.7403)", w.value));
        return r;
    });

    failures += run(9, 0, [] {
        Outcome r;
        struct Row
        {
            double k;
            std::size_t m;
            std::size_t m_sic;
            double mub_lo, mub_hi, sic_lo, sic_hi;
        };
        Row const rows[] = {{1e-4, 3, 4, 0, 3, 0, 3},
                            {1e-4, 2, 3, 0, 2, 0, 2.25},
                            {1, 3, 4, 0.78, 2.22, 0.78, 2.22},
                            {1, 2, 3, 0.52, 1.48, 0.59, 1.66}};
        for (auto const& row : rows)
        {
            auto o = at_optimum(row.k);
            o.m = row.m;
            auto const mub = mub_entangled_range(psi_plus(), o);
            r.check(near(mub.lo, row.mub_lo, 0.01) && near(mub.hi, row.mub_hi, 0.01),
                    fmt("k=%g MUB m=%g ENT ", row.k, double(row.m))
                        + fmt("%.3f/%.3f", mub.lo, mub.hi));
            double const v = max_visibility(row.k).value;
            auto const sic = sic_entangled_range(psi_plus(), row.m_sic, v, v);
            r.check(near(sic.lo, row.sic_lo, 0.01) && near(sic.hi, row.sic_hi, 0.01),
                    fmt("k=%g SIC m~=%g ENT ", row.k, double(row.m_sic))
                        + fmt("%.3f/%.3f", sic.lo, sic.hi));
        }
        auto const brute = sic_separable_range(2, 1, 1, 100000, 1);
        double const table = sic_bounds::upper_m2_brute_force;
        double const text = sic_bounds::upper_m2_text;
        r.check(near(brute.hi, table, 1e-3),
                fmt("m~=2 separable upper by 1e5 product restarts = %.5f; "
                    "tabulated ((1+sqrt3)/2)^2 = %.5f reproduced, ",
                    brute.hi, table)
                    + fmt("alternative ((1+sqrt3)/3)^2 = %.5f is exceeded "
                          "by product states",
                          text));
        return r;
    });

    failures += run(10, 120, [] {
        Outcome r;
        RunConfig cfg;
        cfg.n_events = 1000000;
        cfg.seed = 2024;
        auto const rho = parse_state(cfg.state);
        auto const events = sample_events(cfg, rho);
        auto const est = estimate_witness(events, cfg);
        double const analytic = expected_estimate(rho, cfg);
        r.check(est.sigma < 0.02, fmt("sigma = %.4f (< 0.02)", est.sigma));
        r.check(near(est.value, analytic, 3 * est.sigma),
                fmt("I3 = %.4f vs window-averaged analytic %.4f (3 sigma)",
                    est.value, analytic));
        r.detail += fmt("; (%.1f sigma from 2.21789)",
                        std::abs(est.value - 2.21789) / est.sigma);
        auto const chi = chi_square(delta_phi_histogram(events, 36),
                                    expected_delta_phi(rho, cfg, 36));
        r.check(chi.p_value > 1e-3,
                fmt("delta-phi chi2 = %.1f / %.0f dof, p = %.3f",
                    chi.statistic, chi.dof, chi.p_value));
        return r;
    });

    failures += run(11, 0, [] {
        Outcome r;
        CounterRng rng(1101, 0);
        double transverse = 0;
        for (int n = 0; n < 10000; ++n)
        {
            Direction const d(pi * rng.uniform(), 2 * pi * rng.uniform());
            auto const k = d.unit_vector();
            for (int lambda : {1, -1})
            {
                auto const e = pol_vector(d, lambda);
                cplx const kd = k[0] * e[0] + k[1] * e[1] + k[2] * e[2];
                transverse = std::max(transverse, std::abs(kd));
            }
        }
        r.check(transverse < 1e-12, fmt("transversality %.1e", transverse));

        double const mub = unbiasedness_defect(standard_mub_triple());
        r.check(mub < 1e-12, fmt("MUB defect %.1e", mub));

        double sic = 0;
        for (int i = 0; i < 20; ++i)
        {
            double const t = pi * i / 19;
            PureState seed({std::cos(t / 2), std::polar(std::sin(t / 2), 0.3 * i)});
            sic = std::max(sic, sic_defect(make_sic(seed)));
        }
        r.check(sic < 1e-10, fmt("SIC overlap defect %.1e", sic));

        double dm = 0;
        for (int n = 0; n < 1000; ++n)
        {
            ComplexMatrix g(4, 4);
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j)
                    g(i, j) = cplx{rng.normal(), rng.normal()};
            ComplexMatrix m = g * g.adjoint();
            m *= cplx{1 / m.trace().real()};
            m = (m + m.adjoint()) * cplx{0.5};
            DensityMatrix rho(m);
            dm = std::max({dm, std::abs(rho.matrix().trace().real() - 1),
                           hermiticity_defect(rho.matrix()),
                           -eigvals_hermitian(rho.matrix()).back()});
        }
        r.check(dm < 1e-12, fmt("density-matrix invariants %.1e", dm));

        double const pt
            = eigvals_hermitian(partial_transpose(isotropic(1.0 / 3), 1)).back();
        r.check(std::abs(pt) < 1e-9, fmt("isotropic(1/3) min PT eigenvalue %.1e", pt));

        auto o = at_optimum(1);
        o.optimize = false;
        ComplexMatrix g(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                g(i, j) = cplx{rng.normal(), rng.normal()};
        ComplexMatrix m = g * g.adjoint();
        m *= cplx{1 / m.trace().real()};
        DensityMatrix rho((m + m.adjoint()) * cplx{0.5});
        double const base = mub_witness_compton(rho, o).value;
        double frame = 0;
        for (double c : {0.4, 1.3, 2.9})
        {
            o.frame_phi = c;
            frame = std::max(frame, std::abs(mub_witness_compton(rho, o).value - base));
        }
        r.check(frame < 1e-10, fmt("frame-rotation invariance %.1e", frame));
        return r;
    });

    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
