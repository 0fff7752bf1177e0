//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file compton/montecarlo.hpp
//! Event sampling from the two-photon cross section and witness estimation.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "channel.hpp"
#include "optimize.hpp"
#include "qcore.hpp"
#include "rng.hpp"
#include "state_spec.hpp"
#include "witness.hpp"

namespace compton
{
inline constexpr double deg = pi / 180;

//---------------------------------------------------------------------------//
// CONFIGURATION AND EVENTS
//---------------------------------------------------------------------------//
struct ThetaWindow
{
    double lo = 80 * deg;
    double hi = 84 * deg;
};

struct RunConfig
{
    std::string state = "bell:psi+:lin";
    double k_a = 1;
    double k_b = 1;
    std::size_t n_events = 100000;
    std::uint64_t seed = 0;
    ThetaWindow window_a;
    ThetaWindow window_b;
    std::size_t azimuth_bins = 36;
    double frame_phi = 0;
    bool enforce_bose = true;

    void validate() const
    {
        auto bad = [](std::string const& msg) {
            throw Error(ErrorCode::bad_config, msg);
        };
        if (n_events < 1)
            bad("n_events must be at least 1");
        if (!(k_a > 0) || !(k_b > 0))
            bad("photon energies must be positive");
        for (auto const& w : {window_a, window_b})
        {
            if (!(w.lo >= 0 && w.hi <= pi && w.lo < w.hi))
                bad("theta window must satisfy 0 <= lo < hi <= pi");
        }
        if (azimuth_bins < 4)
            bad("azimuth_bins must be at least 4");
    }
};

struct EventRecord
{
    std::uint64_t event_id = 0;
    double theta_a = 0;
    double phi_a = 0;
    double k_in_a = 1;
    double k_out_a = 0;
    double theta_b = 0;
    double phi_b = 0;
    double k_in_b = 1;
    double k_out_b = 0;
    std::array<std::uint64_t, 2> seed_lineage{0, 0};
};

//---------------------------------------------------------------------------//
// POLAR ANGLE SAMPLING
//---------------------------------------------------------------------------//
/*!
 * Inverse-CDF sampler for the scattering angle within a window, from the
 * density F(k, theta) sin(theta) tabulated on a uniform grid.
 */
class ThetaSampler
{
  public:
    static constexpr std::size_t grid_size = 2048;

    ThetaSampler(double k_in, ThetaWindow w) : k_(k_in), window_(w)
    {
        theta_.resize(grid_size);
        cdf_.resize(grid_size);
        std::vector<double> dens(grid_size);
        double const step = (w.hi - w.lo) / (grid_size - 1);
        for (std::size_t i = 0; i < grid_size; ++i)
        {
            theta_[i] = w.lo + step * i;
            dens[i] = envelope(k_in, theta_[i]) * std::sin(theta_[i]);
        }
        cdf_[0] = 0;
        double vsum = 0;
        for (std::size_t i = 1; i < grid_size; ++i)
        {
            double const piece = 0.5 * (dens[i] + dens[i - 1]) * step;
            cdf_[i] = cdf_[i - 1] + piece;
            vsum += 0.5
                    * (dens[i] * visibility(k_in, theta_[i])
                       + dens[i - 1] * visibility(k_in, theta_[i - 1]))
                    * step;
        }
        if (!(cdf_.back() > 0))
        {
            throw Error(ErrorCode::bad_config, "empty theta window");
        }
        mean_visibility_ = vsum / cdf_.back();
        for (auto& c : cdf_)
            c /= cdf_.back();
    }

    double operator()(double u) const
    {
        auto const it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
        i = std::clamp<std::size_t>(i, 1, grid_size - 1);
        double const c0 = cdf_[i - 1];
        double const c1 = cdf_[i];
        double const t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
        return theta_[i - 1] + std::clamp(t, 0.0, 1.0)
                                   * (theta_[i] - theta_[i - 1]);
    }

    //! Density-weighted mean visibility over the window
    double mean_visibility() const { return mean_visibility_; }
    double k_in() const { return k_; }
    ThetaWindow window() const { return window_; }

  private:
    double k_;
    ThetaWindow window_;
    std::vector<double> theta_;
    std::vector<double> cdf_;
    double mean_visibility_ = 0;
};

//---------------------------------------------------------------------------//
// AZIMUTHAL DENSITY
//---------------------------------------------------------------------------//
/*!
 * Traceless part of the normalized single-arm effect,
 * E(phi) / (Tr E / 2) = 1 + V (cos 2phi X + sin 2phi Y), with phi the lab
 * azimuth of the outgoing photon.
 */
struct AzimuthalResponse
{
    ComplexMatrix x_a;
    ComplexMatrix y_a;
    ComplexMatrix x_b;
    ComplexMatrix y_b;
};

inline AzimuthalResponse
azimuthal_response(double k_a, double k_b, double frame_phi)
{
    auto normalized = [](ScatterGeometry const& g) {
        auto e = effect(kraus_pair(g));
        return e * cplx{2 / e.trace().real()};
    };
    auto arm_effects = [&](double phi) {
        TwoPhotonSetting s{k_a, k_b, pi / 2, pi / 2, phi, phi, frame_phi};
        auto const g = back_to_back_geometry(s);
        return std::pair{normalized(g[0]), normalized(g[1])};
    };
    double const f = frame_phi;
    auto const [a0, b0] = arm_effects(f);
    auto const [a90, b90] = arm_effects(f + pi / 2);
    auto const [a45, b45] = arm_effects(f + pi / 4);
    auto const [a135, b135] = arm_effects(f + 3 * pi / 4);
    // Responses at lab angle f: rotate the (frame) cos/sin pair to lab
    double const va = visibility(k_a, pi / 2);
    double const vb = visibility(k_b, pi / 2);
    auto frame_to_lab = [f](ComplexMatrix const& xf,
                            ComplexMatrix const& yf) {
        double const c = std::cos(2 * f);
        double const s = std::sin(2 * f);
        return std::pair{xf * cplx{c} - yf * cplx{s},
                         xf * cplx{s} + yf * cplx{c}};
    };
    auto const [xa, ya] = frame_to_lab((a0 - a90) * cplx{0.5 / va},
                                       (a45 - a135) * cplx{0.5 / va});
    auto const [xb, yb] = frame_to_lab((b0 - b90) * cplx{0.5 / vb},
                                       (b45 - b135) * cplx{0.5 / vb});
    return {xa, ya, xb, yb};
}

/*!
 * Normalized joint azimuthal density for given visibilities,
 * g = 1 + Va u_a.ga + Vb u_b.gb + Va Vb u_a^T T u_b, u = (cos 2phi, sin 2phi).
 * Its mean over the torus is 1.
 */
struct AzimuthalDensity
{
    std::array<double, 2> ga{0, 0};
    std::array<double, 2> gb{0, 0};
    std::array<std::array<double, 2>, 2> t{{{0, 0}, {0, 0}}};

    double operator()(double va, double vb, double phi_a, double phi_b) const
    {
        double const ua[2] = {std::cos(2 * phi_a), std::sin(2 * phi_a)};
        double const ub[2] = {std::cos(2 * phi_b), std::sin(2 * phi_b)};
        double v = 1;
        for (int i = 0; i < 2; ++i)
        {
            v += va * ua[i] * ga[i] + vb * ub[i] * gb[i];
            for (int j = 0; j < 2; ++j)
                v += va * vb * ua[i] * t[i][j] * ub[j];
        }
        return v;
    }

    /*!
     * Rejection envelope: maximum over a 90-point phi_a grid (the phi_b
     * maximum of a sinusoid is exact), times 1.01.
     */
    double bound(double va, double vb) const
    {
        double best = 0;
        for (int i = 0; i < 90; ++i)
        {
            double const p = i * pi / 90;
            double const c = std::cos(2 * p);
            double const s = std::sin(2 * p);
            double const base = 1 + va * (c * ga[0] + s * ga[1]);
            double const w0 = vb * (gb[0] + va * (c * t[0][0] + s * t[1][0]));
            double const w1 = vb * (gb[1] + va * (c * t[0][1] + s * t[1][1]));
            best = std::max(best, base + std::hypot(w0, w1));
        }
        return 1.01 * best;
    }
};

inline AzimuthalDensity
azimuthal_density(DensityMatrix const& rho, AzimuthalResponse const& r)
{
    if (rho.dim() != 4)
    {
        throw Error(ErrorCode::bad_dim, "sampling needs a two-photon state");
    }
    auto const id = ComplexMatrix::identity(2);
    auto ev = [&](ComplexMatrix const& a, ComplexMatrix const& b) {
        return rho.expectation(tensor(a, b)).real();
    };
    AzimuthalDensity d;
    ComplexMatrix const* xa[2] = {&r.x_a, &r.y_a};
    ComplexMatrix const* xb[2] = {&r.x_b, &r.y_b};
    for (int i = 0; i < 2; ++i)
    {
        d.ga[i] = ev(*xa[i], id);
        d.gb[i] = ev(id, *xb[i]);
        for (int j = 0; j < 2; ++j)
            d.t[i][j] = ev(*xa[i], *xb[j]);
    }
    return d;
}

//---------------------------------------------------------------------------//
// SAMPLING
//---------------------------------------------------------------------------//
namespace detail
{
inline double wrap_2pi(double phi)
{
    double r = std::fmod(phi, 2 * pi);
    if (r < 0)
        r += 2 * pi;
    return r;
}

template<class F>
void parallel_ranges(std::size_t n, F&& work)
{
    std::size_t const n_threads
        = std::max<std::size_t>(1, std::min<std::size_t>(thread_limit(),
                                                          n / 4096 + 1));
    std::size_t const chunk = (n + n_threads - 1) / n_threads;
    std::vector<std::future<void>> jobs;
    for (std::size_t t = 0; t < n_threads; ++t)
    {
        std::size_t const lo = t * chunk;
        std::size_t const hi = std::min(n, lo + chunk);
        if (lo >= hi)
            break;
        jobs.push_back(std::async(std::launch::async, [&work, lo, hi] {
            work(lo, hi);
        }));
    }
    for (auto& j : jobs)
        j.get();
}
}  // namespace detail

/*!
 * Draw events from the joint cross section restricted to the theta windows.
 *
 * Event i uses its own counter-based stream (seed, i), so the output does
 * not depend on the thread count.
 */
inline std::vector<EventRecord>
sample_events(RunConfig const& cfg, DensityMatrix const& rho)
{
    cfg.validate();
    ThetaSampler const ta(cfg.k_a, cfg.window_a);
    ThetaSampler const tb(cfg.k_b, cfg.window_b);
    auto const density = azimuthal_density(
        rho, azimuthal_response(cfg.k_a, cfg.k_b, cfg.frame_phi));

    std::vector<EventRecord> events(cfg.n_events);
    detail::parallel_ranges(cfg.n_events, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
        {
            CounterRng rng(cfg.seed, i);
            EventRecord& e = events[i];
            e.event_id = i;
            e.seed_lineage = {cfg.seed, i};
            e.k_in_a = cfg.k_a;
            e.k_in_b = cfg.k_b;
            e.theta_a = ta(rng.uniform());
            e.theta_b = tb(rng.uniform());
            e.k_out_a = k_out(cfg.k_a, e.theta_a);
            e.k_out_b = k_out(cfg.k_b, e.theta_b);
            double const va = visibility(cfg.k_a, e.theta_a);
            double const vb = visibility(cfg.k_b, e.theta_b);
            double const m = density.bound(va, vb);
            while (true)
            {
                double const pa = 2 * pi * rng.uniform();
                double const pb = 2 * pi * rng.uniform();
                if (rng.uniform() * m < density(va, vb, pa, pb))
                {
                    e.phi_a = pa;
                    e.phi_b = pb;
                    break;
                }
            }
        }
    });
    return events;
}

inline std::vector<EventRecord> sample_events(RunConfig const& cfg)
{
    return sample_events(cfg, parse_state(cfg.state));
}

/*!
 * Gaussian angular resolution: every angle gets independent noise of width
 * sigma_deg, theta is clamped to [0, pi], phi wrapped, k_out recomputed.
 */
inline std::vector<EventRecord> smear(std::vector<EventRecord> events,
                                      double sigma_deg,
                                      std::uint64_t seed = 0)
{
    if (!(sigma_deg >= 0))
    {
        throw Error(ErrorCode::bad_config, "smearing width must be >= 0");
    }
    if (sigma_deg == 0)
        return events;
    double const s = sigma_deg * deg;
    std::uint64_t const key = mix64(seed ^ 0x736d656172ULL);
    for (auto& e : events)
    {
        CounterRng rng(key, e.event_id);
        e.theta_a = std::clamp(e.theta_a + s * rng.normal(), 0.0, pi);
        e.phi_a = detail::wrap_2pi(e.phi_a + s * rng.normal());
        e.theta_b = std::clamp(e.theta_b + s * rng.normal(), 0.0, pi);
        e.phi_b = detail::wrap_2pi(e.phi_b + s * rng.normal());
        e.k_out_a = k_out(e.k_in_a, e.theta_a);
        e.k_out_b = k_out(e.k_in_b, e.theta_b);
    }
    return events;
}

//---------------------------------------------------------------------------//
// WITNESS ESTIMATION
//---------------------------------------------------------------------------//
//! Frame offsets of the three window settings.
inline constexpr std::array<double, 3> estimator_offsets{
    0.0, pi / 4, 3 * pi / 4};

struct EstimateReport
{
    double value = 0;
    double sigma = 0;
    std::array<double, 3> correlation{};
    std::array<double, 3> correlation_sigma{};
    std::size_t n_events = 0;
    double min_cell_count = 0;
    WitnessReport bounds;  //!< bounds for the window-averaged visibilities
};

namespace detail
{
//! Unique window centers (mod pi) and, per setting, the indices of the
//! (phi, phi + pi/2) windows.
struct WindowLayout
{
    std::vector<double> centers;
    std::array<std::array<std::size_t, 2>, 3> setting;
};

inline WindowLayout window_layout(double frame_phi)
{
    WindowLayout lay;
    auto index_of = [&lay](double c) {
        for (std::size_t i = 0; i < lay.centers.size(); ++i)
        {
            if (std::abs(std::remainder(c - lay.centers[i], pi)) < 1e-9)
                return i;
        }
        lay.centers.push_back(c);
        return lay.centers.size() - 1;
    };
    for (std::size_t s = 0; s < 3; ++s)
    {
        double const c = frame_phi + estimator_offsets[s];
        lay.setting[s] = {index_of(c), index_of(c + pi / 2)};
    }
    return lay;
}

inline bool in_window(double phi, double center, double width)
{
    return std::abs(std::remainder(phi - center, pi)) < 0.5 * width;
}

//! Witness value and gradient with respect to each (a, b) cell count.
inline double estimator_from_cells(WindowLayout const& lay,
                                   std::vector<std::vector<double>> const& n,
                                   bool bose,
                                   std::array<double, 3>* corr,
                                   std::vector<std::vector<double>>* grad)
{
    std::size_t const nw = lay.centers.size();
    if (grad)
        grad->assign(nw, std::vector<double>(nw, 0.0));
    double total = 0;
    for (std::size_t s = 0; s < 3; ++s)
    {
        auto const [p, q] = lay.setting[s];
        // Same-window and cross-window cells, plus label-swapped copies
        std::vector<std::pair<std::size_t, std::size_t>> same{{p, p}, {q, q}};
        std::vector<std::pair<std::size_t, std::size_t>> cross{{p, q},
                                                              {q, p}};
        if (bose)
        {
            same.insert(same.end(), {{p, p}, {q, q}});
            cross.insert(cross.end(), {{q, p}, {p, q}});
        }
        double sv = 0;
        double xv = 0;
        for (auto [i, j] : same)
            sv += n[i][j];
        for (auto [i, j] : cross)
            xv += n[i][j];
        double const tot = sv + xv;
        double const c = tot > 0 ? sv / tot : 0.5;
        if (corr)
            (*corr)[s] = c;
        double const sign = c >= 0.5 ? 1.0 : -1.0;
        total += c >= 0.5 ? c : 1 - c;
        if (grad && tot > 0)
        {
            double const ds = sign * xv / (tot * tot);
            double const dx = -sign * sv / (tot * tot);
            for (auto [i, j] : same)
                (*grad)[i][j] += ds;
            for (auto [i, j] : cross)
                (*grad)[i][j] += dx;
        }
    }
    return total;
}
}  // namespace detail

/*!
 * I_3 from paired azimuth windows of one bin width at (phi, phi) and
 * (phi + pi/2, phi + pi/2) for three frame offsets, with Poisson errors.
 */
inline EstimateReport
estimate_witness(std::vector<EventRecord> const& events, RunConfig const& cfg)
{
    cfg.validate();
    auto const lay = detail::window_layout(cfg.frame_phi);
    double const width = 2 * pi / static_cast<double>(cfg.azimuth_bins);
    std::size_t const nw = lay.centers.size();
    std::vector<std::vector<double>> n(nw, std::vector<double>(nw, 0.0));
    for (auto const& e : events)
    {
        for (std::size_t i = 0; i < nw; ++i)
        {
            if (!detail::in_window(e.phi_a, lay.centers[i], width))
                continue;
            for (std::size_t j = 0; j < nw; ++j)
            {
                if (detail::in_window(e.phi_b, lay.centers[j], width))
                    n[i][j] += 1;
            }
        }
    }

    EstimateReport r;
    r.n_events = events.size();
    r.min_cell_count = std::numeric_limits<double>::infinity();
    for (auto const& s : lay.setting)
        for (auto i : s)
            for (auto j : s)
                r.min_cell_count = std::min(r.min_cell_count, n[i][j]);
    if (r.min_cell_count < 100)
    {
        throw Error(ErrorCode::insufficient_statistics,
                    "a window pair has fewer than 100 counts");
    }

    std::vector<std::vector<double>> grad;
    r.value = detail::estimator_from_cells(lay, n, cfg.enforce_bose,
                                           &r.correlation, &grad);
    double var = 0;
    for (std::size_t i = 0; i < nw; ++i)
        for (std::size_t j = 0; j < nw; ++j)
            var += grad[i][j] * grad[i][j] * n[i][j];
    r.sigma = std::sqrt(var);

    for (std::size_t s = 0; s < 3; ++s)
    {
        auto const [p, q] = lay.setting[s];
        double const same = n[p][p] + n[q][q];
        double const tot = same + n[p][q] + n[q][p];
        double const c = same / tot;
        r.correlation_sigma[s] = std::sqrt(c * (1 - c) / tot);
    }

    ThetaSampler const ta(cfg.k_a, cfg.window_a);
    ThetaSampler const tb(cfg.k_b, cfg.window_b);
    double const v = ta.mean_visibility() * tb.mean_visibility();
    auto const b = mub_bounds(v, 3);
    r.bounds.value = r.value;
    r.bounds.visibility_product = v;
    r.bounds.sep_lo = b.sep_lo;
    r.bounds.sep_hi = b.sep_hi;
    r.bounds.ent_lo = b.ent_lo;
    r.bounds.ent_hi = b.ent_hi;
    return r;
}

/*!
 * Expected value of the estimator for infinite statistics: window integrals
 * of the azimuthal density with window-averaged visibilities.
 */
inline double
expected_estimate(DensityMatrix const& rho, RunConfig const& cfg)
{
    cfg.validate();
    auto const d = azimuthal_density(
        rho, azimuthal_response(cfg.k_a, cfg.k_b, cfg.frame_phi));
    double const va = ThetaSampler(cfg.k_a, cfg.window_a).mean_visibility();
    double const vb = ThetaSampler(cfg.k_b, cfg.window_b).mean_visibility();
    auto const lay = detail::window_layout(cfg.frame_phi);
    double const w = 2 * pi / static_cast<double>(cfg.azimuth_bins);
    std::size_t const nw = lay.centers.size();
    // Integral over both arcs of a folded window: 1 -> 2w,
    // (cos 2phi, sin 2phi) -> 2 sin(w) (cos 2c, sin 2c)
    std::vector<std::vector<double>> n(nw, std::vector<double>(nw, 0.0));
    for (std::size_t i = 0; i < nw; ++i)
        for (std::size_t j = 0; j < nw; ++j)
        {
            double const ua[2] = {2 * std::sin(w) * std::cos(2 * lay.centers[i]),
                                  2 * std::sin(w) * std::sin(2 * lay.centers[i])};
            double const ub[2] = {2 * std::sin(w) * std::cos(2 * lay.centers[j]),
                                  2 * std::sin(w) * std::sin(2 * lay.centers[j])};
            double v = 4 * w * w;
            for (int x = 0; x < 2; ++x)
            {
                v += va * 2 * w * ua[x] * d.ga[x] + vb * 2 * w * ub[x] * d.gb[x];
                for (int y = 0; y < 2; ++y)
                    v += va * vb * ua[x] * d.t[x][y] * ub[y];
            }
            n[i][j] = v;
        }
    return detail::estimator_from_cells(lay, n, cfg.enforce_bose, nullptr,
                                        nullptr);
}

//---------------------------------------------------------------------------//
// HISTOGRAMS AND GOODNESS OF FIT
//---------------------------------------------------------------------------//
//! Counts of phi_b - phi_a (wrapped to [0, 2pi)) in equal bins.
inline std::vector<double>
delta_phi_histogram(std::vector<EventRecord> const& events, std::size_t bins)
{
    std::vector<double> h(bins, 0.0);
    for (auto const& e : events)
    {
        double const d = detail::wrap_2pi(e.phi_b - e.phi_a);
        auto b = static_cast<std::size_t>(d / (2 * pi) * bins);
        h[std::min(b, bins - 1)] += 1;
    }
    return h;
}

//! Counts of one photon's azimuth (arm 0 = a, 1 = b).
inline std::vector<double> phi_histogram(std::vector<EventRecord> const& events,
                                         int arm,
                                         std::size_t bins)
{
    std::vector<double> h(bins, 0.0);
    for (auto const& e : events)
    {
        double const p = detail::wrap_2pi(arm == 0 ? e.phi_a : e.phi_b);
        auto b = static_cast<std::size_t>(p / (2 * pi) * bins);
        h[std::min(b, bins - 1)] += 1;
    }
    return h;
}

/*!
 * Bin probabilities of phi_b - phi_a: averaging the density over phi_a
 * leaves 1 + (Va Vb / 2)[(Txx + Tyy) cos 2d + (Txy - Tyx) sin 2d].
 */
inline std::vector<double>
expected_delta_phi(DensityMatrix const& rho, RunConfig const& cfg,
                   std::size_t bins)
{
    auto const d = azimuthal_density(
        rho, azimuthal_response(cfg.k_a, cfg.k_b, cfg.frame_phi));
    double const v = ThetaSampler(cfg.k_a, cfg.window_a).mean_visibility()
                     * ThetaSampler(cfg.k_b, cfg.window_b).mean_visibility();
    double const cc = 0.5 * v * (d.t[0][0] + d.t[1][1]);
    double const ss = 0.5 * v * (d.t[0][1] - d.t[1][0]);
    std::vector<double> p(bins);
    double const w = 2 * pi / bins;
    for (std::size_t i = 0; i < bins; ++i)
    {
        double const lo = i * w;
        double const hi = lo + w;
        double const integral
            = w + cc * 0.5 * (std::sin(2 * hi) - std::sin(2 * lo))
              - ss * 0.5 * (std::cos(2 * hi) - std::cos(2 * lo));
        p[i] = integral / (2 * pi);
    }
    return p;
}

//! Bin probabilities of one photon's azimuth.
inline std::vector<double> expected_phi(DensityMatrix const& rho,
                                        RunConfig const& cfg,
                                        int arm,
                                        std::size_t bins)
{
    auto const d = azimuthal_density(
        rho, azimuthal_response(cfg.k_a, cfg.k_b, cfg.frame_phi));
    double const v = arm == 0
                         ? ThetaSampler(cfg.k_a, cfg.window_a).mean_visibility()
                         : ThetaSampler(cfg.k_b, cfg.window_b).mean_visibility();
    auto const g = arm == 0 ? d.ga : d.gb;
    std::vector<double> p(bins);
    double const w = 2 * pi / bins;
    for (std::size_t i = 0; i < bins; ++i)
    {
        double const lo = i * w;
        double const hi = lo + w;
        double const integral
            = w + v * g[0] * 0.5 * (std::sin(2 * hi) - std::sin(2 * lo))
              - v * g[1] * 0.5 * (std::cos(2 * hi) - std::cos(2 * lo));
        p[i] = integral / (2 * pi);
    }
    return p;
}

struct ChiSquare
{
    double statistic = 0;
    double dof = 0;
    double p_value = 1;
};

//! Pearson chi-square of counts against bin probabilities.
inline ChiSquare chi_square(std::vector<double> const& observed,
                            std::vector<double> const& probabilities)
{
    if (observed.size() != probabilities.size() || observed.size() < 2)
    {
        throw Error(ErrorCode::size_mismatch, "histogram sizes differ");
    }
    double n = 0;
    for (double o : observed)
        n += o;
    ChiSquare r;
    for (std::size_t i = 0; i < observed.size(); ++i)
    {
        double const e = n * probabilities[i];
        if (e > 0)
            r.statistic += (observed[i] - e) * (observed[i] - e) / e;
    }
    r.dof = static_cast<double>(observed.size() - 1);
    r.p_value = boost::math::gamma_q(r.dof / 2, r.statistic / 2);
    return r;
}

//! Pearson chi-square homogeneity test between two histograms.
inline ChiSquare chi_square_two_sample(std::vector<double> const& a,
                                       std::vector<double> const& b)
{
    if (a.size() != b.size() || a.size() < 2)
    {
        throw Error(ErrorCode::size_mismatch, "histogram sizes differ");
    }
    double na = 0;
    double nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        na += a[i];
        nb += b[i];
    }
    ChiSquare r;
    double const ka = std::sqrt(nb / na);
    double const kb = std::sqrt(na / nb);
    std::size_t used = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        if (a[i] + b[i] <= 0)
            continue;
        double const d = ka * a[i] - kb * b[i];
        r.statistic += d * d / (a[i] + b[i]);
        ++used;
    }
    r.dof = static_cast<double>(used) - 1;
    r.p_value = boost::math::gamma_q(r.dof / 2, r.statistic / 2);
    return r;
}

//---------------------------------------------------------------------------//
// EVENT FILES
//---------------------------------------------------------------------------//
inline constexpr char const* event_csv_header
    = "event_id,theta_a,phi_a,kout_a,theta_b,phi_b,kout_b";

inline void write_events_csv(std::ostream& os,
                             std::vector<EventRecord> const& events)
{
    os << event_csv_header << '\n';
    char buf[256];
    for (auto const& e : events)
    {
        std::snprintf(buf, sizeof buf,
                      "%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      static_cast<unsigned long long>(e.event_id),
                      e.theta_a, e.phi_a, e.k_out_a,
                      e.theta_b, e.phi_b, e.k_out_b);
        os << buf;
    }
}

//! Read events; incoming energies come from the run configuration.
inline std::vector<EventRecord>
read_events_csv(std::istream& is, RunConfig const& cfg)
{
    std::string line;
    if (!std::getline(is, line) || line != event_csv_header)
    {
        throw Error(ErrorCode::bad_config, "missing event CSV header");
    }
    std::vector<EventRecord> events;
    std::size_t line_no = 1;
    while (std::getline(is, line))
    {
        ++line_no;
        if (line.empty())
            continue;
        EventRecord e;
        unsigned long long id = 0;
        int const got = std::sscanf(line.c_str(),
                                    "%llu,%lf,%lf,%lf,%lf,%lf,%lf",
                                    &id, &e.theta_a, &e.phi_a, &e.k_out_a,
                                    &e.theta_b, &e.phi_b, &e.k_out_b);
        if (got != 7)
        {
            throw Error(ErrorCode::bad_config,
                        "malformed event line " + std::to_string(line_no));
        }
        e.event_id = id;
        e.k_in_a = cfg.k_a;
        e.k_in_b = cfg.k_b;
        e.seed_lineage = {cfg.seed, id};
        events.push_back(e);
    }
    return events;
}

}  // namespace compton
