//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file compton/optimize.hpp
//! Derivative-free maximization: seeded random-restart Nelder-Mead.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cstdint>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <future>
#include <limits>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "rng.hpp"

namespace compton
{
using Objective = std::function<double(std::vector<double> const&)>;

struct OptimizeResult
{
    double value = -std::numeric_limits<double>::infinity();
    std::vector<double> params;
    std::size_t restart = 0;  //!< Index of the winning restart
    std::size_t evaluations = 0;
};

struct NelderMeadOptions
{
    double initial_step = 0.5;
    double tolerance = 1e-10;  //!< Spread of simplex values
    std::size_t max_evaluations = 20000;
};

/*!
 * Maximize f from x0 with the downhill simplex method.
 *
 * Standard coefficients (reflection 1, expansion 2, contraction 1/2,
 * shrink 1/2). Stops when the spread of simplex values falls below the
 * tolerance or the evaluation budget is exhausted.
 */
inline OptimizeResult nelder_mead_max(Objective const& f,
                                      std::vector<double> x0,
                                      NelderMeadOptions const& opts = {})
{
    std::size_t const n = x0.size();
    OptimizeResult result;
    if (n == 0)
    {
        result.value = f(x0);
        result.params = std::move(x0);
        result.evaluations = 1;
        return result;
    }

    // Minimize g = -f
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    std::size_t evals = 0;
    auto g = [&](std::vector<double> const& x) {
        ++evals;
        return -f(x);
    };
    for (std::size_t i = 0; i < n; ++i)
        pts[i + 1][i] += opts.initial_step;
    for (std::size_t i = 0; i <= n; ++i)
        vals[i] = g(pts[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    while (evals < opts.max_evaluations)
    {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](auto a, auto b) {
            return vals[a] < vals[b];
        });
        std::size_t const best = order.front();
        std::size_t const worst = order.back();
        std::size_t const second = order[n - 1];
        if (std::abs(vals[worst] - vals[best]) <= opts.tolerance)
            break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i)
        {
            if (i == worst)
                continue;
            for (std::size_t j = 0; j < n; ++j)
                centroid[j] += pts[i][j] / static_cast<double>(n);
        }
        auto along = [&](double t, std::vector<double>& out) {
            for (std::size_t j = 0; j < n; ++j)
                out[j] = centroid[j] + t * (pts[worst][j] - centroid[j]);
        };

        along(-1.0, trial);
        double const fr = g(trial);
        if (fr < vals[best])
        {
            along(-2.0, trial2);
            double const fe = g(trial2);
            if (fe < fr)
            {
                pts[worst] = trial2;
                vals[worst] = fe;
            }
            else
            {
                pts[worst] = trial;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second])
        {
            pts[worst] = trial;
            vals[worst] = fr;
            continue;
        }
        // Contraction: outside if the reflection improved on the worst
        bool const outside = fr < vals[worst];
        along(outside ? -0.5 : 0.5, trial2);
        double const fc = g(trial2);
        if (fc < (outside ? fr : vals[worst]))
        {
            pts[worst] = trial2;
            vals[worst] = fc;
            continue;
        }
        // Shrink toward the best point
        for (std::size_t i = 0; i <= n; ++i)
        {
            if (i == best)
                continue;
            for (std::size_t j = 0; j < n; ++j)
                pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
            vals[i] = g(pts[i]);
        }
    }
    std::size_t const best = static_cast<std::size_t>(
        std::min_element(vals.begin(), vals.end()) - vals.begin());
    result.value = -vals[best];
    result.params = pts[best];
    result.evaluations = evals;
    return result;
}

//! Worker cap from COMPTON_WITNESS_THREADS (default: hardware concurrency).
inline unsigned thread_limit()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (char const* env = std::getenv("COMPTON_WITNESS_THREADS"))
    {
        try
        {
            long v = std::stol(env);
            if (v >= 1)
                return static_cast<unsigned>(std::min<long>(v, 1024));
        }
        catch (...)
        {
        }
    }
    return hw;
}

struct RestartOptions
{
    std::size_t n_restarts = 64;
    std::uint64_t seed = 0;
    double lower = 0;  //!< Start points drawn uniformly in [lower, upper)
    double upper = 2 * 3.14159265358979323846;
    //! Optional first start point (restart 0 uses it when nonempty)
    std::vector<double> first_start;
    NelderMeadOptions nelder_mead;
    unsigned max_threads = 0;  //!< 0: use thread_limit()
};

/*!
 * Random-restart maximization.
 *
 * Restart i starts from a point drawn from stream i of the seed, so results
 * do not depend on thread count. The best value wins; ties go to the lowest
 * restart index.
 */
inline OptimizeResult maximize(Objective const& f,
                               std::size_t n_params,
                               RestartOptions const& opts = {})
{
    std::size_t const n = std::max<std::size_t>(opts.n_restarts, 1);
    std::vector<OptimizeResult> results(n);

    auto run = [&](std::size_t i) {
        std::vector<double> x0(n_params);
        if (i == 0 && opts.first_start.size() == n_params)
        {
            x0 = opts.first_start;
        }
        else
        {
            CounterRng rng(opts.seed, i);
            for (auto& x : x0)
                x = opts.lower + (opts.upper - opts.lower) * rng.uniform();
        }
        results[i] = nelder_mead_max(f, std::move(x0), opts.nelder_mead);
        results[i].restart = i;
    };

    unsigned const workers = static_cast<unsigned>(std::min<std::size_t>(
        n, opts.max_threads ? opts.max_threads : thread_limit()));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            run(i);
    }
    else
    {
        std::vector<std::future<void>> jobs;
        std::atomic<std::size_t> next{0};
        for (unsigned w = 0; w < workers; ++w)
        {
            jobs.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next++; i < n; i = next++)
                    run(i);
            }));
        }
        for (auto& j : jobs)
            j.get();
    }

    OptimizeResult best = results.front();
    std::size_t total = 0;
    for (auto const& r : results)
    {
        total += r.evaluations;
        if (r.value > best.value)
            best = r;
    }
    best.evaluations = total;
    return best;
}

}  // namespace compton
