//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file compton/rng.hpp
//! Counter-based random streams keyed by (seed, stream id).
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace compton
{
//! SplitMix64 output mixer
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/*!
 * Stateless-per-draw generator: draw n of stream s under key k is
 * mix(mix(k) ^ mix(s + golden) + n * golden), so any (seed, stream, counter)
 * triple is reproducible in isolation.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class CounterRng
{
  public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix64(mix64(seed) ^ mix64(stream + golden)))
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept
    {
        return mix64(key_ + (++counter_) * golden);
    }

    //! Uniform double in [0, 1)
    double uniform() noexcept
    {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    //! Standard normal (Box-Muller, one value per call)
    double normal() noexcept
    {
        double u1 = uniform();
        while (u1 <= 0)
            u1 = uniform();
        double const u2 = uniform();
        return std::sqrt(-2 * std::log(u1))
               * std::cos(2 * 3.14159265358979323846 * u2);
    }

    std::uint64_t counter() const noexcept { return counter_; }

  private:
    static constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace compton
