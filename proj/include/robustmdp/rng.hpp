// This file is part of robustmdp, a C++ library for solving plain and
// robust Markov decision processes.
//
// MIT License
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to deal
// in the Software without restriction, including without limitation the rights
// to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
// copies of the Software, and to permit persons to whom the Software is
// furnished to do so, subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in
// all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
// OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
// SOFTWARE.

#pragma once

#include "robustmdp/types.hpp"

#include <cmath>
#include <random>

namespace robustmdp::rng {

// Sampling helpers built directly on mt19937_64 output. The standard pins
// the engine but not the distributions, so these keep seeded results
// reproducible across compilers.

/// Uniform draw in [0, 1) with 53 random bits.
inline prec_t uniform01(std::mt19937_64& gen) {
    return static_cast<prec_t>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform draw in [lo, hi).
inline prec_t uniform(std::mt19937_64& gen, prec_t lo, prec_t hi) {
    return lo + (hi - lo) * uniform01(gen);
}

/// Standard exponential via inverse transform.
inline prec_t exponential(std::mt19937_64& gen) {
    return -std::log(1.0 - uniform01(gen));
}

/// Standard normal via Box-Muller.
inline prec_t gaussian(std::mt19937_64& gen) {
    prec_t u1 = 1.0 - uniform01(gen); // keep away from zero
    prec_t u2 = uniform01(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

/// Uniform integer in [0, n).
inline long below(std::mt19937_64& gen, long n) {
    return static_cast<long>(gen() % static_cast<std::uint64_t>(n));
}

} // namespace robustmdp::rng
