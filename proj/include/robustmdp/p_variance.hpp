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

namespace robustmdp {

/**
 * Result of minimizing || v - omega * 1 ||_p over the scalar shift omega.
 *
 * omega is the minimizing shift (median / mean / midrange for p = 1, 2,
 * infinity), kappa the attained norm, and iterations the number of
 * bisection steps (zero for the closed forms).
 */
struct PMeanResult {
    prec_t omega = 0.0;
    prec_t kappa = 0.0;
    int iterations = 0;
};

/**
 * Computes the p-mean and the dispersion kappa = min_omega ||v - omega*1||_p.
 *
 * Closed forms: p=1 takes the median (average of the two middle order
 * statistics), p=2 the arithmetic mean, p=infinity the midrange. For a
 * general exponent r the shift is the root of
 *
 *     h(omega) = sum_s sign(v(s) - omega) |v(s) - omega|^(r-1),
 *
 * the stationarity condition of the r-norm, located by bisection on
 * [min v, max v] to absolute tolerance tol (capped at 200 steps).
 * Near-constant vectors (max - min <= tol) short-circuit to kappa = 0.
 *
 * Throws std::invalid_argument on an empty vector or tol <= 0.
 */
PMeanResult p_mean(std::span<const prec_t> v, NormIndex p, prec_t tol = 1e-10);

/**
 * p_mean restricted to the entries of v where `allowed` is true; used when
 * some transitions are structurally impossible and the dispersion must
 * ignore the corresponding states. Throws std::invalid_argument when the
 * mask size mismatches or every entry is masked out.
 */
PMeanResult p_variance_masked(std::span<const prec_t> v, const std::vector<std::uint8_t>& allowed,
                              NormIndex p, prec_t tol = 1e-10);

} // namespace robustmdp
