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
 * Solution of  max_{c in simplex} <c, b> - sigma ||c||_q  with q the Holder
 * conjugate of p.
 *
 * zeta is the optimal value, the unique level satisfying
 * sum_{b_i >= zeta} (b_i - zeta)^p = sigma^p. weights is the optimizing
 * point, kept in the caller's original coordinate order; exactly chi of
 * them are strictly positive and, reordered by descending b, they are
 * non-increasing. residual reports |sum_{b_i >= zeta}(b_i-zeta)^p - sigma^p|.
 */
struct WaterFillResult {
    prec_t zeta = 0.0;
    long chi = 0;
    numvec weights;
    prec_t residual = 0.0;
};

/**
 * Solves the water-filling problem above.
 *
 * Routes: sigma = 0 puts all weight on the first maximizer of b;
 * p = infinity gives zeta = max b - sigma with a deterministic best
 * action; p = 1 maximizes the penalized prefix averages
 * (sum_{i<=k} b_i - sigma)/k over descending-sorted b with uniform weight
 * on the winning prefix; p = 2 runs the incremental prefix loop with the
 * stable root  lambda_k = mean_k - sqrt((sigma^2 - W_k)/k)  where W_k is
 * the within-prefix sum of squared deviations; any other exponent
 * bisects  sum_{b_i >= x}(b_i - x)^p = sigma^p  on [max b - sigma, max b]
 * to tolerance tol.
 *
 * For p > 1 the weights follow (b_i - zeta)^(p-1) on the strictly
 * positive part; advantages within tol of zero are clamped to zero before
 * normalizing. Ties in b are broken by original index (stable sort).
 *
 * Total for every nonempty b and sigma >= 0; throws
 * std::invalid_argument otherwise.
 */
WaterFillResult water_fill(std::span<const prec_t> b, prec_t sigma, NormIndex p,
                           prec_t tol = 1e-10);

/**
 * Number of active actions chi = max{ k : sum_{i<=k} (b_i - b_k)^p <= sigma^p }
 * over descending-sorted b, computed without solving for zeta. For
 * p = infinity the optimizer is a single best action and chi is 1.
 */
long active_count(std::span<const prec_t> b, prec_t sigma, NormIndex p);

} // namespace robustmdp
