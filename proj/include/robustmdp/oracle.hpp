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

namespace robustmdp::oracle {

// Brute-force references used by the tests and the oracle-check command.
// Everything here is written against the raw definitions with naive
// loops; nothing is shared with the solver-side modules it checks.

/// Settings for the grid and sampling references.
struct OracleConfig {
    prec_t grid_step = 1e-4;
    long noise_samples = 10000;
    std::uint64_t seed = 0;
    // stopping rule for vi_reference
    prec_t vi_epsilon = 1e-10;
    long vi_max_iters = 1000000;
};

/**
 * min over omega in [min v, max v], sampled at grid_step, of
 * ||v - omega*1||_p. The objective is convex in omega, so the lattice
 * minimum is located by ternary search over grid indices plus a guard
 * scan; the result equals a full scan of the same lattice and
 * overestimates the true minimum by at most S^(1/p) * grid_step.
 */
prec_t kappa_grid(std::span<const prec_t> v, NormIndex p, const OracleConfig& cfg);

/// Lattice maximizer of the water-filling objective, with its weights.
struct SimplexGridResult {
    prec_t value = 0.0;
    numvec weights;
};

/**
 * max over the simplex lattice of step grid_step of <c,b> - sigma*||c||_q
 * by exhaustive enumeration of compositions. Guarded to len(b) <= 4;
 * throws std::invalid_argument beyond that.
 */
SimplexGridResult waterfill_grid_argmax(std::span<const prec_t> b, prec_t sigma, NormIndex q,
                                        const OracleConfig& cfg);

/// Value-only variant of waterfill_grid_argmax.
prec_t waterfill_grid(std::span<const prec_t> b, prec_t sigma, NormIndex q,
                      const OracleConfig& cfg);

/**
 * Sampled inner minimization at state s: draws feasible reward and kernel
 * noise for the spec's uncertainty set and returns the smallest sampled
 * value of
 *
 *   sum_a pi(a|s) [ R(s,a) + gamma sum_{s'} P(s'|s,a) v(s') ].
 *
 * Kernel noise is sampled as a spherical direction, zeroed on forbidden
 * entries, projected to zero row sums and rescaled to the Lp radius;
 * reward noise covers the extremes and the interior. Part of the sample
 * budget is spent refining around the best direction found so far. Every
 * sample is feasible, so the result is a sound upper bound on the true
 * minimum that tightens with noise_samples.
 */
prec_t inner_min_sampled(const MdpInstance& inst, const UncertaintySpec& unc,
                         const StochasticPolicy& policy, const numvec& v, long s,
                         const OracleConfig& cfg);

/**
 * Textbook value iteration with naive loops, independent of the Bellman
 * module. Iterates until the sup-norm residual falls below
 * vi_epsilon*(1-gamma)/(2*gamma); throws std::runtime_error when
 * vi_max_iters is exhausted first.
 */
numvec vi_reference(const MdpInstance& inst, const OracleConfig& cfg);

} // namespace robustmdp::oracle
