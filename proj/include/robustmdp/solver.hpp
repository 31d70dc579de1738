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

#include "robustmdp/bellman.hpp"
#include "robustmdp/types.hpp"

namespace robustmdp {

/**
 * Fixed-point iteration settings.
 *
 * epsilon is the target sup-norm distance to the fixed point; iteration
 * stops once the residual drops below epsilon*(1-gamma)/(2*gamma).
 * inner_tol bounds the kappa and water-filling bisections; zero means
 * derive it as (1-gamma)*epsilon/6 so the inexactness stays within the
 * epsilon budget.
 */
struct SolveConfig {
    prec_t epsilon = 1e-6;
    long max_iters = 100000;
    prec_t inner_tol = 0.0; // 0 = derive from epsilon
    bool record_residuals = true;
    int threads = 1;
};

/// Wall-clock seconds spent in each phase of the sweeps.
struct PhaseTimings {
    prec_t kappa_seconds = 0.0;
    prec_t qvalue_seconds = 0.0;
    prec_t finish_seconds = 0.0; // per-state maximization / water filling
};

/**
 * Outcome of a fixed-point solve: the value vector, the extracted (or
 * evaluated) policy, the residual history, per-state active-action
 * counts, per-phase timings, and whether the stopping rule was met
 * before max_iters.
 */
struct SolveReport {
    numvec value;
    StochasticPolicy policy;
    long iterations = 0;
    numvec residuals;
    indvec chi_per_state;
    PhaseTimings timings;
    bool converged = false;
    prec_t last_residual = 0.0;
};

/**
 * Robust value iteration v_{n+1} = T* v_n from v_0 = 0, where T* is the
 * optimal operator matching the spec's rectangularity. Returns the value,
 * the extracted policy and diagnostics; converged=false when max_iters is
 * exhausted first (callers treat that as non-convergence).
 *
 * Throws std::invalid_argument on a bad config and ModelError on invalid
 * inputs.
 */
SolveReport value_iteration(const MdpInstance& inst, const UncertaintySpec& unc,
                            const SolveConfig& cfg = {});

/**
 * SA-rectangular Q-value iteration:
 * Q_{n+1}(s,a) = R0(s,a) - sigma(s,a) + gamma sum_{s'} P0(s'|s,a) max_a' Q_n(s',a')
 * with v_n the row maxima of Q_n. Converges to the same value function as
 * value_iteration. Requires SA (or NonRobust) rectangularity.
 */
SolveReport q_value_iteration_sa(const MdpInstance& inst, const UncertaintySpec& unc,
                                 const SolveConfig& cfg = {});

/**
 * Evaluates a fixed policy to its robust fixed point by iterating the
 * policy operator for the spec's rectangularity. The report's policy is
 * the input policy.
 */
SolveReport evaluate_policy(const MdpInstance& inst, const UncertaintySpec& unc,
                            const StochasticPolicy& policy, const SolveConfig& cfg = {});

/**
 * Optimal policy at the (approximate) fixed point v_star.
 *
 * NonRobust and SA take the (penalized) best action, ties to the lowest
 * index. S-rectangular returns the threshold policy with weights
 * proportional to (Q(s,a) - zeta(s))^(p-1) on the nonnegative-advantage
 * actions, where zeta is the water-filling level at v_star: uniform over
 * the active prefix for p = 1, single best action for p = infinity.
 */
StochasticPolicy extract_policy(const MdpInstance& inst, const UncertaintySpec& unc,
                                const numvec& v_star, prec_t inner_tol = 1e-10);

} // namespace robustmdp
