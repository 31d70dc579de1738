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

#include "robustmdp/p_variance.hpp"
#include "robustmdp/types.hpp"
#include "robustmdp/water_filling.hpp"

#include <vector>

namespace robustmdp {

/**
 * Per-sweep state shared by the robust Bellman operators: the dispersion
 * of the current value vector under the conjugate norm and the resulting
 * penalty
 *
 *     sigma(s)   = alpha_s   + gamma * beta_s   * kappa_q(v)   (S)
 *     sigma(s,a) = alpha_sa  + gamma * beta_sa  * kappa_q(v)   (SA)
 *
 * kappa is computed once per sweep. Without a forbidden mask it is a
 * single entry; with one it is evaluated per state (S) or per
 * state-action pair (SA) over the allowed next states only.
 */
struct BellmanContext {
    const MdpInstance* inst = nullptr;
    const UncertaintySpec* unc = nullptr;
    std::vector<PMeanResult> kappa; // 1 entry unmasked, else S or S*A entries
    numvec sigma;                   // S (S-rectangular) or S*A (SA); empty otherwise
    prec_t inner_tol = 1e-10;
    int threads = 1;

    prec_t sigma_s(long s) const { return sigma[static_cast<size_t>(s)]; }
    prec_t sigma_sa(long s, long a) const {
        return sigma[static_cast<size_t>(s * inst->num_actions + a)];
    }
};

/**
 * Builds the context for one sweep at value vector v: computes
 * kappa_q(v) with q the Holder conjugate of the spec's p, then the
 * penalty sigma. inner_tol bounds the kappa bisection for general
 * exponents and is also the clamp threshold for threshold-policy weights.
 */
BellmanContext make_context(const MdpInstance& inst, const UncertaintySpec& unc, const numvec& v,
                            prec_t inner_tol = 1e-10, int threads = 1);

/// Plain optimal Bellman operator: out(s) = max_a Q(s,a).
numvec bellman_opt_nonrobust(const MdpInstance& inst, const numvec& v);

/// SA-rectangular policy evaluation: out(s) = sum_a pi(a|s) (Q(s,a) - sigma(s,a)).
numvec bellman_sa_policy(const BellmanContext& ctx, const StochasticPolicy& policy,
                         const numvec& v);

/// SA-rectangular optimal operator: out(s) = max_a (Q(s,a) - sigma(s,a)).
numvec bellman_sa_opt(const BellmanContext& ctx, const numvec& v);

/**
 * S-rectangular policy evaluation:
 * out(s) = -sigma(s) ||pi_s||_q + sum_a pi(a|s) Q(s,a),
 * with q the Holder conjugate of the spec's p.
 */
numvec bellman_s_policy(const BellmanContext& ctx, const StochasticPolicy& policy,
                        const numvec& v);

/// Value image and the per-state water-filling solutions behind it.
struct SOptResult {
    numvec value;
    std::vector<WaterFillResult> fills;
};

/**
 * S-rectangular optimal operator: out(s) is the water-filling value of
 * Q(s,.) at penalty sigma(s). The per-state solutions are returned for
 * policy extraction and active-action reporting.
 */
SOptResult bellman_s_opt(const BellmanContext& ctx, const numvec& v);

/// Optimistic SA operator: out(s) = max_a (Q(s,a) + sigma(s,a)).
numvec bellman_optimistic_sa(const BellmanContext& ctx, const numvec& v);

/**
 * Optimistic S operator. The bonus sigma(s) ||pi_s||_q is maximal at a
 * deterministic policy, so out(s) = max_a Q(s,a) + sigma(s).
 */
numvec bellman_optimistic_s(const BellmanContext& ctx, const numvec& v);

// Q-level variants. These skip the O(S^2 A) assembly so drivers can time
// the phases separately; the operators above are thin wrappers.

numvec opt_nonrobust_from_q(const QFunction& q);
numvec sa_policy_from_q(const BellmanContext& ctx, const StochasticPolicy& policy,
                        const QFunction& q);
numvec sa_opt_from_q(const BellmanContext& ctx, const QFunction& q);
numvec s_policy_from_q(const BellmanContext& ctx, const StochasticPolicy& policy,
                       const QFunction& q);
SOptResult s_opt_from_q(const BellmanContext& ctx, const QFunction& q);
numvec optimistic_sa_from_q(const BellmanContext& ctx, const QFunction& q);
numvec optimistic_s_from_q(const BellmanContext& ctx, const QFunction& q);

} // namespace robustmdp
