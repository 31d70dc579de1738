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

#include "robustmdp/bellman.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace robustmdp {

namespace {

void require_rect(const BellmanContext& ctx, Rectangularity expected, const char* op) {
    if (ctx.unc == nullptr || ctx.unc->rect != expected)
        throw ModelError(std::string(op) + ": uncertainty spec has the wrong rectangularity");
}

numvec row_max(const QFunction& q) {
    numvec out(static_cast<size_t>(q.rows()));
    for (long s = 0; s < q.rows(); ++s) {
        auto row = q.row(s);
        out[s] = *std::max_element(row.begin(), row.end());
    }
    return out;
}

} // namespace

BellmanContext make_context(const MdpInstance& inst, const UncertaintySpec& unc, const numvec& v,
                            prec_t inner_tol, int threads) {
    BellmanContext ctx;
    ctx.inst = &inst;
    ctx.unc = &unc;
    ctx.inner_tol = inner_tol;
    ctx.threads = threads;
    if (unc.rect == Rectangularity::NonRobust) return ctx;

    const long S = inst.num_states, A = inst.num_actions;
    const NormIndex q = holder_conjugate(unc.p);
    const prec_t gamma = inst.discount;

    if (unc.rect == Rectangularity::SA) {
        ctx.sigma.resize(static_cast<size_t>(S * A));
        if (unc.forbidden.empty()) {
            ctx.kappa.push_back(p_mean(v, q, inner_tol));
            const prec_t kap = ctx.kappa.front().kappa;
            for (long s = 0; s < S; ++s)
                for (long a = 0; a < A; ++a)
                    ctx.sigma[s * A + a] = unc.alpha(s, a) + gamma * unc.beta(s, a) * kap;
        } else {
            ctx.kappa.reserve(static_cast<size_t>(S * A));
            std::vector<std::uint8_t> allowed(static_cast<size_t>(S));
            for (long s = 0; s < S; ++s)
                for (long a = 0; a < A; ++a) {
                    for (long sn = 0; sn < S; ++sn)
                        allowed[sn] = unc.forbidden[(s * A + a) * S + sn] ? 0 : 1;
                    ctx.kappa.push_back(p_variance_masked(v, allowed, q, inner_tol));
                    ctx.sigma[s * A + a] =
                        unc.alpha(s, a) + gamma * unc.beta(s, a) * ctx.kappa.back().kappa;
                }
        }
    } else {
        ctx.sigma.resize(static_cast<size_t>(S));
        if (unc.forbidden.empty()) {
            ctx.kappa.push_back(p_mean(v, q, inner_tol));
            const prec_t kap = ctx.kappa.front().kappa;
            for (long s = 0; s < S; ++s)
                ctx.sigma[s] = unc.alpha(s, 0) + gamma * unc.beta(s, 0) * kap;
        } else {
            ctx.kappa.reserve(static_cast<size_t>(S));
            std::vector<std::uint8_t> allowed(static_cast<size_t>(S));
            for (long s = 0; s < S; ++s) {
                for (long sn = 0; sn < S; ++sn)
                    allowed[sn] = unc.forbidden[s * S + sn] ? 0 : 1;
                ctx.kappa.push_back(p_variance_masked(v, allowed, q, inner_tol));
                ctx.sigma[s] = unc.alpha(s, 0) + gamma * unc.beta(s, 0) * ctx.kappa.back().kappa;
            }
        }
    }
    return ctx;
}

numvec opt_nonrobust_from_q(const QFunction& q) { return row_max(q); }

numvec bellman_opt_nonrobust(const MdpInstance& inst, const numvec& v) {
    return opt_nonrobust_from_q(q_from_value(inst, v));
}

numvec sa_policy_from_q(const BellmanContext& ctx, const StochasticPolicy& policy,
                        const QFunction& q) {
    require_rect(ctx, Rectangularity::SA, "bellman_sa_policy");
    const long S = q.rows(), A = q.cols();
    numvec out(static_cast<size_t>(S));
    for (long s = 0; s < S; ++s) {
        prec_t total = 0.0;
        for (long a = 0; a < A; ++a)
            total += policy(s, a) * (q(s, a) - ctx.sigma_sa(s, a));
        out[s] = total;
    }
    return out;
}

numvec bellman_sa_policy(const BellmanContext& ctx, const StochasticPolicy& policy,
                         const numvec& v) {
    return sa_policy_from_q(ctx, policy, q_from_value(*ctx.inst, v));
}

numvec sa_opt_from_q(const BellmanContext& ctx, const QFunction& q) {
    require_rect(ctx, Rectangularity::SA, "bellman_sa_opt");
    const long S = q.rows(), A = q.cols();
    numvec out(static_cast<size_t>(S));
    for (long s = 0; s < S; ++s) {
        prec_t best = q(s, 0) - ctx.sigma_sa(s, 0);
        for (long a = 1; a < A; ++a)
            best = std::max(best, q(s, a) - ctx.sigma_sa(s, a));
        out[s] = best;
    }
    return out;
}

numvec bellman_sa_opt(const BellmanContext& ctx, const numvec& v) {
    return sa_opt_from_q(ctx, q_from_value(*ctx.inst, v));
}

numvec s_policy_from_q(const BellmanContext& ctx, const StochasticPolicy& policy,
                       const QFunction& q) {
    require_rect(ctx, Rectangularity::S, "bellman_s_policy");
    const long S = q.rows(), A = q.cols();
    const NormIndex qn = holder_conjugate(ctx.unc->p);
    numvec out(static_cast<size_t>(S));
    for (long s = 0; s < S; ++s) {
        prec_t total = 0.0;
        for (long a = 0; a < A; ++a) total += policy(s, a) * q(s, a);
        out[s] = total - ctx.sigma_s(s) * lp_norm(policy.row(s), qn);
    }
    return out;
}

numvec bellman_s_policy(const BellmanContext& ctx, const StochasticPolicy& policy,
                        const numvec& v) {
    return s_policy_from_q(ctx, policy, q_from_value(*ctx.inst, v));
}

SOptResult s_opt_from_q(const BellmanContext& ctx, const QFunction& q) {
    require_rect(ctx, Rectangularity::S, "bellman_s_opt");
    const long S = q.rows();
    SOptResult res;
    res.value.resize(static_cast<size_t>(S));
    res.fills.resize(static_cast<size_t>(S));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(ctx.threads) if (ctx.threads > 1)
#endif
    for (long s = 0; s < S; ++s) {
        res.fills[s] = water_fill(q.row(s), ctx.sigma_s(s), ctx.unc->p, ctx.inner_tol);
        res.value[s] = res.fills[s].zeta;
    }
    return res;
}

SOptResult bellman_s_opt(const BellmanContext& ctx, const numvec& v) {
    return s_opt_from_q(ctx, q_from_value(*ctx.inst, v));
}

numvec optimistic_sa_from_q(const BellmanContext& ctx, const QFunction& q) {
    require_rect(ctx, Rectangularity::SA, "bellman_optimistic_sa");
    const long S = q.rows(), A = q.cols();
    numvec out(static_cast<size_t>(S));
    for (long s = 0; s < S; ++s) {
        prec_t best = q(s, 0) + ctx.sigma_sa(s, 0);
        for (long a = 1; a < A; ++a)
            best = std::max(best, q(s, a) + ctx.sigma_sa(s, a));
        out[s] = best;
    }
    return out;
}

numvec bellman_optimistic_sa(const BellmanContext& ctx, const numvec& v) {
    return optimistic_sa_from_q(ctx, q_from_value(*ctx.inst, v));
}

numvec optimistic_s_from_q(const BellmanContext& ctx, const QFunction& q) {
    require_rect(ctx, Rectangularity::S, "bellman_optimistic_s");
    numvec out = row_max(q);
    for (long s = 0; s < q.rows(); ++s) out[s] += ctx.sigma_s(s);
    return out;
}

numvec bellman_optimistic_s(const BellmanContext& ctx, const numvec& v) {
    return optimistic_s_from_q(ctx, q_from_value(*ctx.inst, v));
}

} // namespace robustmdp
