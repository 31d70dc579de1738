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

#include "robustmdp/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iostream>

namespace robustmdp {

namespace {

using clock_t_ = std::chrono::steady_clock;

prec_t seconds_since(clock_t_::time_point start) {
    return std::chrono::duration<prec_t>(clock_t_::now() - start).count();
}

void check_config(const SolveConfig& cfg) {
    if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    if (cfg.inner_tol < 0.0) throw std::invalid_argument("inner_tol must be nonnegative");
    if (cfg.threads < 1) throw std::invalid_argument("threads must be at least 1");
}

// residual level below which the value is epsilon-close to the fixed point
prec_t stop_threshold(prec_t epsilon, prec_t gamma) {
    if (gamma <= 0.0) return std::numeric_limits<prec_t>::infinity();
    return epsilon * (1.0 - gamma) / (2.0 * gamma);
}

prec_t derive_inner_tol(const SolveConfig& cfg, prec_t gamma) {
    if (cfg.inner_tol > 0.0) return cfg.inner_tol;
    return (1.0 - gamma) * cfg.epsilon / 6.0;
}

void warn_once_infeasible(const MdpInstance& inst, const UncertaintySpec& unc) {
    static std::atomic<bool> warned{false};
    long n = count_infeasible_radii(inst, unc);
    if (n > 0 && !warned.exchange(true))
        std::cerr << "robustmdp: warning: " << n
                  << " kernel radius entries exceed the smallest nonzero nominal mass; "
                     "the noise set contains signed kernels (further warnings suppressed)\n";
}

struct PolicyWithChi {
    StochasticPolicy policy;
    indvec chi;
};

// Greedy policy at v plus the per-state active-action counts. This is the
// single implementation behind extract_policy and the solver reports.
PolicyWithChi extract_with_chi(const MdpInstance& inst, const UncertaintySpec& unc,
                               const numvec& v, prec_t inner_tol, int threads) {
    const long S = inst.num_states, A = inst.num_actions;
    PolicyWithChi out{StochasticPolicy(S, A, 0.0), indvec(static_cast<size_t>(S), 1)};
    BellmanContext ctx = make_context(inst, unc, v, inner_tol, threads);
    QFunction q = q_from_value(inst, v);

    switch (unc.rect) {
    case Rectangularity::NonRobust:
        for (long s = 0; s < S; ++s) {
            long best = 0;
            for (long a = 1; a < A; ++a)
                if (q(s, a) > q(s, best)) best = a;
            out.policy(s, best) = 1.0;
        }
        return out;
    case Rectangularity::SA:
        for (long s = 0; s < S; ++s) {
            long best = 0;
            for (long a = 1; a < A; ++a)
                if (q(s, a) - ctx.sigma_sa(s, a) > q(s, best) - ctx.sigma_sa(s, best)) best = a;
            out.policy(s, best) = 1.0;
        }
        return out;
    case Rectangularity::S: {
        SOptResult res = s_opt_from_q(ctx, q);
        for (long s = 0; s < S; ++s) {
            for (long a = 0; a < A; ++a) out.policy(s, a) = res.fills[s].weights[a];
            out.chi[s] = res.fills[s].chi;
        }
        return out;
    }
    }
    return out;
}

} // namespace

StochasticPolicy extract_policy(const MdpInstance& inst, const UncertaintySpec& unc,
                                const numvec& v_star, prec_t inner_tol) {
    return extract_with_chi(inst, unc, v_star, inner_tol, 1).policy;
}

SolveReport value_iteration(const MdpInstance& inst, const UncertaintySpec& unc,
                            const SolveConfig& cfg) {
    check_config(cfg);
    validate_mdp(inst);
    validate_uncertainty(inst, unc);
    warn_once_infeasible(inst, unc);

    const prec_t gamma = inst.discount;
    const prec_t inner = derive_inner_tol(cfg, gamma);
    const prec_t threshold = stop_threshold(cfg.epsilon, gamma);

    SolveReport report;
    numvec v(static_cast<size_t>(inst.num_states), 0.0);
    for (long iter = 0; iter < cfg.max_iters; ++iter) {
        auto t0 = clock_t_::now();
        BellmanContext ctx = make_context(inst, unc, v, inner, cfg.threads);
        report.timings.kappa_seconds += seconds_since(t0);

        auto t1 = clock_t_::now();
        QFunction q = q_from_value(inst, v);
        report.timings.qvalue_seconds += seconds_since(t1);

        auto t2 = clock_t_::now();
        numvec next;
        switch (unc.rect) {
        case Rectangularity::NonRobust: next = opt_nonrobust_from_q(q); break;
        case Rectangularity::SA: next = sa_opt_from_q(ctx, q); break;
        case Rectangularity::S: next = s_opt_from_q(ctx, q).value; break;
        }
        report.timings.finish_seconds += seconds_since(t2);

        report.last_residual = linf_distance(next, v);
        v = std::move(next);
        ++report.iterations;
        if (cfg.record_residuals) report.residuals.push_back(report.last_residual);
        if (report.last_residual <= threshold) {
            report.converged = true;
            break;
        }
    }

    PolicyWithChi withchi = extract_with_chi(inst, unc, v, inner, cfg.threads);
    report.value = std::move(v);
    report.policy = std::move(withchi.policy);
    report.chi_per_state = std::move(withchi.chi);
    return report;
}

SolveReport q_value_iteration_sa(const MdpInstance& inst, const UncertaintySpec& unc,
                                 const SolveConfig& cfg) {
    check_config(cfg);
    validate_mdp(inst);
    validate_uncertainty(inst, unc);
    if (unc.rect != Rectangularity::SA)
        throw ModelError("q_value_iteration_sa requires an sa-rectangular spec");
    warn_once_infeasible(inst, unc);

    const long S = inst.num_states, A = inst.num_actions;
    const prec_t gamma = inst.discount;
    const prec_t inner = derive_inner_tol(cfg, gamma);
    const prec_t threshold = stop_threshold(cfg.epsilon, gamma);

    SolveReport report;
    numvec v(static_cast<size_t>(S), 0.0);
    QFunction qmat(S, A, 0.0);
    for (long iter = 0; iter < cfg.max_iters; ++iter) {
        auto t0 = clock_t_::now();
        BellmanContext ctx = make_context(inst, unc, v, inner, cfg.threads);
        report.timings.kappa_seconds += seconds_since(t0);

        auto t1 = clock_t_::now();
        qmat = q_from_value(inst, v);
        for (long s = 0; s < S; ++s)
            for (long a = 0; a < A; ++a) qmat(s, a) -= ctx.sigma_sa(s, a);
        report.timings.qvalue_seconds += seconds_since(t1);

        auto t2 = clock_t_::now();
        numvec next(static_cast<size_t>(S));
        for (long s = 0; s < S; ++s) {
            auto row = qmat.row(s);
            next[s] = *std::max_element(row.begin(), row.end());
        }
        report.timings.finish_seconds += seconds_since(t2);

        report.last_residual = linf_distance(next, v);
        v = std::move(next);
        ++report.iterations;
        if (cfg.record_residuals) report.residuals.push_back(report.last_residual);
        if (report.last_residual <= threshold) {
            report.converged = true;
            break;
        }
    }

    // the optimal policy is the deterministic best penalized action,
    // taken from the Q-matrix rebuilt at the final value
    {
        BellmanContext ctx = make_context(inst, unc, v, inner, cfg.threads);
        qmat = q_from_value(inst, v);
        for (long s = 0; s < S; ++s)
            for (long a = 0; a < A; ++a) qmat(s, a) -= ctx.sigma_sa(s, a);
    }
    report.policy = StochasticPolicy(S, A, 0.0);
    report.chi_per_state.assign(static_cast<size_t>(S), 1);
    for (long s = 0; s < S; ++s) {
        long best = 0;
        for (long a = 1; a < A; ++a)
            if (qmat(s, a) > qmat(s, best)) best = a;
        report.policy(s, best) = 1.0;
    }
    report.value = std::move(v);
    return report;
}

SolveReport evaluate_policy(const MdpInstance& inst, const UncertaintySpec& unc,
                            const StochasticPolicy& policy, const SolveConfig& cfg) {
    check_config(cfg);
    validate_mdp(inst);
    validate_uncertainty(inst, unc);
    if (policy.rows() != inst.num_states || policy.cols() != inst.num_actions)
        throw ModelError("policy shape does not match the instance");
    validate_policy(policy);
    warn_once_infeasible(inst, unc);

    const long S = inst.num_states, A = inst.num_actions;
    const prec_t gamma = inst.discount;
    const prec_t inner = derive_inner_tol(cfg, gamma);
    const prec_t threshold = stop_threshold(cfg.epsilon, gamma);

    SolveReport report;
    numvec v(static_cast<size_t>(S), 0.0);
    for (long iter = 0; iter < cfg.max_iters; ++iter) {
        auto t0 = clock_t_::now();
        BellmanContext ctx = make_context(inst, unc, v, inner, cfg.threads);
        report.timings.kappa_seconds += seconds_since(t0);

        auto t1 = clock_t_::now();
        QFunction q = q_from_value(inst, v);
        report.timings.qvalue_seconds += seconds_since(t1);

        auto t2 = clock_t_::now();
        numvec next(static_cast<size_t>(S));
        switch (unc.rect) {
        case Rectangularity::NonRobust:
            for (long s = 0; s < S; ++s) {
                prec_t total = 0.0;
                for (long a = 0; a < A; ++a) total += policy(s, a) * q(s, a);
                next[s] = total;
            }
            break;
        case Rectangularity::SA: next = sa_policy_from_q(ctx, policy, q); break;
        case Rectangularity::S: next = s_policy_from_q(ctx, policy, q); break;
        }
        report.timings.finish_seconds += seconds_since(t2);

        report.last_residual = linf_distance(next, v);
        v = std::move(next);
        ++report.iterations;
        if (cfg.record_residuals) report.residuals.push_back(report.last_residual);
        if (report.last_residual <= threshold) {
            report.converged = true;
            break;
        }
    }

    report.value = std::move(v);
    report.policy = policy;
    report.chi_per_state.assign(static_cast<size_t>(S), 0);
    for (long s = 0; s < S; ++s) {
        long support = 0;
        for (long a = 0; a < A; ++a)
            if (policy(s, a) > 0.0) ++support;
        report.chi_per_state[s] = support;
    }
    return report;
}

} // namespace robustmdp
