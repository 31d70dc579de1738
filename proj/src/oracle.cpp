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

// Everything in this file is deliberately written from the raw
// definitions with its own loops; it shares only the data model with the
// modules it cross-checks.

#include "robustmdp/oracle.hpp"

#include "robustmdp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace robustmdp::oracle {

namespace {

// local Lp norm, kept separate from the library's on purpose
prec_t pnorm(std::span<const prec_t> x, prec_t pval) {
    if (std::isinf(pval)) {
        prec_t best = 0.0;
        for (prec_t xi : x) best = std::max(best, std::abs(xi));
        return best;
    }
    if (pval == 1.0) {
        prec_t total = 0.0;
        for (prec_t xi : x) total += std::abs(xi);
        return total;
    }
    if (pval == 2.0) {
        prec_t total = 0.0;
        for (prec_t xi : x) total += xi * xi;
        return std::sqrt(total);
    }
    prec_t total = 0.0;
    for (prec_t xi : x) total += std::pow(std::abs(xi), pval);
    return std::pow(total, 1.0 / pval);
}

prec_t shifted_norm(std::span<const prec_t> v, prec_t omega, prec_t pval) {
    if (std::isinf(pval)) {
        prec_t best = 0.0;
        for (prec_t x : v) best = std::max(best, std::abs(x - omega));
        return best;
    }
    if (pval == 1.0) {
        prec_t total = 0.0;
        for (prec_t x : v) total += std::abs(x - omega);
        return total;
    }
    if (pval == 2.0) {
        prec_t total = 0.0;
        for (prec_t x : v) total += (x - omega) * (x - omega);
        return std::sqrt(total);
    }
    prec_t total = 0.0;
    for (prec_t x : v) total += std::pow(std::abs(x - omega), pval);
    return std::pow(total, 1.0 / pval);
}

} // namespace

prec_t kappa_grid(std::span<const prec_t> v, NormIndex p, const OracleConfig& cfg) {
    if (v.empty()) throw std::invalid_argument("kappa_grid on an empty vector");
    if (!(cfg.grid_step > 0.0)) throw std::invalid_argument("grid_step must be positive");
    const auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
    const prec_t lo = *mn_it, hi = *mx_it;
    const prec_t pval = p.value();
    if (hi <= lo) return shifted_norm(v, lo, pval);

    // lattice lo, lo+step, ..., plus the right endpoint
    const long last = static_cast<long>(std::floor((hi - lo) / cfg.grid_step)) + 1;
    auto omega_at = [&](long i) { return i < last ? lo + cfg.grid_step * i : hi; };
    auto value_at = [&](long i) { return shifted_norm(v, omega_at(i), pval); };

    long l = 0, r = last;
    if (last > 4096) {
        // the objective is convex in omega, so ternary search over indices
        // finds the lattice minimum without a full scan
        while (r - l > 2) {
            long m1 = l + (r - l) / 3;
            long m2 = r - (r - l) / 3;
            if (m2 <= m1) m2 = m1 + 1;
            prec_t f1 = value_at(m1), f2 = value_at(m2);
            if (f1 < f2)
                r = m2;
            else if (f1 > f2)
                l = m1;
            else {
                // equal samples of a convex sequence bracket the minimum
                l = m1;
                r = m2;
            }
        }
        // guard scan around the located cell absorbs floating-point wobble
        l = std::max(0L, l - 64);
        r = std::min(last, r + 64);
    }
    prec_t best = value_at(l);
    for (long i = l + 1; i <= r; ++i) best = std::min(best, value_at(i));
    return best;
}

SimplexGridResult waterfill_grid_argmax(std::span<const prec_t> b, prec_t sigma, NormIndex q,
                                        const OracleConfig& cfg) {
    const long A = static_cast<long>(b.size());
    if (A < 1) throw std::invalid_argument("waterfill_grid on an empty vector");
    if (A > 4) throw std::invalid_argument("waterfill_grid enumerates the simplex; len(b) <= 4");
    if (!(cfg.grid_step > 0.0)) throw std::invalid_argument("grid_step must be positive");

    const long n = std::max(1L, static_cast<long>(std::llround(1.0 / cfg.grid_step)));
    const prec_t inv = 1.0 / static_cast<prec_t>(n);
    const prec_t qval = q.value();

    SimplexGridResult best;
    best.value = -std::numeric_limits<prec_t>::infinity();
    best.weights.assign(b.size(), 0.0);
    numvec c(b.size(), 0.0);

    std::function<void(long, long)> visit = [&](long pos, long remaining) {
        if (pos == A - 1) {
            c[pos] = remaining * inv;
            prec_t dot = 0.0;
            for (long i = 0; i < A; ++i) dot += c[i] * b[i];
            prec_t value = dot - sigma * pnorm(c, qval);
            if (value > best.value) {
                best.value = value;
                best.weights = c;
            }
            return;
        }
        for (long k = 0; k <= remaining; ++k) {
            c[pos] = k * inv;
            visit(pos + 1, remaining - k);
        }
    };
    visit(0, n);
    return best;
}

prec_t waterfill_grid(std::span<const prec_t> b, prec_t sigma, NormIndex q,
                      const OracleConfig& cfg) {
    return waterfill_grid_argmax(b, sigma, q, cfg).value;
}

namespace {

// Feasible noise ball: rows x cols coefficients, optionally zeroed on
// masked rows and projected to zero column sums, scaled to Lp radius.
struct BallSpec {
    prec_t pval = 2.0;
    prec_t radius = 0.0;
    long rows = 0;
    long cols = 1;
    const std::uint8_t* allowed = nullptr; // per row; null = all allowed
    bool zero_col_sums = false;
};

// Makes d feasible in place: masked rows to zero, columns to zero sum
// over the allowed rows, whole array to Lp norm = radius. Returns false
// when nothing feasible but zero remains.
bool project(numvec& d, const BallSpec& ball) {
    long allowed_count = ball.rows;
    if (ball.allowed) {
        allowed_count = 0;
        for (long r = 0; r < ball.rows; ++r) {
            if (ball.allowed[r])
                ++allowed_count;
            else
                for (long c = 0; c < ball.cols; ++c) d[r * ball.cols + c] = 0.0;
        }
    }
    if (ball.zero_col_sums) {
        if (allowed_count <= 1) return false;
        for (long c = 0; c < ball.cols; ++c) {
            prec_t mean = 0.0;
            for (long r = 0; r < ball.rows; ++r)
                if (!ball.allowed || ball.allowed[r]) mean += d[r * ball.cols + c];
            mean /= static_cast<prec_t>(allowed_count);
            for (long r = 0; r < ball.rows; ++r)
                if (!ball.allowed || ball.allowed[r]) d[r * ball.cols + c] -= mean;
        }
    }
    prec_t norm = pnorm(d, ball.pval);
    if (!(norm > 0.0)) return false;
    prec_t scale = ball.radius / norm;
    for (prec_t& x : d) x *= scale;
    return true;
}

/**
 * Smallest sampled value of <d, coeff> over the feasible ball. Spends most
 * of the budget on fresh spherical directions (used with both signs) and
 * the tail refining around the best direction found, so the bound
 * tightens quickly with the sample count. Always includes zero noise.
 */
prec_t sampled_ball_min(std::mt19937_64& gen, const numvec& coeff, const BallSpec& ball,
                        long budget) {
    if (ball.radius <= 0.0) return 0.0;
    if (ball.zero_col_sums) {
        long allowed_count = ball.rows;
        if (ball.allowed) {
            allowed_count = 0;
            for (long r = 0; r < ball.rows; ++r)
                if (ball.allowed[r]) ++allowed_count;
        }
        if (allowed_count <= 1) return 0.0; // no mass can move anywhere
    }
    const size_t dim = coeff.size();
    prec_t best_value = 0.0;
    numvec best_dir; // feasible minimizer so far
    numvec d(dim);

    auto consider = [&](const numvec& candidate) {
        prec_t value = 0.0;
        for (size_t i = 0; i < dim; ++i) value += candidate[i] * coeff[i];
        if (value < best_value) {
            best_value = value;
            best_dir = candidate;
        }
    };

    long spent = 0;
    const long fresh = std::max(1L, budget * 4 / 5);
    while (spent < fresh) {
        for (size_t i = 0; i < dim; ++i) d[i] = rng::gaussian(gen);
        ++spent;
        if (!project(d, ball)) continue;
        consider(d);
        if (spent < fresh) { // antithetic partner
            for (prec_t& x : d) x = -x;
            consider(d);
            ++spent;
        }
    }
    if (best_dir.empty()) return best_value;

    const int rounds = 12;
    long per_round = std::max(1L, (budget - spent) / rounds);
    prec_t spread = 0.5;
    for (int round = 0; round < rounds && spent < budget; ++round, spread *= 0.6) {
        for (long k = 0; k < per_round && spent < budget; ++k, ++spent) {
            for (size_t i = 0; i < dim; ++i)
                d[i] = best_dir[i] + spread * ball.radius * rng::gaussian(gen);
            if (project(d, ball)) consider(d);
        }
    }
    return best_value;
}

} // namespace

prec_t inner_min_sampled(const MdpInstance& inst, const UncertaintySpec& unc,
                         const StochasticPolicy& policy, const numvec& v, long s,
                         const OracleConfig& cfg) {
    const long S = inst.num_states, A = inst.num_actions;
    if (s < 0 || s >= S) throw std::invalid_argument("state index out of range");
    if (static_cast<long>(v.size()) != S) throw std::invalid_argument("value length mismatch");
    if (cfg.noise_samples < 1) throw std::invalid_argument("noise_samples must be >= 1");
    const prec_t gamma = inst.discount;

    // nominal part, naive loops
    prec_t nominal = 0.0;
    for (long a = 0; a < A; ++a) {
        prec_t expect = 0.0;
        for (long sn = 0; sn < S; ++sn) expect += inst.kernel[(s * A + a) * S + sn] * v[sn];
        nominal += policy(s, a) * (inst.reward(s, a) + gamma * expect);
    }
    if (unc.rect == Rectangularity::NonRobust) return nominal;

    std::mt19937_64 gen(cfg.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(s + 1)));
    const prec_t pval = unc.p.value();

    if (unc.rect == Rectangularity::SA) {
        // product structure: each state-action pair carries its own ball,
        // so the per-action minima combine into one feasible joint noise
        prec_t noise = 0.0;
        for (long a = 0; a < A; ++a) {
            if (policy(s, a) == 0.0) continue;
            prec_t reward_min = -unc.alpha(s, a); // worst reward sits at the extreme
            numvec coeff(v.begin(), v.end());
            for (prec_t& x : coeff) x *= gamma;
            BallSpec ball;
            ball.pval = pval;
            ball.radius = unc.beta(s, a);
            ball.rows = S;
            ball.cols = 1;
            ball.zero_col_sums = true;
            std::vector<std::uint8_t> allowed_sa; // mask stores forbidden, ball wants allowed
            if (!unc.forbidden.empty()) {
                allowed_sa.resize(static_cast<size_t>(S));
                for (long sn = 0; sn < S; ++sn)
                    allowed_sa[sn] = unc.forbidden[(s * A + a) * S + sn] ? 0 : 1;
                ball.allowed = allowed_sa.data();
            }
            prec_t kernel_min = sampled_ball_min(gen, coeff, ball, cfg.noise_samples);
            noise += policy(s, a) * (reward_min + kernel_min);
        }
        return nominal + noise;
    }

    // s-rectangular: one reward ball over actions, one kernel ball over
    // the whole next-state/action array; the two are independent
    numvec reward_coeff(static_cast<size_t>(A));
    for (long a = 0; a < A; ++a) reward_coeff[a] = policy(s, a);
    BallSpec reward_ball;
    reward_ball.pval = pval;
    reward_ball.radius = unc.alpha(s, 0);
    reward_ball.rows = A;
    prec_t reward_min = sampled_ball_min(gen, reward_coeff, reward_ball, cfg.noise_samples);

    numvec kernel_coeff(static_cast<size_t>(S * A));
    for (long sn = 0; sn < S; ++sn)
        for (long a = 0; a < A; ++a) kernel_coeff[sn * A + a] = gamma * policy(s, a) * v[sn];
    BallSpec kernel_ball;
    kernel_ball.pval = pval;
    kernel_ball.radius = unc.beta(s, 0);
    kernel_ball.rows = S;
    kernel_ball.cols = A;
    kernel_ball.zero_col_sums = true;
    std::vector<std::uint8_t> allowed;
    if (!unc.forbidden.empty()) {
        allowed.resize(static_cast<size_t>(S));
        for (long sn = 0; sn < S; ++sn) allowed[sn] = unc.forbidden[s * S + sn] ? 0 : 1;
        kernel_ball.allowed = allowed.data();
    }
    prec_t kernel_min = sampled_ball_min(gen, kernel_coeff, kernel_ball, cfg.noise_samples);

    return nominal + reward_min + kernel_min;
}

numvec vi_reference(const MdpInstance& inst, const OracleConfig& cfg) {
    const long S = inst.num_states, A = inst.num_actions;
    const prec_t gamma = inst.discount;
    const prec_t threshold = gamma > 0.0
                                 ? cfg.vi_epsilon * (1.0 - gamma) / (2.0 * gamma)
                                 : std::numeric_limits<prec_t>::infinity();
    numvec v(static_cast<size_t>(S), 0.0);
    numvec next(static_cast<size_t>(S), 0.0);
    for (long iter = 0; iter < cfg.vi_max_iters; ++iter) {
        for (long s = 0; s < S; ++s) {
            prec_t best = -std::numeric_limits<prec_t>::infinity();
            for (long a = 0; a < A; ++a) {
                prec_t total = inst.reward(s, a);
                for (long sn = 0; sn < S; ++sn)
                    total += gamma * inst.kernel[(s * A + a) * S + sn] * v[sn];
                best = std::max(best, total);
            }
            next[s] = best;
        }
        prec_t residual = 0.0;
        for (long s = 0; s < S; ++s) residual = std::max(residual, std::abs(next[s] - v[s]));
        v.swap(next);
        if (residual <= threshold) return v;
    }
    throw std::runtime_error("vi_reference did not converge within vi_max_iters");
}

} // namespace robustmdp::oracle
