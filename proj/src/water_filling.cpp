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

#include "robustmdp/water_filling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace robustmdp {

namespace {

constexpr int MAX_BISECT_ITERS = 200;

// Descending order with ties broken by original index, so repeated calls
// produce identical weights. The buffers are reused across calls; this
// sits on the per-state hot path of every sweep.
struct SortedInput {
    numvec values;
    indvec order; // order[i] = original index of the i-th largest entry
};

SortedInput& sort_descending(std::span<const prec_t> b) {
    static thread_local SortedInput out;
    const long n = static_cast<long>(b.size());
    out.order.resize(b.size());
    std::iota(out.order.begin(), out.order.end(), 0L);
    if (n <= 64) {
        // stable insertion sort: shifts only on strict inequality
        for (long i = 1; i < n; ++i) {
            long key = out.order[i];
            long j = i - 1;
            while (j >= 0 && b[out.order[j]] < b[key]) {
                out.order[j + 1] = out.order[j];
                --j;
            }
            out.order[j + 1] = key;
        }
    } else {
        std::stable_sort(out.order.begin(), out.order.end(),
                         [&](long i, long j) { return b[i] > b[j]; });
    }
    out.values.resize(b.size());
    for (size_t i = 0; i < b.size(); ++i) out.values[i] = b[out.order[i]];
    return out;
}

prec_t power(prec_t base, NormIndex p) {
    switch (p.kind()) {
    case NormIndex::Kind::One: return base;
    case NormIndex::Kind::Two: return base * base;
    default: return std::pow(base, p.value());
    }
}

// sum over { b_i >= x } of (b_i - x)^p on the descending-sorted values
prec_t level_sum(const numvec& sorted, prec_t x, NormIndex p) {
    prec_t total = 0.0;
    for (prec_t bi : sorted) {
        if (bi < x) break;
        total += power(bi - x, p);
    }
    return total;
}

WaterFillResult one_hot_best(std::span<const prec_t> b, prec_t zeta) {
    WaterFillResult out;
    out.zeta = zeta;
    out.chi = 1;
    out.weights.assign(b.size(), 0.0);
    long best = static_cast<long>(std::max_element(b.begin(), b.end()) - b.begin());
    out.weights[best] = 1.0;
    out.residual = 0.0;
    return out;
}

} // namespace

WaterFillResult water_fill(std::span<const prec_t> b, prec_t sigma, NormIndex p, prec_t tol) {
    if (b.empty()) throw std::invalid_argument("water_fill on an empty vector");
    if (!(sigma >= 0.0)) throw std::invalid_argument("water_fill needs sigma >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("water_fill tolerance must be positive");

    const prec_t top = *std::max_element(b.begin(), b.end());
    if (sigma == 0.0) return one_hot_best(b, top);
    if (p.kind() == NormIndex::Kind::Infinity) return one_hot_best(b, top - sigma);

    const auto& sorted = sort_descending(b);
    const numvec& bs = sorted.values;
    const long A = static_cast<long>(bs.size());

    WaterFillResult out;
    out.weights.assign(b.size(), 0.0);

    if (p.kind() == NormIndex::Kind::One) {
        // climb the penalized prefix averages while the next entry still
        // clears the running level
        long k = 1;
        prec_t prefix = bs[0];
        prec_t lambda = bs[0] - sigma;
        while (k <= A - 1 && lambda <= bs[k]) {
            prefix += bs[k];
            ++k;
            lambda = (prefix - sigma) / static_cast<prec_t>(k);
        }
        out.zeta = lambda;
        out.chi = k;
        for (long i = 0; i < k; ++i)
            out.weights[sorted.order[i]] = 1.0 / static_cast<prec_t>(k);
        out.residual = std::abs(level_sum(bs, out.zeta, p) - sigma);
        return out;
    }

    prec_t zeta;
    if (p.kind() == NormIndex::Kind::Two) {
        long k = 1;
        prec_t prefix = bs[0];
        prec_t lambda = bs[0] - sigma;
        while (k <= A - 1 && lambda <= bs[k]) {
            prefix += bs[k];
            ++k;
            prec_t mean = prefix / static_cast<prec_t>(k);
            prec_t within = 0.0;
            for (long i = 0; i < k; ++i) within += (bs[i] - mean) * (bs[i] - mean);
            // root of sum_{i<=k}(b_i - x)^2 = sigma^2 below the prefix;
            // the discriminant is nonnegative whenever the prefix is active
            prec_t disc = (sigma * sigma - within) / static_cast<prec_t>(k);
            lambda = mean - std::sqrt(std::max(disc, 0.0));
        }
        zeta = lambda;
    } else {
        // general exponent: bisect sum_{b_i >= x}(b_i - x)^p = sigma^p
        const prec_t target = power(sigma, p);
        prec_t lo = top - sigma, hi = top;
        int iters = 0;
        while (hi - lo > tol && iters < MAX_BISECT_ITERS) {
            prec_t mid = 0.5 * (lo + hi);
            if (level_sum(bs, mid, p) > target)
                lo = mid;
            else
                hi = mid;
            ++iters;
        }
        zeta = 0.5 * (lo + hi);
    }

    out.zeta = zeta;
    // threshold weights on the strictly positive advantages
    const prec_t exponent = p.value() - 1.0;
    prec_t total = 0.0;
    long support = 0;
    for (long i = 0; i < A; ++i) {
        prec_t gap = bs[i] - zeta;
        if (gap <= tol) break; // sorted: everything after is smaller
        prec_t w = exponent == 1.0 ? gap : std::pow(gap, exponent);
        out.weights[sorted.order[i]] = w;
        total += w;
        ++support;
    }
    if (support == 0) return one_hot_best(b, zeta);
    for (prec_t& w : out.weights) w /= total;
    out.chi = support;
    out.residual = std::abs(level_sum(bs, zeta, p) - power(sigma, p));
    return out;
}

long active_count(std::span<const prec_t> b, prec_t sigma, NormIndex p) {
    if (b.empty()) throw std::invalid_argument("active_count on an empty vector");
    if (!(sigma >= 0.0)) throw std::invalid_argument("active_count needs sigma >= 0");
    if (p.kind() == NormIndex::Kind::Infinity) return 1;

    const auto& sorted = sort_descending(b);
    const numvec& bs = sorted.values;
    const prec_t target = power(sigma, p);
    long chi = 1;
    // sum_{i<=k}(b_i - b_k)^p grows with k, so scan until it overshoots
    for (long k = 2; k <= static_cast<long>(bs.size()); ++k) {
        prec_t total = 0.0;
        for (long i = 0; i < k; ++i) total += power(bs[i] - bs[k - 1], p);
        if (total > target) break;
        chi = k;
    }
    return chi;
}

} // namespace robustmdp
