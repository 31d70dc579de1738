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

#include "robustmdp/p_variance.hpp"

#include <algorithm>
#include <cmath>

namespace robustmdp {

namespace {

constexpr int MAX_BISECT_ITERS = 200;

// Stationarity condition of ||v - omega*1||_r: strictly decreasing in
// omega, nonnegative at min v and nonpositive at max v.
prec_t sign_power_sum(std::span<const prec_t> v, prec_t omega, prec_t exponent) {
    prec_t total = 0.0;
    for (prec_t x : v) {
        prec_t d = x - omega;
        if (d > 0.0)
            total += std::pow(d, exponent);
        else if (d < 0.0)
            total -= std::pow(-d, exponent);
    }
    return total;
}

PMeanResult median_result(std::span<const prec_t> v) {
    numvec sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<prec_t>());
    const long n = static_cast<long>(sorted.size());
    // average of the two middle order statistics (they coincide for odd n)
    prec_t omega = 0.5 * (sorted[(n + 1) / 2 - 1] + sorted[(n + 2) / 2 - 1]);
    prec_t kappa = 0.0;
    for (prec_t x : v) kappa += std::abs(x - omega);
    return {omega, kappa, 0};
}

} // namespace

PMeanResult p_mean(std::span<const prec_t> v, NormIndex p, prec_t tol) {
    if (v.empty()) throw std::invalid_argument("p_mean of an empty vector");
    if (!(tol > 0.0)) throw std::invalid_argument("p_mean tolerance must be positive");

    const auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
    const prec_t lo = *mn_it, hi = *mx_it;
    if (hi - lo <= tol) // near-constant: the shift is exact, the norm is noise
        return {0.5 * (lo + hi), 0.0, 0};

    switch (p.kind()) {
    case NormIndex::Kind::One: return median_result(v);
    case NormIndex::Kind::Two: {
        prec_t mean = 0.0;
        for (prec_t x : v) mean += x;
        mean /= static_cast<prec_t>(v.size());
        prec_t ss = 0.0;
        for (prec_t x : v) ss += (x - mean) * (x - mean);
        return {mean, std::sqrt(ss), 0};
    }
    case NormIndex::Kind::Infinity: return {0.5 * (lo + hi), 0.5 * (hi - lo), 0};
    case NormIndex::Kind::Finite: break;
    }

    const prec_t exponent = p.value() - 1.0;
    prec_t a = lo, b = hi;
    int iters = 0;
    while (b - a > tol && iters < MAX_BISECT_ITERS) {
        prec_t mid = 0.5 * (a + b);
        if (sign_power_sum(v, mid, exponent) > 0.0)
            a = mid;
        else
            b = mid;
        ++iters;
    }
    prec_t omega = 0.5 * (a + b);
    numvec shifted(v.size());
    for (size_t i = 0; i < v.size(); ++i) shifted[i] = v[i] - omega;
    return {omega, lp_norm(shifted, p), iters};
}

PMeanResult p_variance_masked(std::span<const prec_t> v, const std::vector<std::uint8_t>& allowed,
                              NormIndex p, prec_t tol) {
    if (allowed.size() != v.size())
        throw std::invalid_argument("mask length differs from the vector length");
    numvec kept;
    kept.reserve(v.size());
    for (size_t i = 0; i < v.size(); ++i)
        if (allowed[i]) kept.push_back(v[i]);
    if (kept.empty()) throw std::invalid_argument("every entry is masked out");
    return p_mean(kept, p, tol);
}

} // namespace robustmdp
