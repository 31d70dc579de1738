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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "robustmdp/oracle.hpp"
#include "robustmdp/water_filling.hpp"
#include "test_helpers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace robustmdp;

namespace {

const std::vector<NormIndex> FILL_PS = {NormIndex::one(), NormIndex::two(), NormIndex::finite(2.5),
                                        NormIndex::infinity()};

// descending order of b, ties by index, recomputed test-side
indvec descending_order(const numvec& b) {
    indvec order(b.size());
    std::iota(order.begin(), order.end(), 0L);
    std::stable_sort(order.begin(), order.end(), [&](long i, long j) { return b[i] > b[j]; });
    return order;
}

} // namespace

TEST_CASE("zero radius puts all weight on the first maximizer") {
    WaterFillResult r = water_fill(numvec{2.0, 1.0}, 0.0, NormIndex::two());
    CHECK(r.zeta == doctest::Approx(2.0));
    CHECK(r.chi == 1);
    CHECK(r.weights == numvec{1.0, 0.0});

    // tie broken toward the first occurrence
    WaterFillResult tie = water_fill(numvec{1.0, 3.0, 3.0}, 0.0, NormIndex::one());
    CHECK(tie.weights == numvec{0.0, 1.0, 0.0});
}

TEST_CASE("max norm pays the penalty on the best action") {
    WaterFillResult r = water_fill(numvec{2.0, 1.0}, 0.5, NormIndex::infinity());
    CHECK(r.zeta == doctest::Approx(1.5));
    CHECK(r.chi == 1);
    CHECK(r.weights == numvec{1.0, 0.0});
}

TEST_CASE("one norm maximizes the penalized prefix average") {
    // prefix levels: (3-2)/1 = 1, (5-2)/2 = 1.5, (5-2)/3 = 1
    WaterFillResult r = water_fill(numvec{3.0, 2.0, 0.0}, 2.0, NormIndex::one());
    CHECK(r.zeta == doctest::Approx(1.5));
    CHECK(r.chi == 2);
    CHECK(r.weights[0] == doctest::Approx(0.5));
    CHECK(r.weights[1] == doctest::Approx(0.5));
    CHECK(r.weights[2] == 0.0);
}

TEST_CASE("two norm keeps one action while the root clears the runner-up") {
    // (2 - x)^2 = 0.25 gives x = 1.5 > 1
    WaterFillResult r = water_fill(numvec{2.0, 1.0}, 0.5, NormIndex::two());
    CHECK(r.zeta == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(r.chi == 1);
    CHECK(r.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("two norm splits weight once the radius grows") {
    // root of (2-x)^2 + (1-x)^2 = 1.44 below 1
    WaterFillResult r = water_fill(numvec{2.0, 1.0}, 1.2, NormIndex::two());
    const prec_t zeta = 1.5 - std::sqrt(0.47);
    CHECK(r.zeta == doctest::Approx(zeta).epsilon(1e-12));
    CHECK(r.chi == 2);
    CHECK(r.weights[0] == doctest::Approx((2.0 - zeta) / (3.0 - 2.0 * zeta)).epsilon(1e-10));
    CHECK(r.weights[1] == doctest::Approx((1.0 - zeta) / (3.0 - 2.0 * zeta)).epsilon(1e-10));
    CHECK(r.weights[0] == doctest::Approx(0.865).epsilon(1e-3));
    CHECK(r.weights[1] == doctest::Approx(0.135).epsilon(2e-2));
}

TEST_CASE("values match the simplex grid reference") {
    oracle::OracleConfig cfg;
    cfg.grid_step = 1e-3;
    CHECK(std::abs(water_fill(numvec{2.0, 1.0}, 0.5, NormIndex::two()).zeta -
                   oracle::waterfill_grid(numvec{2.0, 1.0}, 0.5, NormIndex::two(), cfg)) <= 5e-3);
    CHECK(std::abs(water_fill(numvec{3.0, 2.0, 0.0}, 2.0, NormIndex::one()).zeta -
                   oracle::waterfill_grid(numvec{3.0, 2.0, 0.0}, 2.0, NormIndex::infinity(),
                                          cfg)) <= 5e-3);
    CHECK(std::abs(water_fill(numvec{2.0, 1.0}, 1.2, NormIndex::two()).zeta -
                   oracle::waterfill_grid(numvec{2.0, 1.0}, 1.2, NormIndex::two(), cfg)) <= 5e-3);
}

TEST_CASE("active_count enumerations") {
    CHECK(active_count(numvec{3.0, 2.0, 0.0}, 2.0, NormIndex::one()) == 2);
    CHECK(active_count(numvec{3.0, 2.0, 0.0}, 0.0, NormIndex::one()) == 1);
    CHECK(active_count(numvec{3.0, 2.0, 0.0}, 100.0, NormIndex::one()) == 3);
    CHECK(active_count(numvec{3.0, 2.0, 0.0}, 100.0, NormIndex::finite(2.5)) == 3);
    CHECK(active_count(numvec{1.0, 1.0, 1.0}, 0.0, NormIndex::two()) == 3); // exact ties
}

TEST_CASE("water_fill rejects bad inputs") {
    CHECK_THROWS_AS(water_fill(numvec{}, 1.0, NormIndex::two()), std::invalid_argument);
    CHECK_THROWS_AS(water_fill(numvec{1.0}, -0.5, NormIndex::two()), std::invalid_argument);
    CHECK_THROWS_AS(active_count(numvec{}, 1.0, NormIndex::two()), std::invalid_argument);
}

TEST_CASE("a single action takes the whole penalty") {
    for (const NormIndex& p : FILL_PS) {
        WaterFillResult r = water_fill(numvec{1.5}, 0.4, p);
        CHECK(r.zeta == doctest::Approx(1.1));
        CHECK(r.chi == 1);
        CHECK(r.weights == numvec{1.0});
    }
}

TEST_CASE("all-equal entries spread uniformly under the one norm") {
    WaterFillResult r = water_fill(numvec{2.0, 2.0, 2.0, 2.0}, 1.0, NormIndex::one());
    CHECK(r.zeta == doctest::Approx(2.0 - 0.25));
    CHECK(r.chi == 4);
    for (prec_t w : r.weights) CHECK(w == doctest::Approx(0.25));
}

TEST_CASE("structural invariants on random inputs") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 200; ++trial) {
        long A = 2 + rng::below(gen, 5);
        numvec b = testing::random_vector(gen, A, -3.0, 4.0);
        prec_t sigma = rng::uniform(gen, 0.0, 2.5);
        for (const NormIndex& p : FILL_PS) {
            WaterFillResult r = water_fill(b, sigma, p, 1e-11);

            // weights form a distribution with exactly chi positive entries
            prec_t total = 0.0;
            long positive = 0;
            for (prec_t w : r.weights) {
                CHECK(w >= 0.0);
                total += w;
                if (w > 0.0) ++positive;
            }
            CHECK(std::abs(total - 1.0) <= 1e-12);
            CHECK(positive == r.chi);
            CHECK(r.chi >= 1);
            CHECK(r.chi <= A);

            // consistency with the count-only route (away from boundary ties)
            if (sigma > 0.0 && p.kind() != NormIndex::Kind::Infinity)
                CHECK(active_count(b, sigma, p) == r.chi);

            // bracket for the level
            prec_t top = *std::max_element(b.begin(), b.end());
            CHECK(r.zeta <= top + 1e-9);
            CHECK(r.zeta >= top - sigma - 1e-9);

            // weights are non-increasing along descending b
            indvec order = descending_order(b);
            for (size_t i = 1; i < order.size(); ++i)
                CHECK(r.weights[order[i - 1]] >= r.weights[order[i]] - 1e-12);

            // sandwich around the level for finite p away from sigma = 0
            if (sigma > 1e-9 && p.kind() != NormIndex::Kind::Infinity) {
                numvec sorted;
                for (long i : order) sorted.push_back(b[i]);
                CHECK(r.zeta <= sorted[r.chi - 1] + 1e-9);
                if (r.chi < A) CHECK(sorted[r.chi] < r.zeta + 1e-9);
            }

            // root residual for exponents above one
            if (sigma > 1e-9 && p.kind() != NormIndex::Kind::Infinity &&
                p.kind() != NormIndex::Kind::One) {
                prec_t spread = *std::max_element(b.begin(), b.end()) -
                                *std::min_element(b.begin(), b.end()) + sigma;
                prec_t slack =
                    1e-10 * p.value() * A * std::pow(spread, p.value() - 1.0) + 1e-12;
                CHECK(r.residual <= std::max(slack, 1e-8));
            }
        }
    }
}

TEST_CASE("prefix levels rise until the active block ends under the one norm") {
    std::mt19937_64 gen(5150);
    for (int trial = 0; trial < 100; ++trial) {
        long A = 2 + rng::below(gen, 5);
        numvec b = testing::random_vector(gen, A, -2.0, 2.0);
        prec_t sigma = rng::uniform(gen, 0.01, 2.0);
        WaterFillResult r = water_fill(b, sigma, NormIndex::one());

        indvec order = descending_order(b);
        numvec sorted;
        for (long i : order) sorted.push_back(b[i]);
        prec_t prefix = 0.0;
        numvec lambda;
        for (long k = 1; k <= A; ++k) {
            prefix += sorted[k - 1];
            lambda.push_back((prefix - sigma) / static_cast<prec_t>(k));
        }
        for (long k = 1; k < r.chi; ++k) CHECK(lambda[k - 1] <= lambda[k] + 1e-12);
        CHECK(r.zeta == doctest::Approx(*std::max_element(lambda.begin(), lambda.end())));
    }
}

TEST_CASE("values agree with the simplex grid on random low-dimensional inputs") {
    std::mt19937_64 gen(808);
    oracle::OracleConfig cfg;
    cfg.grid_step = 1e-3;
    for (int trial = 0; trial < 12; ++trial) {
        long A = 2 + rng::below(gen, 2);
        numvec b = testing::random_vector(gen, A, -2.0, 3.0);
        prec_t sigma = rng::uniform(gen, 0.05, 1.5);
        for (const NormIndex& p : FILL_PS) {
            WaterFillResult r = water_fill(b, sigma, p, 1e-11);
            prec_t grid = oracle::waterfill_grid(b, sigma, holder_conjugate(p), cfg);
            CHECK(std::abs(r.zeta - grid) <= 5e-3);
        }
    }
}
