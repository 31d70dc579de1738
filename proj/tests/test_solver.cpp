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
#include "robustmdp/solver.hpp"
#include "test_helpers.hpp"

#include <algorithm>
#include <cmath>

using namespace robustmdp;

TEST_CASE("non-robust value iteration matches the reference implementation") {
    MdpInstance inst = random_instance(5, 3, 7);
    SolveConfig cfg;
    cfg.epsilon = 1e-9;
    SolveReport report = value_iteration(inst, UncertaintySpec::nonrobust(), cfg);
    CHECK(report.converged);

    oracle::OracleConfig ocfg;
    ocfg.vi_epsilon = 1e-9;
    numvec reference = oracle::vi_reference(inst, ocfg);
    CHECK(linf_distance(report.value, reference) <= 1e-8);
}

TEST_CASE("zero-radius sa iterates coincide with the non-robust ones") {
    MdpInstance inst = random_instance(6, 3, 13);
    SolveConfig cfg;
    cfg.epsilon = 1e-8;
    SolveReport plain = value_iteration(inst, UncertaintySpec::nonrobust(), cfg);
    SolveReport zero = value_iteration(
        inst, UncertaintySpec::sa_uniform(6, 3, NormIndex::two(), 0.0, 0.0), cfg);
    CHECK(plain.iterations == zero.iterations);
    CHECK(linf_distance(plain.value, zero.value) <= 1e-12);
    REQUIRE(plain.residuals.size() == zero.residuals.size());
    for (size_t i = 0; i < plain.residuals.size(); ++i)
        CHECK(plain.residuals[i] == doctest::Approx(zero.residuals[i]).epsilon(1e-12));
}

TEST_CASE("extracted s-rectangular policy reproduces the optimal value") {
    std::mt19937_64 gen(29);
    for (std::uint64_t seed : {101ULL, 202ULL, 303ULL}) {
        MdpInstance inst = random_instance(5, 3, seed);
        prec_t beta = testing::feasible_beta(inst);
        UncertaintySpec unc = UncertaintySpec::s_uniform(5, NormIndex::two(),
                                                         rng::uniform(gen, 0.05, 0.2), beta);
        SolveConfig cfg;
        cfg.epsilon = 1e-6;
        SolveReport report = value_iteration(inst, unc, cfg);
        CHECK(report.converged);
        SolveReport eval = evaluate_policy(inst, unc, report.policy, cfg);
        CHECK(eval.converged);
        CHECK(linf_distance(eval.value, report.value) <= 2e-6);
    }
}

TEST_CASE("sa q-value iteration agrees with value iteration") {
    MdpInstance inst = random_instance(4, 3, 37);
    UncertaintySpec unc = UncertaintySpec::sa_uniform(4, 3, NormIndex::two(), 0.1, 0.1);
    SolveConfig cfg;
    cfg.epsilon = 1e-7;
    SolveReport vi = value_iteration(inst, unc, cfg);
    SolveReport qvi = q_value_iteration_sa(inst, unc, cfg);
    CHECK(vi.converged);
    CHECK(qvi.converged);
    CHECK(linf_distance(vi.value, qvi.value) <= 2e-7);

    // zero radii reduce to the classical scheme
    UncertaintySpec zero = UncertaintySpec::sa_uniform(4, 3, NormIndex::two(), 0.0, 0.0);
    SolveReport qzero = q_value_iteration_sa(inst, zero, cfg);
    SolveReport plain = value_iteration(inst, UncertaintySpec::nonrobust(), cfg);
    CHECK(linf_distance(qzero.value, plain.value) <= 2e-7);

    // residual decay settles at the discount factor
    REQUIRE(qvi.residuals.size() >= 20);
    for (size_t i = 10; i + 1 < qvi.residuals.size() - 1; ++i)
        CHECK(qvi.residuals[i + 1] / qvi.residuals[i] <= inst.discount + 0.02);

    CHECK_THROWS_AS(q_value_iteration_sa(inst, UncertaintySpec::nonrobust(), cfg), ModelError);
}

TEST_CASE("residual decay approaches the discount factor") {
    MdpInstance inst = random_instance(8, 3, 41);
    UncertaintySpec unc = UncertaintySpec::sa_uniform(8, 3, NormIndex::two(), 0.1, 0.1);
    SolveConfig cfg;
    cfg.epsilon = 1e-10;
    SolveReport report = value_iteration(inst, unc, cfg);
    REQUIRE(report.residuals.size() >= 25);
    for (size_t i = 10; i + 1 < report.residuals.size() - 1; ++i) {
        prec_t ratio = report.residuals[i + 1] / report.residuals[i];
        CHECK(ratio <= inst.discount + 0.02);
    }
}

TEST_CASE("coarse inner tolerance degrades the value within the stated budget") {
    MdpInstance inst = random_instance(5, 3, 57);
    UncertaintySpec unc = UncertaintySpec::s_uniform(5, NormIndex::finite(3.0), 0.1, 0.1);
    SolveConfig tight;
    tight.epsilon = 1e-9;
    tight.inner_tol = 1e-12;
    SolveReport precise = value_iteration(inst, unc, tight);

    SolveConfig coarse;
    coarse.epsilon = 1e-9;
    coarse.inner_tol = 1e-3;
    SolveReport rough = value_iteration(inst, unc, coarse);
    const prec_t bound = 2e-3 / (1.0 - inst.discount) + tight.epsilon;
    CHECK(linf_distance(precise.value, rough.value) <= bound);
}

TEST_CASE("the extracted policy beats random policies") {
    MdpInstance inst = random_instance(4, 3, 61);
    prec_t beta = testing::feasible_beta(inst);
    UncertaintySpec unc = UncertaintySpec::s_uniform(4, NormIndex::one(), 0.15, beta);
    SolveConfig cfg;
    cfg.epsilon = 1e-7;
    SolveReport best = value_iteration(inst, unc, cfg);
    std::mt19937_64 gen(62);
    for (int probe = 0; probe < 20; ++probe) {
        StochasticPolicy pi = testing::random_policy(gen, 4, 3);
        SolveReport eval = evaluate_policy(inst, unc, pi, cfg);
        for (long s = 0; s < 4; ++s) CHECK(eval.value[s] <= best.value[s] + 2e-7);
    }
}

TEST_CASE("threshold policies follow the water-filling weights") {
    MdpInstance inst = random_instance(6, 4, 71);
    UncertaintySpec unc = UncertaintySpec::s_uniform(6, NormIndex::two(), 0.2, 0.05);
    SolveConfig cfg;
    cfg.epsilon = 1e-8;
    SolveReport report = value_iteration(inst, unc, cfg);

    // chi matches the support of the reported policy
    for (long s = 0; s < 6; ++s) {
        long support = 0;
        for (long a = 0; a < 4; ++a)
            if (report.policy(s, a) > 0.0) ++support;
        CHECK(support == report.chi_per_state[s]);
    }

    // sandwich: the value sits between the chi-th and (chi+1)-th Q-values
    QFunction q = q_from_value(inst, report.value);
    for (long s = 0; s < 6; ++s) {
        numvec row(q.row(s).begin(), q.row(s).end());
        std::sort(row.begin(), row.end(), std::greater<prec_t>());
        long chi = report.chi_per_state[s];
        CHECK(report.value[s] <= row[chi - 1] + 1e-8);
        if (chi < 4) CHECK(row[chi] < report.value[s] + 1e-8);
    }
}

TEST_CASE("policy extraction conventions per norm") {
    MdpInstance inst = random_instance(5, 3, 83);
    SolveConfig cfg;
    cfg.epsilon = 1e-8;

    // sa-rectangular: deterministic rows
    UncertaintySpec sa = UncertaintySpec::sa_uniform(5, 3, NormIndex::two(), 0.1, 0.1);
    SolveReport sa_report = value_iteration(inst, sa, cfg);
    for (long s = 0; s < 5; ++s) {
        long ones = 0;
        for (long a = 0; a < 3; ++a)
            if (sa_report.policy(s, a) == 1.0) ++ones;
        CHECK(ones == 1);
    }

    // s-rectangular with the max norm: deterministic best action
    UncertaintySpec sinf = UncertaintySpec::s_uniform(5, NormIndex::infinity(), 0.2, 0.1);
    SolveReport inf_report = value_iteration(inst, sinf, cfg);
    for (long s = 0; s < 5; ++s) CHECK(inf_report.chi_per_state[s] == 1);

    // one norm: uniform over the active prefix
    UncertaintySpec sone = UncertaintySpec::s_uniform(5, NormIndex::one(), 0.3, 0.1);
    SolveReport one_report = value_iteration(inst, sone, cfg);
    for (long s = 0; s < 5; ++s) {
        long chi = one_report.chi_per_state[s];
        for (long a = 0; a < 3; ++a) {
            prec_t w = one_report.policy(s, a);
            if (w > 0.0) CHECK(w == doctest::Approx(1.0 / chi));
        }
    }
}

TEST_CASE("argmax ties resolve to the lowest action index") {
    MdpInstance inst(2, 2, 0.5);
    for (long s = 0; s < 2; ++s)
        for (long a = 0; a < 2; ++a) inst.kernel_row(s, a)[s] = 1.0;
    inst.reward(0, 0) = inst.reward(0, 1) = 1.0; // exact tie
    inst.reward(1, 0) = 0.0;
    inst.reward(1, 1) = 0.5;
    StochasticPolicy pi = extract_policy(inst, UncertaintySpec::nonrobust(), numvec{0.0, 0.0});
    CHECK(pi(0, 0) == 1.0);
    CHECK(pi(1, 1) == 1.0);
}

TEST_CASE("configuration and convergence failures are reported") {
    MdpInstance inst = random_instance(3, 2, 91);
    SolveConfig bad;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(value_iteration(inst, UncertaintySpec::nonrobust(), bad),
                    std::invalid_argument);

    SolveConfig capped;
    capped.epsilon = 1e-12;
    capped.max_iters = 3;
    SolveReport report = value_iteration(inst, UncertaintySpec::nonrobust(), capped);
    CHECK_FALSE(report.converged);
    CHECK(report.iterations == 3);
    CHECK(report.last_residual > 0.0);
}

TEST_CASE("fan-out worker count never changes the result") {
    MdpInstance inst = random_instance(12, 4, 271);
    UncertaintySpec unc = UncertaintySpec::s_uniform(12, NormIndex::two(), 0.2, 0.1);
    SolveConfig serial;
    serial.epsilon = 1e-7;
    SolveConfig fanned = serial;
    fanned.threads = 2;
    SolveReport a = value_iteration(inst, unc, serial);
    SolveReport b = value_iteration(inst, unc, fanned);
    CHECK(linf_distance(a.value, b.value) == 0.0);
    CHECK(a.policy.data() == b.policy.data());
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("policy evaluation validates the policy") {
    MdpInstance inst = random_instance(3, 2, 97);
    StochasticPolicy broken(3, 2, 0.7); // rows sum to 1.4
    CHECK_THROWS_AS(evaluate_policy(inst, UncertaintySpec::nonrobust(), broken, {}), ModelError);
}
