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

#include "robustmdp/types.hpp"

#include "robustmdp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace robustmdp {

NormIndex NormIndex::parse(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
    size_t pos = 0;
    prec_t value = 0.0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse norm index '" + text + "'");
    }
    if (pos != text.size()) throw std::invalid_argument("cannot parse norm index '" + text + "'");
    if (value == 1.0) return one();
    return finite(value);
}

std::string NormIndex::to_string() const {
    switch (kind_) {
    case Kind::One: return "1";
    case Kind::Two: return "2";
    case Kind::Infinity: return "inf";
    case Kind::Finite: {
        std::ostringstream out;
        out << value_;
        return out.str();
    }
    }
    return "?";
}

prec_t lp_norm(std::span<const prec_t> v, NormIndex p) {
    switch (p.kind()) {
    case NormIndex::Kind::One: {
        prec_t total = 0.0;
        for (prec_t x : v) total += std::abs(x);
        return total;
    }
    case NormIndex::Kind::Two: {
        prec_t total = 0.0;
        for (prec_t x : v) total += x * x;
        return std::sqrt(total);
    }
    case NormIndex::Kind::Infinity: {
        prec_t best = 0.0;
        for (prec_t x : v) best = std::max(best, std::abs(x));
        return best;
    }
    case NormIndex::Kind::Finite: {
        prec_t total = 0.0;
        for (prec_t x : v) total += std::pow(std::abs(x), p.value());
        return std::pow(total, 1.0 / p.value());
    }
    }
    return 0.0;
}

prec_t linf_distance(const numvec& u, const numvec& v) {
    if (u.size() != v.size()) throw std::invalid_argument("sup-norm distance: size mismatch");
    prec_t best = 0.0;
    for (size_t i = 0; i < u.size(); ++i) best = std::max(best, std::abs(u[i] - v[i]));
    return best;
}

std::string to_string(Rectangularity rect) {
    switch (rect) {
    case Rectangularity::NonRobust: return "none";
    case Rectangularity::SA: return "sa";
    case Rectangularity::S: return "s";
    }
    return "?";
}

void validate_mdp(const MdpInstance& inst) {
    const long S = inst.num_states, A = inst.num_actions;
    if (S < 1 || A < 1) throw ModelError("instance must have at least one state and action");
    if (!(inst.discount >= 0.0 && inst.discount < 1.0))
        throw ModelError("discount out of range: gamma must lie in [0, 1), got " +
                         std::to_string(inst.discount));
    if (static_cast<long>(inst.kernel.size()) != S * A * S)
        throw ModelError("kernel dimensions inconsistent with S and A");
    if (inst.reward.rows() != S || inst.reward.cols() != A)
        throw ModelError("reward dimensions inconsistent with S and A");
    if (!inst.initial_dist.empty()) {
        if (static_cast<long>(inst.initial_dist.size()) != S)
            throw ModelError("initial distribution length differs from S");
        prec_t total = 0.0;
        for (prec_t x : inst.initial_dist) {
            if (!(x >= 0.0)) throw ModelError("initial distribution has a negative entry");
            total += x;
        }
        if (std::abs(total - 1.0) > STOCHASTIC_TOL)
            throw ModelError("initial distribution does not sum to one");
    }
    for (long s = 0; s < S; ++s) {
        for (long a = 0; a < A; ++a) {
            if (!std::isfinite(inst.reward(s, a)))
                throw ModelError("non-finite reward", s, a);
            prec_t total = 0.0;
            for (prec_t x : inst.kernel_row(s, a)) {
                if (!(x >= 0.0)) throw ModelError("negative transition probability", s, a);
                total += x;
            }
            if (std::abs(total - 1.0) > STOCHASTIC_TOL)
                throw ModelError("non-stochastic row: probabilities sum to " +
                                     std::to_string(total),
                                 s, a);
        }
    }
}

QFunction q_from_value(const MdpInstance& inst, const numvec& v) {
    const long S = inst.num_states, A = inst.num_actions;
    if (static_cast<long>(v.size()) != S)
        throw ModelError("value vector length differs from the number of states");
    QFunction q(S, A);
    for (long s = 0; s < S; ++s) {
        for (long a = 0; a < A; ++a) {
            auto row = inst.kernel_row(s, a);
            prec_t expect = 0.0;
            for (long sn = 0; sn < S; ++sn) expect += row[sn] * v[sn];
            q(s, a) = inst.reward(s, a) + inst.discount * expect;
        }
    }
    return q;
}

MdpInstance random_instance(long num_states, long num_actions, std::uint64_t seed,
                            prec_t reward_scale) {
    if (num_states < 1 || num_actions < 1)
        throw std::invalid_argument("random_instance needs S, A >= 1");
    std::mt19937_64 gen(seed);
    MdpInstance inst(num_states, num_actions, 0.9);
    for (long s = 0; s < num_states; ++s) {
        for (long a = 0; a < num_actions; ++a) {
            auto row = inst.kernel_row(s, a);
            prec_t total = 0.0;
            for (long sn = 0; sn < num_states; ++sn) {
                row[sn] = rng::exponential(gen); // Dirichlet(1,...,1)
                total += row[sn];
            }
            for (long sn = 0; sn < num_states; ++sn) row[sn] /= total;
            inst.reward(s, a) = reward_scale * rng::uniform01(gen);
        }
    }
    return inst;
}

void validate_policy(const StochasticPolicy& policy) {
    for (long s = 0; s < policy.rows(); ++s) {
        prec_t total = 0.0;
        for (long a = 0; a < policy.cols(); ++a) {
            if (!(policy(s, a) >= 0.0)) throw ModelError("negative policy weight", s, a);
            total += policy(s, a);
        }
        if (std::abs(total - 1.0) > STOCHASTIC_TOL)
            throw ModelError("policy row does not sum to one", s);
    }
}

namespace {

void check_radius_matrix(const Matrix& m, long rows, long cols, const char* which) {
    if (m.rows() != rows || m.cols() != cols)
        throw ModelError(std::string(which) + " radius shape does not match the rectangularity");
    for (prec_t x : m.data())
        if (!(x >= 0.0)) throw ModelError(std::string(which) + " radius has a negative entry");
}

} // namespace

void validate_uncertainty(const MdpInstance& inst, const UncertaintySpec& unc) {
    const long S = inst.num_states, A = inst.num_actions;
    switch (unc.rect) {
    case Rectangularity::NonRobust:
        for (prec_t x : unc.alpha.data())
            if (x != 0.0) throw ModelError("non-robust spec carries a nonzero reward radius");
        for (prec_t x : unc.beta.data())
            if (x != 0.0) throw ModelError("non-robust spec carries a nonzero kernel radius");
        if (!unc.forbidden.empty())
            throw ModelError("non-robust spec carries a forbidden-transition mask");
        return;
    case Rectangularity::SA:
        check_radius_matrix(unc.alpha, S, A, "reward");
        check_radius_matrix(unc.beta, S, A, "kernel");
        if (!unc.forbidden.empty()) {
            if (static_cast<long>(unc.forbidden.size()) != S * A * S)
                throw ModelError("forbidden mask size must be S*A*S for sa-rectangular sets");
            for (long s = 0; s < S; ++s)
                for (long a = 0; a < A; ++a) {
                    auto row = inst.kernel_row(s, a);
                    for (long sn = 0; sn < S; ++sn)
                        if (unc.forbidden[(s * A + a) * S + sn] && row[sn] != 0.0)
                            throw ModelError("forbidden mask marks a transition with nonzero "
                                             "nominal probability",
                                             s, a);
                }
        }
        return;
    case Rectangularity::S:
        check_radius_matrix(unc.alpha, S, 1, "reward");
        check_radius_matrix(unc.beta, S, 1, "kernel");
        if (!unc.forbidden.empty()) {
            if (static_cast<long>(unc.forbidden.size()) != S * S)
                throw ModelError("forbidden mask size must be S*S for s-rectangular sets");
            for (long s = 0; s < S; ++s)
                for (long sn = 0; sn < S; ++sn) {
                    if (!unc.forbidden[s * S + sn]) continue;
                    for (long a = 0; a < A; ++a)
                        if (inst.kernel_row(s, a)[sn] != 0.0)
                            throw ModelError("forbidden mask marks a transition with nonzero "
                                             "nominal probability",
                                             s, a);
                }
        }
        return;
    }
}

long count_infeasible_radii(const MdpInstance& inst, const UncertaintySpec& unc) {
    const long S = inst.num_states, A = inst.num_actions;
    auto min_nonzero = [&](long s, long a) {
        prec_t best = std::numeric_limits<prec_t>::infinity();
        for (prec_t x : inst.kernel_row(s, a))
            if (x > 0.0) best = std::min(best, x);
        return best;
    };
    long count = 0;
    if (unc.rect == Rectangularity::SA) {
        for (long s = 0; s < S; ++s)
            for (long a = 0; a < A; ++a)
                if (unc.beta(s, a) > min_nonzero(s, a)) ++count;
    } else if (unc.rect == Rectangularity::S) {
        for (long s = 0; s < S; ++s) {
            prec_t best = std::numeric_limits<prec_t>::infinity();
            for (long a = 0; a < A; ++a) best = std::min(best, min_nonzero(s, a));
            if (unc.beta(s, 0) > best) ++count;
        }
    }
    return count;
}

} // namespace robustmdp
