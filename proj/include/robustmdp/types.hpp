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

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace robustmdp {

/// Default precision used throughout the library.
using prec_t = double;
/// Default vector of numbers.
using numvec = std::vector<prec_t>;
/// Default vector of indices.
using indvec = std::vector<long>;

/// Tolerance used when checking that probability rows sum to one.
/// Rows outside this tolerance are rejected, never renormalized.
constexpr prec_t STOCHASTIC_TOL = 1e-12;

/**
 * Raised when a model (kernel, reward, policy, uncertainty spec) violates
 * one of its structural invariants. Carries the first offending state and
 * action when they are known (-1 otherwise).
 */
class ModelError : public std::runtime_error {
public:
    ModelError(const std::string& message, long state = -1, long action = -1)
        : std::runtime_error(format(message, state, action)), state(state), action(action) {}

    long state;
    long action;

private:
    static std::string format(const std::string& message, long state, long action) {
        std::string out = message;
        if (state >= 0) out += " (state " + std::to_string(state);
        if (state >= 0 && action >= 0) out += ", action " + std::to_string(action);
        if (state >= 0) out += ")";
        return out;
    }
};

/**
 * Dense row-major matrix of doubles. This is deliberately minimal; the
 * library works with full kernels and sweeps them densely.
 */
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(long rows, long cols, prec_t fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows * cols), fill) {}
    Matrix(long rows, long cols, numvec data) : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (static_cast<long>(data_.size()) != rows_ * cols_)
            throw ModelError("matrix data size does not match its dimensions");
    }

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    prec_t& operator()(long r, long c) { return data_[static_cast<size_t>(r * cols_ + c)]; }
    prec_t operator()(long r, long c) const { return data_[static_cast<size_t>(r * cols_ + c)]; }

    std::span<const prec_t> row(long r) const {
        return {data_.data() + r * cols_, static_cast<size_t>(cols_)};
    }
    std::span<prec_t> row(long r) { return {data_.data() + r * cols_, static_cast<size_t>(cols_)}; }

    const numvec& data() const { return data_; }
    numvec& data() { return data_; }

private:
    long rows_, cols_;
    numvec data_;
};

/**
 * Index of an Lp norm. The three closed-form cases (1, 2, infinity) are
 * tagged explicitly so callers can dispatch to exact formulas; every other
 * exponent is carried as Finite(r) with r > 1 and handled by binary search.
 *
 * The Holder conjugate is total: 1 <-> infinity, 2 <-> 2, and
 * Finite(r) <-> Finite(r/(r-1)).
 */
class NormIndex {
public:
    enum class Kind { One, Two, Infinity, Finite };

    static NormIndex one() { return NormIndex(Kind::One, 1.0); }
    static NormIndex two() { return NormIndex(Kind::Two, 2.0); }
    static NormIndex infinity() { return NormIndex(Kind::Infinity, std::numeric_limits<prec_t>::infinity()); }

    /// General exponent; requires r > 1. Exact 1.0/2.0/inf collapse to the
    /// tagged closed-form cases.
    static NormIndex finite(prec_t r) {
        if (!(r > 1.0)) throw std::invalid_argument("norm exponent must be > 1 (use one() for p=1)");
        if (r == 2.0) return two();
        if (std::isinf(r)) return infinity();
        return NormIndex(Kind::Finite, r);
    }

    /// Parses "1", "2", "inf", "infinity" or a decimal exponent.
    static NormIndex parse(const std::string& text);

    Kind kind() const { return kind_; }
    /// Numeric exponent; +infinity for the max norm.
    prec_t value() const { return value_; }

    NormIndex conjugate() const {
        switch (kind_) {
        case Kind::One: return infinity();
        case Kind::Infinity: return one();
        case Kind::Two: return two();
        case Kind::Finite: return finite(value_ / (value_ - 1.0));
        }
        throw std::logic_error("unreachable");
    }

    std::string to_string() const;

    bool operator==(const NormIndex& other) const {
        return kind_ == other.kind_ && (kind_ != Kind::Finite || value_ == other.value_);
    }

private:
    NormIndex(Kind kind, prec_t value) : kind_(kind), value_(value) {}
    Kind kind_;
    prec_t value_;
};

/// Free-function spelling of NormIndex::conjugate.
inline NormIndex holder_conjugate(NormIndex p) { return p.conjugate(); }

/// Lp norm of a vector for any NormIndex.
prec_t lp_norm(std::span<const prec_t> v, NormIndex p);

/// Sup-norm distance between two vectors of equal length.
prec_t linf_distance(const numvec& u, const numvec& v);

// forward declarations for the aliases below
using ValueFunction = numvec;
using QFunction = Matrix;
using StochasticPolicy = Matrix;

/**
 * A finite discounted MDP: nominal kernel, nominal reward, discount and an
 * optional initial distribution (uniform when not given).
 *
 * The kernel is stored flat with layout [s][a][s']; rows are full
 * distributions over next states.
 */
struct MdpInstance {
    long num_states = 0;
    long num_actions = 0;
    prec_t discount = 0.0;
    numvec kernel;       // size S*A*S, kernel[(s*A + a)*S + s']
    Matrix reward;       // S x A
    numvec initial_dist; // size S; empty means uniform

    MdpInstance() = default;
    MdpInstance(long S, long A, prec_t gamma)
        : num_states(S), num_actions(A), discount(gamma),
          kernel(static_cast<size_t>(S * A * S), 0.0), reward(S, A, 0.0) {}

    std::span<const prec_t> kernel_row(long s, long a) const {
        return {kernel.data() + (s * num_actions + a) * num_states,
                static_cast<size_t>(num_states)};
    }
    std::span<prec_t> kernel_row(long s, long a) {
        return {kernel.data() + (s * num_actions + a) * num_states,
                static_cast<size_t>(num_states)};
    }
};

/**
 * Validates all structural invariants of an instance: consistent
 * dimensions, stochastic kernel rows (sum within STOCHASTIC_TOL of one,
 * no negative entries), discount strictly below one, finite rewards.
 * Reports the first offending state-action pair. Throws ModelError.
 */
void validate_mdp(const MdpInstance& inst);

/**
 * Assembles the Q-function at a value vector:
 * Q(s,a) = R0(s,a) + gamma * sum_{s'} P0(s'|s,a) v(s').
 */
QFunction q_from_value(const MdpInstance& inst, const numvec& v);

/**
 * Generates a random instance: kernel rows drawn from a symmetric
 * Dirichlet with unit concentration, rewards uniform in [0, reward_scale].
 * Fully deterministic given the seed (the sampler does not rely on
 * implementation-defined distributions).
 */
MdpInstance random_instance(long num_states, long num_actions, std::uint64_t seed,
                            prec_t reward_scale = 1.0);

/// Validates that a policy matrix is row-stochastic within STOCHASTIC_TOL.
void validate_policy(const StochasticPolicy& policy);

/// How the uncertainty set decomposes.
enum class Rectangularity { NonRobust, SA, S };

std::string to_string(Rectangularity rect);

/**
 * An Lp-constrained uncertainty set around the nominal model.
 *
 * SA: alpha and beta are S x A reward/kernel radii, one ball per
 * state-action pair. S: alpha and beta are S x 1, one joint ball per
 * state. NonRobust: both empty.
 *
 * `forbidden` optionally marks next states whose nominal probability is
 * exactly zero and that kernel noise must also avoid; layout is
 * [s][a][s'] (size S*A*S) for SA and [s][s'] (size S*S) for S. Empty
 * means no restriction.
 */
struct UncertaintySpec {
    Rectangularity rect = Rectangularity::NonRobust;
    NormIndex p = NormIndex::two();
    Matrix alpha; // SA: S x A, S: S x 1, NonRobust: empty
    Matrix beta;
    std::vector<std::uint8_t> forbidden;

    static UncertaintySpec nonrobust() { return UncertaintySpec{}; }

    static UncertaintySpec sa(NormIndex p, Matrix alpha, Matrix beta) {
        UncertaintySpec unc;
        unc.rect = Rectangularity::SA;
        unc.p = p;
        unc.alpha = std::move(alpha);
        unc.beta = std::move(beta);
        return unc;
    }

    static UncertaintySpec sa_uniform(long S, long A, NormIndex p, prec_t alpha, prec_t beta) {
        return sa(p, Matrix(S, A, alpha), Matrix(S, A, beta));
    }

    static UncertaintySpec s(NormIndex p, numvec alpha, numvec beta) {
        UncertaintySpec unc;
        unc.rect = Rectangularity::S;
        unc.p = p;
        const long na = static_cast<long>(alpha.size());
        const long nb = static_cast<long>(beta.size());
        unc.alpha = Matrix(na, 1, std::move(alpha));
        unc.beta = Matrix(nb, 1, std::move(beta));
        return unc;
    }

    static UncertaintySpec s_uniform(long S, NormIndex p, prec_t alpha, prec_t beta) {
        return s(p, numvec(static_cast<size_t>(S), alpha), numvec(static_cast<size_t>(S), beta));
    }
};

/**
 * Validates an uncertainty spec against an instance: radius shapes match
 * the rectangularity, radii are nonnegative, and the forbidden mask only
 * marks transitions whose nominal probability is exactly zero (for the
 * S-rectangular case, zero under every action). Throws ModelError.
 */
void validate_uncertainty(const MdpInstance& inst, const UncertaintySpec& unc);

/**
 * Counts kernel-radius entries that exceed the smallest nonzero nominal
 * mass of the rows they perturb. For such radii the Lp noise ball
 * contains signed kernels; the operators remain well defined but the
 * worst case is taken over a set larger than the simplex.
 */
long count_infeasible_radii(const MdpInstance& inst, const UncertaintySpec& unc);

} // namespace robustmdp
