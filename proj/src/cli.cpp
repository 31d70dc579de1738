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

#include "robustmdp/cli.hpp"

#include "robustmdp/bench.hpp"
#include "robustmdp/json_io.hpp"
#include "robustmdp/oracle.hpp"
#include "robustmdp/rng.hpp"
#include "robustmdp/solver.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

namespace robustmdp {

namespace {

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ModelError("cannot write file: " + path);
    out << text;
}

UncertaintySpec spec_from_flags(long S, long A, const std::string& rect, const std::string& p,
                                prec_t alpha, prec_t beta) {
    if (rect == "none") {
        if (alpha != 0.0 || beta != 0.0)
            throw ModelError("--rect none does not take nonzero radii");
        return UncertaintySpec::nonrobust();
    }
    NormIndex norm = NormIndex::parse(p);
    if (rect == "sa") return UncertaintySpec::sa_uniform(S, A, norm, alpha, beta);
    if (rect == "s") return UncertaintySpec::s_uniform(S, norm, alpha, beta);
    throw ModelError("unknown rectangularity '" + rect + "' (expected none, sa or s)");
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// ---------------------------------------------------------------------------
// oracle-check: cross-checks the closed-form kernels against the
// brute-force references and emits one CSV row per comparison.
// ---------------------------------------------------------------------------

struct CheckTable {
    std::string csv = "check,case,p,observed,bound,pass\n";
    bool all_pass = true;

    void add(const std::string& check, const std::string& id, const std::string& p,
             prec_t observed, prec_t bound) {
        bool pass = observed <= bound;
        all_pass = all_pass && pass;
        char buffer[256];
        std::snprintf(buffer, sizeof(buffer), "%s,%s,%s,%.6g,%.6g,%d\n", check.c_str(), id.c_str(),
                      p.c_str(), observed, bound, pass ? 1 : 0);
        csv += buffer;
    }
};

int run_oracle_check(std::uint64_t seed, prec_t grid_step, long samples, long trials,
                     const std::string& out_path) {
    std::mt19937_64 gen(seed);
    CheckTable table;

    const std::vector<NormIndex> kappa_ps = {NormIndex::one(), NormIndex::finite(1.5),
                                             NormIndex::two(), NormIndex::finite(3.0),
                                             NormIndex::infinity()};
    oracle::OracleConfig grid_cfg;
    grid_cfg.grid_step = grid_step;
    for (long t = 0; t < trials; ++t) {
        long n = 2 + rng::below(gen, 7);
        numvec v(static_cast<size_t>(n));
        for (prec_t& x : v) x = rng::uniform(gen, -10.0, 10.0);
        for (const NormIndex& p : kappa_ps) {
            prec_t exact = p_mean(v, p, 1e-10).kappa;
            prec_t grid = oracle::kappa_grid(v, p, grid_cfg);
            table.add("kappa_vs_grid", "v" + std::to_string(t), p.to_string(),
                      std::abs(exact - grid), std::max(1e-3, 2.0 * n * grid_step));
        }
    }

    const std::vector<NormIndex> fill_ps = {NormIndex::one(), NormIndex::two(),
                                            NormIndex::finite(2.5), NormIndex::infinity()};
    oracle::OracleConfig fill_cfg;
    fill_cfg.grid_step = 1e-3;
    for (long t = 0; t < trials; ++t) {
        long A = 2 + rng::below(gen, 2);
        numvec b(static_cast<size_t>(A));
        for (prec_t& x : b) x = rng::uniform(gen, -2.0, 3.0);
        prec_t sigma = rng::uniform(gen, 0.05, 1.5);
        for (const NormIndex& p : fill_ps) {
            WaterFillResult fill = water_fill(b, sigma, p, 1e-10);
            prec_t grid = oracle::waterfill_grid(b, sigma, holder_conjugate(p), fill_cfg);
            table.add("waterfill_vs_grid", "b" + std::to_string(t), p.to_string(),
                      std::abs(fill.zeta - grid), 5e-3);
        }
    }

    oracle::OracleConfig noise_cfg;
    noise_cfg.noise_samples = samples;
    noise_cfg.seed = seed;
    const std::vector<NormIndex> noise_ps = {NormIndex::one(), NormIndex::two(),
                                             NormIndex::infinity()};
    for (long t = 0; t < trials; ++t) {
        MdpInstance inst = random_instance(3, 2, seed + 131 * static_cast<std::uint64_t>(t));
        numvec v(3);
        for (prec_t& x : v) x = rng::uniform(gen, 0.0, 1.0);
        StochasticPolicy policy(3, 2, 0.5);
        prec_t alpha = rng::uniform(gen, 0.0, 0.3);
        prec_t beta = rng::uniform(gen, 0.0, 0.3);
        for (const NormIndex& p : noise_ps) {
            UncertaintySpec sa = UncertaintySpec::sa_uniform(3, 2, p, alpha, beta);
            BellmanContext ctx = make_context(inst, sa, v);
            prec_t closed = bellman_sa_policy(ctx, policy, v)[0];
            prec_t sampled = oracle::inner_min_sampled(inst, sa, policy, v, 0, noise_cfg);
            table.add("inner_min_soundness", "sa" + std::to_string(t), p.to_string(),
                      closed - sampled, 1e-9);

            UncertaintySpec srect = UncertaintySpec::s_uniform(3, p, alpha, beta);
            BellmanContext ctx_s = make_context(inst, srect, v);
            prec_t closed_s = bellman_s_policy(ctx_s, policy, v)[0];
            prec_t sampled_s = oracle::inner_min_sampled(inst, srect, policy, v, 0, noise_cfg);
            table.add("inner_min_soundness", "s" + std::to_string(t), p.to_string(),
                      closed_s - sampled_s, 1e-9);
        }
    }

    {
        MdpInstance inst = random_instance(5, 3, seed + 17);
        SolveConfig cfg;
        cfg.epsilon = 1e-9;
        SolveReport report = value_iteration(inst, UncertaintySpec::nonrobust(), cfg);
        oracle::OracleConfig vi_cfg;
        vi_cfg.vi_epsilon = 1e-9;
        numvec reference = oracle::vi_reference(inst, vi_cfg);
        table.add("vi_vs_reference", "random", "-", linf_distance(report.value, reference), 1e-8);
    }

    emit(table.csv, out_path);
    return table.all_pass ? 0 : 1;
}

} // namespace

int cli_main(const std::vector<std::string>& args) {
    int default_threads = 1;
    int env_threads = -1;
    if (const char* env = std::getenv("ROBUSTMDP_THREADS")) {
        int parsed = std::atoi(env);
        if (parsed >= 1) {
            default_threads = parsed;
            env_threads = parsed;
        }
    }

    CLI::App app{"robust MDP solver, policy evaluator and benchmark harness"};
    app.require_subcommand(1);

    // --- gen ---------------------------------------------------------------
    auto* gen_cmd = app.add_subcommand("gen", "generate a random instance as JSON");
    long gen_states = 2, gen_actions = 2;
    std::uint64_t gen_seed = 0;
    prec_t gen_scale = 1.0, gen_gamma = 0.9;
    std::string gen_out;
    gen_cmd->add_option("--S", gen_states, "number of states")->required();
    gen_cmd->add_option("--A", gen_actions, "number of actions")->required();
    gen_cmd->add_option("--seed", gen_seed, "RNG seed");
    gen_cmd->add_option("--reward-scale", gen_scale, "rewards are uniform in [0, scale]");
    gen_cmd->add_option("--gamma", gen_gamma, "discount factor");
    gen_cmd->add_option("-o,--output", gen_out, "output path (default stdout)");

    // --- shared uncertainty flags -------------------------------------------
    struct UncFlags {
        std::string rect = "none";
        std::string p = "2";
        prec_t alpha = 0.0;
        prec_t beta = 0.0;
    };
    auto add_unc_flags = [](CLI::App* cmd, UncFlags& flags) {
        cmd->add_option("--rect", flags.rect, "rectangularity: none, sa or s")->required();
        cmd->add_option("--p", flags.p, "norm index: 1, 2, inf or a real > 1");
        cmd->add_option("--alpha", flags.alpha, "uniform reward radius");
        cmd->add_option("--beta", flags.beta, "uniform kernel radius");
    };

    // --- solve ---------------------------------------------------------------
    auto* solve_cmd = app.add_subcommand("solve", "compute the optimal robust value and policy");
    std::string solve_instance, solve_out;
    UncFlags solve_unc;
    prec_t solve_eps = 1e-6;
    long solve_max_iters = 100000;
    int solve_threads = default_threads;
    solve_cmd->add_option("instance", solve_instance, "instance JSON file")->required();
    add_unc_flags(solve_cmd, solve_unc);
    solve_cmd->add_option("--epsilon", solve_eps, "target sup-norm accuracy");
    solve_cmd->add_option("--max-iters", solve_max_iters, "iteration cap");
    solve_cmd->add_option("--threads", solve_threads, "sweep fan-out workers");
    solve_cmd->add_option("-o,--output", solve_out, "output path (default stdout)");

    // --- eval ----------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "robust value of a given policy");
    std::string eval_instance, eval_policy, eval_out;
    UncFlags eval_unc;
    prec_t eval_eps = 1e-6;
    int eval_threads = default_threads;
    eval_cmd->add_option("instance", eval_instance, "instance JSON file")->required();
    eval_cmd->add_option("--policy", eval_policy, "policy JSON file")->required();
    add_unc_flags(eval_cmd, eval_unc);
    eval_cmd->add_option("--epsilon", eval_eps, "target sup-norm accuracy");
    eval_cmd->add_option("--threads", eval_threads, "sweep fan-out workers");
    eval_cmd->add_option("-o,--output", eval_out, "output path (default stdout)");

    // --- bench ---------------------------------------------------------------
    auto* bench_cmd = app.add_subcommand("bench", "relative-cost benchmark from a TOML plan");
    std::string bench_spec_path, bench_out;
    int bench_threads = 0; // 0 = honor the plan / env default
    bench_cmd->add_option("spec", bench_spec_path, "bench plan TOML file")->required();
    bench_cmd->add_option("--threads", bench_threads, "override worker count");
    bench_cmd->add_option("-o,--output", bench_out, "output CSV path (default stdout)");

    // --- oracle-check ----------------------------------------------------------
    auto* check_cmd = app.add_subcommand("oracle-check", "cross-check kernels against brute force");
    std::uint64_t check_seed = 0;
    prec_t check_step = 1e-5;
    long check_samples = 20000, check_trials = 10;
    std::string check_out;
    check_cmd->add_option("--seed", check_seed, "RNG seed");
    check_cmd->add_option("--grid-step", check_step, "kappa grid resolution");
    check_cmd->add_option("--samples", check_samples, "noise samples per comparison");
    check_cmd->add_option("--trials", check_trials, "random cases per check");
    check_cmd->add_option("-o,--output", check_out, "output CSV path (default stdout)");

    std::vector<const char*> argv;
    argv.push_back("robustmdp");
    for (const std::string& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen_cmd->parsed()) {
            MdpInstance inst = random_instance(gen_states, gen_actions, gen_seed, gen_scale);
            inst.discount = gen_gamma;
            validate_mdp(inst);
            emit(instance_to_json(inst), gen_out);
            return 0;
        }
        if (solve_cmd->parsed()) {
            MdpInstance inst = load_instance(solve_instance);
            UncertaintySpec unc = spec_from_flags(inst.num_states, inst.num_actions,
                                                  solve_unc.rect, solve_unc.p, solve_unc.alpha,
                                                  solve_unc.beta);
            SolveConfig cfg;
            cfg.epsilon = solve_eps;
            cfg.max_iters = solve_max_iters;
            cfg.threads = solve_threads;
            SolveReport report = value_iteration(inst, unc, cfg);
            if (!report.converged) {
                std::cerr << "robustmdp: did not converge after " << report.iterations
                          << " iterations (last residual " << report.last_residual << ")\n";
                return 2;
            }
            emit(report_to_json(inst, unc, report), solve_out);
            return 0;
        }
        if (eval_cmd->parsed()) {
            MdpInstance inst = load_instance(eval_instance);
            StochasticPolicy policy = load_policy(eval_policy, inst.num_states, inst.num_actions);
            UncertaintySpec unc = spec_from_flags(inst.num_states, inst.num_actions, eval_unc.rect,
                                                  eval_unc.p, eval_unc.alpha, eval_unc.beta);
            SolveConfig cfg;
            cfg.epsilon = eval_eps;
            cfg.threads = eval_threads;
            SolveReport report = evaluate_policy(inst, unc, policy, cfg);
            if (!report.converged) {
                std::cerr << "robustmdp: policy evaluation did not converge (last residual "
                          << report.last_residual << ")\n";
                return 2;
            }
            emit(report_to_json(inst, unc, report), eval_out);
            return 0;
        }
        if (bench_cmd->parsed()) {
            BenchSpec spec = parse_bench_toml(read_text(bench_spec_path));
            if (env_threads >= 1) spec.threads = env_threads;
            if (bench_threads >= 1) spec.threads = bench_threads; // flag wins over env

            std::vector<BenchRow> rows = run_bench(spec);
            emit(bench_csv(rows), bench_out);
            return 0;
        }
        if (check_cmd->parsed())
            return run_oracle_check(check_seed, check_step, check_samples, check_trials,
                                    check_out);
    } catch (const ModelError& e) {
        std::cerr << "robustmdp: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "robustmdp: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "robustmdp: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace robustmdp
