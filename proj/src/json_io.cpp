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

#include "robustmdp/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace robustmdp {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ModelError("cannot write file: " + path);
    out << text;
}

long require_count(const json& j, const char* name) {
    if (!j.contains(name) || !j.at(name).is_number_integer())
        throw ModelError(std::string("field '") + name + "' missing or not an integer");
    long value = j.at(name).get<long>();
    if (value < 1) throw ModelError(std::string("field '") + name + "' must be positive");
    return value;
}

prec_t require_number(const json& j) {
    if (!j.is_number()) throw ModelError("expected a number in the instance file");
    return j.get<prec_t>();
}

} // namespace

MdpInstance instance_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ModelError("instance file must be a JSON object");

    static const char* allowed[] = {"S", "A", "gamma", "P0", "R0", "mu"};
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* name : allowed)
            if (item.key() == name) known = true;
        if (!known) throw ModelError("unknown field '" + item.key() + "' in instance file");
    }

    const long S = require_count(j, "S");
    const long A = require_count(j, "A");
    if (!j.contains("gamma") || !j.at("gamma").is_number())
        throw ModelError("field 'gamma' missing or not a number");

    MdpInstance inst(S, A, j.at("gamma").get<prec_t>());

    if (!j.contains("P0")) throw ModelError("field 'P0' missing");
    const json& p0 = j.at("P0");
    if (!p0.is_array() || static_cast<long>(p0.size()) != S)
        throw ModelError("'P0' must be an array of S state entries");
    for (long s = 0; s < S; ++s) {
        const json& per_action = p0.at(s);
        if (!per_action.is_array() || static_cast<long>(per_action.size()) != A)
            throw ModelError("'P0' rows must hold A action entries", s);
        for (long a = 0; a < A; ++a) {
            const json& row = per_action.at(a);
            if (!row.is_array() || static_cast<long>(row.size()) != S)
                throw ModelError("'P0' action rows must hold S probabilities", s, a);
            auto dest = inst.kernel_row(s, a);
            for (long sn = 0; sn < S; ++sn) dest[sn] = require_number(row.at(sn));
        }
    }

    if (!j.contains("R0")) throw ModelError("field 'R0' missing");
    const json& r0 = j.at("R0");
    if (!r0.is_array() || static_cast<long>(r0.size()) != S)
        throw ModelError("'R0' must be an array of S rows");
    for (long s = 0; s < S; ++s) {
        const json& row = r0.at(s);
        if (!row.is_array() || static_cast<long>(row.size()) != A)
            throw ModelError("'R0' rows must hold A rewards", s);
        for (long a = 0; a < A; ++a) inst.reward(s, a) = require_number(row.at(a));
    }

    if (j.contains("mu")) {
        const json& mu = j.at("mu");
        if (!mu.is_array() || static_cast<long>(mu.size()) != S)
            throw ModelError("'mu' must be an array of S probabilities");
        inst.initial_dist.resize(static_cast<size_t>(S));
        for (long s = 0; s < S; ++s) inst.initial_dist[s] = require_number(mu.at(s));
    }

    validate_mdp(inst);
    return inst;
}

MdpInstance load_instance(const std::string& path) { return instance_from_json(read_file(path)); }

std::string instance_to_json(const MdpInstance& inst) {
    const long S = inst.num_states, A = inst.num_actions;
    json j;
    j["S"] = S;
    j["A"] = A;
    j["gamma"] = inst.discount;
    json p0 = json::array();
    for (long s = 0; s < S; ++s) {
        json per_action = json::array();
        for (long a = 0; a < A; ++a) {
            auto row = inst.kernel_row(s, a);
            per_action.push_back(json(numvec(row.begin(), row.end())));
        }
        p0.push_back(std::move(per_action));
    }
    j["P0"] = std::move(p0);
    json r0 = json::array();
    for (long s = 0; s < S; ++s) {
        numvec row(static_cast<size_t>(A));
        for (long a = 0; a < A; ++a) row[a] = inst.reward(s, a);
        r0.push_back(json(row));
    }
    j["R0"] = std::move(r0);
    if (!inst.initial_dist.empty()) j["mu"] = inst.initial_dist;
    return j.dump(2) + "\n";
}

void save_instance(const MdpInstance& inst, const std::string& path) {
    write_file(path, instance_to_json(inst));
}

std::string report_to_json(const MdpInstance& inst, const UncertaintySpec& unc,
                           const SolveReport& report) {
    json j;
    j["S"] = inst.num_states;
    j["A"] = inst.num_actions;
    j["gamma"] = inst.discount;
    j["rect"] = to_string(unc.rect);
    j["p"] = unc.p.to_string();
    j["value"] = report.value;
    json policy = json::array();
    for (long s = 0; s < report.policy.rows(); ++s) {
        auto row = report.policy.row(s);
        policy.push_back(json(numvec(row.begin(), row.end())));
    }
    j["policy"] = std::move(policy);
    j["chi"] = report.chi_per_state;
    j["iterations"] = report.iterations;
    j["residual"] = report.last_residual;
    j["converged"] = report.converged;
    return j.dump(2) + "\n";
}

void save_report(const MdpInstance& inst, const UncertaintySpec& unc, const SolveReport& report,
                 const std::string& path) {
    write_file(path, report_to_json(inst, unc, report));
}

StochasticPolicy load_policy(const std::string& path, long num_states, long num_actions) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ModelError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("policy"))
        throw ModelError("policy file must be a JSON object with a 'policy' field");
    const json& rows = j.at("policy");
    if (!rows.is_array() || static_cast<long>(rows.size()) != num_states)
        throw ModelError("'policy' must hold one row per state");
    StochasticPolicy policy(num_states, num_actions, 0.0);
    for (long s = 0; s < num_states; ++s) {
        const json& row = rows.at(s);
        if (!row.is_array() || static_cast<long>(row.size()) != num_actions)
            throw ModelError("'policy' rows must hold one weight per action", s);
        for (long a = 0; a < num_actions; ++a) policy(s, a) = require_number(row.at(a));
    }
    validate_policy(policy);
    return policy;
}

} // namespace robustmdp
