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

#include "robustmdp/solver.hpp"
#include "robustmdp/types.hpp"

#include <string>

namespace robustmdp {

// Instance files are JSON objects with exactly the fields
//   {"S": int, "A": int, "gamma": real, "P0": [[[..]]], "R0": [[..]], "mu": [..]}
// where P0 is indexed [s][a][s'] and mu is optional. Unknown fields are
// rejected. Solution files carry the value, policy and solve diagnostics.

/// Parses an instance from JSON text. Throws ModelError on malformed input.
MdpInstance instance_from_json(const std::string& text);

/// Reads and parses an instance file.
MdpInstance load_instance(const std::string& path);

/// Serializes an instance to JSON text.
std::string instance_to_json(const MdpInstance& inst);

void save_instance(const MdpInstance& inst, const std::string& path);

/// Serializes a solve report (value, policy, chi, iterations, residual).
std::string report_to_json(const MdpInstance& inst, const UncertaintySpec& unc,
                           const SolveReport& report);

void save_report(const MdpInstance& inst, const UncertaintySpec& unc, const SolveReport& report,
                 const std::string& path);

/**
 * Reads a policy from a JSON object holding a "policy" field with an
 * S x A row-stochastic matrix (solution files qualify; other fields are
 * ignored). Throws ModelError on shape or stochasticity violations.
 */
StochasticPolicy load_policy(const std::string& path, long num_states, long num_actions);

} // namespace robustmdp
