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

#include "robustmdp/bench.hpp"

#include "robustmdp/bellman.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <variant>

namespace robustmdp {

BenchSetting BenchSetting::parse(const std::string& text) {
    BenchSetting setting;
    setting.id = text;
    if (text == "nonrobust" || text == "nr" || text == "none") {
        setting.rect = Rectangularity::NonRobust;
        setting.id = "nonrobust";
        return setting;
    }
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("bad setting '" + text + "', expected rect:p");
    std::string rect = text.substr(0, colon);
    setting.p = NormIndex::parse(text.substr(colon + 1));
    if (rect == "sa")
        setting.rect = Rectangularity::SA;
    else if (rect == "s")
        setting.rect = Rectangularity::S;
    else
        throw std::invalid_argument("bad rectangularity '" + rect + "' in setting '" + text + "'");
    return setting;
}

// ---------------------------------------------------------------------------
// Minimal TOML subset: '#' comments, and single-line `key = value` pairs
// where value is an integer, float, string, or (nested) array thereof.
// ---------------------------------------------------------------------------

namespace {

struct TomlValue {
    std::variant<long long, prec_t, std::string, std::vector<TomlValue>> data;

    bool is_int() const { return std::holds_alternative<long long>(data); }
    bool is_number() const { return is_int() || std::holds_alternative<prec_t>(data); }
    prec_t number() const {
        return is_int() ? static_cast<prec_t>(std::get<long long>(data)) : std::get<prec_t>(data);
    }
    long long integer() const { return std::get<long long>(data); }
    const std::string& str() const { return std::get<std::string>(data); }
    const std::vector<TomlValue>& array() const { return std::get<std::vector<TomlValue>>(data); }
    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_array() const { return std::holds_alternative<std::vector<TomlValue>>(data); }
};

struct TomlParser {
    std::string_view text;
    size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    [[noreturn]] void fail(const std::string& why) {
        throw std::invalid_argument("TOML parse error: " + why);
    }

    TomlValue parse_value() {
        skip_space();
        if (pos >= text.size()) fail("missing value");
        char c = text[pos];
        if (c == '[') {
            ++pos;
            std::vector<TomlValue> items;
            skip_space();
            if (pos < text.size() && text[pos] == ']') {
                ++pos;
                return TomlValue{items};
            }
            while (true) {
                items.push_back(parse_value());
                skip_space();
                if (pos >= text.size()) fail("unterminated array");
                if (text[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (text[pos] == ']') {
                    ++pos;
                    return TomlValue{items};
                }
                fail("expected ',' or ']' in array");
            }
        }
        if (c == '"') {
            ++pos;
            std::string out;
            while (pos < text.size() && text[pos] != '"') out.push_back(text[pos++]);
            if (pos >= text.size()) fail("unterminated string");
            ++pos;
            return TomlValue{out};
        }
        // bare number
        size_t start = pos;
        bool is_float = false;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '+' ||
                text[pos] == '-' || text[pos] == '.' || text[pos] == 'e' || text[pos] == 'E' ||
                text[pos] == '_')) {
            if (text[pos] == '.' || text[pos] == 'e' || text[pos] == 'E') is_float = true;
            ++pos;
        }
        if (pos == start) fail(std::string("unexpected character '") + c + "'");
        std::string token(text.substr(start, pos - start));
        token.erase(std::remove(token.begin(), token.end(), '_'), token.end());
        try {
            if (is_float) return TomlValue{std::stod(token)};
            return TomlValue{static_cast<long long>(std::stoll(token))};
        } catch (const std::exception&) { fail("bad number '" + token + "'"); }
    }
};

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

long long as_count(const TomlValue& v, const char* key) {
    if (!v.is_int()) throw std::invalid_argument(std::string(key) + " must be an integer");
    return v.integer();
}

} // namespace

BenchSpec parse_bench_toml(const std::string& text) {
    BenchSpec spec;
    std::istringstream lines(text);
    std::string raw;
    while (std::getline(lines, raw)) {
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("TOML parse error: expected key = value in '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        TomlParser parser{line, eq + 1};
        TomlValue value = parser.parse_value();
        parser.skip_space();
        if (parser.pos != line.size())
            throw std::invalid_argument("TOML parse error: trailing content in '" + line + "'");

        if (key == "sizes") {
            if (!value.is_array()) throw std::invalid_argument("sizes must be an array of [S, A]");
            for (const TomlValue& pair : value.array()) {
                if (!pair.is_array() || pair.array().size() != 2)
                    throw std::invalid_argument("each size must be a [S, A] pair");
                spec.sizes.emplace_back(as_count(pair.array()[0], "S"),
                                        as_count(pair.array()[1], "A"));
            }
        } else if (key == "settings") {
            if (!value.is_array()) throw std::invalid_argument("settings must be an array");
            for (const TomlValue& item : value.array()) {
                if (!item.is_string())
                    throw std::invalid_argument("settings entries must be strings");
                spec.settings.push_back(BenchSetting::parse(item.str()));
            }
        } else if (key == "repeats") {
            spec.repeats = as_count(value, "repeats");
        } else if (key == "iters") {
            spec.iters = as_count(value, "iters");
        } else if (key == "seed") {
            spec.seed = static_cast<std::uint64_t>(as_count(value, "seed"));
        } else if (key == "threads") {
            spec.threads = static_cast<int>(as_count(value, "threads"));
        } else if (key == "gamma") {
            if (!value.is_number()) throw std::invalid_argument("gamma must be a number");
            spec.gamma = value.number();
        } else if (key == "radii") {
            if (!value.is_number()) throw std::invalid_argument("radii must be a number");
            spec.radii = value.number();
        } else {
            throw std::invalid_argument("unknown key '" + key + "' in bench spec");
        }
    }
    return spec;
}

namespace {

using clock_t_ = std::chrono::steady_clock;

UncertaintySpec setting_spec(const BenchSetting& setting, long S, long A, prec_t radii) {
    switch (setting.rect) {
    case Rectangularity::NonRobust: return UncertaintySpec::nonrobust();
    case Rectangularity::SA: return UncertaintySpec::sa_uniform(S, A, setting.p, radii, radii);
    case Rectangularity::S: return UncertaintySpec::s_uniform(S, setting.p, radii, radii);
    }
    return UncertaintySpec::nonrobust();
}

struct TimedSetting {
    prec_t seconds_per_iter = 0.0;
    prec_t residual_ratio = 0.0;
};

// Runs `iters` sweeps of the optimal operator from v = 0, `repeats` times,
// and keeps the median per-sweep time. Residuals come from the first
// repeat; the ratio is the geometric mean over the trailing 20 steps.
TimedSetting time_setting(const MdpInstance& inst, const UncertaintySpec& unc,
                          const BenchSpec& spec) {
    const prec_t inner_tol = 1e-5; // binary-search tolerance for general p
    numvec per_repeat;
    numvec residuals;
    for (long rep = 0; rep < spec.repeats; ++rep) {
        numvec v(static_cast<size_t>(inst.num_states), 0.0);
        auto start = clock_t_::now();
        for (long iter = 0; iter < spec.iters; ++iter) {
            BellmanContext ctx = make_context(inst, unc, v, inner_tol, spec.threads);
            QFunction q = q_from_value(inst, v);
            numvec next;
            switch (unc.rect) {
            case Rectangularity::NonRobust: next = opt_nonrobust_from_q(q); break;
            case Rectangularity::SA: next = sa_opt_from_q(ctx, q); break;
            case Rectangularity::S: next = s_opt_from_q(ctx, q).value; break;
            }
            if (rep == 0) residuals.push_back(linf_distance(next, v));
            v = std::move(next);
        }
        prec_t elapsed = std::chrono::duration<prec_t>(clock_t_::now() - start).count();
        per_repeat.push_back(elapsed / static_cast<prec_t>(spec.iters));
    }
    std::sort(per_repeat.begin(), per_repeat.end());
    TimedSetting out;
    out.seconds_per_iter = per_repeat[per_repeat.size() / 2];

    const long n = static_cast<long>(residuals.size());
    const long window = std::min<long>(20, n - 1);
    if (window >= 1 && residuals[n - 1 - window] > 0.0 && residuals[n - 1] > 0.0)
        out.residual_ratio =
            std::pow(residuals[n - 1] / residuals[n - 1 - window], 1.0 / window);
    return out;
}

} // namespace

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
    if (spec.sizes.empty() || spec.settings.empty())
        throw std::invalid_argument("bench spec needs at least one size and one setting");
    if (spec.repeats < 3) throw std::invalid_argument("bench needs repeats >= 3");
    if (spec.iters < 10) throw std::invalid_argument("bench needs iters >= 10");
    if (!(spec.gamma >= 0.0 && spec.gamma < 1.0))
        throw std::invalid_argument("bench gamma must lie in [0, 1)");
    if (!(spec.radii >= 0.0)) throw std::invalid_argument("bench radii must be nonnegative");

    std::vector<BenchRow> rows;
    for (size_t size_idx = 0; size_idx < spec.sizes.size(); ++size_idx) {
        const auto [S, A] = spec.sizes[size_idx];
        MdpInstance inst =
            random_instance(S, A, spec.seed + 7919 * static_cast<std::uint64_t>(size_idx));
        inst.discount = spec.gamma;

        // every size gets a non-robust baseline, listed or not
        TimedSetting base = time_setting(inst, UncertaintySpec::nonrobust(), spec);
        for (const BenchSetting& setting : spec.settings) {
            TimedSetting timed = setting.rect == Rectangularity::NonRobust
                                     ? base
                                     : time_setting(inst, setting_spec(setting, S, A, spec.radii),
                                                    spec);
            BenchRow row;
            row.setting = setting.id;
            row.num_states = S;
            row.num_actions = A;
            row.ms_per_iter = 1000.0 * timed.seconds_per_iter;
            row.relative_cost = setting.rect == Rectangularity::NonRobust
                                    ? 1.0
                                    : timed.seconds_per_iter / base.seconds_per_iter;
            row.residual_ratio = timed.residual_ratio;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "setting,S,A,ms_per_iter,relative_cost,residual_ratio\n";
    char buffer[256];
    for (const BenchRow& row : rows) {
        std::snprintf(buffer, sizeof(buffer), "%s,%ld,%ld,%.6g,%.6g,%.6g\n", row.setting.c_str(),
                      row.num_states, row.num_actions, row.ms_per_iter, row.relative_cost,
                      row.residual_ratio);
        out += buffer;
    }
    return out;
}

} // namespace robustmdp
