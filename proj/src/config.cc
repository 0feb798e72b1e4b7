// Copyright 2026 The spssvs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spssvs/config.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "spssvs/format.h"

namespace spssvs {

namespace {

[[noreturn]] void bad(const std::string &message) {
    throw Error(ErrorKind::InvalidArgument, message);
}

std::string trim(const std::string &s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

long long parse_count(const std::string &text) {
    std::string t = trim(text);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        bad("expected an integer, got '" + text + "'");
    }
    return v;
}

}  // namespace

double parse_real(const std::string &text) {
    std::string t = trim(text);
    if (t.empty()) {
        bad("empty number");
    }
    size_t pos = 0;
    double sign = 1;
    if (t[pos] == '+' || t[pos] == '-') {
        sign = t[pos] == '-' ? -1 : 1;
        ++pos;
    }
    double value = 1;
    bool have_factor = false;
    char pending = '*';
    while (pos < t.size()) {
        double factor = 0;
        if (t.compare(pos, 2, "pi") == 0) {
            factor = std::numbers::pi;
            pos += 2;
        } else {
            const char *begin = t.data() + pos;
            auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), factor);
            if (ec != std::errc() || ptr == begin) {
                bad("cannot parse number '" + text + "'");
            }
            pos += static_cast<size_t>(ptr - begin);
        }
        value = (pending == '*') ? value * factor : value / factor;
        have_factor = true;
        if (pos >= t.size()) {
            break;
        }
        if (t[pos] == '*' || t[pos] == '/') {
            pending = t[pos];
            ++pos;
            if (pos >= t.size()) {
                bad("dangling operator in '" + text + "'");
            }
        } else if (t.compare(pos, 2, "pi") == 0) {
            pending = '*';  // implicit product, as in "8pi"
        } else {
            bad("unexpected character in '" + text + "'");
        }
    }
    if (!have_factor || !std::isfinite(value)) {
        bad("cannot parse number '" + text + "'");
    }
    return sign * value;
}

void MeasurementConfig::validate() const {
    pointer().validate();
    qubit().validate();
    if (!std::isfinite(phi)) {
        bad("phi must be finite");
    }
    if (n_measurements < 1) {
        bad("N must be at least 1");
    }
}

void apply_setting(MeasurementConfig &c, const std::string &key_in, const std::string &value) {
    std::string key = trim(key_in);
    if (key == "r") {
        c.r = parse_real(value);
    } else if (key == "theta") {
        c.theta = parse_real(value);
    } else if (key == "alpha") {
        c.alpha = parse_real(value);
    } else if (key == "delta") {
        c.delta = parse_real(value);
    } else if (key == "s") {
        c.s = parse_real(value);
    } else if (key == "sigma") {
        c.sigma = parse_real(value);
    } else if (key == "phi") {
        c.phi = parse_real(value);
    } else if (key == "N") {
        c.n_measurements = parse_count(value);
        if (c.n_measurements < 1) {
            bad("N must be at least 1");
        }
    } else if (key == "truncation") {
        std::string mode = trim(value);
        if (mode == "adaptive") {
            c.truncation = TruncationPolicy::adaptive(c.truncation.tail_tol, c.truncation.hard_cap);
        } else if (mode == "fixed") {
            int dim = c.truncation.fixed_dim > 0 ? c.truncation.fixed_dim : 64;
            c.truncation = TruncationPolicy::fixed(dim, std::max(dim, c.truncation.hard_cap));
        } else {
            bad("truncation must be 'adaptive' or 'fixed'");
        }
    } else if (key == "dim") {
        int dim = static_cast<int>(parse_count(value));
        c.truncation = TruncationPolicy::fixed(dim, std::max(dim, c.truncation.hard_cap));
    } else if (key == "tail_tol") {
        double tol = parse_real(value);
        if (!(tol > 0)) {
            bad("tail_tol must be positive");
        }
        c.truncation.tail_tol = tol;
    } else if (key == "hard_cap") {
        int cap = static_cast<int>(parse_count(value));
        if (cap < 2) {
            bad("hard_cap must be at least 2");
        }
        c.truncation.hard_cap = cap;
    } else {
        bad("unknown config key '" + key + "'");
    }
}

MeasurementConfig parse_config_text(const std::string &text, MeasurementConfig base) {
    std::string head = trim(text);
    if (!head.empty() && head.front() == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(head);
        } catch (const nlohmann::json::exception &e) {
            bad(std::string("malformed JSON config: ") + e.what());
        }
        const nlohmann::json &cfg = doc.contains("config") ? doc["config"] : doc;
        if (!cfg.is_object()) {
            bad("JSON config must be an object");
        }
        // Mode first so dim/tail_tol land on the right policy.
        if (cfg.contains("truncation")) {
            apply_setting(base, "truncation", cfg["truncation"].get<std::string>());
        }
        for (const auto &[key, value] : cfg.items()) {
            if (key == "truncation") {
                continue;
            }
            apply_setting(base, key, value.is_string() ? value.get<std::string>() : value.dump());
        }
        return base;
    }

    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<std::string, std::string>> entries;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.rfind("#@", 0) == 0) {
            t = trim(t.substr(2));
        } else if (t.empty() || t.front() == '#') {
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos) {
            if (t.find(',') != std::string::npos) {
                continue;
            }
            bad("config line without '=': " + t);
        }
        entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    for (const auto &[key, value] : entries) {
        if (key == "truncation") {
            apply_setting(base, key, value);
        }
    }
    for (const auto &[key, value] : entries) {
        // Echoed metadata that is not part of the config.
        if (key == "truncation" || key == "command" || key == "preset" || key == "backend" || key == "sweep" ||
            key == "curve" || key == "grid" || key == "dim_used") {
            continue;
        }
        apply_setting(base, key, value);
    }
    return base;
}

MeasurementConfig load_config_file(const std::string &path, MeasurementConfig base) {
    std::ifstream in(path);
    if (!in) {
        bad("cannot open config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), base);
}

std::vector<std::pair<std::string, std::string>> config_entries(const MeasurementConfig &c) {
    std::vector<std::pair<std::string, std::string>> out = {
        {"r", format_number(c.r)},
        {"theta", format_number(c.theta)},
        {"alpha", format_number(c.alpha)},
        {"delta", format_number(c.delta)},
        {"s", format_number(c.s)},
        {"sigma", format_number(c.sigma)},
        {"phi", format_number(c.phi)},
        {"N", std::to_string(c.n_measurements)},
    };
    if (c.truncation.mode == TruncationPolicy::Mode::Fixed) {
        out.emplace_back("truncation", "fixed");
        out.emplace_back("dim", std::to_string(c.truncation.fixed_dim));
    } else {
        out.emplace_back("truncation", "adaptive");
        out.emplace_back("tail_tol", format_number(c.truncation.tail_tol));
    }
    out.emplace_back("hard_cap", std::to_string(c.truncation.hard_cap));
    return out;
}

std::string config_echo(const MeasurementConfig &c) {
    std::string out;
    for (const auto &[k, v] : config_entries(c)) {
        out += "#@ " + k + " = " + v + "\n";
    }
    return out;
}

void SweepSpec::validate() const {
    static const char *allowed[] = {"r", "s", "alpha", "theta", "delta", "phi"};
    bool known = false;
    for (const char *a : allowed) {
        known = known || variable == a;
    }
    if (!known) {
        bad("sweep variable must be one of r, s, alpha, theta, delta, phi");
    }
    if (!(start < stop)) {
        bad("sweep needs start < stop");
    }
    if (steps < 2) {
        bad("sweep needs at least 2 steps");
    }
}

double SweepSpec::value(int index) const {
    if (index == steps - 1) {
        return stop;
    }
    return start + (stop - start) * index / (steps - 1);
}

MeasurementConfig SweepSpec::at(const MeasurementConfig &base, int index) const {
    MeasurementConfig c = base;
    apply_setting(c, variable, format_number(value(index)));
    return c;
}

SweepSpec SweepSpec::parse(const std::string &text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) {
        parts.push_back(trim(part));
    }
    if (parts.size() != 4) {
        bad("sweep must look like var:start:stop:steps");
    }
    SweepSpec spec;
    spec.variable = parts[0];
    spec.start = parse_real(parts[1]);
    spec.stop = parse_real(parts[2]);
    spec.steps = static_cast<int>(parse_count(parts[3]));
    spec.validate();
    return spec;
}

std::string SweepSpec::to_string() const {
    return variable + ":" + format_number(start) + ":" + format_number(stop) + ":" + std::to_string(steps);
}

}  // namespace spssvs
