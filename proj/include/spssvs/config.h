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

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spssvs/fock.h"
#include "spssvs/states.h"

namespace spssvs {

/// The full parameter tuple behind every command.
struct MeasurementConfig {
    double r = 0.5;
    double theta = 0;
    double alpha = 1.5707963267948966;
    double delta = 1.5707963267948966;
    double s = 0;
    double sigma = 0.70710678118654752;
    /// Quadrature angle used by the squeezing command.
    double phi = 1.5707963267948966;
    long long n_measurements = 1;
    TruncationPolicy truncation = TruncationPolicy::adaptive();

    PointerParams pointer() const {
        return {r, theta, s, sigma};
    }
    QubitConfig qubit() const {
        return {alpha, delta};
    }
    void validate() const;
};

/// Parses reals with optional pi literals: "0.3", "-1e-3", "pi", "8pi/9",
/// "5*pi/12", "pi/2". Throws InvalidArgument on anything else.
double parse_real(const std::string &text);

/// Sets one field by its config-file key (r, theta, alpha, delta, s, sigma,
/// phi, N, truncation, dim, tail_tol, hard_cap).
void apply_setting(MeasurementConfig &config, const std::string &key, const std::string &value);

/// Flat key = value text. '#' starts a comment except for "#@ key = value"
/// lines, which are the echo format written into output files; CSV data rows
/// (commas, no '=') are skipped so an output file can be fed back in. A JSON
/// document with a top-level "config" object is accepted too.
MeasurementConfig parse_config_text(const std::string &text, MeasurementConfig base = {});

MeasurementConfig load_config_file(const std::string &path, MeasurementConfig base = {});

/// Resolved config as ordered key/value pairs, values at full precision.
std::vector<std::pair<std::string, std::string>> config_entries(const MeasurementConfig &config);

/// "#@ key = value" lines for every entry.
std::string config_echo(const MeasurementConfig &config);

/// One swept variable over an inclusive uniform range.
struct SweepSpec {
    std::string variable;
    double start = 0;
    double stop = 1;
    int steps = 2;

    void validate() const;
    double value(int index) const;
    /// base with the swept variable overwritten by value(index).
    MeasurementConfig at(const MeasurementConfig &base, int index) const;

    /// "var:start:stop:steps", e.g. "s:0:2:41" or "alpha:0:8pi/9:30".
    static SweepSpec parse(const std::string &text);
    std::string to_string() const;
};

}  // namespace spssvs
