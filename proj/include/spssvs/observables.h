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

#include <optional>
#include <string>

#include "spssvs/analytic.h"
#include "spssvs/moments.h"
#include "spssvs/states.h"

namespace spssvs {

/// Quadrature X_phi = (a e^{-i phi} + a^dag e^{i phi}) / sqrt(2).
struct QuadratureSpec {
    double phi = 0;
};

struct QuadratureStats {
    double mean = 0;
    double second_moment = 0;
    double variance = 0;
    /// Oracle variance in [-1e-10, 0) was clamped to zero.
    bool clamped = false;
};

QuadratureStats quadrature_stats(const MomentSet &m, QuadratureSpec spec);

/// S_phi = Var(X_phi) - 1/2; negative means squeezed below vacuum noise.
double squeezing_param(const MomentSet &m, QuadratureSpec spec);

/// Q_m = <a^dag^2 a^2> / <n> - <n>.
double mandel_q(const MomentSet &m);
double mandel_q(const FockVector &state);

/// SNR of postselected vs non-postselected position measurement on the
/// Fock-space states.
analytic::SnrResult snr_oracle(const PointerEnsemble &ensemble, const QubitConfig &q, const PointerParams &params,
                               long long n_measurements, const TruncationPolicy &policy);

struct SnrComparison {
    analytic::SnrResult oracle;
    std::optional<analytic::SnrResult> analytic;
    /// Why the closed form was not evaluated (e.g. pole at r = 0).
    std::string analytic_error;
};

SnrComparison snr_ratio(const QubitConfig &q, const PointerParams &params, long long n_measurements,
                        const TruncationPolicy &policy);

/// |<a|b>|^2 for normalized pure states.
double fidelity(const FockVector &a, const FockVector &b);

}  // namespace spssvs
