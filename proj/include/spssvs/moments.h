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

#include "spssvs/fock.h"

namespace spssvs {

enum class Backend { Analytic, Oracle };

const char *backend_name(Backend b);

/// Low-order field moments of a single-mode state.
struct MomentSet {
    Complex a_mean;
    Complex a_sq_mean;
    double n_mean = 0;
    /// <a^dag^2 a^2>; only the Fock-space backend can provide it.
    std::optional<double> n2_corr;
    Backend backend = Backend::Oracle;
};

/// Moments of a normalized Fock vector, computed from the ladder matrices.
MomentSet oracle_moments(const FockVector &state);

}  // namespace spssvs
