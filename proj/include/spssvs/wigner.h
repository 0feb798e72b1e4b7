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

#include <vector>

#include "spssvs/fock.h"
#include "spssvs/moments.h"
#include "spssvs/states.h"

namespace spssvs {

/// Uniform phase-space grid with z = x + i p.
struct PhaseSpaceGrid {
    double x_min = -4;
    double x_max = 4;
    double p_min = -4;
    double p_max = 4;
    int nx = 161;
    int np = 161;

    void validate() const;
    double dx() const {
        return (x_max - x_min) / (nx - 1);
    }
    double dp() const {
        return (p_max - p_min) / (np - 1);
    }
    double x(int i) const {
        return x_min + (x_max - x_min) * i / (nx - 1);
    }
    double p(int j) const {
        return p_min + (p_max - p_min) * j / (np - 1);
    }

    /// [-4,4]^2 at 161^2 for r <= 1, [-6,6]^2 at 241^2 beyond.
    static PhaseSpaceGrid default_for(double r);
    static PhaseSpaceGrid square(double half_width, int points);
};

/// Bound on |W| for any normalized state, plus the tolerance the checks allow.
inline constexpr double kWignerBoundSlack = 1e-6;
double wigner_bound();

/// Values are stored x-major: values[i * np + j] is W(x_i, p_j).
struct WignerField {
    PhaseSpaceGrid grid;
    std::vector<double> values;
    Backend backend = Backend::Oracle;

    double at(int i, int j) const {
        return values[static_cast<size_t>(i) * grid.np + j];
    }
    /// Number of samples with |W| > 2/pi + 1e-6.
    int bound_violations() const;
    double min() const;
    double max() const;
};

/// W(z) = (2/pi) sum_n (-1)^n |<n|D(-z)|state>|^2, evaluated as
/// (2/pi) <state|D(2z) Parity|state>, which needs only the matrix elements
/// inside the truncation.
double wigner_oracle_point(const FockVector &state, double x, double p);

/// Oracle field. Points are independent and assembled by index, so the output
/// does not depend on the degree of parallelism.
WignerField wigner_field(const FockVector &state, const PhaseSpaceGrid &grid);

/// Closed-form field. Samples outside the +-2/pi bound are kept as computed.
WignerField wigner_field_closed(WeakValue w, const PointerParams &params, const PhaseSpaceGrid &grid);

/// Trapezoidal integral of W over the grid.
double field_integral(const WignerField &field);

/// Trapezoidal integral of max(0, -W).
double negativity_volume(const WignerField &field);

struct FieldDifference {
    double max_abs = 0;
    double mean_abs = 0;
    double x_at_max = 0;
    double p_at_max = 0;
};

FieldDifference compare_fields(const WignerField &a, const WignerField &b);

}  // namespace spssvs
