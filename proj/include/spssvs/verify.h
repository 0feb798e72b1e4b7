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
#include <vector>

#include "spssvs/config.h"
#include "spssvs/fock.h"
#include "spssvs/moments.h"
#include "spssvs/wigner.h"

namespace spssvs {

struct LatticePoint {
    double r = 0;
    double theta = 0;
    double s = 0;
    double alpha = 0;
    double delta = 0;
};

/// Cartesian product of parameter axes. phi only enters the quadrature
/// bound checks.
struct VerifyLattice {
    std::vector<double> r;
    std::vector<double> s;
    std::vector<double> alpha;
    std::vector<double> delta;
    std::vector<double> theta;
    std::vector<double> phi;

    /// r {0.3, 0.5, 1}, s {0, 0.1, 0.5, 1}, alpha {0, pi/2, 8pi/9},
    /// delta {0, pi/2}, theta {0, 5pi/12}, phi {0, pi/2}.
    static VerifyLattice standard();
    /// Single point from base with one axis replaced by the sweep.
    static VerifyLattice from_sweep(const MeasurementConfig &base, const SweepSpec &sweep);

    void validate() const;
    /// Points in r, theta, s, alpha, delta order (last index fastest).
    std::vector<LatticePoint> points() const;
    size_t bound_points() const {
        return points().size() * phi.size();
    }
};

struct VerifyOptions {
    TruncationPolicy policy = TruncationPolicy::adaptive();
    /// Largest change of any oracle scalar allowed under dimension doubling.
    double convergence_tol = 1e-8;
    /// Doubling stops here with TruncationInsufficient.
    int max_dim = 4096;
    PhaseSpaceGrid wigner_grid = PhaseSpaceGrid::square(4, 41);
};

/// Formula identifiers covered by the report, in report order.
const std::vector<std::string> &formula_ids();

struct DiscrepancyRecord {
    std::string formula_id;
    LatticePoint point;
    Complex analytic;
    Complex oracle;
    double abs_err = 0;
    /// abs_err / max(|oracle|, 1).
    double rel_err = 0;
    int dim = 0;
    /// Field records only: location of the largest pointwise difference and
    /// the mean difference over the grid.
    std::optional<double> x;
    std::optional<double> p;
    std::optional<double> mean_abs;
};

struct FormulaSummary {
    std::string formula_id;
    int count = 0;
    double max_rel_err = 0;
    double mean_rel_err = 0;
    double max_abs_err = 0;
    LatticePoint worst;
};

struct BoundCheck {
    std::string name;
    Backend backend = Backend::Oracle;
    int evaluations = 0;
    int violations = 0;
    /// Smallest (value - bound) seen; negative means violated.
    double worst_margin = 0;
    /// Oracle bounds are hard assertions; closed-form ones are data.
    bool hard = true;
};

struct DiscrepancyReport {
    VerifyLattice lattice;
    VerifyOptions options;
    std::vector<DiscrepancyRecord> records;
    std::vector<FormulaSummary> summary;
    std::vector<BoundCheck> bounds;
    double max_doubling_delta = 0;
    int max_dim = 0;
    std::vector<std::string> hard_failures;

    bool passed() const {
        return hard_failures.empty();
    }
};

DiscrepancyReport run_verify(const VerifyLattice &lattice, const VerifyOptions &options);

/// Deterministic JSON document; non-finite numbers become "Infinity",
/// "-Infinity" or "NaN".
std::string report_json(const DiscrepancyReport &report, const MeasurementConfig &config);

/// One row per record with the config echo on top.
std::string report_csv(const DiscrepancyReport &report, const MeasurementConfig &config);

}  // namespace spssvs
