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

#include "spssvs/fock.h"
#include "spssvs/moments.h"

namespace spssvs {

/// Smallest squeezing magnitude accepted by the closed-form backend; the
/// coth r and 1/sinh r factors diverge below it.
inline constexpr double kAnalyticRMin = 1e-6;

/// Preselection cos(alpha/2)|up> + e^{i delta} sin(alpha/2)|down>; the
/// postselected state is always |up>.
struct QubitConfig {
    double alpha = 0;
    double delta = 0;

    void validate() const;
};

struct WeakValue {
    Complex value;
};

struct PointerParams {
    double r = 0;
    double theta = 0;
    /// Coupling strength g / sigma.
    double s = 0;
    /// Beam width; enters only through X = sigma (a + a^dag).
    double sigma = 0.70710678118654752;

    void validate() const;
};

WeakValue weak_value(const QubitConfig &q);

/// |<up|psi_i>|^2 = cos^2(alpha/2).
double postselection_probability(const QubitConfig &q);

/// Probabilities of the sigma_x = +1 / -1 branches, (1 +- sin alpha cos delta) / 2.
std::pair<double, double> branch_probabilities(const QubitConfig &q);

/// a S(xi)|0> normalized, on a fixed dimension. r == 0 yields |1>.
FockVector spsvs_state_at(double r, double theta, int dim);

/// Photon-subtracted squeezed vacuum, truncated per policy.
FockVector spsvs_state(const PointerParams &params, const TruncationPolicy &policy);

/// Pointer after the impulsive coupling and postselection onto |up>:
///   normalize[(1 + w) D(s/2) phi + (1 - w) D(-s/2) phi].
/// phi is zero-padded when the policy asks for a larger dimension.
FockVector postselected_pointer(const FockVector &phi, WeakValue w, const PointerParams &params,
                                const TruncationPolicy &policy);

/// Normalization constant as printed for the postselected pointer, with
/// beta = -s (cosh r - e^{i theta} sinh r).
double closed_lambda(WeakValue w, const PointerParams &params);

/// beta = -s (cosh r - e^{i theta} sinh r).
Complex closed_beta(const PointerParams &params);

struct NonPostselectedMoments {
    MomentSet moments;
    double x_mean = 0;
    double x_sq_mean = 0;
};

/// Moments of the pointer without postselection. The two displaced branches
/// are correlated with orthogonal sigma_x eigenstates, so the reduced pointer
/// state is the p+/p- mixture of D(+-s/2)|phi>.
NonPostselectedMoments nonpostselected_moments(const FockVector &phi, const QubitConfig &q,
                                               const PointerParams &params, const TruncationPolicy &policy);

/// Everything the oracle needs for one parameter point, built on one shared
/// dimension chosen so that phi and both displaced branches meet the tail
/// tolerance.
struct PointerEnsemble {
    FockVector phi;
    FockVector plus_branch;   // D(s/2) phi
    FockVector minus_branch;  // D(-s/2) phi
    FockVector raw;           // (1 + w) plus + (1 - w) minus, unnormalized
    FockVector post;          // raw / |raw|
    double raw_norm = 0;
    WeakValue w;

    int dim() const {
        return phi.dim();
    }
};

PointerEnsemble build_pointer_ensemble(const PointerParams &params, const QubitConfig &q,
                                       const TruncationPolicy &policy);

/// Assembles the ensemble from a prepared pointer on its own dimension.
PointerEnsemble assemble_pointer_ensemble(FockVector phi, double s, WeakValue w);

/// Same as above on exactly the given dimension.
PointerEnsemble build_pointer_ensemble_at(const PointerParams &params, const QubitConfig &q, int dim);

}  // namespace spssvs
