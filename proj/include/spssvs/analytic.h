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

#include <array>

#include "spssvs/moments.h"
#include "spssvs/states.h"

/// Closed-form expressions for the postselected photon-subtracted squeezed
/// pointer, transcribed as printed. Nothing here consults the Fock-space
/// oracle; disagreements are reported by the verify pipeline.
namespace spssvs::analytic {

/// The auxiliary functions h1, h2, h3 split into their printed additive
/// terms (before the common e^{-|beta|^2/2} envelope) so each term can be
/// audited on its own.
struct AuxTerms {
    std::array<Complex, 2> h1;
    std::array<Complex, 4> h2;
    std::array<Complex, 7> h3;
    double envelope = 0;
};

struct AuxFunctions {
    Complex h1;
    Complex h2;
    Complex h3;
};

struct ClosedMoments {
    Complex a_mean;
    Complex a_sq_mean;
    Complex n_mean;
    double lambda_sq = 0;
    Complex beta;
    /// Set when n_mean carries an imaginary part above 1e-12.
    bool n_mean_complex = false;

    /// Backend-tagged view; n_mean keeps only the real part.
    MomentSet to_moment_set() const;
};

/// Throws PoleAtZero for r <= kAnalyticRMin.
void require_pole_free(const PointerParams &params);

AuxTerms h_function_terms(const PointerParams &params);
AuxFunctions h_functions(const PointerParams &params);

ClosedMoments closed_moments(WeakValue w, const PointerParams &params);

/// <a>, <a^2>, <a^dag a> of the non-postselected pointer in closed form.
struct NonPostselectedClosed {
    Complex a_mean;
    Complex a_sq_mean;
    double n_mean = 0;
};
NonPostselectedClosed nonpostselected_closed(const QubitConfig &q, const PointerParams &params);

/// Closed-form Wigner function at z = x + i p.
double wigner_closed(double x, double p, WeakValue w, const PointerParams &params);

/// Same, returning the complex value before the imaginary residue is dropped.
Complex wigner_closed_complex(double x, double p, WeakValue w, const PointerParams &params);

enum class RatioKind { Finite, Infinite, Undefined };

struct SnrResult {
    double r_p = 0;
    double r_n = 0;
    double chi = 0;
    RatioKind chi_kind = RatioKind::Finite;
    /// The closed-form moments can produce a negative position variance; the
    /// affected SNR is then NaN and the flag is raised.
    bool post_variance_negative = false;
    bool nonpost_variance_negative = false;
};

/// Shifts below this fraction of sigma count as exactly zero.
inline constexpr double kZeroShiftTol = 1e-12;

/// chi = R_p / R_n with the +inf / undefined conventions shared by both
/// backends.
void finish_ratio(SnrResult &out);

/// sqrt(weight) |shift| / sqrt(variance). Shifts under kZeroShiftTol * sigma
/// give exactly 0; a negative variance gives NaN and sets `negative`.
double snr_value(double weight, double shift, double variance, double sigma, bool &negative);

SnrResult snr_closed(WeakValue w, const QubitConfig &q, const PointerParams &params, long long n_measurements);

struct FidelityClosed {
    double fidelity = 0;
    Complex overlap;
    Complex p1;
    Complex p2;
    /// F left [0, 1] by more than 1e-9. The value is reported unclipped.
    bool out_of_range = false;
};

FidelityClosed fidelity_closed(WeakValue w, const PointerParams &params);

}  // namespace spssvs::analytic
