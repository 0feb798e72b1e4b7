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

#include "spssvs/analytic.h"

#include <cmath>
#include <limits>
#include <numbers>

namespace spssvs::analytic {

namespace {

constexpr double kPi = std::numbers::pi;

struct Hyperbolic {
    double c, sh, cth;
    Complex e_pos;  // e^{i theta}
    Complex e_neg;  // e^{-i theta}
};

Hyperbolic hyperbolic(const PointerParams &p) {
    double c = std::cosh(p.r);
    double sh = std::sinh(p.r);
    return {c, sh, c / sh, std::polar(1.0, p.theta), std::polar(1.0, -p.theta)};
}

}  // namespace

MomentSet ClosedMoments::to_moment_set() const {
    MomentSet m;
    m.backend = Backend::Analytic;
    m.a_mean = a_mean;
    m.a_sq_mean = a_sq_mean;
    m.n_mean = n_mean.real();
    return m;
}

void require_pole_free(const PointerParams &params) {
    params.validate();
    if (params.r <= kAnalyticRMin) {
        throw Error(ErrorKind::PoleAtZero, "closed forms need r > 1e-6 (coth r and 1/sinh r diverge)");
    }
}

AuxTerms h_function_terms(const PointerParams &params) {
    require_pole_free(params);
    const auto [c, sh, cth, ep, em] = hyperbolic(params);
    const double s = params.s;
    const Complex b = closed_beta(params);
    const Complex b2 = b * b;
    const double b_abs2 = std::norm(b);
    // Recurring bracket [2 beta^2 e^{-i theta} coth r - |beta|^2 + 3].
    const Complex bracket = 2.0 * b2 * em * cth - b_abs2 + 3.0;

    AuxTerms t;
    t.envelope = std::exp(-0.5 * b_abs2);

    t.h1[0] = b * c * (b2 * em * cth + 3.0);
    t.h1[1] = s / 2 * bracket;

    t.h2[0] = b2 * c * c * (b2 * em * cth + 6.0);
    t.h2[1] = 1.5 * ep * std::sinh(2 * params.r);
    t.h2[2] = -2.0 * s * b * c * (b2 * em * cth + 3.0);
    t.h2[3] = s * s / 4 * bracket;

    t.h3[0] = b2 * em * (cth * c * c + 5.0 * sh * c + b2 * em * c * c);
    t.h3[1] = 1.0 + 3.0 * sh * sh;
    t.h3[2] = 1.5 * s * b * em * ((1.0 + 3.0 * sh * sh) / sh + b2 * em * c);
    t.h3[3] = s * s / 2 * em * (cth + b2 * em);
    t.h3[4] = s * em / 2.0 * b2 * b * c * cth;
    t.h3[5] = 1.5 * s * b * c;
    t.h3[6] = s * s / 4 * bracket;
    return t;
}

AuxFunctions h_functions(const PointerParams &params) {
    AuxTerms t = h_function_terms(params);
    auto sum = [](const auto &terms) {
        Complex acc = 0;
        for (Complex v : terms) {
            acc += v;
        }
        return acc;
    };
    return {sum(t.h1) * t.envelope, sum(t.h2) * t.envelope, sum(t.h3) * t.envelope};
}

ClosedMoments closed_moments(WeakValue w, const PointerParams &params) {
    require_pole_free(params);
    const AuxFunctions h = h_functions(params);
    const double s = params.s;
    const double w2 = std::norm(w.value);
    const double lam = closed_lambda(w, params);
    const double sh = std::sinh(params.r);
    const Complex ep = std::polar(1.0, params.theta);

    ClosedMoments m;
    m.lambda_sq = lam * lam;
    m.beta = closed_beta(params);
    m.a_mean = m.lambda_sq * (2.0 * w.value.real() * s - Complex(0, 2) * w.value.imag() * h.h1);
    m.a_sq_mean = m.lambda_sq * ((1 + w2) * (3.0 * ep * std::sinh(2 * params.r) + s * s / 2) + 2.0 * (1 - w2) * h.h2);
    m.n_mean = 2 * m.lambda_sq * ((1 + w2) * (1 + 3 * sh * sh + s * s / 4) + (1 - w2) * h.h3);
    m.n_mean_complex = std::abs(m.n_mean.imag()) > 1e-12;
    return m;
}

NonPostselectedClosed nonpostselected_closed(const QubitConfig &q, const PointerParams &params) {
    q.validate();
    params.validate();
    const double s = params.s;
    const double sh = std::sinh(params.r);
    NonPostselectedClosed out;
    out.a_mean = s / 2 * std::sin(q.alpha) * std::cos(q.delta);
    out.n_mean = 1 + 3 * sh * sh + s * s / 4;
    out.a_sq_mean = 0.5 * (3.0 * std::polar(1.0, params.theta) * std::sinh(2 * params.r) + s * s / 4);
    return out;
}

Complex wigner_closed_complex(double x, double p, WeakValue w, const PointerParams &params) {
    require_pole_free(params);
    const auto [c, sh, cth, ep, em] = hyperbolic(params);
    const double s = params.s;
    const Complex z(x, p);
    const Complex gamma = c - ep * sh;
    const Complex alpha_p = z * c - std::conj(z) * ep * sh;
    const double lam = closed_lambda(w, params);

    auto single_photon = [](Complex u) {
        double u2 = std::norm(u);
        return 2 / kPi * (4 * u2 - 1) * std::exp(-2 * u2);
    };
    const Complex one_plus = 1.0 + w.value;
    const Complex one_minus = 1.0 - w.value;
    const double ap2 = std::norm(alpha_p);

    Complex direct = std::norm(one_plus) * single_photon(alpha_p - s * gamma) +
                     std::norm(one_minus) * single_photon(alpha_p + s * gamma);
    Complex kernel = one_plus * std::conj(one_minus) * std::exp(-2.0 * s * (z - std::conj(z)) - 2 * ap2);
    // Re[k] written as (k + k*)/2 so the residue survives for inspection.
    Complex cross = 4 / kPi * 0.5 * (kernel + std::conj(kernel)) * (4 * ap2 - 1);
    return lam * lam * (direct + cross);
}

double wigner_closed(double x, double p, WeakValue w, const PointerParams &params) {
    Complex v = wigner_closed_complex(x, p, w, params);
    if (std::abs(v.imag()) > 1e-12) {
        throw Error(ErrorKind::HardAssertion, "closed-form Wigner value has imaginary residue");
    }
    return v.real();
}

void finish_ratio(SnrResult &out) {
    if (std::isnan(out.r_p) || std::isnan(out.r_n)) {
        out.chi = std::numeric_limits<double>::quiet_NaN();
        out.chi_kind = RatioKind::Undefined;
    } else if (out.r_n == 0) {
        out.chi = out.r_p == 0 ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
        out.chi_kind = out.r_p == 0 ? RatioKind::Undefined : RatioKind::Infinite;
    } else {
        out.chi = out.r_p / out.r_n;
        out.chi_kind = RatioKind::Finite;
    }
}

double snr_value(double weight, double shift, double variance, double sigma, bool &negative) {
    negative = variance < 0;
    if (negative) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (std::abs(shift) <= kZeroShiftTol * sigma) {
        return 0;
    }
    return std::sqrt(weight) * std::abs(shift) / std::sqrt(variance);
}

SnrResult snr_closed(WeakValue w, const QubitConfig &q, const PointerParams &params, long long n_measurements) {
    if (n_measurements < 1) {
        throw Error(ErrorKind::InvalidArgument, "N must be at least 1");
    }
    const double sigma = params.sigma;
    const double n = static_cast<double>(n_measurements);
    const ClosedMoments pm = closed_moments(w, params);

    // <phi|X|phi> = 2 sigma Re<phi|a|phi> = 0 for the odd-parity pointer.
    const double x_initial = 0;

    SnrResult out;
    double x_post = 2 * sigma * pm.a_mean.real();
    double x2_post = sigma * sigma * (2 * pm.n_mean.real() + 2 * pm.a_sq_mean.real() + 1);
    out.r_p = snr_value(n * postselection_probability(q), x_post - x_initial, x2_post - x_post * x_post, sigma,
                  out.post_variance_negative);

    NonPostselectedClosed np = nonpostselected_closed(q, params);
    double x_np = 2 * sigma * np.a_mean.real();
    double x2_np = sigma * sigma * (2 * np.n_mean + 2 * np.a_sq_mean.real() + 1);
    out.r_n = snr_value(n, x_np - x_initial, x2_np - x_np * x_np, sigma, out.nonpost_variance_negative);

    finish_ratio(out);
    return out;
}

FidelityClosed fidelity_closed(WeakValue w, const PointerParams &params) {
    require_pole_free(params);
    const auto [c, sh, cth, ep, em] = hyperbolic(params);
    (void)c;
    (void)ep;
    const double s = params.s;
    const Complex b = closed_beta(params);
    const double envelope = std::exp(-0.5 * std::norm(b));
    const Complex common = (b * b * em * cth + 1.0) * envelope;
    const Complex odd = s * b * em / (2 * sh);

    FidelityClosed out;
    out.p1 = common - odd;
    out.p2 = common + odd;
    out.overlap = closed_lambda(w, params) * ((1.0 + w.value) * out.p1 + (1.0 - w.value) * out.p2);
    out.fidelity = std::norm(out.overlap);
    out.out_of_range = out.fidelity > 1 + 1e-9 || out.fidelity < -1e-9;
    return out;
}

}  // namespace spssvs::analytic
