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

#include "spssvs/observables.h"

#include <cmath>
#include <complex>

namespace spssvs {

namespace {

void require_finite(const MomentSet &m) {
    bool ok = std::isfinite(m.a_mean.real()) && std::isfinite(m.a_mean.imag()) && std::isfinite(m.a_sq_mean.real()) &&
              std::isfinite(m.a_sq_mean.imag()) && std::isfinite(m.n_mean);
    if (!ok) {
        throw Error(ErrorKind::IncompleteMoments, "moment set has non-finite entries");
    }
}

}  // namespace

QuadratureStats quadrature_stats(const MomentSet &m, QuadratureSpec spec) {
    require_finite(m);
    QuadratureStats q;
    q.mean = std::sqrt(2.0) * (m.a_mean * std::polar(1.0, -spec.phi)).real();
    q.second_moment = (m.a_sq_mean * std::polar(1.0, -2 * spec.phi)).real() + m.n_mean + 0.5;
    q.variance = q.second_moment - q.mean * q.mean;
    if (m.backend == Backend::Oracle && q.variance < 0) {
        if (q.variance < -1e-10) {
            throw Error(ErrorKind::HardAssertion, "negative quadrature variance " + std::to_string(q.variance));
        }
        q.variance = 0;
        q.clamped = true;
    }
    return q;
}

double squeezing_param(const MomentSet &m, QuadratureSpec spec) {
    return quadrature_stats(m, spec).variance - 0.5;
}

double mandel_q(const MomentSet &m) {
    if (!m.n2_corr) {
        throw Error(ErrorKind::IncompleteMoments, "Mandel Q needs <a^dag^2 a^2>, which only the oracle provides");
    }
    if (!(m.n_mean > 0)) {
        throw Error(ErrorKind::ZeroMeanPhoton, "Mandel Q undefined for <n> = 0");
    }
    double q = *m.n2_corr / m.n_mean - m.n_mean;
    if (m.backend == Backend::Oracle && q < -1 - 1e-10) {
        throw Error(ErrorKind::HardAssertion, "Mandel Q below -1: " + std::to_string(q));
    }
    return q;
}

double mandel_q(const FockVector &state) {
    return mandel_q(oracle_moments(state));
}

analytic::SnrResult snr_oracle(const PointerEnsemble &ensemble, const QubitConfig &q, const PointerParams &params,
                               long long n_measurements, const TruncationPolicy &policy) {
    if (n_measurements < 1) {
        throw Error(ErrorKind::InvalidArgument, "N must be at least 1");
    }
    const double sigma = params.sigma;
    const double n = static_cast<double>(n_measurements);
    OperatorMatrix a = annihilation_op(ensemble.dim());
    OperatorMatrix x = Complex(sigma) * (a + a.adjoint());

    double x_initial = expectation(ensemble.phi, x).real();
    FockVector x_on_post = x * ensemble.post;
    double x_post = inner_product(ensemble.post, x_on_post).real();
    double x2_post = x_on_post.norm_sq();

    analytic::SnrResult out;
    out.r_p = analytic::snr_value(n * postselection_probability(q), x_post - x_initial, x2_post - x_post * x_post,
                                  sigma, out.post_variance_negative);

    NonPostselectedMoments np = nonpostselected_moments(ensemble.phi, q, params, policy);
    out.r_n = analytic::snr_value(n, np.x_mean - x_initial, np.x_sq_mean - np.x_mean * np.x_mean, sigma,
                                  out.nonpost_variance_negative);
    if (out.post_variance_negative || out.nonpost_variance_negative) {
        throw Error(ErrorKind::HardAssertion, "negative oracle position variance");
    }
    analytic::finish_ratio(out);
    return out;
}

SnrComparison snr_ratio(const QubitConfig &q, const PointerParams &params, long long n_measurements,
                        const TruncationPolicy &policy) {
    SnrComparison out;
    PointerEnsemble e = build_pointer_ensemble(params, q, policy);
    out.oracle = snr_oracle(e, q, params, n_measurements, policy);
    try {
        out.analytic = analytic::snr_closed(e.w, q, params, n_measurements);
    } catch (const Error &err) {
        if (err.kind() != ErrorKind::PoleAtZero) {
            throw;
        }
        out.analytic_error = err.what();
    }
    return out;
}

double fidelity(const FockVector &a, const FockVector &b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "fidelity of states with different truncations");
    }
    if (!a.is_normalized() || !b.is_normalized()) {
        throw Error(ErrorKind::InvalidArgument, "fidelity requires normalized states");
    }
    double f = std::norm(inner_product(a, b));
    if (f > 1 + 1e-10) {
        throw Error(ErrorKind::HardAssertion, "fidelity above 1: " + std::to_string(f));
    }
    return f;
}

}  // namespace spssvs
