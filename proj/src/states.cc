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

#include "spssvs/states.h"

#include <cmath>
#include <numbers>

#include "spssvs/format.h"

namespace spssvs {

namespace {

void require(bool ok, const std::string &message) {
    if (!ok) {
        throw Error(ErrorKind::InvalidArgument, message);
    }
}

// Candidate dimensions no smaller than the input state's.
std::vector<int> dims_at_least(const TruncationPolicy &policy, int start) {
    if (policy.mode == TruncationPolicy::Mode::Fixed) {
        return {std::max(start, policy.fixed_dim)};
    }
    std::vector<int> dims{start};
    for (int d : policy.candidate_dims()) {
        if (d > start) {
            dims.push_back(d);
        }
    }
    return dims;
}

struct Branches {
    FockVector plus;
    FockVector minus;
};

Branches displaced_branches(const FockVector &phi, double s) {
    return {apply_displacement(s / 2, phi), apply_displacement(-s / 2, phi)};
}

}  // namespace

const char *backend_name(Backend b) {
    return b == Backend::Analytic ? "analytic" : "oracle";
}

MomentSet oracle_moments(const FockVector &state) {
    if (!state.is_normalized()) {
        throw Error(ErrorKind::InvalidArgument, "moments require a normalized state");
    }
    const Eigen::VectorXcd &v = state.amps();
    const int dim = state.dim();
    // Ladder actions applied directly to the amplitudes: (a v)_n = sqrt(n+1) v_{n+1}.
    Eigen::VectorXcd av = Eigen::VectorXcd::Zero(dim);
    for (int n = 0; n + 1 < dim; ++n) {
        av[n] = std::sqrt(n + 1.0) * v[n + 1];
    }
    Eigen::VectorXcd a2v = Eigen::VectorXcd::Zero(dim);
    for (int n = 0; n + 1 < dim; ++n) {
        a2v[n] = std::sqrt(n + 1.0) * av[n + 1];
    }
    MomentSet m;
    m.backend = Backend::Oracle;
    m.a_mean = v.dot(av);
    m.a_sq_mean = v.dot(a2v);
    m.n_mean = av.squaredNorm();
    m.n2_corr = a2v.squaredNorm();
    return m;
}

void QubitConfig::validate() const {
    require(std::isfinite(alpha) && alpha >= 0 && alpha < std::numbers::pi, "alpha must lie in [0, pi)");
    require(std::isfinite(delta) && delta >= 0 && delta <= 2 * std::numbers::pi, "delta must lie in [0, 2 pi]");
}

void PointerParams::validate() const {
    require(std::isfinite(r) && r >= 0, "r must be finite and non-negative");
    require(std::isfinite(theta), "theta must be finite");
    require(std::isfinite(s) && s >= 0, "s must be finite and non-negative");
    require(std::isfinite(sigma) && sigma > 0, "sigma must be positive");
}

WeakValue weak_value(const QubitConfig &q) {
    q.validate();
    return {std::polar(std::tan(q.alpha / 2), q.delta)};
}

double postselection_probability(const QubitConfig &q) {
    double c = std::cos(q.alpha / 2);
    return c * c;
}

std::pair<double, double> branch_probabilities(const QubitConfig &q) {
    double bias = std::sin(q.alpha) * std::cos(q.delta);
    return {(1 + bias) / 2, (1 - bias) / 2};
}

FockVector spsvs_state_at(double r, double theta, int dim) {
    if (r == 0) {
        return FockVector::basis(dim, 1);
    }
    Eigen::VectorXcd sv = apply_squeeze(r, theta, FockVector::basis(dim, 0)).amps();
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for (int n = 0; n + 1 < dim; ++n) {
        v[n] = std::sqrt(n + 1.0) * sv[n + 1];
    }
    // Odd parity: clear the even amplitudes that only carry rounding noise.
    for (int n = 0; n < dim; n += 2) {
        v[n] = 0;
    }
    return FockVector(std::move(v)).normalized();
}

FockVector spsvs_state(const PointerParams &params, const TruncationPolicy &policy) {
    params.validate();
    return build_truncated(policy, [&](int dim) { return spsvs_state_at(params.r, params.theta, dim); });
}

FockVector postselected_pointer(const FockVector &phi, WeakValue w, const PointerParams &params,
                                const TruncationPolicy &policy) {
    params.validate();
    if (!phi.is_normalized()) {
        throw Error(ErrorKind::InvalidArgument, "postselected_pointer requires a normalized input state");
    }
    double last_tail = 0;
    for (int dim : dims_at_least(policy, phi.dim())) {
        Branches b = displaced_branches(phi.resized(dim), params.s);
        FockVector raw((1.0 + w.value) * b.plus.amps() + (1.0 - w.value) * b.minus.amps());
        FockVector post = raw.normalized();
        last_tail = post.tail_weight();
        if (policy.mode == TruncationPolicy::Mode::Fixed || last_tail <= policy.tail_tol) {
            return post;
        }
    }
    throw Error(ErrorKind::TruncationInsufficient,
                "postselected pointer tail " + format_number(last_tail) + " above tolerance");
}

Complex closed_beta(const PointerParams &params) {
    return -params.s * (std::cosh(params.r) - std::polar(1.0, params.theta) * std::sinh(params.r));
}

double closed_lambda(WeakValue w, const PointerParams &params) {
    double w2 = std::norm(w.value);
    double b2 = std::norm(closed_beta(params));
    double bracket = 1 + w2 + (1 - w2) * (1 - b2) * std::exp(-0.5 * b2);
    return 1 / std::sqrt(2.0) / std::sqrt(bracket);
}

NonPostselectedMoments nonpostselected_moments(const FockVector &phi, const QubitConfig &q,
                                               const PointerParams &params, const TruncationPolicy &policy) {
    q.validate();
    params.validate();
    if (!phi.is_normalized()) {
        throw Error(ErrorKind::InvalidArgument, "nonpostselected_moments requires a normalized input state");
    }
    auto [p_plus, p_minus] = branch_probabilities(q);
    double last_tail = 0;
    for (int dim : dims_at_least(policy, phi.dim())) {
        Branches b = displaced_branches(phi.resized(dim), params.s);
        last_tail = std::max(b.plus.tail_weight(), b.minus.tail_weight());
        if (policy.mode != TruncationPolicy::Mode::Fixed && last_tail > policy.tail_tol) {
            continue;
        }
        MomentSet mp = oracle_moments(b.plus.normalized());
        MomentSet mm = oracle_moments(b.minus.normalized());
        NonPostselectedMoments out;
        out.moments.backend = Backend::Oracle;
        out.moments.a_mean = p_plus * mp.a_mean + p_minus * mm.a_mean;
        out.moments.a_sq_mean = p_plus * mp.a_sq_mean + p_minus * mm.a_sq_mean;
        out.moments.n_mean = p_plus * mp.n_mean + p_minus * mm.n_mean;
        out.moments.n2_corr = p_plus * *mp.n2_corr + p_minus * *mm.n2_corr;

        OperatorMatrix a = annihilation_op(dim);
        OperatorMatrix x = Complex(params.sigma) * (a + a.adjoint());
        FockVector up = b.plus.normalized();
        FockVector um = b.minus.normalized();
        FockVector xup = x * up;
        FockVector xum = x * um;
        out.x_mean = p_plus * inner_product(up, xup).real() + p_minus * inner_product(um, xum).real();
        out.x_sq_mean = p_plus * xup.norm_sq() + p_minus * xum.norm_sq();
        return out;
    }
    throw Error(ErrorKind::TruncationInsufficient,
                "non-postselected branch tail " + format_number(last_tail) + " above tolerance");
}

PointerEnsemble assemble_pointer_ensemble(FockVector phi, double s, WeakValue w) {
    FockVector plus = apply_displacement(s / 2, phi);
    FockVector minus = apply_displacement(-s / 2, phi);
    FockVector raw((1.0 + w.value) * plus.amps() + (1.0 - w.value) * minus.amps());
    double raw_norm = std::sqrt(raw.norm_sq());
    FockVector post = raw.normalized();
    return PointerEnsemble{std::move(phi), std::move(plus), std::move(minus), std::move(raw), std::move(post), raw_norm, w};
}

PointerEnsemble build_pointer_ensemble_at(const PointerParams &params, const QubitConfig &q, int dim) {
    params.validate();
    return assemble_pointer_ensemble(spsvs_state_at(params.r, params.theta, dim), params.s,
                                     weak_value(q));
}

PointerEnsemble build_pointer_ensemble(const PointerParams &params, const QubitConfig &q,
                                       const TruncationPolicy &policy) {
    if (policy.mode == TruncationPolicy::Mode::Fixed) {
        return build_pointer_ensemble_at(params, q, policy.fixed_dim);
    }
    double last_tail = 0;
    int last_dim = 0;
    for (int dim : policy.candidate_dims()) {
        PointerEnsemble e = build_pointer_ensemble_at(params, q, dim);
        last_tail = std::max({e.phi.tail_weight(), e.plus_branch.tail_weight(), e.minus_branch.tail_weight()});
        last_dim = dim;
        if (last_tail <= policy.tail_tol) {
            return e;
        }
    }
    throw Error(ErrorKind::TruncationInsufficient,
                "pointer tail " + format_number(last_tail) + " at dim " + std::to_string(last_dim) +
                    " exceeds tolerance " + format_number(policy.tail_tol));
}

}  // namespace spssvs
