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

#include "spssvs/wigner.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spssvs/analytic.h"

namespace spssvs {

namespace {

constexpr double kTwoOverPi = 2 / std::numbers::pi;

// Precomputed pieces of sum_{m,n} conj(psi_m) D(beta)_{mn} (-1)^n psi_n that
// do not depend on the phase-space point.
class ParityKernel {
   public:
    explicit ParityKernel(const FockVector &state) : dim_(state.dim()) {
        if (!state.is_normalized()) {
            throw Error(ErrorKind::InvalidArgument, "Wigner evaluation requires a normalized state");
        }
        // Trailing exact zeros contribute nothing.
        while (dim_ > 1 && state[dim_ - 1] == Complex(0)) {
            --dim_;
        }
        sq_.resize(2 * dim_ + 2);
        isq_.resize(2 * dim_ + 2);
        for (size_t j = 0; j < sq_.size(); ++j) {
            sq_[j] = std::sqrt(static_cast<double>(j));
            isq_[j] = j > 0 ? 1 / sq_[j] : 0;
        }
        lgam_.resize(dim_);
        for (int k = 0; k < dim_; ++k) {
            lgam_[k] = 0.5 * std::lgamma(k + 1.0);
        }
        offset_.resize(dim_ + 1);
        offset_[0] = 0;
        for (int n = 0; n < dim_; ++n) {
            offset_[n + 1] = offset_[n] + (dim_ - n);
        }
        c_re_.resize(offset_[dim_]);
        c_im_.resize(offset_[dim_]);
        for (int n = 0; n < dim_; ++n) {
            double sign = (n % 2 == 0) ? 1.0 : -1.0;
            for (int k = 0; k < dim_ - n; ++k) {
                Complex c = std::conj(state[n + k]) * state[n] * sign;
                c_re_[offset_[n] + k] = c.real();
                c_im_[offset_[n] + k] = c.imag();
            }
        }
    }

    struct Scratch {
        std::vector<double> g_prev, g_cur, g_next, s_re, s_im;
    };

    Scratch make_scratch() const {
        Scratch s;
        s.g_prev.assign(dim_, 0);
        s.g_cur.assign(dim_, 0);
        s.g_next.assign(dim_, 0);
        s.s_re.assign(dim_, 0);
        s.s_im.assign(dim_, 0);
        return s;
    }

    double evaluate(double x_coord, double p_coord, Scratch &s) const {
        const Complex beta = 2.0 * Complex(x_coord, p_coord);
        const double x = std::norm(beta);
        const double mag = std::abs(beta);
        const double log_mag = mag > 0 ? std::log(mag) : 0;
        const int dim = dim_;

        double *gp = s.g_prev.data();
        double *gc = s.g_cur.data();
        double *gn = s.g_next.data();
        double *sr = s.s_re.data();
        double *si = s.s_im.data();
        const double *sq = sq_.data();
        const double *isq = isq_.data();

        // g^(k)_n = sqrt(n!/(n+k)!) |beta|^k e^{-x/2} L_n^(k)(x), vectorised over k.
        for (int k = 0; k < dim; ++k) {
            gc[k] = mag > 0 ? std::exp(k * log_mag - 0.5 * x - lgam_[k]) : (k == 0 ? 1.0 : 0.0);
            sr[k] = 0;
            si[k] = 0;
        }
        for (int n = 0; n < dim; ++n) {
            const int len = dim - n;
            const double *cr = c_re_.data() + offset_[n];
            const double *ci = c_im_.data() + offset_[n];
            for (int k = 0; k < len; ++k) {
                sr[k] += gc[k] * cr[k];
                si[k] += gc[k] * ci[k];
            }
            if (len <= 1) {
                break;
            }
            const int next_len = len - 1;
            if (n == 0) {
                for (int k = 0; k < next_len; ++k) {
                    gn[k] = (1.0 + k - x) * gc[k] * isq[k + 1];
                }
            } else {
                const double a0 = 2.0 * n + 1.0 - x;
                const double sn = sq[n];
                const double isn1 = isq[n + 1];
                const double *sqk = sq + n;
                const double *isqk = isq + n + 1;
                for (int k = 0; k < next_len; ++k) {
                    gn[k] = ((a0 + k) * gc[k] - sn * sqk[k] * gp[k]) * (isn1 * isqk[k]);
                }
            }
            std::swap(gp, gc);
            std::swap(gc, gn);
        }

        const Complex step = mag > 0 ? beta / mag : Complex(1, 0);
        Complex rot = step;
        double total = sr[0];
        for (int k = 1; k < dim; ++k) {
            total += 2 * (rot.real() * sr[k] - rot.imag() * si[k]);
            rot *= step;
        }
        return kTwoOverPi * total;
    }

   private:
    int dim_;
    std::vector<double> sq_, isq_, lgam_;
    std::vector<size_t> offset_;
    std::vector<double> c_re_, c_im_;
};

}  // namespace

void PhaseSpaceGrid::validate() const {
    bool ok = std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(p_min) && std::isfinite(p_max) &&
              x_min < x_max && p_min < p_max && nx >= 2 && np >= 2;
    if (!ok) {
        throw Error(ErrorKind::InvalidArgument, "phase-space grid needs min < max and at least 2 points per axis");
    }
}

PhaseSpaceGrid PhaseSpaceGrid::default_for(double r) {
    return r <= 1 ? square(4, 161) : square(6, 241);
}

PhaseSpaceGrid PhaseSpaceGrid::square(double half_width, int points) {
    return {-half_width, half_width, -half_width, half_width, points, points};
}

double wigner_bound() {
    return kTwoOverPi;
}

int WignerField::bound_violations() const {
    const double limit = kTwoOverPi + kWignerBoundSlack;
    return static_cast<int>(std::count_if(values.begin(), values.end(), [&](double v) { return std::abs(v) > limit; }));
}

double WignerField::min() const {
    return *std::min_element(values.begin(), values.end());
}

double WignerField::max() const {
    return *std::max_element(values.begin(), values.end());
}

double wigner_oracle_point(const FockVector &state, double x, double p) {
    ParityKernel kernel(state);
    auto scratch = kernel.make_scratch();
    return kernel.evaluate(x, p, scratch);
}

WignerField wigner_field(const FockVector &state, const PhaseSpaceGrid &grid) {
    grid.validate();
    ParityKernel kernel(state);
    WignerField field;
    field.grid = grid;
    field.backend = Backend::Oracle;
    field.values.assign(static_cast<size_t>(grid.nx) * grid.np, 0);
    const long total = static_cast<long>(grid.nx) * grid.np;
#pragma omp parallel
    {
        auto scratch = kernel.make_scratch();
#pragma omp for schedule(dynamic, 64)
        for (long idx = 0; idx < total; ++idx) {
            int i = static_cast<int>(idx / grid.np);
            int j = static_cast<int>(idx % grid.np);
            field.values[idx] = kernel.evaluate(grid.x(i), grid.p(j), scratch);
        }
    }
    if (int bad = field.bound_violations(); bad > 0) {
        throw Error(ErrorKind::HardAssertion, std::to_string(bad) + " oracle Wigner samples exceed 2/pi");
    }
    return field;
}

WignerField wigner_field_closed(WeakValue w, const PointerParams &params, const PhaseSpaceGrid &grid) {
    grid.validate();
    analytic::require_pole_free(params);
    WignerField field;
    field.grid = grid;
    field.backend = Backend::Analytic;
    field.values.resize(static_cast<size_t>(grid.nx) * grid.np);
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.np; ++j) {
            field.values[static_cast<size_t>(i) * grid.np + j] = analytic::wigner_closed(grid.x(i), grid.p(j), w, params);
        }
    }
    return field;
}

namespace {

template <class F>
double trapezoid(const WignerField &field, F &&integrand) {
    const PhaseSpaceGrid &g = field.grid;
    double acc = 0;
    for (int i = 0; i < g.nx; ++i) {
        double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
        for (int j = 0; j < g.np; ++j) {
            double wp = (j == 0 || j == g.np - 1) ? 0.5 : 1.0;
            acc += wx * wp * integrand(field.at(i, j));
        }
    }
    return acc * g.dx() * g.dp();
}

}  // namespace

double field_integral(const WignerField &field) {
    return trapezoid(field, [](double v) { return v; });
}

double negativity_volume(const WignerField &field) {
    return trapezoid(field, [](double v) { return std::max(0.0, -v); });
}

FieldDifference compare_fields(const WignerField &a, const WignerField &b) {
    if (a.values.size() != b.values.size() || a.grid.nx != b.grid.nx || a.grid.np != b.grid.np) {
        throw Error(ErrorKind::DimensionMismatch, "fields sampled on different grids");
    }
    FieldDifference d;
    double sum = 0;
    for (int i = 0; i < a.grid.nx; ++i) {
        for (int j = 0; j < a.grid.np; ++j) {
            double diff = std::abs(a.at(i, j) - b.at(i, j));
            sum += diff;
            if (diff > d.max_abs) {
                d.max_abs = diff;
                d.x_at_max = a.grid.x(i);
                d.p_at_max = a.grid.p(j);
            }
        }
    }
    d.mean_abs = sum / static_cast<double>(a.values.size());
    return d;
}

}  // namespace spssvs
