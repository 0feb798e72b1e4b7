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

#include <gtest/gtest.h>

#include <cmath>

#include "spssvs/states.h"

using namespace spssvs;
using namespace spssvs::analytic;

namespace {

constexpr double kPi = 3.14159265358979323846;

PointerParams pointer(double r, double theta, double s) {
    PointerParams p;
    p.r = r;
    p.theta = theta;
    p.s = s;
    return p;
}

// Second transcription of the auxiliary functions, written out from the
// printed expressions without sharing any intermediate with the library.
struct Retranscribed {
    Complex h1[2];
    Complex h2[4];
    Complex h3[7];
    double env;
};

Retranscribed retranscribe(double r, double theta, double s) {
    using std::cosh;
    using std::sinh;
    const Complex I(0, 1);
    const Complex beta = -s * (cosh(r) - std::exp(I * theta) * sinh(r));
    const Complex e_m = std::exp(-I * theta);
    const Complex e_p = std::exp(I * theta);
    const double coth = cosh(r) / sinh(r);
    const double mod2 = std::abs(beta) * std::abs(beta);
    Retranscribed t;
    t.env = std::exp(-mod2 / 2);

    t.h1[0] = beta * cosh(r) * (beta * beta * e_m * coth + 3.0);
    t.h1[1] = (s / 2) * (2.0 * beta * beta * e_m * coth - mod2 + 3.0);

    t.h2[0] = beta * beta * cosh(r) * cosh(r) * (beta * beta * e_m * coth + 6.0);
    t.h2[1] = (3.0 / 2.0) * e_p * sinh(2 * r);
    t.h2[2] = -2.0 * s * beta * cosh(r) * (beta * beta * e_m * coth + 3.0);
    t.h2[3] = (s * s / 4) * (2.0 * beta * beta * e_m * coth - mod2 + 3.0);

    t.h3[0] = beta * beta * e_m *
              (coth * cosh(r) * cosh(r) + 5 * sinh(r) * cosh(r) + beta * beta * e_m * cosh(r) * cosh(r));
    t.h3[1] = 1 + 3 * sinh(r) * sinh(r);
    t.h3[2] = (3 * s / 2) * beta * e_m * ((1 + 3 * sinh(r) * sinh(r)) / sinh(r) + beta * beta * e_m * cosh(r));
    t.h3[3] = (s * s / 2) * e_m * (coth + beta * beta * e_m);
    t.h3[4] = (s * e_m / 2.0) * beta * beta * beta * cosh(r) * coth;
    t.h3[5] = (3 * s / 2) * beta * cosh(r);
    t.h3[6] = (s * s / 4) * (2.0 * beta * beta * e_m * coth - mod2 + 3.0);
    return t;
}

void expect_close(Complex a, Complex b, double tol) {
    EXPECT_LE(std::abs(a - b), tol * std::max(1.0, std::abs(b))) << a << " vs " << b;
}

}  // namespace

TEST(analytic, term_by_term_transcription) {
    for (double r : {0.05, 0.3, 0.5, 1.0, 1.7}) {
        for (double theta : {0.0, 5 * kPi / 12, 2.0}) {
            for (double s : {0.0, 0.1, 0.3, 1.0, 2.0}) {
                AuxTerms t = h_function_terms(pointer(r, theta, s));
                Retranscribed ref = retranscribe(r, theta, s);
                EXPECT_NEAR(t.envelope, ref.env, 1e-15);
                for (int k = 0; k < 2; ++k) {
                    expect_close(t.h1[k], ref.h1[k], 1e-13);
                }
                for (int k = 0; k < 4; ++k) {
                    expect_close(t.h2[k], ref.h2[k], 1e-13);
                }
                for (int k = 0; k < 7; ++k) {
                    expect_close(t.h3[k], ref.h3[k], 1e-13);
                }
                AuxFunctions h = h_functions(pointer(r, theta, s));
                Complex h1 = (ref.h1[0] + ref.h1[1]) * ref.env;
                Complex h2 = (ref.h2[0] + ref.h2[1] + ref.h2[2] + ref.h2[3]) * ref.env;
                Complex h3 = 0;
                for (Complex v : ref.h3) {
                    h3 += v;
                }
                expect_close(h.h1, h1, 1e-13);
                expect_close(h.h2, h2, 1e-13);
                expect_close(h.h3, h3 * ref.env, 1e-13);
            }
        }
    }
}

TEST(analytic, s_zero_reductions) {
    for (double r : {0.2, 0.5, 1.3}) {
        for (double theta : {0.0, 0.9}) {
            AuxFunctions h = h_functions(pointer(r, theta, 0));
            EXPECT_EQ(h.h1, Complex(0));
            expect_close(h.h2, 1.5 * std::polar(1.0, theta) * std::sinh(2 * r), 1e-14);
            expect_close(h.h3, 1 + 3 * std::pow(std::sinh(r), 2), 1e-14);
            for (Complex w : {Complex(0), Complex(1), Complex(0, 5.67), Complex(0.3, -2)}) {
                ClosedMoments m = closed_moments(WeakValue{w}, pointer(r, theta, 0));
                EXPECT_NEAR(m.lambda_sq, 0.25, 1e-15);
                EXPECT_EQ(m.a_mean, Complex(0));
                expect_close(m.a_sq_mean, 1.5 * std::polar(1.0, theta) * std::sinh(2 * r), 1e-14);
                expect_close(m.n_mean, 1 + 3 * std::pow(std::sinh(r), 2), 1e-14);
                EXPECT_FALSE(m.n_mean_complex);
            }
        }
    }
}

TEST(analytic, real_weak_value_gives_real_mean_field) {
    for (double s : {0.1, 0.5, 1.4}) {
        WeakValue w{std::tan(0.6)};
        ClosedMoments m = closed_moments(w, pointer(0.5, 0.7, s));
        EXPECT_EQ(m.a_mean.imag(), 0);
        EXPECT_NEAR(m.a_mean.real(), m.lambda_sq * 2 * w.value.real() * s, 1e-15);
    }
}

TEST(analytic, pole_at_zero) {
    for (double r : {0.0, 1e-7, 1e-6}) {
        try {
            h_functions(pointer(r, 0, 0.1));
            FAIL() << r;
        } catch (const Error &e) {
            EXPECT_EQ(e.kind(), ErrorKind::PoleAtZero);
        }
        EXPECT_THROW(closed_moments(WeakValue{1}, pointer(r, 0, 0.1)), Error);
        EXPECT_THROW(wigner_closed(0, 0, WeakValue{1}, pointer(r, 0, 0.1)), Error);
        EXPECT_THROW(fidelity_closed(WeakValue{1}, pointer(r, 0, 0.1)), Error);
    }
    EXPECT_NO_THROW(h_functions(pointer(2e-6, 0, 0.1)));
}

TEST(analytic, frozen_regression_point) {
    // r = 0.5, theta = 0, s = 0.3, alpha = 8 pi / 9, delta = pi / 2.
    WeakValue w = weak_value(QubitConfig{8 * kPi / 9, kPi / 2});
    PointerParams p = pointer(0.5, 0, 0.3);
    ClosedMoments m = closed_moments(w, p);
    EXPECT_NEAR(std::sqrt(m.lambda_sq), 0.3765413993760651, 1e-14);
    expect_close(m.a_mean, Complex(0, 0.25896762571109566), 1e-12);
    expect_close(m.a_sq_mean, -4.649701860419726, 1e-12);
    expect_close(m.n_mean, 1.7136044492543632, 1e-12);
    EXPECT_NEAR(fidelity_closed(w, p).fidelity, 0.6801432123287929, 1e-12);
}

TEST(analytic, number_term_matches_branch_decomposition) {
    // At theta = 0 both branches are real, so h3 is the symmetrized
    // <u+|n|u-> with u+- = D(+-s/2) phi.
    for (double r : {0.3, 0.5, 1.0}) {
        for (double s : {0.1, 0.5, 1.0}) {
            PointerParams p = pointer(r, 0, s);
            PointerEnsemble e = build_pointer_ensemble(p, QubitConfig{0, 0}, TruncationPolicy::adaptive());
            OperatorMatrix n = number_op(e.dim());
            Complex cross = 0.5 * (matrix_element(e.plus_branch, n, e.minus_branch) +
                                   matrix_element(e.minus_branch, n, e.plus_branch));
            expect_close(h_functions(p).h3, cross, 1e-9);
        }
    }
}

TEST(analytic, nonpostselected_closed_values) {
    NonPostselectedClosed c = nonpostselected_closed(QubitConfig{1.0, 0.3}, pointer(0.5, 0, 1));
    EXPECT_NEAR(c.n_mean, 2.0646209522228656, 1e-14);
    EXPECT_NEAR(c.a_mean.real(), 0.5 * std::sin(1.0) * std::cos(0.3), 1e-15);
    expect_close(c.a_sq_mean, 0.5 * (3 * std::sinh(1.0) + 0.25), 1e-15);
    EXPECT_EQ(nonpostselected_closed(QubitConfig{2.0, kPi / 2}, pointer(0.5, 0, 1)).a_mean.real(),
              0.5 * std::sin(2.0) * std::cos(kPi / 2));
}

TEST(analytic, wigner_s_zero_reductions) {
    for (Complex w : {Complex(0), Complex(1), Complex(0, 5.67)}) {
        EXPECT_NEAR(wigner_closed(0, 0, WeakValue{w}, pointer(0.5, 0, 0)), -2 / kPi, 1e-14);
    }
    const double c = std::cosh(0.5);
    const double sh = std::sinh(0.5);
    for (auto [x, p] : {std::pair{0.3, -0.2}, std::pair{1.1, 0.4}, std::pair{-0.7, 1.5}}) {
        Complex z(x, p);
        Complex ap = z * c - std::conj(z) * sh;
        double u = std::norm(ap);
        double ref = 2 / kPi * (4 * u - 1) * std::exp(-2 * u);
        EXPECT_NEAR(wigner_closed(x, p, WeakValue{Complex(0.2, 3)}, pointer(0.5, 0, 0)), ref, 1e-14);
    }
}

TEST(analytic, wigner_residue_is_real) {
    WeakValue w = weak_value(QubitConfig{8 * kPi / 9, kPi / 2});
    for (double x : {-2.0, 0.0, 0.7}) {
        for (double p : {-1.0, 0.3, 2.2}) {
            Complex v = wigner_closed_complex(x, p, w, pointer(0.5, 0, 0.5));
            EXPECT_LE(std::abs(v.imag()), 1e-12);
            EXPECT_EQ(wigner_closed(x, p, w, pointer(0.5, 0, 0.5)), v.real());
        }
    }
}

TEST(analytic, fidelity_at_zero_coupling) {
    for (Complex w : {Complex(0), Complex(1), Complex(0, 5.67)}) {
        FidelityClosed f = fidelity_closed(WeakValue{w}, pointer(0.7, 1.0, 0));
        EXPECT_NEAR(f.fidelity, 1, 1e-14);
        EXPECT_EQ(f.p1, Complex(1));
        EXPECT_EQ(f.p2, Complex(1));
        EXPECT_FALSE(f.out_of_range);
    }
}

TEST(analytic, fidelity_out_of_range_is_flagged_not_clipped) {
    FidelityClosed f = fidelity_closed(WeakValue{1}, pointer(0.5, 0, 0.1));
    EXPECT_GT(f.fidelity, 1 + 1e-9);
    EXPECT_TRUE(f.out_of_range);
}

TEST(analytic, snr_zero_coupling) {
    QubitConfig q{kPi / 2, 0};
    SnrResult a = snr_closed(weak_value(q), q, pointer(0.5, 0, 0), 1);
    EXPECT_EQ(a.r_p, 0);
    EXPECT_EQ(a.r_n, 0);
    EXPECT_EQ(a.chi_kind, RatioKind::Undefined);
    EXPECT_TRUE(std::isnan(a.chi));
}

TEST(analytic, snr_infinite_ratio_when_unpostselected_shift_vanishes) {
    QubitConfig q{8 * kPi / 9, kPi / 2};
    SnrResult a = snr_closed(weak_value(q), q, pointer(0.3, 5 * kPi / 12, 0.4), 10);
    EXPECT_EQ(a.r_n, 0);
    if (!a.post_variance_negative) {
        EXPECT_GT(a.r_p, 0);
        EXPECT_EQ(a.chi_kind, RatioKind::Infinite);
        EXPECT_TRUE(std::isinf(a.chi));
    } else {
        EXPECT_EQ(a.chi_kind, RatioKind::Undefined);
    }
}

TEST(analytic, snr_is_sigma_independent_and_scales_with_n) {
    QubitConfig q{2.0, 0.4};
    PointerParams p1 = pointer(0.5, 0, 0.3);
    PointerParams p2 = p1;
    p2.sigma = 3.7;
    SnrResult a = snr_closed(weak_value(q), q, p1, 1);
    SnrResult b = snr_closed(weak_value(q), q, p2, 1);
    SnrResult c = snr_closed(weak_value(q), q, p1, 16);
    EXPECT_NEAR(a.chi, b.chi, 1e-12 * std::abs(a.chi));
    EXPECT_NEAR(a.r_n, b.r_n, 1e-12 * a.r_n);
    EXPECT_NEAR(c.r_n, 4 * a.r_n, 1e-12 * c.r_n);
    EXPECT_NEAR(c.chi, a.chi, 1e-12 * std::abs(a.chi));
    EXPECT_THROW(snr_closed(weak_value(q), q, p1, 0), Error);
}

TEST(analytic, negative_variance_gives_nan) {
    bool negative = false;
    EXPECT_TRUE(std::isnan(snr_value(1, 0.3, -0.1, 1, negative)));
    EXPECT_TRUE(negative);
    EXPECT_EQ(snr_value(4, 1e-14, 1, 1, negative), 0);
    EXPECT_FALSE(negative);
    EXPECT_NEAR(snr_value(4, 0.5, 0.25, 1, negative), 2, 1e-15);
}

TEST(analytic, postselection_probability_value) {
    EXPECT_NEAR(postselection_probability(QubitConfig{8 * kPi / 9, 0}), 0.030154, 1e-6);
}
