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

#include "spssvs/fock.h"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Sparse>

namespace spssvs {

const char *error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidDimension:
            return "invalid-dimension";
        case ErrorKind::InvalidArgument:
            return "invalid-argument";
        case ErrorKind::DimensionMismatch:
            return "dimension-mismatch";
        case ErrorKind::NumericOverflow:
            return "numeric-overflow";
        case ErrorKind::TruncationInsufficient:
            return "truncation-insufficient";
        case ErrorKind::DegenerateState:
            return "degenerate-state";
        case ErrorKind::PoleAtZero:
            return "pole-at-zero";
        case ErrorKind::IncompleteMoments:
            return "incomplete-moments";
        case ErrorKind::ZeroMeanPhoton:
            return "zero-mean-photon";
        case ErrorKind::HardAssertion:
            return "hard-assertion";
    }
    return "unknown";
}

namespace {

void require_dim(int dim, int minimum) {
    if (dim < minimum) {
        throw Error(ErrorKind::InvalidDimension,
                    "dimension " + std::to_string(dim) + " is below the minimum " + std::to_string(minimum));
    }
}

}  // namespace

FockVector::FockVector(Eigen::VectorXcd amps) : amps_(std::move(amps)) {
    require_dim(static_cast<int>(amps_.size()), 1);
    if (!amps_.allFinite()) {
        throw Error(ErrorKind::NumericOverflow, "non-finite amplitude in Fock vector");
    }
}

FockVector FockVector::basis(int dim, int n) {
    require_dim(dim, 1);
    if (n < 0 || n >= dim) {
        throw Error(ErrorKind::InvalidArgument, "photon number " + std::to_string(n) + " outside the truncation");
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v[n] = 1.0;
    return FockVector(std::move(v));
}

bool FockVector::is_normalized(double tol) const {
    return std::abs(norm_sq() - 1.0) <= tol;
}

FockVector FockVector::normalized() const {
    double norm = amps_.norm();
    if (norm < 1e-14) {
        throw Error(ErrorKind::DegenerateState, "cannot normalize a vector of norm " + std::to_string(norm));
    }
    return FockVector(amps_ / norm);
}

double FockVector::tail_weight(int count) const {
    int n = std::min(count, dim());
    return amps_.tail(n).squaredNorm();
}

FockVector FockVector::resized(int dim) const {
    require_dim(dim, 1);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    int keep = std::min(dim, this->dim());
    v.head(keep) = amps_.head(keep);
    return FockVector(std::move(v));
}

OperatorMatrix::OperatorMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "operator matrix must be square");
    }
    require_dim(static_cast<int>(entries_.rows()), 1);
    if (!entries_.allFinite()) {
        throw Error(ErrorKind::NumericOverflow, "non-finite operator entry");
    }
}

OperatorMatrix OperatorMatrix::identity(int dim) {
    require_dim(dim, 1);
    return OperatorMatrix(Eigen::MatrixXcd::Identity(dim, dim));
}

OperatorMatrix OperatorMatrix::zero(int dim) {
    require_dim(dim, 1);
    return OperatorMatrix(Eigen::MatrixXcd::Zero(dim, dim));
}

OperatorMatrix OperatorMatrix::adjoint() const {
    return OperatorMatrix(entries_.adjoint());
}

namespace {

void require_same(int a, int b) {
    if (a != b) {
        throw Error(ErrorKind::DimensionMismatch, std::to_string(a) + " vs " + std::to_string(b));
    }
}

}  // namespace

OperatorMatrix operator+(const OperatorMatrix &a, const OperatorMatrix &b) {
    require_same(a.dim(), b.dim());
    return OperatorMatrix(a.entries_ + b.entries_);
}

OperatorMatrix operator-(const OperatorMatrix &a, const OperatorMatrix &b) {
    require_same(a.dim(), b.dim());
    return OperatorMatrix(a.entries_ - b.entries_);
}

OperatorMatrix operator*(const OperatorMatrix &a, const OperatorMatrix &b) {
    require_same(a.dim(), b.dim());
    return OperatorMatrix(a.entries_ * b.entries_);
}

OperatorMatrix operator*(Complex c, const OperatorMatrix &a) {
    return OperatorMatrix(c * a.entries_);
}

FockVector operator*(const OperatorMatrix &a, const FockVector &v) {
    require_same(a.dim(), v.dim());
    return FockVector(a.entries_ * v.amps());
}

TruncationPolicy TruncationPolicy::fixed(int dim, int hard_cap) {
    require_dim(dim, 2);
    if (dim > hard_cap) {
        throw Error(ErrorKind::TruncationInsufficient,
                    "fixed dimension " + std::to_string(dim) + " exceeds hard cap " + std::to_string(hard_cap));
    }
    TruncationPolicy p;
    p.mode = Mode::Fixed;
    p.fixed_dim = dim;
    p.hard_cap = hard_cap;
    return p;
}

TruncationPolicy TruncationPolicy::adaptive(double tail_tol, int hard_cap) {
    if (!(tail_tol > 0) || !std::isfinite(tail_tol)) {
        throw Error(ErrorKind::InvalidArgument, "tail tolerance must be positive");
    }
    require_dim(hard_cap, 2);
    TruncationPolicy p;
    p.mode = Mode::Adaptive;
    p.tail_tol = tail_tol;
    p.hard_cap = hard_cap;
    return p;
}

std::vector<int> TruncationPolicy::candidate_dims() const {
    if (mode == Mode::Fixed) {
        return {fixed_dim};
    }
    std::vector<int> dims;
    // Alternating x1.5 / x4/3 steps: 32, 48, 64, 96, 128, ...
    for (int d = 32, step = 0; d < hard_cap; ++step) {
        dims.push_back(d);
        d = (step % 2 == 0) ? d * 3 / 2 : d * 4 / 3;
    }
    dims.push_back(hard_cap);
    return dims;
}

TruncationPolicy TruncationPolicy::doubled(int dim) const {
    return fixed(2 * dim, std::max(hard_cap, 2 * dim));
}

int clean_block_size(int dim) {
    return std::min(dim, dim - (dim + 3) / 4 + 1);
}

int operator_clean_block(const OperatorMatrix &op, double tol) {
    const int dim = op.dim();
    const int edge = std::min(5, dim);
    const int limit = clean_block_size(dim);
    int block = 0;
    while (block < limit && op.entries().col(block).tail(edge).squaredNorm() <= tol) {
        ++block;
    }
    return block;
}

OperatorMatrix annihilation_op(int dim) {
    require_dim(dim, 2);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return OperatorMatrix(std::move(a));
}

OperatorMatrix creation_op(int dim) {
    return annihilation_op(dim).adjoint();
}

OperatorMatrix number_op(int dim) {
    require_dim(dim, 2);
    Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        n(k, k) = static_cast<double>(k);
    }
    return OperatorMatrix(std::move(n));
}

OperatorMatrix matrix_exponential(const OperatorMatrix &m) {
    // Higham (2005) coefficients for the [13/13] approximant.
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const int dim = m.dim();
    const Eigen::MatrixXcd &a_in = m.entries();
    double norm1 = a_in.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    }
    if (squarings > 1000) {
        throw Error(ErrorKind::NumericOverflow, "matrix norm too large for exponentiation");
    }

    Eigen::MatrixXcd a = a_in / std::ldexp(1.0, squarings);
    Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd a2 = a * a;
    Eigen::MatrixXcd a4 = a2 * a2;
    Eigen::MatrixXcd a6 = a4 * a2;

    Eigen::MatrixXcd u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
    Eigen::MatrixXcd u = a * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
    Eigen::MatrixXcd v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
    Eigen::MatrixXcd v = a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

    Eigen::MatrixXcd r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < squarings; ++k) {
        r = r * r;
    }
    if (!r.allFinite()) {
        throw Error(ErrorKind::NumericOverflow, "matrix exponential overflowed");
    }
    return OperatorMatrix(std::move(r));
}

OperatorMatrix displacement_op(Complex beta, int dim) {
    OperatorMatrix a = annihilation_op(dim);
    return matrix_exponential(beta * a.adjoint() - std::conj(beta) * a);
}

OperatorMatrix displacement_op_laguerre(Complex beta, int dim) {
    require_dim(dim, 2);
    const double x = std::norm(beta);
    const double mag = std::abs(beta);
    const Complex phase = mag > 0 ? beta / mag : Complex(1.0, 0.0);

    std::vector<double> sq(2 * dim + 1);
    for (size_t j = 0; j < sq.size(); ++j) {
        sq[j] = std::sqrt(static_cast<double>(j));
    }

    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(dim, dim);
    std::vector<double> g(dim);
    for (int k = 0; k < dim; ++k) {
        const int len = dim - k;
        // g_n = sqrt(n!/(n+k)!) |beta|^k e^{-x/2} L_n^(k)(x)
        if (mag > 0) {
            g[0] = std::exp(k * std::log(mag) - 0.5 * x - 0.5 * std::lgamma(k + 1.0));
        } else {
            g[0] = (k == 0) ? 1.0 : 0.0;
        }
        if (len > 1) {
            g[1] = (1.0 + k - x) * g[0] / sq[k + 1];
        }
        for (int n = 1; n + 1 < len; ++n) {
            g[n + 1] = ((2.0 * n + 1.0 + k - x) * g[n] - sq[n] * sq[n + k] * g[n - 1]) / (sq[n + 1] * sq[n + k + 1]);
        }
        const Complex lower_phase = std::pow(phase, k);
        const Complex upper_phase = std::pow(-std::conj(phase), k);
        for (int n = 0; n < len; ++n) {
            d(n + k, n) = g[n] * lower_phase;
            if (k > 0) {
                d(n, n + k) = g[n] * upper_phase;
            }
        }
    }
    return OperatorMatrix(std::move(d));
}

namespace {

using SparseOp = Eigen::SparseMatrix<Complex>;

// beta a^dag - conj(beta) a, or xi a^dag^2 / 2 - conj(xi) a^2 / 2 when power == 2.
SparseOp ladder_generator(Complex coeff, int power, int dim) {
    std::vector<Eigen::Triplet<Complex>> entries;
    for (int n = power; n < dim; ++n) {
        double amp = 1;
        for (int k = 0; k < power; ++k) {
            amp *= std::sqrt(static_cast<double>(n - k));
        }
        Complex c = power == 2 ? 0.5 * coeff : coeff;
        entries.emplace_back(n, n - power, c * amp);
        entries.emplace_back(n - power, n, -std::conj(c) * amp);
    }
    SparseOp g(dim, dim);
    g.setFromTriplets(entries.begin(), entries.end());
    return g;
}

// exp(G) v for anti-Hermitian G by Taylor steps of unit 1-norm.
Eigen::VectorXcd exponential_action(const SparseOp &g, Eigen::VectorXcd v) {
    double norm = 0;
    for (int k = 0; k < g.outerSize(); ++k) {
        double col = 0;
        for (SparseOp::InnerIterator it(g, k); it; ++it) {
            col += std::abs(it.value());
        }
        norm = std::max(norm, col);
    }
    if (norm == 0) {
        return v;
    }
    const int steps = static_cast<int>(std::ceil(norm));
    const SparseOp h = g / static_cast<double>(steps);
    for (int step = 0; step < steps; ++step) {
        Eigen::VectorXcd term = v;
        Eigen::VectorXcd sum = v;
        const double scale = v.lpNorm<Eigen::Infinity>();
        for (int k = 1; k < 60; ++k) {
            term = (h * term) / static_cast<double>(k);
            sum += term;
            if (term.lpNorm<Eigen::Infinity>() <= 1e-18 * scale) {
                break;
            }
        }
        v = std::move(sum);
    }
    if (!v.allFinite()) {
        throw Error(ErrorKind::NumericOverflow, "exponential action produced non-finite amplitudes");
    }
    return v;
}

}  // namespace

FockVector apply_displacement(Complex beta, const FockVector &v) {
    return FockVector(exponential_action(ladder_generator(beta, 1, v.dim()), v.amps()));
}

FockVector apply_squeeze(double r, double theta, const FockVector &v) {
    if (!(r >= 0) || !std::isfinite(r) || !std::isfinite(theta)) {
        throw Error(ErrorKind::InvalidArgument, "squeeze magnitude must be finite and non-negative");
    }
    return FockVector(exponential_action(ladder_generator(std::polar(r, theta), 2, v.dim()), v.amps()));
}

OperatorMatrix squeeze_op(double r, double theta, int dim) {
    if (!(r >= 0) || !std::isfinite(r) || !std::isfinite(theta)) {
        throw Error(ErrorKind::InvalidArgument, "squeeze magnitude must be finite and non-negative");
    }
    OperatorMatrix a = annihilation_op(dim);
    OperatorMatrix a2 = a * a;
    Complex xi = std::polar(r, theta);
    return matrix_exponential(0.5 * xi * a2.adjoint() - 0.5 * std::conj(xi) * a2);
}

Complex expectation(const FockVector &state, const OperatorMatrix &op) {
    if (state.dim() != op.dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "state dim " + std::to_string(state.dim()) + " vs operator dim " + std::to_string(op.dim()));
    }
    if (!state.is_normalized()) {
        throw Error(ErrorKind::InvalidArgument, "expectation requires a normalized state");
    }
    return state.amps().dot(op.entries() * state.amps());
}

Complex matrix_element(const FockVector &bra, const OperatorMatrix &op, const FockVector &ket) {
    if (bra.dim() != op.dim() || ket.dim() != op.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "matrix element dimensions differ");
    }
    return bra.amps().dot(op.entries() * ket.amps());
}

Complex inner_product(const FockVector &bra, const FockVector &ket) {
    if (bra.dim() != ket.dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "inner product of dims " + std::to_string(bra.dim()) + " and " + std::to_string(ket.dim()));
    }
    // Eigen's dot conjugates the left operand.
    return bra.amps().dot(ket.amps());
}

double max_abs_diff(const OperatorMatrix &a, const OperatorMatrix &b, int block) {
    require_same(a.dim(), b.dim());
    block = std::min(block, a.dim());
    return (a.entries().topLeftCorner(block, block) - b.entries().topLeftCorner(block, block))
        .cwiseAbs()
        .maxCoeff();
}

}  // namespace spssvs
