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

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "spssvs/error.h"

namespace spssvs {

using Complex = std::complex<double>;

/// A state in the Fock basis truncated at photon number dim - 1.
///
/// Amplitudes are indexed by photon number. Construction rejects NaN/Inf.
class FockVector {
   public:
    explicit FockVector(Eigen::VectorXcd amps);

    /// Number state |n> in a space of dimension dim.
    static FockVector basis(int dim, int n);

    int dim() const {
        return static_cast<int>(amps_.size());
    }
    const Eigen::VectorXcd &amps() const {
        return amps_;
    }
    Complex operator[](int n) const {
        return amps_[n];
    }

    double norm_sq() const {
        return amps_.squaredNorm();
    }
    bool is_normalized(double tol = 1e-10) const;

    /// Throws DegenerateState when the norm is below 1e-14.
    FockVector normalized() const;

    /// Weight carried by the top `count` photon numbers, i.e. sum over n > N_max - count.
    double tail_weight(int count = 5) const;

    /// Zero-pads or truncates to the requested dimension.
    FockVector resized(int dim) const;

   private:
    Eigen::VectorXcd amps_;
};

/// Dense square operator on the truncated Fock space.
class OperatorMatrix {
   public:
    explicit OperatorMatrix(Eigen::MatrixXcd entries);

    static OperatorMatrix identity(int dim);
    static OperatorMatrix zero(int dim);

    int dim() const {
        return static_cast<int>(entries_.rows());
    }
    const Eigen::MatrixXcd &entries() const {
        return entries_;
    }
    Complex operator()(int row, int col) const {
        return entries_(row, col);
    }

    OperatorMatrix adjoint() const;

    friend OperatorMatrix operator+(const OperatorMatrix &a, const OperatorMatrix &b);
    friend OperatorMatrix operator-(const OperatorMatrix &a, const OperatorMatrix &b);
    friend OperatorMatrix operator*(const OperatorMatrix &a, const OperatorMatrix &b);
    friend OperatorMatrix operator*(Complex c, const OperatorMatrix &a);
    friend FockVector operator*(const OperatorMatrix &a, const FockVector &v);

   private:
    Eigen::MatrixXcd entries_;
};

struct TruncationPolicy {
    enum class Mode { Fixed, Adaptive };

    static constexpr double kDefaultTailTol = 1e-12;
    static constexpr int kDefaultHardCap = 1024;

    Mode mode = Mode::Adaptive;
    int fixed_dim = 0;
    double tail_tol = kDefaultTailTol;
    int hard_cap = kDefaultHardCap;

    static TruncationPolicy fixed(int dim, int hard_cap = kDefaultHardCap);
    static TruncationPolicy adaptive(double tail_tol = kDefaultTailTol, int hard_cap = kDefaultHardCap);

    /// Dimensions tried in order. Adaptive mode walks a roughly geometric
    /// ladder from 32 up to hard_cap.
    std::vector<int> candidate_dims() const;

    /// Same policy with every candidate dimension doubled. Used by the
    /// convergence checks, which may exceed hard_cap.
    TruncationPolicy doubled(int dim) const;
};

/// Size of the leading block n <= dim - ceil(dim/4) that the truncation at
/// the top of the ladder does not corrupt.
int clean_block_size(int dim);

/// Leading columns of op whose weight in the last five rows stays below tol,
/// capped at clean_block_size. Operators that spread columns far up the
/// ladder (squeezing) have a much smaller clean block than the fixed rule.
int operator_clean_block(const OperatorMatrix &op, double tol = 1e-16);

OperatorMatrix annihilation_op(int dim);
OperatorMatrix creation_op(int dim);
OperatorMatrix number_op(int dim);

/// exp(M) by scaling and squaring with a degree-13 Pade approximant.
OperatorMatrix matrix_exponential(const OperatorMatrix &m);

/// D(beta) = exp(beta a^dag - conj(beta) a), built by exponentiating the
/// truncated generator.
OperatorMatrix displacement_op(Complex beta, int dim);

/// D(beta) from the closed-form matrix elements
///   <m|D|n> = sqrt(n!/m!) beta^(m-n) e^{-|beta|^2/2} L_n^(m-n)(|beta|^2),  m >= n,
/// evaluated with a normalised Laguerre recurrence. These are the exact
/// infinite-space elements restricted to the first dim rows and columns.
OperatorMatrix displacement_op_laguerre(Complex beta, int dim);

/// D(beta) v with the same truncated generator as displacement_op, applied
/// to the vector by a sparse Taylor series instead of forming the matrix.
FockVector apply_displacement(Complex beta, const FockVector &v);

/// S(xi) v, matching squeeze_op(r, theta, v.dim()) * v.
FockVector apply_squeeze(double r, double theta, const FockVector &v);

/// S(xi) = exp(xi a^dag^2 / 2 - conj(xi) a^2 / 2), xi = r e^{i theta}.
OperatorMatrix squeeze_op(double r, double theta, int dim);

/// <state|op|state>; the state must be normalized.
Complex expectation(const FockVector &state, const OperatorMatrix &op);

/// <bra|op|ket> with no normalization requirement.
Complex matrix_element(const FockVector &bra, const OperatorMatrix &op, const FockVector &ket);

/// <bra|ket>.
Complex inner_product(const FockVector &bra, const FockVector &ket);

/// max |a_ij - b_ij| over the leading block x block entries.
double max_abs_diff(const OperatorMatrix &a, const OperatorMatrix &b, int block);

/// Builds a state dimension by dimension along the policy's ladder until its
/// tail weight falls under tail_tol. Fixed policies build exactly once.
template <class Builder>
FockVector build_truncated(const TruncationPolicy &policy, Builder &&build) {
    if (policy.mode == TruncationPolicy::Mode::Fixed) {
        return build(policy.fixed_dim);
    }
    double last_tail = 0;
    int last_dim = 0;
    for (int dim : policy.candidate_dims()) {
        FockVector state = build(dim);
        last_tail = state.tail_weight();
        last_dim = dim;
        if (last_tail <= policy.tail_tol) {
            return state;
        }
    }
    throw Error(ErrorKind::TruncationInsufficient,
                "tail weight " + std::to_string(last_tail) + " at dim " + std::to_string(last_dim) +
                    " exceeds tolerance " + std::to_string(policy.tail_tol));
}

}  // namespace spssvs
