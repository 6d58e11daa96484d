// Copyright 2026 The teleportlab Authors
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

// Dense pure states and operators over multi-qudit registers.
//
// Basis ordering is big-endian: factor 0 is the most significant digit of the
// flat amplitude index. For shape [d0, d1, d2] the amplitude of |i, j, k> sits
// at ((i * d1) + j) * d2 + k.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace teleportlab {

using Complex = std::complex<double>;

/// Squared-norm tolerance used for normalization checks.
inline constexpr double kNormTolerance = 1e-12;

/// Largest total register dimension the dense representation accepts.
inline constexpr std::size_t kMaxTotalDimension = std::size_t{1} << 20;

class RegisterShape {
public:
    RegisterShape() = default;
    /// Throws std::invalid_argument if any dim < 2, the list is empty, or the
    /// product exceeds kMaxTotalDimension.
    explicit RegisterShape(std::vector<std::size_t> dims);

    static RegisterShape uniform(std::size_t d, std::size_t count);

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t num_factors() const { return dims_.size(); }
    std::size_t dim(std::size_t factor) const { return dims_.at(factor); }
    std::size_t total() const { return total_; }

    /// Stride of a factor in the flat index (product of later dims).
    std::size_t stride(std::size_t factor) const;

    /// Dimension of the sub-register formed by `factors`, in the given order.
    std::size_t sub_total(std::span<const std::size_t> factors) const;

    RegisterShape concat(const RegisterShape& other) const;

    bool operator==(const RegisterShape&) const = default;

private:
    std::vector<std::size_t> dims_;
    std::size_t total_ = 0;
};

/// Normalized amplitude vector. Immutable after construction.
class PureState {
public:
    const RegisterShape& shape() const { return shape_; }
    const std::vector<Complex>& amps() const { return amps_; }
    Complex amp(std::size_t index) const { return amps_.at(index); }
    std::size_t size() const { return amps_.size(); }

private:
    friend PureState make_state(RegisterShape shape, std::vector<Complex> amps);
    PureState(RegisterShape shape, std::vector<Complex> amps)
        : shape_(std::move(shape)), amps_(std::move(amps)) {}

    RegisterShape shape_;
    std::vector<Complex> amps_;
};

/// Unnormalized vector on a register, e.g. the image of a projector.
struct RawVector {
    RegisterShape shape;
    std::vector<Complex> amps;
    double squared_norm = 0.0;
};

/// Linear map from a dim_in space to a dim_out space.
class DenseOperator {
public:
    /// Throws if the matrix is empty or holds a non-finite entry.
    explicit DenseOperator(Eigen::MatrixXcd entries);

    static DenseOperator identity(std::size_t d);

    std::size_t dim_in() const { return static_cast<std::size_t>(entries_.cols()); }
    std::size_t dim_out() const { return static_cast<std::size_t>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const { return entries_; }

    DenseOperator adjoint() const;
    /// Operator product: (*this) after `rhs`.
    DenseOperator operator*(const DenseOperator& rhs) const;

    /// max |U^dagger U - I| entry; 0 for an exact isometry.
    double unitarity_defect() const;

private:
    Eigen::MatrixXcd entries_;
};

/// Builds a state, rescaling `amps` to unit norm. Global phase is kept.
/// Throws std::invalid_argument on length mismatch, zero vector, non-finite entry.
PureState make_state(RegisterShape shape, std::vector<Complex> amps);

PureState make_state(const RawVector& raw);

/// Computational basis state |index> on `shape`.
PureState basis_state(const RegisterShape& shape, std::size_t index);

PureState tensor(const PureState& a, const PureState& b);

/// <a|b>, conjugate-linear in a. Throws on shape mismatch.
Complex inner(const PureState& a, const PureState& b);

/// |<a|b>|^2.
double fidelity(const PureState& a, const PureState& b);

/// Applies `op` to the ordered factor list `targets` (targets[0] is the most
/// significant digit of the operator's index). The result is returned raw so
/// callers can read off projector coefficients before renormalizing.
RawVector apply_to_factors(const DenseOperator& op, std::span<const std::size_t> targets,
                           const PureState& s);

RawVector apply_to_factors(const DenseOperator& op, std::span<const std::size_t> targets,
                           const RawVector& s);

/// Partial inner product <u|_targets s: contracts the `targets` factors of `s`
/// against `u` and returns the residual vector on the remaining factors (kept in
/// their original relative order). Throws if every factor is targeted.
RawVector contract_factors(const PureState& u, std::span<const std::size_t> targets,
                           const PureState& s);

/// Inverse of contract_factors for a product: places `u` on `targets` and
/// `rest` on the remaining factors of a register with `full_shape`.
RawVector embed_factors(const PureState& u, std::span<const std::size_t> targets,
                        const RawVector& rest, const RegisterShape& full_shape);

/// New factor i is old factor perm[i]. Throws std::invalid_argument if `perm`
/// is not a permutation of 0..n-1.
PureState permute_factors(const PureState& s, std::span<const std::size_t> perm);

/// The permutation equal to applying `first` and then `second`:
/// permute_factors(s, compose(second, first)) ==
/// permute_factors(permute_factors(s, first), second).
std::vector<std::size_t> compose(std::span<const std::size_t> second,
                                 std::span<const std::size_t> first);

}  // namespace teleportlab
