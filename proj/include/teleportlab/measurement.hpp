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

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "teleportlab/rng.hpp"
#include "teleportlab/tensor.hpp"

namespace teleportlab {

/// Pairwise orthonormality tolerance enforced when a basis is built.
inline constexpr double kOrthonormalityTolerance = 1e-10;

/// Squared norms at or below this are treated as an impossible outcome.
inline constexpr double kZeroProbability = 1e-24;

/// Raised when a candidate basis fails the orthonormality check.
class BasisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the caller asks for an outcome that has probability zero.
class ZeroProbabilityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Orthonormal family of states on a sub-register. A family with as many
/// elements as the sub-register dimension is complete.
class MeasurementBasis {
public:
    /// Throws BasisError if the elements are not pairwise orthonormal within
    /// kOrthonormalityTolerance, and std::invalid_argument on shape mismatch or
    /// too many elements.
    MeasurementBasis(RegisterShape sub_shape, std::vector<PureState> elements);

    /// Computational basis |0>, |1>, ... of `sub_shape`.
    static MeasurementBasis computational(const RegisterShape& sub_shape);

    const RegisterShape& sub_shape() const { return sub_shape_; }
    const std::vector<PureState>& elements() const { return elements_; }
    const PureState& element(std::size_t k) const { return elements_.at(k); }
    std::size_t size() const { return elements_.size(); }
    bool complete() const { return complete_; }

private:
    RegisterShape sub_shape_;
    std::vector<PureState> elements_;
    bool complete_ = false;
};

struct MeasurementOutcome {
    std::size_t index = 0;
    double probability = 0.0;
    /// Full register, measured factors collapsed onto element `index`.
    PureState post_state;
};

/// Born probabilities of every basis element on `targets`. Requires a complete basis.
std::vector<double> born_probabilities(const PureState& s, const MeasurementBasis& basis,
                                       std::span<const std::size_t> targets);

/// (|u_k><u_k|)_targets s for every k, unnormalized. For a complete basis these
/// sum to s.
std::vector<RawVector> raw_projections(const PureState& s, const MeasurementBasis& basis,
                                       std::span<const std::size_t> targets);

/// Collapses onto element k. Throws ZeroProbabilityError if that outcome is impossible.
MeasurementOutcome project_outcome(const PureState& s, const MeasurementBasis& basis,
                                   std::span<const std::size_t> targets, std::size_t k);

/// Draws an outcome from the Born distribution using `rng`.
MeasurementOutcome sample_outcome(const PureState& s, const MeasurementBasis& basis,
                                  std::span<const std::size_t> targets, CounterRng& rng);

/// max |sum_k |u_k><u_k| - I| entry; 0 for a complete basis.
double completeness_defect(const MeasurementBasis& basis);

}  // namespace teleportlab
