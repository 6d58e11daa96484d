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
#include <utility>
#include <vector>

#include "teleportlab/measurement.hpp"
#include "teleportlab/tensor.hpp"

namespace teleportlab {

/// Tolerance under which an induced map counts as unitary.
inline constexpr double kUnitarityTolerance = 1e-10;

/// exp(2 pi i k / d), exact at multiples of a quarter turn.
Complex root_of_unity(long long k, std::size_t d);

/// (1/sqrt(d)) sum_x |x, x> on shape [d, d].
PureState epr_pair(std::size_t d);

/// (|01> - |10>)/sqrt(2).
PureState singlet();

/// The four Bell states in a fixed order:
///   0: (|00> + |11>)/sqrt(2)   correction 1
///   1: (|00> - |11>)/sqrt(2)   correction Z
///   2: (|01> + |10>)/sqrt(2)   correction X
///   3: (|01> - |10>)/sqrt(2)   correction ZX
MeasurementBasis bell_basis();

/// d^2 states (1/sqrt(d)) sum_x w^(-b x) |x, x + a mod d>, w = exp(2 pi i / d),
/// at index a * d + b. Element (0, 0) is epr_pair(d); for d = 2 the basis
/// coincides element-for-element with bell_basis().
MeasurementBasis generalized_bell_basis(std::size_t d);

/// Outcome index of (shift a, phase b) in generalized_bell_basis(d).
constexpr std::size_t bell_index(std::size_t a, std::size_t b, std::size_t d) { return a * d + b; }

struct SchmidtDecomposition {
    /// Nonincreasing, nonnegative. Ordering among equal values is unspecified.
    std::vector<double> coefficients;
    std::vector<PureState> left_vectors;
    std::vector<PureState> right_vectors;

    /// sum_i lambda_i |a_i> (x) |b_i>, in the original register shape.
    PureState reconstruct() const;
};

/// Schmidt decomposition across the cut after the first `cut` factors.
/// Throws std::invalid_argument unless 1 <= cut < number of factors.
SchmidtDecomposition schmidt(const PureState& s, std::size_t cut);

/// Transfer matrix from particle-1 states to particle-3 states for one
/// measurement outcome, scaled by d so that a maximally entangled element with
/// an EPR resource yields an exact unitary.
struct InducedMap {
    DenseOperator matrix;
    std::size_t outcome_index = 0;
};

/// Projects |phi>_1 (x) resource_23 onto each basis element on factors (1, 2)
/// and records the resulting linear map phi -> residual on factor 3.
std::vector<InducedMap> induced_maps(const MeasurementBasis& basis, const PureState& resource);

struct UnitarityReport {
    std::vector<double> defects;  ///< max |M^dagger M - I| entry per outcome
    bool unitary = false;         ///< every defect <= kUnitarityTolerance
};

UnitarityReport unitarity_report(const std::vector<InducedMap>& maps);

struct BellOperatorCheck {
    bool passed = false;
    /// (ZZ eigenvalue, XX eigenvalue) per element; 0 marks a non-eigenvector.
    std::vector<std::pair<int, int>> eigenvalues;
};

/// Checks that each element is a joint eigenvector of Z(x)Z and X(x)X with each
/// of the four sign pairs appearing exactly once. Throws std::invalid_argument
/// unless the basis has 4 elements on shape [2, 2].
BellOperatorCheck bell_operator_check(const MeasurementBasis& basis);

/// Pauli matrices.
DenseOperator pauli_x();
DenseOperator pauli_z();

}  // namespace teleportlab
