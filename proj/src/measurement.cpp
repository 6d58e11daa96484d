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

#include "teleportlab/measurement.hpp"

#include <cmath>
#include <string>

namespace teleportlab {

namespace {

void check_targets_match(const PureState& s, const MeasurementBasis& basis,
                         std::span<const std::size_t> targets) {
    const auto& sub = basis.sub_shape().dims();
    if (targets.size() != sub.size()) {
        throw std::invalid_argument("target count does not match basis sub-register");
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] >= s.shape().num_factors() || s.shape().dim(targets[i]) != sub[i]) {
            throw std::invalid_argument("target factor dims do not match basis sub-register");
        }
    }
}

void require_complete(const MeasurementBasis& basis) {
    if (!basis.complete()) {
        throw std::invalid_argument("operation requires a complete measurement basis");
    }
}

// Projection of s onto element k; handles the case where every factor is measured.
RawVector project_raw(const PureState& s, const PureState& u, std::span<const std::size_t> targets) {
    if (targets.size() == s.shape().num_factors()) {
        // Whole register measured: <u|s> reordered to the target order.
        std::vector<std::size_t> perm(targets.begin(), targets.end());
        const auto reordered = permute_factors(s, perm);
        const Complex c = inner(u, reordered);
        RawVector proj{s.shape(), std::vector<Complex>(s.size()), 0.0};
        // Map u back into the original factor order.
        std::vector<std::size_t> inv(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
            inv[perm[i]] = i;
        }
        const auto u_back = permute_factors(u, inv);
        for (std::size_t i = 0; i < proj.amps.size(); ++i) {
            proj.amps[i] = c * u_back.amps()[i];
        }
        proj.squared_norm = std::norm(c);
        return proj;
    }
    const auto residual = contract_factors(u, targets, s);
    return embed_factors(u, targets, residual, s.shape());
}

}  // namespace

MeasurementBasis::MeasurementBasis(RegisterShape sub_shape, std::vector<PureState> elements)
    : sub_shape_(std::move(sub_shape)), elements_(std::move(elements)) {
    if (elements_.empty()) {
        throw std::invalid_argument("measurement basis needs at least one element");
    }
    if (elements_.size() > sub_shape_.total()) {
        throw std::invalid_argument("more basis elements than the sub-register dimension");
    }
    for (const auto& e : elements_) {
        if (!(e.shape() == sub_shape_)) {
            throw std::invalid_argument("basis element shape does not match sub-register");
        }
    }
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        for (std::size_t j = i; j < elements_.size(); ++j) {
            const Complex g = inner(elements_[i], elements_[j]);
            const double expected = i == j ? 1.0 : 0.0;
            if (std::abs(g - expected) > kOrthonormalityTolerance) {
                throw BasisError("basis elements " + std::to_string(i) + " and " +
                                 std::to_string(j) + " are not orthonormal (|<u_i|u_j>| = " +
                                 std::to_string(std::abs(g)) + ")");
            }
        }
    }
    complete_ = elements_.size() == sub_shape_.total();
}

MeasurementBasis MeasurementBasis::computational(const RegisterShape& sub_shape) {
    std::vector<PureState> elements;
    elements.reserve(sub_shape.total());
    for (std::size_t k = 0; k < sub_shape.total(); ++k) {
        elements.push_back(basis_state(sub_shape, k));
    }
    return MeasurementBasis(sub_shape, std::move(elements));
}

std::vector<double> born_probabilities(const PureState& s, const MeasurementBasis& basis,
                                       std::span<const std::size_t> targets) {
    require_complete(basis);
    check_targets_match(s, basis, targets);
    std::vector<double> probs;
    probs.reserve(basis.size());
    for (const auto& u : basis.elements()) {
        if (targets.size() == s.shape().num_factors()) {
            probs.push_back(project_raw(s, u, targets).squared_norm);
        } else {
            // |u> has unit norm, so the projection norm equals the residual norm.
            probs.push_back(contract_factors(u, targets, s).squared_norm);
        }
    }
    return probs;
}

std::vector<RawVector> raw_projections(const PureState& s, const MeasurementBasis& basis,
                                       std::span<const std::size_t> targets) {
    check_targets_match(s, basis, targets);
    std::vector<RawVector> out;
    out.reserve(basis.size());
    for (const auto& u : basis.elements()) {
        out.push_back(project_raw(s, u, targets));
    }
    return out;
}

MeasurementOutcome project_outcome(const PureState& s, const MeasurementBasis& basis,
                                   std::span<const std::size_t> targets, std::size_t k) {
    check_targets_match(s, basis, targets);
    if (k >= basis.size()) {
        throw std::invalid_argument("outcome index " + std::to_string(k) + " out of range");
    }
    auto raw = project_raw(s, basis.element(k), targets);
    if (raw.squared_norm <= kZeroProbability) {
        throw ZeroProbabilityError("outcome " + std::to_string(k) + " has zero probability");
    }
    const double p = raw.squared_norm;
    return MeasurementOutcome{k, p, make_state(raw)};
}

MeasurementOutcome sample_outcome(const PureState& s, const MeasurementBasis& basis,
                                  std::span<const std::size_t> targets, CounterRng& rng) {
    const auto probs = born_probabilities(s, basis, targets);
    return project_outcome(s, basis, targets, rng.pick(probs));
}

double completeness_defect(const MeasurementBasis& basis) {
    const auto n = static_cast<Eigen::Index>(basis.sub_shape().total());
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& u : basis.elements()) {
        const Eigen::Map<const Eigen::VectorXcd> v(u.amps().data(), n);
        sum += v * v.adjoint();
    }
    return (sum - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

}  // namespace teleportlab
