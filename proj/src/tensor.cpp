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

#include "teleportlab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace teleportlab {

namespace {

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double squared_norm(std::span<const Complex> amps) {
    double acc = 0.0;
    for (const auto& a : amps) {
        acc += std::norm(a);
    }
    return acc;
}

void check_targets(const RegisterShape& shape, std::span<const std::size_t> targets) {
    std::vector<bool> seen(shape.num_factors(), false);
    for (auto t : targets) {
        if (t >= shape.num_factors()) {
            throw std::invalid_argument("target factor " + std::to_string(t) + " out of range");
        }
        if (seen[t]) {
            throw std::invalid_argument("target factor " + std::to_string(t) + " repeated");
        }
        seen[t] = true;
    }
}

// Flat-index offsets of every configuration of the listed factors, with
// factors[0] as the most significant digit.
std::vector<std::size_t> offsets(const RegisterShape& shape, std::span<const std::size_t> factors) {
    std::vector<std::size_t> out{0};
    for (auto f : factors) {
        const auto d = shape.dim(f);
        const auto st = shape.stride(f);
        std::vector<std::size_t> next;
        next.reserve(out.size() * d);
        for (auto base : out) {
            for (std::size_t x = 0; x < d; ++x) {
                next.push_back(base + x * st);
            }
        }
        out = std::move(next);
    }
    return out;
}

std::vector<std::size_t> complement(const RegisterShape& shape, std::span<const std::size_t> targets) {
    std::vector<std::size_t> rest;
    for (std::size_t f = 0; f < shape.num_factors(); ++f) {
        if (std::find(targets.begin(), targets.end(), f) == targets.end()) {
            rest.push_back(f);
        }
    }
    return rest;
}

RawVector apply_impl(const DenseOperator& op, std::span<const std::size_t> targets,
                     const RegisterShape& shape, std::span<const Complex> amps) {
    check_targets(shape, targets);
    const auto sub = shape.sub_total(targets);
    if (op.dim_in() != sub || op.dim_out() != sub) {
        throw std::invalid_argument("operator dimension does not match target factors");
    }
    const auto rest = complement(shape, targets);
    const auto t_off = offsets(shape, targets);
    const auto r_off = offsets(shape, rest);
    const auto& m = op.entries();

    RawVector out{shape, std::vector<Complex>(amps.size()), 0.0};
    Eigen::VectorXcd in_sub(static_cast<Eigen::Index>(sub));
    for (auto base : r_off) {
        for (std::size_t t = 0; t < sub; ++t) {
            in_sub[static_cast<Eigen::Index>(t)] = amps[base + t_off[t]];
        }
        const Eigen::VectorXcd out_sub = m * in_sub;
        for (std::size_t t = 0; t < sub; ++t) {
            out.amps[base + t_off[t]] = out_sub[static_cast<Eigen::Index>(t)];
        }
    }
    out.squared_norm = squared_norm(out.amps);
    return out;
}

}  // namespace

RegisterShape::RegisterShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw std::invalid_argument("register shape needs at least one factor");
    }
    std::size_t total = 1;
    for (auto d : dims_) {
        if (d < 2) {
            throw std::invalid_argument("factor dimension must be >= 2, got " + std::to_string(d));
        }
        if (total > kMaxTotalDimension / d) {
            throw std::invalid_argument("register dimension exceeds cap of " +
                                        std::to_string(kMaxTotalDimension));
        }
        total *= d;
    }
    total_ = total;
}

RegisterShape RegisterShape::uniform(std::size_t d, std::size_t count) {
    return RegisterShape(std::vector<std::size_t>(count, d));
}

std::size_t RegisterShape::stride(std::size_t factor) const {
    std::size_t s = 1;
    for (std::size_t f = dims_.size(); f-- > factor + 1;) {
        s *= dims_[f];
    }
    return s;
}

std::size_t RegisterShape::sub_total(std::span<const std::size_t> factors) const {
    std::size_t s = 1;
    for (auto f : factors) {
        s *= dim(f);
    }
    return s;
}

RegisterShape RegisterShape::concat(const RegisterShape& other) const {
    auto dims = dims_;
    dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
    return RegisterShape(std::move(dims));
}

DenseOperator::DenseOperator(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.size() == 0) {
        throw std::invalid_argument("operator must be non-empty");
    }
    if (!entries_.allFinite()) {
        throw std::invalid_argument("operator has a non-finite entry");
    }
}

DenseOperator DenseOperator::identity(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return DenseOperator(Eigen::MatrixXcd::Identity(n, n));
}

DenseOperator DenseOperator::adjoint() const { return DenseOperator(entries_.adjoint()); }

DenseOperator DenseOperator::operator*(const DenseOperator& rhs) const {
    if (dim_in() != rhs.dim_out()) {
        throw std::invalid_argument("operator product dimension mismatch");
    }
    return DenseOperator(entries_ * rhs.entries_);
}

double DenseOperator::unitarity_defect() const {
    const Eigen::MatrixXcd g = entries_.adjoint() * entries_;
    return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

PureState make_state(RegisterShape shape, std::vector<Complex> amps) {
    if (amps.size() != shape.total()) {
        throw std::invalid_argument("amplitude count " + std::to_string(amps.size()) +
                                    " does not match register dimension " +
                                    std::to_string(shape.total()));
    }
    for (const auto& a : amps) {
        if (!is_finite(a)) {
            throw std::invalid_argument("non-finite amplitude");
        }
    }
    const double n2 = squared_norm(amps);
    if (!(n2 > 0.0)) {
        throw std::invalid_argument("cannot normalize the zero vector");
    }
    if (n2 != 1.0) {
        const double scale = 1.0 / std::sqrt(n2);
        for (auto& a : amps) {
            a *= scale;
        }
    }
    return PureState(std::move(shape), std::move(amps));
}

PureState make_state(const RawVector& raw) { return make_state(raw.shape, raw.amps); }

PureState basis_state(const RegisterShape& shape, std::size_t index) {
    if (index >= shape.total()) {
        throw std::invalid_argument("basis index out of range");
    }
    std::vector<Complex> amps(shape.total());
    amps[index] = 1.0;
    return make_state(shape, std::move(amps));
}

PureState tensor(const PureState& a, const PureState& b) {
    std::vector<Complex> amps;
    amps.reserve(a.size() * b.size());
    for (const auto& x : a.amps()) {
        for (const auto& y : b.amps()) {
            amps.push_back(x * y);
        }
    }
    return make_state(a.shape().concat(b.shape()), std::move(amps));
}

Complex inner(const PureState& a, const PureState& b) {
    if (!(a.shape() == b.shape())) {
        throw std::invalid_argument("inner product of states with different shapes");
    }
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a.amps()[i]) * b.amps()[i];
    }
    return acc;
}

double fidelity(const PureState& a, const PureState& b) { return std::norm(inner(a, b)); }

RawVector apply_to_factors(const DenseOperator& op, std::span<const std::size_t> targets,
                           const PureState& s) {
    return apply_impl(op, targets, s.shape(), s.amps());
}

RawVector apply_to_factors(const DenseOperator& op, std::span<const std::size_t> targets,
                           const RawVector& s) {
    return apply_impl(op, targets, s.shape, s.amps);
}

RawVector contract_factors(const PureState& u, std::span<const std::size_t> targets,
                           const PureState& s) {
    const auto& shape = s.shape();
    check_targets(shape, targets);
    std::vector<std::size_t> sub_dims;
    for (auto t : targets) {
        sub_dims.push_back(shape.dim(t));
    }
    if (u.shape().dims() != sub_dims) {
        throw std::invalid_argument("contracted state does not match target factor dims");
    }
    const auto rest = complement(shape, targets);
    if (rest.empty()) {
        throw std::invalid_argument("contraction would leave no factors");
    }
    std::vector<std::size_t> rest_dims;
    for (auto f : rest) {
        rest_dims.push_back(shape.dim(f));
    }
    const auto t_off = offsets(shape, targets);
    const auto r_off = offsets(shape, rest);

    RawVector out{RegisterShape(rest_dims), std::vector<Complex>(r_off.size()), 0.0};
    for (std::size_t r = 0; r < r_off.size(); ++r) {
        Complex acc = 0.0;
        for (std::size_t t = 0; t < t_off.size(); ++t) {
            acc += std::conj(u.amps()[t]) * s.amps()[r_off[r] + t_off[t]];
        }
        out.amps[r] = acc;
    }
    out.squared_norm = squared_norm(out.amps);
    return out;
}

RawVector embed_factors(const PureState& u, std::span<const std::size_t> targets,
                        const RawVector& rest, const RegisterShape& full_shape) {
    check_targets(full_shape, targets);
    const auto rest_factors = complement(full_shape, targets);
    const auto t_off = offsets(full_shape, targets);
    const auto r_off = offsets(full_shape, rest_factors);
    if (t_off.size() != u.size() || r_off.size() != rest.amps.size()) {
        throw std::invalid_argument("embedded vectors do not match the register shape");
    }
    RawVector out{full_shape, std::vector<Complex>(full_shape.total()), 0.0};
    for (std::size_t r = 0; r < r_off.size(); ++r) {
        for (std::size_t t = 0; t < t_off.size(); ++t) {
            out.amps[r_off[r] + t_off[t]] = u.amps()[t] * rest.amps[r];
        }
    }
    out.squared_norm = squared_norm(out.amps);
    return out;
}

PureState permute_factors(const PureState& s, std::span<const std::size_t> perm) {
    const auto& shape = s.shape();
    const auto n = shape.num_factors();
    if (perm.size() != n) {
        throw std::invalid_argument("permutation length does not match factor count");
    }
    std::vector<bool> seen(n, false);
    for (auto p : perm) {
        if (p >= n || seen[p]) {
            throw std::invalid_argument("not a permutation of the register factors");
        }
        seen[p] = true;
    }
    std::vector<std::size_t> new_dims;
    for (auto p : perm) {
        new_dims.push_back(shape.dim(p));
    }
    // offsets() over the old shape enumerates old indices in new-factor order.
    const auto old_index = offsets(shape, perm);
    std::vector<Complex> amps(old_index.size());
    for (std::size_t i = 0; i < old_index.size(); ++i) {
        amps[i] = s.amps()[old_index[i]];
    }
    return make_state(RegisterShape(std::move(new_dims)), std::move(amps));
}

std::vector<std::size_t> compose(std::span<const std::size_t> second,
                                 std::span<const std::size_t> first) {
    if (second.size() != first.size()) {
        throw std::invalid_argument("cannot compose permutations of different lengths");
    }
    std::vector<std::size_t> out(second.size());
    for (std::size_t i = 0; i < second.size(); ++i) {
        if (second[i] >= first.size()) {
            throw std::invalid_argument("not a permutation of the register factors");
        }
        out[i] = first[second[i]];
    }
    return out;
}

}  // namespace teleportlab
