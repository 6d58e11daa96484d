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

// Test-only helpers. The oracles here work on explicit Eigen vectors and
// Kronecker-product matrices and never call the library's factor-indexing code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "teleportlab/rng.hpp"
#include "teleportlab/tensor.hpp"

namespace teleportlab::testing {

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

/// Haar-random unitary via QR of a complex Gaussian matrix with phase-fixed R.
inline Eigen::MatrixXcd random_unitary(std::size_t n, CounterRng& rng) {
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd g(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            g(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < m; ++j) {
        const Complex d = r(j, j);
        q.col(j) *= d / std::abs(d);
    }
    return q;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::VectorXcd out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

inline Eigen::MatrixXcd eye(std::size_t n) {
    const auto m = static_cast<Eigen::Index>(n);
    return Eigen::MatrixXcd::Identity(m, m);
}

inline Eigen::VectorXcd vec(const PureState& s) {
    return Eigen::Map<const Eigen::VectorXcd>(s.amps().data(), static_cast<Eigen::Index>(s.size()));
}

inline Eigen::VectorXcd vec(std::initializer_list<Complex> amps) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
    Eigen::Index i = 0;
    for (auto a : amps) {
        v(i++) = a;
    }
    return v;
}

inline std::vector<Complex> to_std(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

/// |<a|b>|^2 / (|a|^2 |b|^2).
inline double fidelity_of(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

/// Generalized Bell element (a, b) on [d, d], straight from its definition.
inline Eigen::VectorXcd bell_element(std::size_t a, std::size_t b, std::size_t d) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d * d));
    const double pi = std::acos(-1.0);
    for (std::size_t x = 0; x < d; ++x) {
        const double angle = -2.0 * pi * static_cast<double>(b * x) / static_cast<double>(d);
        v(static_cast<Eigen::Index>(x * d + (x + a) % d)) = std::polar(1.0 / std::sqrt(double(d)), angle);
    }
    return v;
}

/// Brute-force teleportation oracle: builds psi (x) EPR_d as a d^3 vector,
/// applies the explicit projector |u><u| (x) I, and returns the receiver's
/// (unnormalized) amplitudes by reading the block for u's nonzero pattern.
inline Eigen::VectorXcd receiver_after_projection(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& u) {
    const auto d = static_cast<std::size_t>(psi.size());
    Eigen::VectorXcd epr = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d * d));
    for (std::size_t x = 0; x < d; ++x) {
        epr(static_cast<Eigen::Index>(x * d + x)) = 1.0 / std::sqrt(double(d));
    }
    const Eigen::VectorXcd full = kron(psi, epr);
    const Eigen::MatrixXcd proj = kron(Eigen::MatrixXcd(u * u.adjoint()), eye(d));
    const Eigen::VectorXcd projected = proj * full;
    // projected = u (x) r; recover r = (<u| (x) I) projected.
    const Eigen::MatrixXcd bra = kron(Eigen::MatrixXcd(u.adjoint()), eye(d));
    return bra * projected;
}

}  // namespace teleportlab::testing
