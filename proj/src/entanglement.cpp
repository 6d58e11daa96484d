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

#include "teleportlab/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace teleportlab {

namespace {

constexpr double kEigenResidualTolerance = 1e-10;

Eigen::VectorXcd as_vector(const PureState& s) {
    return Eigen::Map<const Eigen::VectorXcd>(s.amps().data(), static_cast<Eigen::Index>(s.size()));
}

// Returns +1/-1 if op*u = +-u within tolerance, else 0.
int sign_eigenvalue(const DenseOperator& op, const PureState& u) {
    const Eigen::VectorXcd v = as_vector(u);
    const Eigen::VectorXcd w = op.entries() * v;
    const Complex lambda = v.dot(w);  // conjugates v
    for (int sign : {1, -1}) {
        if (std::abs(lambda - static_cast<double>(sign)) < kEigenResidualTolerance &&
            (w - static_cast<double>(sign) * v).norm() <= kEigenResidualTolerance) {
            return sign;
        }
    }
    return 0;
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
    const auto& x = a.entries();
    const auto& y = b.entries();
    Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return DenseOperator(std::move(out));
}

}  // namespace

Complex root_of_unity(long long k, std::size_t d) {
    const auto dd = static_cast<long long>(d);
    k %= dd;
    if (k < 0) {
        k += dd;
    }
    if ((4 * k) % dd == 0) {
        static constexpr std::array<Complex, 4> quarter{Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                                                        Complex(0, -1)};
        return quarter[static_cast<std::size_t>(4 * k / dd)];
    }
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d));
}

PureState epr_pair(std::size_t d) {
    if (d < 2) {
        throw std::invalid_argument("epr_pair needs d >= 2");
    }
    std::vector<Complex> amps(d * d);
    for (std::size_t x = 0; x < d; ++x) {
        amps[x * d + x] = 1.0;
    }
    return make_state(RegisterShape({d, d}), std::move(amps));
}

PureState singlet() {
    return make_state(RegisterShape({2, 2}), {0.0, 1.0, -1.0, 0.0});
}

MeasurementBasis bell_basis() {
    const RegisterShape shape({2, 2});
    std::vector<PureState> elements;
    elements.push_back(make_state(shape, {1.0, 0.0, 0.0, 1.0}));
    elements.push_back(make_state(shape, {1.0, 0.0, 0.0, -1.0}));
    elements.push_back(make_state(shape, {0.0, 1.0, 1.0, 0.0}));
    elements.push_back(make_state(shape, {0.0, 1.0, -1.0, 0.0}));
    return MeasurementBasis(shape, std::move(elements));
}

MeasurementBasis generalized_bell_basis(std::size_t d) {
    if (d < 2) {
        throw std::invalid_argument("generalized_bell_basis needs d >= 2");
    }
    const RegisterShape shape({d, d});
    std::vector<PureState> elements;
    elements.reserve(d * d);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            std::vector<Complex> amps(d * d);
            for (std::size_t x = 0; x < d; ++x) {
                const auto bx = static_cast<long long>(b * x);
                amps[x * d + (x + a) % d] = root_of_unity(-bx, d);
            }
            elements.push_back(make_state(shape, std::move(amps)));
        }
    }
    return MeasurementBasis(shape, std::move(elements));
}

PureState SchmidtDecomposition::reconstruct() const {
    if (coefficients.empty()) {
        throw std::invalid_argument("empty Schmidt decomposition");
    }
    const auto shape = left_vectors.front().shape().concat(right_vectors.front().shape());
    std::vector<Complex> amps(shape.total());
    const auto nr = right_vectors.front().size();
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        const auto& a = left_vectors[i].amps();
        const auto& b = right_vectors[i].amps();
        for (std::size_t x = 0; x < a.size(); ++x) {
            for (std::size_t y = 0; y < nr; ++y) {
                amps[x * nr + y] += coefficients[i] * a[x] * b[y];
            }
        }
    }
    return make_state(shape, std::move(amps));
}

SchmidtDecomposition schmidt(const PureState& s, std::size_t cut) {
    const auto& dims = s.shape().dims();
    if (cut < 1 || cut >= dims.size()) {
        throw std::invalid_argument("Schmidt cut must satisfy 1 <= cut < " +
                                    std::to_string(dims.size()));
    }
    const RegisterShape left(std::vector<std::size_t>(dims.begin(), dims.begin() + static_cast<long>(cut)));
    const RegisterShape right(std::vector<std::size_t>(dims.begin() + static_cast<long>(cut), dims.end()));
    const auto rows = static_cast<Eigen::Index>(left.total());
    const auto cols = static_cast<Eigen::Index>(right.total());

    // Big-endian ordering makes the amplitude vector the row-major rows x cols matrix.
    const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        s.amps().data(), rows, cols);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

    SchmidtDecomposition out;
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        out.coefficients.push_back(sv[i]);
        const Eigen::VectorXcd u = svd.matrixU().col(i);
        // M = U S V^dagger, so the right factor carries conj(V).
        const Eigen::VectorXcd v = svd.matrixV().col(i).conjugate();
        out.left_vectors.push_back(make_state(left, {u.data(), u.data() + u.size()}));
        out.right_vectors.push_back(make_state(right, {v.data(), v.data() + v.size()}));
    }
    return out;
}

std::vector<InducedMap> induced_maps(const MeasurementBasis& basis, const PureState& resource) {
    const auto& sub = basis.sub_shape().dims();
    if (sub.size() != 2 || sub[0] != sub[1]) {
        throw std::invalid_argument("induced_maps needs a basis on shape [d, d]");
    }
    const auto d = sub[0];
    if (!(resource.shape() == RegisterShape({d, d}))) {
        throw std::invalid_argument("resource shape must match the basis dimension");
    }
    if (!basis.complete()) {
        throw std::invalid_argument("induced_maps needs a complete basis");
    }
    const RegisterShape single({d});
    const std::array<std::size_t, 2> measured{0, 1};

    // Column x of every map is the residual for input |x>.
    std::vector<Eigen::MatrixXcd> mats(basis.size(),
                                       Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                                              static_cast<Eigen::Index>(d)));
    for (std::size_t x = 0; x < d; ++x) {
        const auto joint = tensor(basis_state(single, x), resource);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const auto residual = contract_factors(basis.element(k), measured, joint);
            for (std::size_t z = 0; z < d; ++z) {
                mats[k](static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(x)) =
                    static_cast<double>(d) * residual.amps[z];
            }
        }
    }
    std::vector<InducedMap> out;
    out.reserve(mats.size());
    for (std::size_t k = 0; k < mats.size(); ++k) {
        out.push_back(InducedMap{DenseOperator(std::move(mats[k])), k});
    }
    return out;
}

UnitarityReport unitarity_report(const std::vector<InducedMap>& maps) {
    UnitarityReport report;
    report.unitary = !maps.empty();
    for (const auto& m : maps) {
        const double defect = m.matrix.unitarity_defect();
        report.defects.push_back(defect);
        if (!(defect <= kUnitarityTolerance)) {
            report.unitary = false;
        }
    }
    return report;
}

DenseOperator pauli_x() {
    Eigen::MatrixXcd m(2, 2);
    m << 0, 1, 1, 0;
    return DenseOperator(m);
}

DenseOperator pauli_z() {
    Eigen::MatrixXcd m(2, 2);
    m << 1, 0, 0, -1;
    return DenseOperator(m);
}

BellOperatorCheck bell_operator_check(const MeasurementBasis& basis) {
    if (!(basis.sub_shape() == RegisterShape({2, 2})) || basis.size() != 4) {
        throw std::invalid_argument("bell_operator_check needs 4 elements on shape [2, 2]");
    }
    const auto zz = kron(pauli_z(), pauli_z());
    const auto xx = kron(pauli_x(), pauli_x());

    BellOperatorCheck check;
    std::array<int, 4> seen{};
    bool all_eigen = true;
    for (const auto& u : basis.elements()) {
        const int z = sign_eigenvalue(zz, u);
        const int x = sign_eigenvalue(xx, u);
        check.eigenvalues.emplace_back(z, x);
        if (z == 0 || x == 0) {
            all_eigen = false;
            continue;
        }
        ++seen[static_cast<std::size_t>((z < 0 ? 2 : 0) + (x < 0 ? 1 : 0))];
    }
    check.passed = all_eigen && std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
    return check;
}

}  // namespace teleportlab
