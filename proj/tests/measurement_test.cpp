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

#include <array>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "teleportlab/entanglement.hpp"
#include "teleportlab/protocols.hpp"
#include "test_support.hpp"

using namespace teleportlab;
using teleportlab::testing::kInvSqrt2;

namespace {

const std::array<std::size_t, 1> kFactor0{0};
const std::array<std::size_t, 2> kPair01{0, 1};

PureState qubit(Complex a, Complex b) { return make_state(RegisterShape({2}), {a, b}); }

PureState eq3_setup(Complex alpha, Complex beta) { return tensor(qubit(alpha, beta), epr_pair(2)); }

// Frequency test at 5 sigma.
void expect_frequency(std::size_t count, std::size_t n, double p) {
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    EXPECT_LE(std::abs(static_cast<double>(count) / static_cast<double>(n) - p), 5.0 * sigma)
        << "count " << count << " of " << n << ", expected p=" << p;
}

}  // namespace

TEST(MeasurementBasis, rejects_non_orthogonal) {
    const RegisterShape q({2});
    EXPECT_THROW(MeasurementBasis(q, {basis_state(q, 0), qubit(1.0, 1.0)}), BasisError);
    EXPECT_THROW(MeasurementBasis(q, {basis_state(q, 0), basis_state(q, 0)}), BasisError);
}

TEST(MeasurementBasis, tolerates_tiny_overlap) {
    const RegisterShape q({2});
    EXPECT_NO_THROW(MeasurementBasis(q, {basis_state(q, 0), qubit(1e-11, 1.0)}));
    EXPECT_THROW(MeasurementBasis(q, {basis_state(q, 0), qubit(1e-9, 1.0)}), BasisError);
}

TEST(MeasurementBasis, shape_and_size_errors) {
    const RegisterShape q({2});
    EXPECT_THROW(MeasurementBasis(q, {basis_state(RegisterShape({3}), 0)}), std::invalid_argument);
    EXPECT_THROW(MeasurementBasis(q, {basis_state(q, 0), basis_state(q, 1), basis_state(q, 1)}),
                 std::invalid_argument);
}

TEST(MeasurementBasis, completeness_flag) {
    const RegisterShape pair({2, 2});
    EXPECT_TRUE(MeasurementBasis::computational(pair).complete());
    EXPECT_FALSE(MeasurementBasis(pair, {basis_state(pair, 0), basis_state(pair, 3)}).complete());
}

TEST(BornProbabilities, single_qubit) {
    const auto p = born_probabilities(qubit(0.6, 0.8), MeasurementBasis::computational(RegisterShape({2})), kFactor0);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_NEAR(p[0], 0.36, 1e-15);
    EXPECT_NEAR(p[1], 0.64, 1e-15);
}

TEST(BornProbabilities, bell_measurement_is_uniform) {
    const auto p = born_probabilities(eq3_setup(0.6, Complex(0, 0.8)), bell_basis(), kPair01);
    ASSERT_EQ(p.size(), 4u);
    for (double v : p) {
        EXPECT_NEAR(v, 0.25, 1e-15);
    }
}

TEST(BornProbabilities, singlet_along_any_axis) {
    CounterRng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto up = axis_to_params(std::acos(2.0 * rng.uniform() - 1.0), 2.0 * std::acos(-1.0) * rng.uniform());
        const MeasurementBasis axis(RegisterShape({2}),
                                    {up.state(), qubit(-std::conj(up.beta), std::conj(up.alpha))});
        const auto p = born_probabilities(singlet(), axis, kFactor0);
        EXPECT_NEAR(p[0], 0.5, 1e-15);
        EXPECT_NEAR(p[1], 0.5, 1e-15);
    }
}

TEST(BornProbabilities, errors) {
    const RegisterShape pair({2, 2});
    const MeasurementBasis partial(pair, {basis_state(pair, 0), basis_state(pair, 3)});
    EXPECT_THROW(born_probabilities(epr_pair(2), partial, kPair01), std::invalid_argument);
    // Basis on [2, 2] cannot sit on a single qubit factor.
    EXPECT_THROW(born_probabilities(epr_pair(2), bell_basis(), kFactor0), std::invalid_argument);
    const std::array<std::size_t, 2> dims_3_3{0, 1};
    EXPECT_THROW(born_probabilities(epr_pair(3), bell_basis(), dims_3_3), std::invalid_argument);
}

TEST(ProjectOutcome, eq3_branch_moves_state_to_factor_2) {
    const Complex alpha(0.6, 0.0);
    const Complex beta(0.0, 0.8);
    const auto out = project_outcome(eq3_setup(alpha, beta), bell_basis(), kPair01, 0);
    EXPECT_NEAR(out.probability, 0.25, 1e-15);
    EXPECT_NEAR(fidelity(out.post_state, tensor(epr_pair(2), qubit(alpha, beta))), 1.0, 1e-15);
}

TEST(ProjectOutcome, eq5_branch_flips_residual) {
    const Complex alpha(0.6, 0.0);
    const Complex beta(0.0, 0.8);
    const auto out = project_outcome(eq3_setup(alpha, beta), bell_basis(), kPair01, 2);
    const std::array<std::size_t, 2> measured{0, 1};
    const auto residual = contract_factors(bell_basis().element(2), measured, out.post_state);
    const auto bob = make_state(residual);
    EXPECT_NEAR(fidelity(bob, qubit(beta, alpha)), 1.0, 1e-15);
}

TEST(ProjectOutcome, zero_probability_is_an_error) {
    const auto s = basis_state(RegisterShape({2, 2}), 0);
    EXPECT_THROW(project_outcome(s, MeasurementBasis::computational(RegisterShape({2})), kFactor0, 1),
                 ZeroProbabilityError);
}

TEST(ProjectOutcome, index_out_of_range) {
    EXPECT_THROW(project_outcome(eq3_setup(1.0, 0.0), bell_basis(), kPair01, 4), std::invalid_argument);
}

TEST(ProjectOutcome, partial_basis_single_query) {
    const RegisterShape pair({2, 2});
    const MeasurementBasis partial(pair, {epr_pair(2)});
    const auto out = project_outcome(tensor(qubit(0.6, 0.8), epr_pair(2)), partial, kPair01, 0);
    EXPECT_NEAR(out.probability, 0.25, 1e-15);
}

TEST(ProjectOutcome, whole_register) {
    const auto out = project_outcome(epr_pair(2), bell_basis(), kPair01, 0);
    EXPECT_NEAR(out.probability, 1.0, 1e-15);
    EXPECT_THROW(project_outcome(epr_pair(2), bell_basis(), kPair01, 1), ZeroProbabilityError);
}

TEST(ProjectOutcome, non_adjacent_targets) {
    // Bell basis on factors (0, 2) of |Phi+>_02 (x) |1>_1.
    const auto s = permute_factors(tensor(epr_pair(2), basis_state(RegisterShape({2}), 1)),
                                   std::array<std::size_t, 3>{0, 2, 1});
    const std::array<std::size_t, 2> t{0, 2};
    const auto p = born_probabilities(s, bell_basis(), t);
    EXPECT_NEAR(p[0], 1.0, 1e-15);
}

TEST(SampleOutcome, deterministic_for_a_seed) {
    const auto s = eq3_setup(0.6, 0.8);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CounterRng a(seed);
        CounterRng b(seed);
        EXPECT_EQ(sample_outcome(s, bell_basis(), kPair01, a).index,
                  sample_outcome(s, bell_basis(), kPair01, b).index);
    }
}

TEST(SampleOutcome, bell_frequencies) {
    const auto s = eq3_setup(0.6, Complex(0, 0.8));
    const auto basis = bell_basis();
    CounterRng rng(42);
    std::array<std::size_t, 4> counts{};
    const std::size_t n = 100000;
    for (std::size_t i = 0; i < n; ++i) {
        ++counts[sample_outcome(s, basis, kPair01, rng).index];
    }
    for (auto c : counts) {
        expect_frequency(c, n, 0.25);
    }
}

TEST(SampleOutcome, born_rule_frequency) {
    const auto s = qubit(0.6, 0.8);
    const auto basis = MeasurementBasis::computational(RegisterShape({2}));
    CounterRng rng(7);
    std::size_t zeros = 0;
    const std::size_t n = 100000;
    for (std::size_t i = 0; i < n; ++i) {
        zeros += sample_outcome(s, basis, kFactor0, rng).index == 0;
    }
    expect_frequency(zeros, n, 0.36);
}

TEST(SampleOutcome, never_draws_impossible_outcome) {
    const auto s = basis_state(RegisterShape({2, 2}), 1);
    const auto basis = MeasurementBasis::computational(RegisterShape({2, 2}));
    CounterRng rng(1);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_EQ(sample_outcome(s, basis, kPair01, rng).index, 1u);
    }
}

TEST(CompletenessDefect, examples) {
    EXPECT_LE(completeness_defect(bell_basis()), 1e-12);
    const RegisterShape pair({2, 2});
    EXPECT_NEAR(completeness_defect(MeasurementBasis(pair, {basis_state(pair, 0), basis_state(pair, 3)})), 1.0, 1e-15);
    EXPECT_LE(completeness_defect(generalized_bell_basis(3)), 1e-12);
}

TEST(CompletenessDefect, matches_direct_summation) {
    // Oracle: sum |u><u| built from the independent element definition.
    for (std::size_t d : {3u, 5u}) {
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                const auto u = teleportlab::testing::bell_element(a, b, d);
                sum += u * u.adjoint();
            }
        }
        const double oracle = (sum - teleportlab::testing::eye(d * d)).cwiseAbs().maxCoeff();
        EXPECT_LE(oracle, 1e-12);
        EXPECT_NEAR(completeness_defect(generalized_bell_basis(d)), oracle, 1e-13);
    }
}

// ---- properties ------------------------------------------------------------

TEST(MeasurementProperties, probabilities_sum_to_one) {
    CounterRng rng(100);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_state(RegisterShape({2, 3, 2}), rng);
        const DenseOperator u(teleportlab::testing::random_unitary(6, rng));
        std::vector<PureState> elements;
        for (Eigen::Index k = 0; k < 6; ++k) {
            elements.push_back(make_state(RegisterShape({3, 2}), teleportlab::testing::to_std(u.entries().col(k))));
        }
        const MeasurementBasis basis(RegisterShape({3, 2}), std::move(elements));
        const std::array<std::size_t, 2> t{1, 0 + 2};
        const auto p = born_probabilities(s, basis, t);
        EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-10);
    }
}

TEST(MeasurementProperties, raw_projections_reconstruct_state) {
    CounterRng rng(8);
    const auto basis = bell_basis();
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = tensor(random_state(RegisterShape({2}), rng), epr_pair(2));
        const auto raws = raw_projections(s, basis, kPair01);
        ASSERT_EQ(raws.size(), 4u);
        for (std::size_t i = 0; i < s.size(); ++i) {
            Complex sum = 0.0;
            for (const auto& r : raws) {
                sum += r.amps[i];
            }
            EXPECT_NEAR(std::abs(sum - s.amp(i)), 0.0, 1e-12);
        }
    }
}

TEST(MeasurementProperties, bell_probabilities_independent_of_input) {
    CounterRng rng(9);
    const auto basis = bell_basis();
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = tensor(random_state(RegisterShape({2}), rng), epr_pair(2));
        for (double p : born_probabilities(s, basis, kPair01)) {
            worst = std::max(worst, std::abs(p - 0.25));
        }
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(MeasurementProperties, repeat_measurement_is_certain) {
    CounterRng rng(10);
    const auto basis = bell_basis();
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = tensor(random_state(RegisterShape({2}), rng), epr_pair(2));
        const auto first = sample_outcome(s, basis, kPair01, rng);
        const auto again = project_outcome(first.post_state, basis, kPair01, first.index);
        EXPECT_NEAR(again.probability, 1.0, 1e-12);
    }
}

TEST(MeasurementProperties, outcome_probability_equals_projected_norm) {
    CounterRng rng(12);
    const auto basis = generalized_bell_basis(3);
    const auto s = tensor(random_state(RegisterShape({3}), rng), epr_pair(3));
    const auto raws = raw_projections(s, basis, kPair01);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto out = project_outcome(s, basis, kPair01, k);
        EXPECT_NEAR(out.probability, raws[k].squared_norm, 1e-12);
        EXPECT_NEAR(inner(out.post_state, out.post_state).real(), 1.0, 1e-12);
    }
}
