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

#include "teleportlab/protocols.hpp"

#include <array>
#include <cmath>
#include <string>

namespace teleportlab {

namespace {

std::size_t draw(const PureState& s, const MeasurementBasis& basis, std::span<const std::size_t> targets,
                 const OutcomeSource& source, std::optional<std::uint64_t>& seed) {
    if (const auto* forced = std::get_if<Forced>(&source)) {
        if (forced->outcome >= basis.size()) {
            throw std::invalid_argument("forced outcome " + std::to_string(forced->outcome) +
                                        " out of range");
        }
        return forced->outcome;
    }
    auto* rng = std::get<CounterRng*>(source);
    if (rng == nullptr) {
        throw std::invalid_argument("sampled outcome needs a random stream");
    }
    seed = rng->key();
    return rng->pick(born_probabilities(s, basis, targets));
}

}  // namespace

QubitParams::QubitParams(Complex a, Complex b) : alpha(a), beta(b) {
    if (!std::isfinite(std::norm(a) + std::norm(b))) {
        throw std::invalid_argument("qubit amplitudes must be finite");
    }
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > kNormTolerance) {
        throw std::invalid_argument("qubit amplitudes are not normalized");
    }
}

QubitParams QubitParams::normalized(Complex a, Complex b) {
    const auto s = make_state(RegisterShape({2}), {a, b});
    return QubitParams(s.amp(0), s.amp(1));
}

PureState QubitParams::state() const { return make_state(RegisterShape({2}), {alpha, beta}); }

QubitParams axis_to_params(double theta, double phi) {
    return QubitParams(std::cos(theta / 2.0), std::polar(1.0, phi) * std::sin(theta / 2.0));
}

DenseOperator Correction::op() const {
    const auto n = static_cast<Eigen::Index>(d);
    Eigen::MatrixXcd shift_back = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd phase_fix = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t x = 0; x < d; ++x) {
        const auto xi = static_cast<Eigen::Index>(x);
        shift_back(static_cast<Eigen::Index>((x + d - shift % d) % d), xi) = 1.0;
        phase_fix(xi, xi) = root_of_unity(-static_cast<long long>(phase * x), d);
    }
    return DenseOperator(phase_fix * shift_back);
}

std::string Correction::name() const {
    if (d == 2) {
        static constexpr std::array<const char*, 4> names{"identity", "phase_flip", "bit_flip", "both"};
        return names[shift * 2 + phase];
    }
    return "shift=" + std::to_string(shift) + ",phase=" + std::to_string(phase);
}

Correction correction_for(std::size_t a, std::size_t b, std::size_t d) {
    if (d < 2 || a >= d || b >= d) {
        throw std::invalid_argument("invalid outcome (a, b) for dimension d");
    }
    return Correction{d, a, b};
}

std::size_t bits_for(std::size_t n) {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) {
        ++bits;
    }
    return bits;
}

TeleportScheme::TeleportScheme(std::string name, std::size_t d, MeasurementBasis basis,
                               std::vector<Correction> corrections)
    : name_(std::move(name)),
      d_(d),
      basis_(std::move(basis)),
      resource_(epr_pair(d)),
      corrections_(std::move(corrections)) {
    for (const auto& c : corrections_) {
        correction_ops_.push_back(c.op());
    }
}

TeleportScheme TeleportScheme::qubit() {
    return TeleportScheme("teleport_qubit", 2, bell_basis(),
                          {correction_for(0, 0, 2), correction_for(0, 1, 2), correction_for(1, 0, 2),
                           correction_for(1, 1, 2)});
}

TeleportScheme TeleportScheme::qudit(std::size_t d) {
    auto basis = generalized_bell_basis(d);
    std::vector<Correction> corrections;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            corrections.push_back(correction_for(a, b, d));
        }
    }
    return TeleportScheme("teleport_qudit", d, std::move(basis), std::move(corrections));
}

TeleportResult teleport_factor(const PureState& reg, std::size_t factor, const TeleportScheme& scheme,
                               OutcomeSource source) {
    const auto n = reg.shape().num_factors();
    if (factor >= n) {
        throw std::invalid_argument("teleported factor out of range");
    }
    if (reg.shape().dim(factor) != scheme.d()) {
        throw std::invalid_argument("teleported factor dimension does not match the scheme");
    }
    if (reg.shape().total() > kMaxTotalDimension / (scheme.d() * scheme.d())) {
        throw std::invalid_argument("register plus resource exceeds the dimension cap");
    }
    const auto joint = tensor(reg, scheme.resource());
    const std::array<std::size_t, 2> targets{factor, n};

    ProtocolTranscript t;
    t.protocol = scheme.name();
    const auto k = draw(joint, scheme.basis(), targets, source, t.seed);
    const auto residual = contract_factors(scheme.basis().element(k), targets, joint);
    if (residual.squared_norm <= kZeroProbability) {
        throw ZeroProbabilityError("outcome " + std::to_string(k) + " has zero probability");
    }
    // Receiver's particle is last in the residual; move it back to `factor`.
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) {
        perm[i] = i < factor ? i : (i == factor ? n - 1 : i - 1);
    }
    const auto received = permute_factors(make_state(residual), perm);
    const std::array<std::size_t, 1> bob{factor};
    const auto corrected = make_state(apply_to_factors(scheme.correction_op(k), bob, received));

    const auto d = scheme.d();
    t.outcome_index = k;
    if (scheme.name() == "teleport_qudit") {
        t.shift_phase = std::make_pair(k / d, k % d);
    }
    t.classical_bits_sent = 2 * bits_for(d);
    t.correction = scheme.correction(k);
    t.pre_correction_fidelity = fidelity(reg, received);
    t.post_correction_fidelity = fidelity(reg, corrected);
    return TeleportResult{std::move(t), corrected};
}

TeleportResult teleport_qubit(const PureState& input, OutcomeSource source) {
    if (!(input.shape() == RegisterShape({2}))) {
        throw std::invalid_argument("teleport_qubit needs a single-qubit input");
    }
    return teleport_factor(input, 0, TeleportScheme::qubit(), source);
}

TeleportResult teleport_qubit(const QubitParams& input, OutcomeSource source) {
    return teleport_qubit(input.state(), source);
}

TeleportResult teleport_entangled(const PureState& joint, OutcomeSource source) {
    if (!(joint.shape() == RegisterShape({2, 2}))) {
        throw std::invalid_argument("teleport_entangled needs an (ancilla, particle) pair on [2, 2]");
    }
    auto result = teleport_factor(joint, 1, TeleportScheme::qubit(), source);
    result.transcript.protocol = "teleport_entangled";
    return result;
}

TeleportResult teleport_qudit(const PureState& input, const TeleportScheme& scheme, OutcomeSource source) {
    if (!(input.shape() == RegisterShape({scheme.d()}))) {
        throw std::invalid_argument("teleport_qudit input must be a single qudit of the scheme dimension");
    }
    return teleport_factor(input, 0, scheme, source);
}

TeleportResult teleport_qudit(const PureState& input, std::size_t d, OutcomeSource source) {
    if (d < 2) {
        throw std::invalid_argument("teleport_qudit needs d >= 2");
    }
    return teleport_qudit(input, TeleportScheme::qudit(d), source);
}

RegisterTeleportResult teleport_register(const PureState& input, CounterRng* rng,
                                         const std::vector<std::size_t>& forced) {
    const auto k = input.shape().num_factors();
    for (auto dim : input.shape().dims()) {
        if (dim != 2) {
            throw std::invalid_argument("teleport_register needs a qubit register");
        }
    }
    if (input.shape().total() > kMaxTotalDimension / 4) {
        throw std::invalid_argument("register plus resource exceeds the dimension cap");
    }
    if (!forced.empty() && forced.size() != k) {
        throw std::invalid_argument("forced outcomes must list one outcome per qubit");
    }
    const auto scheme = TeleportScheme::qubit();
    RegisterTeleportResult out{{}, input, 0.0, 0};
    for (std::size_t i = 0; i < k; ++i) {
        const OutcomeSource source = forced.empty() ? OutcomeSource{rng} : OutcomeSource{Forced{forced[i]}};
        auto step = teleport_factor(out.output, i, scheme, source);
        step.transcript.protocol = "teleport_register";
        out.classical_bits_sent += step.transcript.classical_bits_sent;
        out.transcripts.push_back(std::move(step.transcript));
        out.output = std::move(step.output);
    }
    out.fidelity = fidelity(input, out.output);
    return out;
}

RemotePrepResult remote_prep(const QubitParams& target, OutcomeSource source) {
    const RegisterShape qubit({2});
    const auto a = target.alpha;
    const auto b = target.beta;
    const MeasurementBasis alice_basis(qubit, {make_state(qubit, {std::conj(a), std::conj(b)}),
                                               make_state(qubit, {b, -a})});
    const auto shared = epr_pair(2);
    const std::array<std::size_t, 1> alice{0};

    ProtocolTranscript t;
    t.protocol = "remote_prep";
    const auto k = draw(shared, alice_basis, alice, source, t.seed);
    const auto residual = contract_factors(alice_basis.element(k), alice, shared);
    const auto bob = make_state(residual);
    const auto wanted = target.state();

    t.outcome_index = k;
    t.classical_bits_sent = 1;
    t.correction = Correction{2, 0, 0};
    t.pre_correction_fidelity = fidelity(wanted, bob);
    t.post_correction_fidelity = t.pre_correction_fidelity;
    return RemotePrepResult{k == 0, bob, std::move(t)};
}

}  // namespace teleportlab
