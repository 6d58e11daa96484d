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

// Remote state preparation and teleportation protocols built on projective
// measurements of a register that shares an EPR resource with the receiver.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "teleportlab/entanglement.hpp"
#include "teleportlab/measurement.hpp"
#include "teleportlab/rng.hpp"
#include "teleportlab/tensor.hpp"

namespace teleportlab {

/// Single-qubit amplitudes alpha|0> + beta|1>.
struct QubitParams {
    Complex alpha;
    Complex beta;

    /// Throws std::invalid_argument unless |alpha|^2 + |beta|^2 = 1 within kNormTolerance.
    QubitParams(Complex a, Complex b);

    /// Rescales (a, b) to unit norm; throws on the zero pair.
    static QubitParams normalized(Complex a, Complex b);

    PureState state() const;
};

/// (cos(theta/2), e^{i phi} sin(theta/2)): the spin-up state along the Bloch axis (theta, phi).
QubitParams axis_to_params(double theta, double phi);

/// Outcome-conditioned unitary on the receiver's qudit: shift x -> x - a, then
/// multiply |x> by w^(-b x). For d = 2 the four cases are 1, Z, X, ZX.
struct Correction {
    std::size_t d = 2;
    std::size_t shift = 0;
    std::size_t phase = 0;

    DenseOperator op() const;
    /// "identity", "phase_flip", "bit_flip", "both" for d = 2; "shift=a,phase=b" otherwise.
    std::string name() const;
};

/// The correction undoing the residual map of generalized Bell outcome (a, b).
Correction correction_for(std::size_t a, std::size_t b, std::size_t d);

struct ProtocolTranscript {
    std::string protocol;
    std::size_t outcome_index = 0;
    std::optional<std::pair<std::size_t, std::size_t>> shift_phase;  ///< (a, b) for qudit runs
    std::size_t classical_bits_sent = 0;
    Correction correction;
    double pre_correction_fidelity = 0.0;
    double post_correction_fidelity = 0.0;
    std::optional<std::uint64_t> seed;  ///< key of the stream that drew the outcome
};

/// Either sample the measurement with a caller-owned stream or force an outcome.
struct Forced {
    std::size_t outcome;
};
using OutcomeSource = std::variant<CounterRng*, Forced>;

/// ceil(log2(n)) for n >= 1.
std::size_t bits_for(std::size_t n);

/// A Bell-type measurement scheme on [d, d] plus its per-outcome corrections.
class TeleportScheme {
public:
    /// bell_basis() with corrections 1, Z, X, ZX.
    static TeleportScheme qubit();
    /// generalized_bell_basis(d) with shift/phase corrections.
    static TeleportScheme qudit(std::size_t d);

    std::size_t d() const { return d_; }
    const MeasurementBasis& basis() const { return basis_; }
    const PureState& resource() const { return resource_; }
    const Correction& correction(std::size_t k) const { return corrections_.at(k); }
    const DenseOperator& correction_op(std::size_t k) const { return correction_ops_.at(k); }
    const std::string& name() const { return name_; }

private:
    TeleportScheme(std::string name, std::size_t d, MeasurementBasis basis,
                   std::vector<Correction> corrections);

    std::string name_;
    std::size_t d_;
    MeasurementBasis basis_;
    PureState resource_;
    std::vector<Correction> corrections_;
    std::vector<DenseOperator> correction_ops_;
};

struct TeleportResult {
    ProtocolTranscript transcript;
    /// Register after teleportation; the teleported factor now lives on the
    /// receiver's particle at the same position.
    PureState output;
};

/// Teleports factor `factor` of `reg` through a fresh resource pair: appends
/// the pair, measures (factor, first resource half) in the scheme basis,
/// traces the measured pair out, moves the receiver's half into position
/// `factor`, and applies the outcome's correction there.
TeleportResult teleport_factor(const PureState& reg, std::size_t factor, const TeleportScheme& scheme,
                               OutcomeSource source);

TeleportResult teleport_qubit(const PureState& input, OutcomeSource source);
TeleportResult teleport_qubit(const QubitParams& input, OutcomeSource source);

/// `joint` is (ancilla, particle-1) on [2, 2]; the output is (ancilla, particle-3).
TeleportResult teleport_entangled(const PureState& joint, OutcomeSource source);

/// Forced outcome (a, b) uses index bell_index(a, b, d).
TeleportResult teleport_qudit(const PureState& input, const TeleportScheme& scheme, OutcomeSource source);
TeleportResult teleport_qudit(const PureState& input, std::size_t d, OutcomeSource source);

struct RegisterTeleportResult {
    std::vector<ProtocolTranscript> transcripts;
    PureState output;
    double fidelity = 0.0;
    std::size_t classical_bits_sent = 0;
};

/// Teleports each qubit of a [2]^k register in turn. `forced`, when given,
/// holds one outcome per qubit.
RegisterTeleportResult teleport_register(const PureState& input, CounterRng* rng,
                                         const std::vector<std::size_t>& forced = {});

struct RemotePrepResult {
    bool success = false;
    PureState bob_state;
    ProtocolTranscript transcript;
};

/// Alice measures her half of epr_pair(2) in {a*|0> + b*|1>, b|0> - a|1>}.
/// Outcome 0 leaves Bob with the target; outcome 1 leaves b*|0> - a*|1>,
/// which no target-independent unitary can fix.
RemotePrepResult remote_prep(const QubitParams& target, OutcomeSource source);

}  // namespace teleportlab
