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

#include "teleportlab/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "teleportlab/entanglement.hpp"
#include "teleportlab/protocols.hpp"
#include "teleportlab/report.hpp"
#include "teleportlab/rng.hpp"

#ifndef TELEPORTLAB_VERSION
#define TELEPORTLAB_VERSION "0.0.0"
#endif

namespace teleportlab::cli {

using nlohmann::json;

namespace {

constexpr double kOrthogonalityTolerance = 1e-12;
constexpr double kCompletenessTolerance = 1e-10;

class Stopwatch {
public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json base_report(const std::string& command, const std::vector<std::string>& echo, std::uint64_t seed) {
    return json{{"schema", kReportSchema},
                {"command", command},
                {"argv", echo},
                {"seed", seed},
                {"version", TELEPORTLAB_VERSION}};
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text) {
    const auto t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw UsageError("malformed number '" + text + "'");
    }
    if (used != t.size() || !std::isfinite(v)) {
        throw UsageError("malformed number '" + text + "'");
    }
    return v;
}

// Single-qudit input: either fixed, or drawn per run from the run's stream.
struct InputSource {
    std::optional<PureState> fixed;

    PureState next(std::size_t d, CounterRng& rng) const {
        return fixed ? *fixed : random_state(RegisterShape({d}), rng);
    }
};

InputSource resolve_input(const InputSpec& in, std::size_t d) {
    const bool has_ab = in.alpha || in.beta;
    const bool has_axis = in.theta || in.phi;
    const bool has_amps = in.amps.has_value();
    const int sources = int(has_ab) + int(has_axis) + int(has_amps) + int(in.random);
    if (sources != 1) {
        throw UsageError("give exactly one input: --alpha/--beta, --theta/--phi, --amps, or --random");
    }
    if (in.random) {
        return {};
    }
    if ((has_ab || has_axis) && d != 2) {
        throw UsageError("--alpha/--beta and --theta/--phi describe a qubit; use --amps for d > 2");
    }
    try {
        if (has_ab) {
            const Complex a = in.alpha ? parse_complex(*in.alpha) : Complex{};
            const Complex b = in.beta ? parse_complex(*in.beta) : Complex{};
            return {QubitParams::normalized(a, b).state()};
        }
        if (has_axis) {
            return {axis_to_params(in.theta.value_or(0.0), in.phi.value_or(0.0)).state()};
        }
        return {make_state(RegisterShape({d}), parse_amplitudes(*in.amps))};
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("malformed amplitudes: ") + e.what());
    }
}

struct Batch {
    RunStats stats;
    json transcripts = json::array();
    std::size_t omitted = 0;
};

// Run i uses stream split(i) of the root seed for both its input and its
// outcome, so results do not depend on execution order.
Batch run_teleport_batch(std::size_t d, const InputSource& input, std::size_t runs, std::uint64_t seed,
                         std::optional<std::size_t> forced, std::size_t max_transcripts) {
    const auto scheme = d == 2 ? TeleportScheme::qubit() : TeleportScheme::qudit(d);
    if (forced && *forced >= scheme.basis().size()) {
        throw UsageError("forced outcome " + std::to_string(*forced) + " out of range for d=" +
                         std::to_string(d));
    }
    const CounterRng root(seed);
    Batch batch{RunStats(scheme.basis().size())};
    for (std::size_t i = 0; i < runs; ++i) {
        auto rng = root.split(i);
        const auto state = input.next(d, rng);
        const OutcomeSource source = forced ? OutcomeSource{Forced{*forced}} : OutcomeSource{&rng};
        const auto result = teleport_factor(state, 0, scheme, source);
        batch.stats.add(result.transcript.outcome_index, result.transcript.post_correction_fidelity);
        if (batch.transcripts.size() < max_transcripts) {
            auto j = transcript_to_json(result.transcript);
            j["run"] = i;
            j["bob_state"] = amps_to_json(result.output.amps());
            batch.transcripts.push_back(std::move(j));
        } else {
            ++batch.omitted;
        }
    }
    return batch;
}

void check_runs(std::size_t runs) {
    if (runs == 0) {
        throw UsageError("--runs must be at least 1");
    }
}

std::string fmt(double v, int precision = 15) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

std::vector<Complex> load_state_amps(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open " + path);
    }
    try {
        return amps_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw UsageError("cannot parse " + path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError("cannot parse " + path + ": " + e.what());
    }
}

std::size_t exact_sqrt(std::size_t n) {
    auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    return r * r == n ? r : 0;
}

MeasurementBasis load_basis(const BasisCheckOptions& opts) {
    if (opts.builtin.has_value() == opts.basis_file.has_value()) {
        throw UsageError("give exactly one of --builtin or --basis-file");
    }
    if (opts.builtin) {
        const auto& name = *opts.builtin;
        if (opts.d < 2) {
            throw UsageError("--d must be at least 2");
        }
        if (name == "bell") {
            if (opts.d != 2) {
                throw UsageError("the bell basis is defined for d=2; use generalized-bell");
            }
            return bell_basis();
        }
        if (name == "generalized-bell") {
            return generalized_bell_basis(opts.d);
        }
        if (name == "computational") {
            return MeasurementBasis::computational(RegisterShape({opts.d, opts.d}));
        }
        throw UsageError("unknown builtin basis '" + name + "'");
    }

    std::ifstream in(*opts.basis_file);
    if (!in) {
        throw UsageError("cannot open " + *opts.basis_file);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("cannot parse " + *opts.basis_file + ": " + e.what());
    }
    if (!doc.is_array() || doc.empty()) {
        throw UsageError("basis file must hold a non-empty array of elements");
    }
    std::vector<std::vector<Complex>> raw;
    try {
        for (const auto& e : doc) {
            raw.push_back(amps_from_json(e));
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("basis file: ") + e.what());
    }
    const auto len = raw.front().size();
    const auto d = exact_sqrt(len);
    if (d < 2) {
        throw UsageError("basis element length must be d^2 for some d >= 2");
    }
    const RegisterShape shape({d, d});
    std::vector<PureState> elements;
    for (auto& amps : raw) {
        if (amps.size() != len) {
            throw UsageError("basis elements have different lengths");
        }
        double n2 = 0.0;
        for (const auto& a : amps) {
            n2 += std::norm(a);
        }
        // Stored elements must already be unit vectors; make_state would hide a bad norm.
        if (std::abs(n2 - 1.0) > kOrthonormalityTolerance) {
            throw BasisError("basis element is not normalized (norm^2 = " + fmt(n2) + ")");
        }
        try {
            elements.push_back(make_state(shape, std::move(amps)));
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("basis file: ") + e.what());
        }
    }
    return MeasurementBasis(shape, std::move(elements));
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const BasisError*>(&e) != nullptr || dynamic_cast<const std::domain_error*>(&e) != nullptr) {
        return kExitValidation;
    }
    return kExitUsage;
}

Complex parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        return {parse_double(text), 0.0};
    }
    return {parse_double(text.substr(0, comma)), parse_double(text.substr(comma + 1))};
}

std::vector<Complex> parse_amplitudes(const std::string& text) {
    std::vector<Complex> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        out.push_back(parse_complex(item));
    }
    if (out.empty()) {
        throw UsageError("empty amplitude list");
    }
    return out;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::ostream& note) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("TELEPORTLAB_SEED"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used, 0);
            if (used == std::string(env).size()) {
                return v;
            }
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("TELEPORTLAB_SEED is not an unsigned integer: ") + env);
    }
    std::random_device rd;
    const std::uint64_t seed = (std::uint64_t{rd()} << 32) ^ rd();
    note << "seed: " << seed << '\n';
    return seed;
}

CommandResult cmd_teleport(const TeleportOptions& opts, const std::vector<std::string>& echo) {
    const Stopwatch clock;
    if (opts.d < 2) {
        throw UsageError("--d must be at least 2");
    }
    check_runs(opts.runs);
    const auto input = resolve_input(opts.input, opts.d);
    auto batch = run_teleport_batch(opts.d, input, opts.runs, opts.seed, opts.forced, opts.max_transcripts);

    auto report = base_report("teleport", echo, opts.seed);
    report["parameters"] = {{"d", opts.d},
                            {"runs", opts.runs},
                            {"random_input", opts.input.random},
                            {"forced_outcome", opts.forced ? json(*opts.forced) : json(nullptr)},
                            {"threshold", opts.threshold}};
    if (input.fixed) {
        report["parameters"]["input"] = amps_to_json(input.fixed->amps());
    }
    report["transcripts"] = std::move(batch.transcripts);
    report["transcripts_omitted"] = batch.omitted;
    report["aggregate"] = batch.stats.to_json();
    const bool ok = batch.stats.min_fidelity >= opts.threshold;
    report["passed"] = ok;
    report["duration_ms"] = clock.elapsed_ms();

    std::ostringstream summary;
    summary << "teleport d=" << opts.d << " runs=" << opts.runs << " seed=" << opts.seed << "\n"
            << "  outcome histogram:";
    for (auto c : batch.stats.histogram) {
        summary << ' ' << c;
    }
    summary << "\n  min fidelity " << fmt(batch.stats.min_fidelity) << ", mean "
            << fmt(batch.stats.mean_fidelity) << (ok ? "  [pass]" : "  [FAIL]") << "\n";
    return {ok ? kExitOk : kExitThreshold, std::move(report), summary.str()};
}

CommandResult cmd_remote_prep(const RemotePrepOptions& opts, const std::vector<std::string>& echo) {
    const Stopwatch clock;
    check_runs(opts.runs);
    if (opts.forced && *opts.forced > 1) {
        throw UsageError("remote-prep outcomes are 0 (success) and 1 (failure)");
    }
    const auto input = resolve_input(opts.input, 2);
    const CounterRng root(opts.seed);

    std::vector<std::size_t> histogram(2, 0);
    std::size_t successes = 0;
    double min_success_fidelity = 1.0;
    double max_failure_overlap = 0.0;
    json transcripts = json::array();
    std::size_t omitted = 0;
    for (std::size_t i = 0; i < opts.runs; ++i) {
        auto rng = root.split(i);
        const auto state = input.next(2, rng);
        const QubitParams target(state.amp(0), state.amp(1));
        const OutcomeSource source = opts.forced ? OutcomeSource{Forced{*opts.forced}} : OutcomeSource{&rng};
        const auto result = remote_prep(target, source);
        ++histogram[result.transcript.outcome_index];
        if (result.success) {
            ++successes;
            min_success_fidelity = std::min(min_success_fidelity, result.transcript.post_correction_fidelity);
        } else {
            max_failure_overlap = std::max(max_failure_overlap, result.transcript.post_correction_fidelity);
        }
        if (transcripts.size() < opts.max_transcripts) {
            auto j = transcript_to_json(result.transcript);
            j["run"] = i;
            j["success"] = result.success;
            j["bob_state"] = amps_to_json(result.bob_state.amps());
            transcripts.push_back(std::move(j));
        } else {
            ++omitted;
        }
    }
    const double n = static_cast<double>(opts.runs);
    const double rate = static_cast<double>(successes) / n;
    const double sigma = std::sqrt(0.25 / n);
    const bool orthogonal = max_failure_overlap <= kOrthogonalityTolerance;
    const bool fidelity_ok = successes == 0 || min_success_fidelity >= opts.threshold;

    auto report = base_report("remote-prep", echo, opts.seed);
    report["parameters"] = {{"runs", opts.runs},
                            {"random_input", opts.input.random},
                            {"forced_outcome", opts.forced ? json(*opts.forced) : json(nullptr)},
                            {"threshold", opts.threshold}};
    if (input.fixed) {
        report["parameters"]["input"] = amps_to_json(input.fixed->amps());
    }
    report["transcripts"] = std::move(transcripts);
    report["transcripts_omitted"] = omitted;
    report["aggregate"] = {{"histogram", histogram},
                           {"runs", opts.runs},
                           {"success_count", successes},
                           {"success_rate", rate},
                           {"expected_success_rate", 0.5},
                           {"sigma", sigma},
                           {"z_score", (rate - 0.5) / sigma},
                           {"min_success_fidelity", successes ? json(min_success_fidelity) : json(nullptr)},
                           {"max_failure_overlap", max_failure_overlap},
                           {"failure_orthogonal", orthogonal}};
    const bool ok = orthogonal && fidelity_ok;
    report["passed"] = ok;
    report["duration_ms"] = clock.elapsed_ms();

    std::ostringstream summary;
    summary << "remote-prep runs=" << opts.runs << " seed=" << opts.seed << "\n"
            << "  success rate " << fmt(rate, 6) << " (z = " << fmt((rate - 0.5) / sigma, 4) << ")\n"
            << "  max failure overlap " << fmt(max_failure_overlap, 3) << (ok ? "  [pass]" : "  [FAIL]")
            << "\n";
    return {ok ? kExitOk : kExitThreshold, std::move(report), summary.str()};
}

CommandResult cmd_basis_check(const BasisCheckOptions& opts, const std::vector<std::string>& echo) {
    const Stopwatch clock;
    const auto basis = load_basis(opts);
    const auto d = basis.sub_shape().dim(0);

    std::optional<PureState> resource;
    if (opts.resource == "builtin") {
        resource = epr_pair(d);
    } else {
        try {
            resource = make_state(RegisterShape({d, d}), load_state_amps(opts.resource));
        } catch (const UsageError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("resource file: ") + e.what());
        }
    }

    const double completeness = completeness_defect(basis);
    json elements = json::array();
    bool all_maximal = true;
    const double target_lambda = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto sd = schmidt(basis.element(k), 1);
        bool maximal = true;
        for (double l : sd.coefficients) {
            maximal = maximal && std::abs(l - target_lambda) <= kUnitarityTolerance;
        }
        all_maximal = all_maximal && maximal;
        elements.push_back({{"index", k}, {"schmidt_coefficients", sd.coefficients}, {"maximally_entangled", maximal}});
    }

    bool unitary = false;
    if (basis.complete()) {
        const auto rep = unitarity_report(induced_maps(basis, *resource));
        unitary = rep.unitary;
        for (std::size_t k = 0; k < rep.defects.size(); ++k) {
            elements[k]["unitarity_defect"] = rep.defects[k];
        }
    }
    const bool complete = basis.complete() && completeness <= kCompletenessTolerance;
    const bool ok = complete && unitary;

    auto report = base_report("basis-check", echo, 0);
    report.erase("seed");
    report["parameters"] = {{"d", d},
                            {"basis", opts.builtin ? *opts.builtin : *opts.basis_file},
                            {"resource", opts.resource}};
    report["elements"] = std::move(elements);
    report["completeness_defect"] = completeness;
    report["complete"] = complete;
    report["unitary"] = unitary;
    report["all_maximally_entangled"] = all_maximal;
    report["passed"] = ok;
    report["duration_ms"] = clock.elapsed_ms();

    std::ostringstream summary;
    summary << "basis-check d=" << d << " elements=" << basis.size() << "\n"
            << "  completeness defect " << fmt(completeness, 3) << "\n"
            << "  induced maps unitary: " << (unitary ? "yes" : "no")
            << ", all maximally entangled: " << (all_maximal ? "yes" : "no") << (ok ? "  [pass]" : "  [FAIL]")
            << "\n";
    return {ok ? kExitOk : kExitThreshold, std::move(report), summary.str()};
}

CommandResult cmd_sweep(const SweepOptions& opts, const std::vector<std::string>& echo) {
    const Stopwatch clock;
    if (opts.dims.empty()) {
        throw UsageError("sweep needs at least one dimension in --d");
    }
    check_runs(opts.runs);
    for (auto d : opts.dims) {
        if (d < 2) {
            throw UsageError("--d entries must be at least 2");
        }
        if (d * d * d > kMaxTotalDimension) {
            throw UsageError("d=" + std::to_string(d) + " exceeds the register dimension cap");
        }
    }

    json rows = json::array();
    bool ok = true;
    std::ostringstream summary;
    summary << "sweep runs=" << opts.runs << " seed=" << opts.seed << "\n";
    for (auto d : opts.dims) {
        const Stopwatch row_clock;
        const auto batch = run_teleport_batch(d, InputSource{}, opts.runs, opts.seed, std::nullopt, 0);
        const bool row_ok = batch.stats.min_fidelity >= opts.threshold;
        ok = ok && row_ok;
        const double ms = row_clock.elapsed_ms();
        rows.push_back({{"d", d},
                        {"classical_bits", 2 * bits_for(d)},
                        {"aggregate", batch.stats.to_json()},
                        {"passed", row_ok},
                        {"duration_ms", ms}});
        summary << "  d=" << std::setw(3) << d << "  min fidelity " << fmt(batch.stats.min_fidelity)
                << "  mean " << fmt(batch.stats.mean_fidelity) << "  " << fmt(ms, 4) << " ms"
                << (row_ok ? "" : "  [FAIL]") << "\n";
    }

    auto report = base_report("sweep", echo, opts.seed);
    report["parameters"] = {{"d", opts.dims}, {"runs", opts.runs}, {"threshold", opts.threshold}};
    report["rows"] = std::move(rows);
    report["passed"] = ok;
    report["duration_ms"] = clock.elapsed_ms();
    return {ok ? kExitOk : kExitThreshold, std::move(report), summary.str()};
}

}  // namespace teleportlab::cli
