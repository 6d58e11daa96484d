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

// teleportlab: run teleportation protocols, basis analyses, and the loopback demo.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "teleportlab/commands.hpp"
#include "teleportlab/net/clients.hpp"
#include "teleportlab/net/service.hpp"

namespace {

using namespace teleportlab;

// The service holds no durable state, so an immediate exit is a clean shutdown.
extern "C" void on_signal(int) { std::_Exit(0); }

void add_input_flags(CLI::App* cmd, cli::InputSpec& in) {
    cmd->add_option("--alpha", in.alpha, "Amplitude of |0> as re or re,im");
    cmd->add_option("--beta", in.beta, "Amplitude of |1> as re or re,im");
    cmd->add_option("--theta", in.theta, "Bloch polar angle (radians)");
    cmd->add_option("--phi", in.phi, "Bloch azimuth (radians)");
    cmd->add_option("--amps", in.amps, "Qudit amplitudes: re[,im];re[,im];...");
    cmd->add_flag("--random", in.random, "Draw a Haar-random input per run");
}

int emit(const cli::CommandResult& result, const std::string& output) {
    if (output.empty()) {
        std::cout << result.summary;
    } else if (output == "-") {
        std::cout << result.report.dump(2) << '\n';
    } else {
        std::ofstream out(output);
        if (!out) {
            std::cerr << "error: cannot write " << output << '\n';
            return cli::kExitUsage;
        }
        out << result.report.dump(2) << '\n';
        std::cout << result.summary;
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"teleportlab: dense state-vector teleportation toolkit"};
    app.require_subcommand(1);
    const std::vector<std::string> echo(argv, argv + argc);

    std::optional<std::uint64_t> seed_flag;
    std::string output;

    cli::TeleportOptions tele;
    auto* teleport = app.add_subcommand("teleport", "Teleport a qubit (d=2) or qudit through an EPR pair");
    teleport->add_option("--d", tele.d, "Qudit dimension")->capture_default_str();
    add_input_flags(teleport, tele.input);
    teleport->add_option("--runs", tele.runs, "Number of runs")->capture_default_str();
    teleport->add_option("--seed", seed_flag, "Root seed (default: $TELEPORTLAB_SEED or OS entropy)");
    teleport->add_option("--forced", tele.forced, "Force measurement outcome index");
    teleport->add_option("--threshold", tele.threshold, "Minimum acceptable fidelity")->capture_default_str();
    teleport->add_option("--max-transcripts", tele.max_transcripts, "Per-run transcripts kept in the report")
        ->capture_default_str();
    teleport->add_option("--output", output, "Write the JSON report here ('-' for stdout)");

    cli::RemotePrepOptions prep;
    auto* remote = app.add_subcommand("remote-prep", "Remote preparation of a known qubit state");
    add_input_flags(remote, prep.input);
    remote->add_option("--runs", prep.runs, "Number of runs")->capture_default_str();
    remote->add_option("--seed", seed_flag, "Root seed");
    remote->add_option("--forced", prep.forced, "Force outcome 0 (success) or 1 (failure)");
    remote->add_option("--threshold", prep.threshold, "Minimum success-branch fidelity")->capture_default_str();
    remote->add_option("--max-transcripts", prep.max_transcripts, "Per-run transcripts kept")->capture_default_str();
    remote->add_option("--output", output, "Write the JSON report here ('-' for stdout)");

    cli::BasisCheckOptions check;
    auto* basis = app.add_subcommand("basis-check", "Check which outcomes of a basis teleport unitarily");
    basis->add_option("--builtin", check.builtin, "bell | generalized-bell | computational");
    basis->add_option("--basis-file", check.basis_file, "JSON array of elements, each an array of [re, im]");
    basis->add_option("--d", check.d, "Dimension for builtin bases")->capture_default_str();
    basis->add_option("--resource", check.resource, "'builtin' (EPR pair) or a JSON state file")
        ->capture_default_str();
    basis->add_option("--output", output, "Write the JSON report here ('-' for stdout)");

    cli::SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Random-input qudit teleportation across dimensions");
    sweep->add_option("--d", sweep_opts.dims, "Dimensions, e.g. 2,4,8,16")->delimiter(',');
    sweep->add_option("--runs", sweep_opts.runs, "Runs per dimension")->capture_default_str();
    sweep->add_option("--seed", seed_flag, "Root seed");
    sweep->add_option("--threshold", sweep_opts.threshold, "Minimum acceptable fidelity")->capture_default_str();
    sweep->add_option("--output", output, "Write the JSON report here ('-' for stdout)");

    std::string bind = "127.0.0.1:7878";
    std::string connect = "127.0.0.1:7878";
    auto* serve = app.add_subcommand("serve", "Run the resource service (holds all quantum state)");
    serve->add_option("--bind", bind, "HOST:PORT (port 0 picks one)")->capture_default_str();
    serve->add_option("--seed", seed_flag, "Root seed for measurement sampling");
    bool verbose = false;
    serve->add_flag("--verbose", verbose, "Log every message");

    net::AliceOptions alice_opts;
    std::optional<std::string> alice_amps;
    std::optional<std::string> alice_alpha;
    std::optional<std::string> alice_beta;
    bool alice_random = false;
    auto* alice = app.add_subcommand("alice", "Sender: request the Bell measurement and relay (a, b)");
    alice->add_option("--connect", connect, "Service HOST:PORT")->capture_default_str();
    alice->add_option("--d", alice_opts.d, "Qudit dimension")->capture_default_str();
    alice->add_flag("--random", alice_random, "Let the service draw a random input from --seed");
    alice->add_option("--alpha", alice_alpha, "Qubit amplitude of |0>");
    alice->add_option("--beta", alice_beta, "Qubit amplitude of |1>");
    alice->add_option("--amps", alice_amps, "Qudit amplitudes re[,im];...");
    alice->add_option("--seed", seed_flag, "Seed for a random input");
    alice->add_option("--session", alice_opts.session_id, "Session id to create");
    alice->add_flag("--duplicate-measure", alice_opts.duplicate_measure, "Send MEASURE_REQUEST twice (testing)");

    net::BobOptions bob_opts;
    double bob_timeout_s = 10.0;
    auto* bob = app.add_subcommand("bob", "Receiver: wait for (a, b), correct, and verify");
    bob->add_option("--connect", connect, "Service HOST:PORT")->capture_default_str();
    bob->add_option("--session", bob_opts.session_id, "Session id to join")->required();
    bob->add_flag("--tamper", bob_opts.tamper, "Corrupt the received (a, b) (testing)");
    bob->add_option("--timeout", bob_timeout_s, "Seconds to wait for classical data")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kExitUsage;
    }

    try {
        if (*teleport) {
            tele.seed = cli::resolve_seed(seed_flag, std::cerr);
            return emit(cli::cmd_teleport(tele, echo), output);
        }
        if (*remote) {
            prep.seed = cli::resolve_seed(seed_flag, std::cerr);
            return emit(cli::cmd_remote_prep(prep, echo), output);
        }
        if (*basis) {
            return emit(cli::cmd_basis_check(check, echo), output);
        }
        if (*sweep) {
            sweep_opts.seed = cli::resolve_seed(seed_flag, std::cerr);
            return emit(cli::cmd_sweep(sweep_opts, echo), output);
        }
        if (*serve) {
            net::ServiceConfig config;
            config.bind = net::parse_endpoint(bind);
            config.seed = cli::resolve_seed(seed_flag, std::cerr);
            config.log = verbose ? &std::cerr : nullptr;
            net::Service service(config);
            service.start();
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "listening on " << config.bind.host << ":" << service.port() << std::endl;
            service.wait();
            return 0;
        }
        if (*alice) {
            alice_opts.service = net::parse_endpoint(connect);
            if (alice_amps) {
                alice_opts.amps = cli::parse_amplitudes(*alice_amps);
            } else if (alice_alpha || alice_beta) {
                alice_opts.amps = std::vector<Complex>{alice_alpha ? cli::parse_complex(*alice_alpha) : Complex{},
                                                       alice_beta ? cli::parse_complex(*alice_beta) : Complex{}};
            } else if (!alice_random) {
                throw cli::UsageError("give --random, --alpha/--beta, or --amps");
            }
            if (!alice_opts.amps) {
                alice_opts.input_seed = cli::resolve_seed(seed_flag, std::cerr);
            }
            const auto r = net::alice_run(alice_opts);
            if (r.exit_code == net::kClientOk) {
                std::cout << "session " << r.session_id << " outcome a=" << *r.a << " b=" << *r.b << std::endl;
            } else {
                std::cerr << "alice: " << (r.error_code ? "ERROR " + std::to_string(*r.error_code) + ": " : "")
                          << r.detail << std::endl;
            }
            return r.exit_code;
        }
        if (*bob) {
            bob_opts.service = net::parse_endpoint(connect);
            bob_opts.timeout = std::chrono::milliseconds(static_cast<long>(bob_timeout_s * 1000.0));
            const auto r = net::bob_run(bob_opts);
            if (r.fidelity) {
                std::cout << "session " << bob_opts.session_id << " a=" << *r.a << " b=" << *r.b
                          << " bits=" << r.bits << " fidelity=" << std::setprecision(17) << *r.fidelity
                          << std::endl;
            }
            if (!r.detail.empty()) {
                std::cerr << "bob: " << (r.error_code ? "ERROR " + std::to_string(*r.error_code) + ": " : "")
                          << r.detail << std::endl;
            }
            return r.exit_code;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::exit_code_for(e);
    }
    return cli::kExitUsage;
}
