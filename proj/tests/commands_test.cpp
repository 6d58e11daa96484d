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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "teleportlab/measurement.hpp"
#include "teleportlab/report.hpp"

using namespace teleportlab;
using namespace teleportlab::cli;
using nlohmann::json;

namespace {

const std::vector<std::string> kEcho{"teleportlab", "test"};

// Runs a command the way the tool's main does, mapping escaping exceptions to exit codes.
template <typename Fn>
int exit_of(Fn&& fn) {
    try {
        return fn().exit_code;
    } catch (const std::exception& e) {
        return exit_code_for(e);
    }
}

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("teleportlab_cmd_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string write(const std::string& name, const std::string& text) const {
        const auto p = path_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

int run_tool(const std::string& args) {
    const std::string cmd = std::string(TELEPORTLAB_TOOL) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(ParseComplex, forms) {
    EXPECT_EQ(parse_complex("0.6"), Complex(0.6, 0.0));
    EXPECT_EQ(parse_complex("0,0.8"), Complex(0.0, 0.8));
    EXPECT_EQ(parse_complex(" -1e-3 , 2 "), Complex(-1e-3, 2.0));
    EXPECT_THROW(parse_complex("abc"), UsageError);
    EXPECT_THROW(parse_complex("1,2,3"), UsageError);
    EXPECT_THROW(parse_complex(""), UsageError);
}

TEST(ParseAmplitudes, list) {
    const auto a = parse_amplitudes("1;0,1;0.5");
    ASSERT_EQ(a.size(), 3u);
    EXPECT_EQ(a[1], Complex(0.0, 1.0));
    EXPECT_THROW(parse_amplitudes(""), UsageError);
    EXPECT_THROW(parse_amplitudes("1;x"), UsageError);
}

TEST(ResolveSeed, flag_then_env) {
    std::ostringstream note;
    EXPECT_EQ(resolve_seed(42, note), 42u);
    EXPECT_TRUE(note.str().empty());
    ::setenv("TELEPORTLAB_SEED", "99", 1);
    EXPECT_EQ(resolve_seed(std::nullopt, note), 99u);
    ::setenv("TELEPORTLAB_SEED", "not-a-number", 1);
    EXPECT_THROW(resolve_seed(std::nullopt, note), UsageError);
    ::unsetenv("TELEPORTLAB_SEED");
    resolve_seed(std::nullopt, note);
    EXPECT_NE(note.str().find("seed"), std::string::npos);
}

TEST(ExitCodeFor, mapping) {
    EXPECT_EQ(exit_code_for(UsageError("x")), kExitUsage);
    EXPECT_EQ(exit_code_for(BasisError("x")), kExitValidation);
    EXPECT_EQ(exit_code_for(ZeroProbabilityError("x")), kExitValidation);
    EXPECT_EQ(exit_code_for(std::invalid_argument("x")), kExitUsage);
}

// ---- teleport --------------------------------------------------------------

TEST(CmdTeleport, qubit_example) {
    TeleportOptions o;
    o.input.alpha = "0.6";
    o.input.beta = "0.8";
    o.runs = 1000;
    o.seed = 7;
    const auto r = cmd_teleport(o, kEcho);
    EXPECT_EQ(r.exit_code, kExitOk);
    EXPECT_EQ(r.report["schema"], kReportSchema);
    const auto& agg = r.report["aggregate"];
    std::size_t total = 0;
    for (std::size_t c : agg["histogram"]) {
        total += c;
        // 5 sigma around 250 of 1000
        EXPECT_LE(std::abs(static_cast<double>(c) - 250.0), 5.0 * std::sqrt(1000 * 0.25 * 0.75));
    }
    EXPECT_EQ(total, 1000u);
    EXPECT_GE(agg["min_fidelity"].get<double>(), 1.0 - 1e-12);
    EXPECT_LE(agg["min_fidelity"].get<double>(), agg["mean_fidelity"].get<double>());
    EXPECT_EQ(r.report["seed"], 7u);
    EXPECT_EQ(r.report["command"], "teleport");
    EXPECT_EQ(r.report["argv"], json(kEcho));
}

TEST(CmdTeleport, theta_zero_gives_zero_state) {
    TeleportOptions o;
    o.input.theta = 0.0;
    o.seed = 1;
    const auto r = cmd_teleport(o, kEcho);
    EXPECT_EQ(r.exit_code, kExitOk);
    const auto bob = amps_from_json(r.report["transcripts"][0]["bob_state"]);
    ASSERT_EQ(bob.size(), 2u);
    EXPECT_NEAR(std::abs(bob[0]), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(bob[1]), 0.0, 1e-15);
}

TEST(CmdTeleport, qutrit_random) {
    TeleportOptions o;
    o.d = 3;
    o.input.random = true;
    o.runs = 100;
    o.seed = 1;
    const auto r = cmd_teleport(o, kEcho);
    EXPECT_EQ(r.exit_code, kExitOk);
    EXPECT_EQ(r.report["aggregate"]["histogram"].size(), 9u);
    EXPECT_GE(r.report["aggregate"]["min_fidelity"].get<double>(), 1.0 - 1e-12);
    EXPECT_EQ(r.report["transcripts"][0]["classical_bits_sent"], 4u);
}

TEST(CmdTeleport, transcripts_capped) {
    TeleportOptions o;
    o.input.random = true;
    o.runs = 20;
    o.max_transcripts = 5;
    const auto r = cmd_teleport(o, kEcho);
    EXPECT_EQ(r.report["transcripts"].size(), 5u);
    EXPECT_EQ(r.report["transcripts_omitted"], 15u);
}

TEST(CmdTeleport, threshold_failure) {
    TeleportOptions o;
    o.input.random = true;
    o.runs = 3;
    o.threshold = 1.5;  // unreachable
    EXPECT_EQ(cmd_teleport(o, kEcho).exit_code, kExitThreshold);
}

TEST(CmdTeleport, usage_errors) {
    TeleportOptions no_input;
    EXPECT_EQ(exit_of([&] { return cmd_teleport(no_input, kEcho); }), kExitUsage);
    TeleportOptions bad_d;
    bad_d.d = 1;
    bad_d.input.random = true;
    EXPECT_EQ(exit_of([&] { return cmd_teleport(bad_d, kEcho); }), kExitUsage);
    TeleportOptions malformed;
    malformed.input.alpha = "zero";
    malformed.input.beta = "1";
    EXPECT_EQ(exit_of([&] { return cmd_teleport(malformed, kEcho); }), kExitUsage);
    TeleportOptions wrong_len;
    wrong_len.d = 3;
    wrong_len.input.amps = "1;0";
    EXPECT_EQ(exit_of([&] { return cmd_teleport(wrong_len, kEcho); }), kExitUsage);
    TeleportOptions forced;
    forced.input.random = true;
    forced.forced = 4;
    EXPECT_EQ(exit_of([&] { return cmd_teleport(forced, kEcho); }), kExitUsage);
    TeleportOptions zero;
    zero.input.alpha = "0";
    zero.input.beta = "0";
    EXPECT_EQ(exit_of([&] { return cmd_teleport(zero, kEcho); }), kExitUsage);
}

TEST(CmdTeleport, deterministic_modulo_duration) {
    TeleportOptions o;
    o.d = 4;
    o.input.random = true;
    o.runs = 200;
    o.seed = 12345;
    const auto a = strip_durations(cmd_teleport(o, kEcho).report).dump();
    const auto b = strip_durations(cmd_teleport(o, kEcho).report).dump();
    EXPECT_EQ(a, b);
    o.seed = 12346;
    EXPECT_NE(a, strip_durations(cmd_teleport(o, kEcho).report).dump());
}

// ---- remote-prep -----------------------------------------------------------

TEST(CmdRemotePrep, success_rate) {
    RemotePrepOptions o;
    o.input.theta = 1.0;
    o.input.phi = 0.3;
    o.runs = 100000;
    o.seed = 5;
    const auto r = cmd_remote_prep(o, kEcho);
    EXPECT_EQ(r.exit_code, kExitOk);
    const auto& agg = r.report["aggregate"];
    EXPECT_LE(std::abs(agg["z_score"].get<double>()), 5.0);
    EXPECT_LE(agg["max_failure_overlap"].get<double>(), 1e-12);
    EXPECT_TRUE(agg["failure_orthogonal"].get<bool>());
}

TEST(CmdRemotePrep, forced_success) {
    RemotePrepOptions o;
    o.input.random = true;
    o.forced = 0;
    const auto r = cmd_remote_prep(o, kEcho);
    EXPECT_EQ(r.exit_code, kExitOk);
    EXPECT_TRUE(r.report["transcripts"][0]["success"].get<bool>());
    EXPECT_NEAR(r.report["aggregate"]["min_success_fidelity"].get<double>(), 1.0, 1e-12);
}

TEST(CmdRemotePrep, forced_out_of_range) {
    RemotePrepOptions o;
    o.input.random = true;
    o.forced = 2;
    EXPECT_EQ(exit_of([&] { return cmd_remote_prep(o, kEcho); }), kExitUsage);
}

// ---- basis-check -----------------------------------------------------------

TEST(CmdBasisCheck, builtins) {
    BasisCheckOptions bell;
    bell.builtin = "bell";
    const auto r = cmd_basis_check(bell, kEcho);
    EXPECT_EQ(r.exit_code, kExitOk);
    EXPECT_TRUE(r.report["unitary"].get<bool>());
    EXPECT_LE(r.report["completeness_defect"].get<double>(), 1e-12);

    BasisCheckOptions g5;
    g5.builtin = "generalized-bell";
    g5.d = 5;
    EXPECT_EQ(cmd_basis_check(g5, kEcho).exit_code, kExitOk);

    BasisCheckOptions comp;
    comp.builtin = "computational";
    const auto c = cmd_basis_check(comp, kEcho);
    EXPECT_EQ(c.exit_code, kExitThreshold);
    EXPECT_GE(c.report["elements"][0]["unitarity_defect"].get<double>(), 0.5);
}

TEST(CmdBasisCheck, basis_file_with_product_element) {
    TempDir dir;
    const auto path = dir.write(
        "basis.json",
        R"([[[1,0],[0,0],[0,0],[0,0]], [[0,0],[1,0],[0,0],[0,0]], [[0,0],[0,0],[1,0],[0,0]], [[0,0],[0,0],[0,0],[1,0]]])");
    BasisCheckOptions o;
    o.basis_file = path;
    const auto r = cmd_basis_check(o, kEcho);
    EXPECT_EQ(r.exit_code, kExitThreshold);
    EXPECT_GE(r.report["elements"][0]["unitarity_defect"].get<double>(), 0.5);
}

TEST(CmdBasisCheck, bell_basis_file_passes) {
    TempDir dir;
    const double s = 1.0 / std::sqrt(2.0);
    json elements = json::array();
    for (std::size_t k = 0; k < 4; ++k) {
        json e = json::array({{0, 0}, {0, 0}, {0, 0}, {0, 0}});
        const double sign = k % 2 ? -1.0 : 1.0;
        if (k < 2) {
            e[0] = {s, 0};
            e[3] = {sign * s, 0};
        } else {
            e[1] = {s, 0};
            e[2] = {sign * s, 0};
        }
        elements.push_back(e);
    }
    BasisCheckOptions o;
    o.basis_file = dir.write("bell.json", elements.dump());
    EXPECT_EQ(cmd_basis_check(o, kEcho).exit_code, kExitOk);
}

TEST(CmdBasisCheck, non_maximal_resource_fails) {
    TempDir dir;
    BasisCheckOptions o;
    o.builtin = "bell";
    o.resource = dir.write("resource.json", "[[0.6,0],[0,0],[0,0],[0.8,0]]");
    const auto r = cmd_basis_check(o, kEcho);
    EXPECT_EQ(r.exit_code, kExitThreshold);
    EXPECT_FALSE(r.report["unitary"].get<bool>());
}

TEST(CmdBasisCheck, validation_and_parse_errors) {
    TempDir dir;
    BasisCheckOptions not_orthogonal;
    not_orthogonal.basis_file = dir.write("a.json", "[[[1,0],[0,0],[0,0],[0,0]], [[1,0],[0,0],[0,0],[0,0]]]");
    EXPECT_EQ(exit_of([&] { return cmd_basis_check(not_orthogonal, kEcho); }), kExitValidation);

    BasisCheckOptions not_normalized;
    not_normalized.basis_file = dir.write("b.json", "[[[2,0],[0,0],[0,0],[0,0]]]");
    EXPECT_EQ(exit_of([&] { return cmd_basis_check(not_normalized, kEcho); }), kExitValidation);

    BasisCheckOptions garbage;
    garbage.basis_file = dir.write("c.json", "{not json");
    EXPECT_EQ(exit_of([&] { return cmd_basis_check(garbage, kEcho); }), kExitUsage);

    BasisCheckOptions bad_length;
    bad_length.basis_file = dir.write("d.json", "[[[1,0],[0,0],[0,0]]]");
    EXPECT_EQ(exit_of([&] { return cmd_basis_check(bad_length, kEcho); }), kExitUsage);

    BasisCheckOptions missing;
    missing.basis_file = dir.path("nope.json");
    EXPECT_EQ(exit_of([&] { return cmd_basis_check(missing, kEcho); }), kExitUsage);

    BasisCheckOptions both;
    both.builtin = "bell";
    both.basis_file = dir.path("a.json");
    EXPECT_EQ(exit_of([&] { return cmd_basis_check(both, kEcho); }), kExitUsage);

    BasisCheckOptions unknown;
    unknown.builtin = "mystery";
    EXPECT_EQ(exit_of([&] { return cmd_basis_check(unknown, kEcho); }), kExitUsage);
}

// ---- sweep -----------------------------------------------------------------

TEST(CmdSweep, dims) {
    SweepOptions o;
    o.dims = {2, 4, 8, 16};
    o.runs = 20;
    o.seed = 3;
    const auto r = cmd_sweep(o, kEcho);
    EXPECT_EQ(r.exit_code, kExitOk);
    ASSERT_EQ(r.report["rows"].size(), 4u);
    for (const auto& row : r.report["rows"]) {
        EXPECT_GE(row["aggregate"]["min_fidelity"].get<double>(), 1.0 - 1e-12);
    }
    EXPECT_EQ(r.report["rows"][3]["classical_bits"], 8u);
}

TEST(CmdSweep, empty_is_usage_error) {
    SweepOptions o;
    EXPECT_EQ(exit_of([&] { return cmd_sweep(o, kEcho); }), kExitUsage);
    o.dims = {200};
    EXPECT_EQ(exit_of([&] { return cmd_sweep(o, kEcho); }), kExitUsage);
}

TEST(CmdSweep, d2_equals_teleport_aggregate) {
    SweepOptions s;
    s.dims = {2};
    s.runs = 500;
    s.seed = 77;
    TeleportOptions t;
    t.input.random = true;
    t.runs = 500;
    t.seed = 77;
    EXPECT_EQ(cmd_sweep(s, kEcho).report["rows"][0]["aggregate"], cmd_teleport(t, kEcho).report["aggregate"]);
}

TEST(CmdSweep, deterministic_modulo_duration) {
    SweepOptions s;
    s.dims = {2, 3, 5};
    s.runs = 50;
    s.seed = 9;
    EXPECT_EQ(strip_durations(cmd_sweep(s, kEcho).report).dump(), strip_durations(cmd_sweep(s, kEcho).report).dump());
}

// ---- the executable --------------------------------------------------------

TEST(Tool, exit_codes) {
    TempDir dir;
    EXPECT_EQ(run_tool("teleport --alpha 0.6 --beta 0.8 --runs 10 --seed 1"), 0);
    EXPECT_EQ(run_tool("teleport --random --runs 10 --seed 1 --threshold 2"), 1);
    EXPECT_EQ(run_tool("teleport --bogus"), 2);
    EXPECT_EQ(run_tool("sweep --seed 1"), 2);
    EXPECT_EQ(run_tool(""), 2);
    const auto bad = dir.write("bad.json", "[[[1,0],[0,0],[0,0],[0,0]], [[1,0],[0,0],[0,0],[0,0]]]");
    EXPECT_EQ(run_tool("basis-check --basis-file " + bad), 3);
    EXPECT_EQ(run_tool("basis-check --builtin computational"), 1);
    EXPECT_EQ(run_tool("basis-check --builtin bell"), 0);
}

TEST(Tool, byte_identical_reports) {
    TempDir dir;
    const auto out = dir.path("report.json");
    const auto load = [&] {
        std::ifstream in(out);
        return strip_durations(json::parse(in)).dump();
    };
    ASSERT_EQ(run_tool("teleport --d 3 --random --runs 50 --seed 4 --output " + out), 0);
    const auto first = load();
    ASSERT_EQ(run_tool("teleport --d 3 --random --runs 50 --seed 4 --output " + out), 0);
    EXPECT_EQ(first, load());
}

TEST(Tool, seed_from_environment) {
    TempDir dir;
    const auto a = dir.path("a.json");
    const auto b = dir.path("b.json");
    ASSERT_EQ(run_tool("teleport --random --runs 20 --seed 31 --output " + a), 0);
    ::setenv("TELEPORTLAB_SEED", "31", 1);
    ASSERT_EQ(run_tool("teleport --random --runs 20 --output " + b), 0);
    ::unsetenv("TELEPORTLAB_SEED");
    const auto load = [](const std::string& p) {
        std::ifstream in(p);
        auto j = strip_durations(json::parse(in));
        j.erase("argv");
        return j.dump();
    };
    EXPECT_EQ(load(a), load(b));
}
