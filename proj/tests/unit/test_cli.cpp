// Copyright 2026 The qproc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace qproc;
using Catch::Matchers::WithinAbs;

namespace {

const std::filesystem::path kFixtures{QPROC_FIXTURE_DIR};

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
    [[nodiscard]] Json json() const { return Json::parse(out); }
    [[nodiscard]] Json error() const { return Json::parse(err); }
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "qproc");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    Outcome o;
    o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string fixture(const std::string &name) { return (kFixtures / name).string(); }

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("qproc_test_" + name);
}

} // namespace

TEST_CASE("bound command") {
    SECTION("pauli-z corner") {
        const Outcome o = invoke({"bound", fixture("bound_pauli_z.json")});
        REQUIRE(o.code == 0);
        const Json j = o.json();
        CHECK_THAT(j["bound"].get<double>(), WithinAbs(1.0, 1e-12));
        CHECK(j["at_corner"].get<bool>());
        const RVector b = real_vector_from_json(j["b_min"]);
        CHECK((b - (RVector(3) << 1.0, 0.0, 0.0).finished()).norm() < 1e-12);
    }
    SECTION("bloch") {
        const Outcome o = invoke({"bound", fixture("bound_bloch.json")});
        REQUIRE(o.code == 0);
        CHECK_THAT(o.json()["bound"].get<double>(), WithinAbs(4.0, 1e-12));
    }
    SECTION("epsilon pair cusp") {
        const Outcome o = invoke({"bound", fixture("bound_epsilon_pair.json")});
        REQUIRE(o.code == 0);
        const Json j = o.json();
        CHECK_THAT(j["bound"].get<double>(), WithinAbs(1.0, 1e-9));
        const RVector b = real_vector_from_json(j["b_min"]);
        CHECK((b - (RVector(2) << 0.0, 1.0).finished()).norm() < 1e-9);
    }
    SECTION("seventeen significant digits") {
        const Outcome o = invoke({"bound", fixture("bound_pauli_z.json")});
        CHECK(o.out.find("0.66666666666666663") != std::string::npos);
    }
    SECTION("csv") {
        const Outcome o = invoke({"bound", fixture("bound_bloch.json"), "--format", "csv"});
        REQUIRE(o.code == 0);
        CHECK(std::count(o.out.begin(), o.out.end(), '\n') == 2);
    }
}

TEST_CASE("protocol command") {
    SECTION("corner weights") {
        const Outcome o = invoke({"protocol", fixture("protocol_corner.json")});
        REQUIRE(o.code == 0);
        const Json j = o.json();
        const Json &br = j["protocol"]["branches"];
        REQUIRE(br.size() == 2);
        CHECK_THAT(br[0]["weight"].get<double>(), WithinAbs(0.75, 1e-15));
        CHECK_THAT(br[1]["weight"].get<double>(), WithinAbs(0.25, 1e-15));
        CHECK(j["kissing_residual"].get<double>() < 1e-12);
    }
    SECTION("hyperface") {
        const Outcome o = invoke({"protocol", fixture("protocol_hyperface.json")});
        REQUIRE(o.code == 0);
        const RVector z = (RVector(3) << 1.0, 1.0, -1.0).finished();
        const RMatrix f = real_matrix_from_json(o.json()["fisher"]);
        CHECK((f - z * z.transpose()).cwiseAbs().maxCoeff() < 1e-8);
    }
    SECTION("zoo") {
        const Outcome o = invoke({"protocol", fixture("protocol_zoo.json")});
        REQUIRE(o.code == 0);
        const RMatrix f = real_matrix_from_json(o.json()["fisher"]);
        const RMatrix expect = (RMatrix(2, 2) << 1.0, 0.5, 0.5, 1.0).finished();
        CHECK((f - expect).cwiseAbs().maxCoeff() < 1e-8);
    }
    SECTION("emitted protocols re-parse") {
        for (const char *name :
             {"protocol_corner.json", "protocol_hyperface.json", "protocol_zoo.json",
              "bound_bloch.json", "bound_epsilon_pair.json", "custom_unitary.json"}) {
            const Outcome o = invoke({"protocol", fixture(name)});
            REQUIRE(o.code == 0);
            const Json emitted = o.json()["protocol"];
            const Protocol p = protocol_from_json(emitted);
            CHECK(dump(to_json(p)) == dump(emitted));
        }
    }
    SECTION("dimension cap from the environment") {
        ::setenv("QPROC_MAX_DIM", "4", 1);
        const Outcome o = invoke({"protocol", fixture("protocol_hyperface.json")});
        ::unsetenv("QPROC_MAX_DIM");
        CHECK(o.code == 2);
        CHECK(o.error()["error"]["kind"] == "resource");
    }
}

TEST_CASE("simulate command") {
    SECTION("byte-identical reruns") {
        const auto a = scratch("sim_a.json");
        const auto b = scratch("sim_b.json");
        const Outcome x = invoke({"simulate", fixture("simulate_corner.json"), "--output", a.string()});
        const Outcome y = invoke({"simulate", fixture("simulate_corner.json"), "--output", b.string()});
        CHECK(x.code == 0);
        CHECK(y.code == 0);
        const std::string first = slurp(a);
        CHECK(!first.empty());
        CHECK(first == slurp(b));
        const Json j = Json::parse(first);
        const double v = j["report"]["variance_times_shots"].get<double>();
        CHECK(v >= 0.95);
        CHECK(v <= 1.05);
        std::filesystem::remove(a);
        std::filesystem::remove(b);
    }
    SECTION("seed override") {
        const Outcome x = invoke({"simulate", fixture("simulate_fiducial.json"), "--format", "csv"});
        const Outcome y = invoke(
            {"simulate", fixture("simulate_fiducial.json"), "--format", "csv", "--seed", "4"});
        CHECK(x.out != y.out);
        CHECK(y.out.find(",4\n") != std::string::npos);
    }
    SECTION("shots override") {
        const Outcome o = invoke({"simulate", fixture("simulate_fiducial.json"), "--shots", "500"});
        CHECK(o.json()["report"]["shots"].get<int>() == 500);
    }
    SECTION("unbiased at the fiducial point") {
        const Outcome o = invoke({"simulate", fixture("simulate_fiducial.json")});
        REQUIRE(o.code == 0);
        const Json j = o.json();
        const Json &r = j["report"];
        CHECK(std::abs(r["mean"].get<double>()) < 3.0 * r["mean_standard_error"].get<double>());
    }
    SECTION("bias study") {
        const Outcome o = invoke({"simulate", fixture("simulate_bias.json")});
        REQUIRE(o.code == 0);
        CHECK(o.json().contains("bias_fit"));
    }
    SECTION("missing protocol") {
        const Outcome o = invoke({"simulate", fixture("simulate_missing_protocol.json")});
        CHECK(o.code == 2);
        CHECK(o.error()["error"]["kind"] == "schema");
    }
}

TEST_CASE("geometry command") {
    SECTION("octahedron") {
        const Outcome o = invoke({"geometry", fixture("geometry_octahedron.json")});
        REQUIRE(o.code == 0);
        const Json j = o.json();
        CHECK(j["meshes"][0]["vertices"].size() == 6);
        CHECK(j["tangency"]["at_corner"].get<bool>());
    }
    SECTION("epsilon sweep") {
        const Outcome o = invoke({"geometry", fixture("geometry_epsilon_sweep.json")});
        REQUIRE(o.code == 0);
        const Json j = o.json();
        const Json &meshes = j["meshes"];
        REQUIRE(meshes.size() == 4);
        for (const auto &m : meshes) {
            bool upper = false;
            bool lower = false;
            for (const auto &v : m["vertices"]) {
                upper = upper || (v[0] == 0.0 && v[1] == 1.0);
                lower = lower || (v[0] == 0.0 && v[1] == -1.0);
            }
            CHECK(upper);
            CHECK(lower);
        }
    }
    SECTION("bloch sphere") {
        const Outcome o = invoke({"geometry", fixture("geometry_bloch.json")});
        REQUIRE(o.code == 0);
        const Json j = o.json();
        for (const auto &s : j["meshes"][0]["samples"]) {
            CHECK_THAT(real_vector_from_json(s).norm(), WithinAbs(1.0, 1e-12));
        }
    }
    SECTION("too many parameters") {
        CHECK(invoke({"geometry", fixture("geometry_too_large.json")}).code == 2);
    }
}

TEST_CASE("verify command") {
    for (const char *name : {"bound_pauli_z.json", "bound_bloch.json", "bound_epsilon_pair.json",
                             "custom_unitary.json", "protocol_zoo.json"}) {
        const Outcome o = invoke({"verify", fixture(name)});
        CHECK(o.code == 0);
        const Json j = o.json();
        CHECK(j["passed"].get<bool>());
        for (const auto &c : j["checks"]) {
            CHECK((c.contains("skipped") || c["passed"].get<bool>()));
        }
    }
}

TEST_CASE("usage and schema errors") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"frob", fixture("bound_bloch.json")}).code == 2);
    CHECK(invoke({"bound", fixture("no_such_file.json")}).code == 2);
    CHECK(invoke({"bound", fixture("bound_bloch.json"), "--format", "xml"}).code == 2);
    const Outcome missing = invoke({"bound", fixture("invalid_missing_version.json")});
    CHECK(missing.code == 2);
    CHECK(missing.out.empty());
    CHECK(missing.error()["error"]["kind"] == "schema");
    CHECK(invoke({"bound", fixture("invalid_length_mismatch.json")}).code == 2);
}
