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

// Problem description read from one JSON file.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qproc/errors.hpp"
#include "qproc/process_norm.hpp"
#include "qproc/protocols.hpp"
#include "qproc/serialize.hpp"

namespace qproc::cli {

inline constexpr int kSchemaVersion = 1;

/// Malformed configuration; maps to exit code 2.
class SchemaError : public Error {
  public:
    explicit SchemaError(const std::string &what) : Error("schema", what) {}
};

struct ProtocolSpec {
    /// corner, hyperface, hyperedge, zoo, bloch, cusp, tangent or optimal.
    std::string kind;
    Json parameters = Json::object();
};

struct SimulateSpec {
    RVector theta_true;
    std::uint64_t shots = 1000;
    std::uint64_t repetitions = 1000;
    std::uint64_t seed = 0;
    double tolerance = 0.05;
    bool debias = true;
    /// Optional bias scan along `bias_direction`.
    std::vector<double> bias_magnitudes;
    RVector bias_direction;
};

struct GeometrySpec {
    std::size_t resolution = 64;
    std::vector<double> epsilon_sweep;
};

struct ProblemConfig {
    int schema_version = kSchemaVersion;
    ProcessFamily family = ProcessFamily::pauli_z(1);
    OneForm dq{RVector()};
    std::optional<ProtocolSpec> protocol;
    std::optional<SimulateSpec> simulate;
    GeometrySpec geometry;
    std::string output_path;
    std::string output_format = "json";
    std::uint64_t seed = 0;
};

/// Parses and validates; relative file references resolve against `base`.
ProblemConfig parse_config(const Json &j, const std::filesystem::path &base);
ProblemConfig load_config(const std::filesystem::path &path);

ProcessFamily parse_family(const Json &j, const std::filesystem::path &base);

/// Builds the protocol named by the config block for this family and form.
Protocol build_protocol(const ProtocolSpec &spec, const ProcessFamily &family,
                        const OneForm &dq, const BMinResult &bmin);

/// Kinds whose construction promises to attain the dual-norm bound.
bool claims_optimal(const std::string &kind);

} // namespace qproc::cli
