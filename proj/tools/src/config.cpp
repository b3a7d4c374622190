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

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace qproc::cli {

namespace {

const Json &field(const Json &j, const char *key, const char *where) {
    if (!j.is_object() || !j.contains(key)) {
        throw SchemaError(std::string(where) + ": missing field '" + key + "'");
    }
    return j.at(key);
}

double number(const Json &j, const std::string &what) {
    if (!j.is_number()) {
        throw SchemaError(what + " must be a number");
    }
    const double x = j.get<double>();
    if (!std::isfinite(x)) {
        throw SchemaError(what + " must be finite");
    }
    return x;
}

std::uint64_t count(const Json &j, const std::string &what) {
    if (!j.is_number_unsigned()) {
        throw SchemaError(what + " must be a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

RVector vector(const Json &j, const std::string &what) {
    if (!j.is_array()) {
        throw SchemaError(what + " must be an array of numbers");
    }
    RVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = number(j[i], what);
    }
    return v;
}

std::vector<int> signs(const Json &j, const std::string &what) {
    if (!j.is_array() || j.empty()) {
        throw SchemaError(what + " must be a nonempty array of -1, 0, 1");
    }
    std::vector<int> z;
    for (const auto &e : j) {
        if (!e.is_number_integer() || e.get<int>() < -1 || e.get<int>() > 1) {
            throw SchemaError(what + " entries must be -1, 0 or 1");
        }
        z.push_back(e.get<int>());
    }
    return z;
}

Json read_json(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open '" + path.string() + "'");
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error &e) {
        throw SchemaError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void require_pauli_z(const ProcessFamily &family, const std::string &kind) {
    if (family.kind() != ProcessFamily::Kind::PauliZ) {
        throw SchemaError("protocol '" + kind + "' needs a pauli-z family");
    }
}

void require_length(std::size_t got, const ProcessFamily &family,
                    const std::string &what) {
    if (got != family.parameter_count()) {
        throw SchemaError(what + " has length " + std::to_string(got) +
                          ", family has N = " +
                          std::to_string(family.parameter_count()));
    }
}

} // namespace

ProcessFamily parse_family(const Json &j, const std::filesystem::path &base) {
    if (!j.is_object()) {
        throw SchemaError("family must be an object");
    }
    const Json &kind_j = field(j, "kind", "family");
    if (!kind_j.is_string()) {
        throw SchemaError("family.kind must be a string");
    }
    const std::string kind = kind_j.get<std::string>();
    std::optional<std::uint64_t> n;
    if (j.contains("N")) {
        n = count(j.at("N"), "family.N");
    }
    auto expect_n = [&](std::uint64_t want) {
        if (n && *n != want) {
            throw SchemaError("family '" + kind + "' has N = " + std::to_string(want));
        }
    };
    if (kind == "pauli-z") {
        if (!n || *n == 0) {
            throw SchemaError("family.N must be a positive integer");
        }
        return ProcessFamily::pauli_z(static_cast<std::size_t>(*n));
    }
    if (kind == "bloch") {
        expect_n(3);
        return ProcessFamily::bloch();
    }
    if (kind == "epsilon-pair") {
        expect_n(2);
        const double eps = number(field(j, "epsilon", "family"), "family.epsilon");
        if (eps < 0.0) {
            throw SchemaError("family.epsilon must be nonnegative");
        }
        return ProcessFamily::epsilon_pair(eps);
    }
    if (kind == "custom-unitary") {
        Json gens;
        if (j.contains("generators")) {
            gens = j.at("generators");
        } else if (j.contains("generators_file")) {
            const auto rel = j.at("generators_file");
            if (!rel.is_string()) {
                throw SchemaError("family.generators_file must be a string");
            }
            gens = read_json(base / rel.get<std::string>());
            if (gens.is_object()) {
                gens = field(gens, "generators", "generators file");
            }
        } else {
            throw SchemaError("custom-unitary family needs generators or generators_file");
        }
        if (!gens.is_array() || gens.empty()) {
            throw SchemaError("generators must be a nonempty array of matrices");
        }
        expect_n(gens.size());
        std::vector<HermitianOperator> ops;
        for (const auto &g : gens) {
            try {
                ops.emplace_back(complex_matrix_from_json(g));
            } catch (const ArgumentError &e) {
                throw SchemaError(std::string("generator: ") + e.what());
            }
        }
        return ProcessFamily::custom_unitary(std::move(ops));
    }
    throw SchemaError("unknown family kind '" + kind + "'");
}

ProblemConfig parse_config(const Json &j, const std::filesystem::path &base) {
    if (!j.is_object()) {
        throw SchemaError("config must be a JSON object");
    }
    ProblemConfig c;
    const Json &version = field(j, "schema_version", "config");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
        throw SchemaError("unsupported schema_version (expected " +
                          std::to_string(kSchemaVersion) + ")");
    }
    c.family = parse_family(field(j, "family", "config"), base);
    const RVector q = vector(field(j, "q", "config"), "q");
    require_length(static_cast<std::size_t>(q.size()), c.family, "q");
    c.dq = OneForm(q);

    if (j.contains("protocol")) {
        const Json &p = j.at("protocol");
        ProtocolSpec spec;
        const Json &kind = field(p, "kind", "protocol");
        if (!kind.is_string()) {
            throw SchemaError("protocol.kind must be a string");
        }
        spec.kind = kind.get<std::string>();
        if (p.contains("parameters")) {
            if (!p.at("parameters").is_object()) {
                throw SchemaError("protocol.parameters must be an object");
            }
            spec.parameters = p.at("parameters");
        }
        c.protocol = std::move(spec);
    }

    if (j.contains("simulate")) {
        const Json &s = j.at("simulate");
        if (!s.is_object()) {
            throw SchemaError("simulate must be an object");
        }
        SimulateSpec sim;
        sim.theta_true = s.contains("theta_true")
                             ? vector(s.at("theta_true"), "simulate.theta_true")
                             : RVector::Zero(static_cast<Eigen::Index>(
                                   c.family.parameter_count()));
        require_length(static_cast<std::size_t>(sim.theta_true.size()), c.family,
                       "simulate.theta_true");
        if (s.contains("shots")) {
            sim.shots = count(s.at("shots"), "simulate.shots");
        }
        if (s.contains("repetitions")) {
            sim.repetitions = count(s.at("repetitions"), "simulate.repetitions");
        }
        if (s.contains("seed")) {
            sim.seed = count(s.at("seed"), "simulate.seed");
        }
        if (s.contains("tolerance")) {
            sim.tolerance = number(s.at("tolerance"), "simulate.tolerance");
            if (sim.tolerance <= 0.0) {
                throw SchemaError("simulate.tolerance must be positive");
            }
        }
        if (s.contains("debias")) {
            if (!s.at("debias").is_boolean()) {
                throw SchemaError("simulate.debias must be a boolean");
            }
            sim.debias = s.at("debias").get<bool>();
        }
        if (s.contains("bias_magnitudes")) {
            const RVector m = vector(s.at("bias_magnitudes"), "simulate.bias_magnitudes");
            sim.bias_magnitudes.assign(m.data(), m.data() + m.size());
            sim.bias_direction = vector(field(s, "bias_direction", "simulate"),
                                        "simulate.bias_direction");
            require_length(static_cast<std::size_t>(sim.bias_direction.size()),
                           c.family, "simulate.bias_direction");
        }
        if (sim.shots == 0 || sim.repetitions < 2) {
            throw SchemaError("simulate needs shots >= 1 and repetitions >= 2");
        }
        c.seed = sim.seed;
        c.simulate = std::move(sim);
    }

    if (j.contains("geometry")) {
        const Json &g = j.at("geometry");
        if (g.contains("resolution")) {
            c.geometry.resolution =
                static_cast<std::size_t>(count(g.at("resolution"), "geometry.resolution"));
            if (c.geometry.resolution == 0) {
                throw SchemaError("geometry.resolution must be positive");
            }
        }
        if (g.contains("epsilon_sweep")) {
            const RVector e = vector(g.at("epsilon_sweep"), "geometry.epsilon_sweep");
            for (Eigen::Index i = 0; i < e.size(); ++i) {
                if (e(i) < 0.0) {
                    throw SchemaError("geometry.epsilon_sweep entries must be nonnegative");
                }
            }
            c.geometry.epsilon_sweep.assign(e.data(), e.data() + e.size());
        }
    }

    if (j.contains("output")) {
        const Json &o = j.at("output");
        if (o.contains("path")) {
            if (!o.at("path").is_string()) {
                throw SchemaError("output.path must be a string");
            }
            c.output_path = o.at("path").get<std::string>();
        }
        if (o.contains("format")) {
            if (!o.at("format").is_string()) {
                throw SchemaError("output.format must be a string");
            }
            c.output_format = o.at("format").get<std::string>();
        }
    }
    if (c.output_format != "json" && c.output_format != "csv") {
        throw SchemaError("output.format must be json or csv");
    }
    return c;
}

ProblemConfig load_config(const std::filesystem::path &path) {
    return parse_config(read_json(path), path.parent_path());
}

bool claims_optimal(const std::string &kind) {
    static const std::set<std::string> kinds{"corner", "bloch", "cusp", "tangent",
                                             "optimal"};
    return kinds.contains(kind);
}

Protocol build_protocol(const ProtocolSpec &spec, const ProcessFamily &family,
                        const OneForm &dq, const BMinResult &bmin) {
    const Json &par = spec.parameters;
    const std::string &kind = spec.kind;
    if (kind == "optimal") {
        return optimal_protocol(family, dq, bmin);
    }
    if (kind == "corner") {
        require_pauli_z(family, kind);
        return corner_protocol(dq);
    }
    if (kind == "hyperface" || kind == "hyperedge") {
        require_pauli_z(family, kind);
        const char *key = kind == "hyperface" ? "z" : "w";
        const auto z = signs(field(par, key, "protocol.parameters"),
                             std::string("protocol.parameters.") + key);
        require_length(z.size(), family, std::string("protocol.parameters.") + key);
        return kind == "hyperface" ? hyperface_protocol(SignString(z))
                                   : hyperedge_protocol(SignString(z));
    }
    if (kind == "zoo") {
        require_pauli_z(family, kind);
        bool mixed = false;
        if (par.contains("mixed")) {
            if (!par.at("mixed").is_boolean()) {
                throw SchemaError("protocol.parameters.mixed must be a boolean");
            }
            mixed = par.at("mixed").get<bool>();
        }
        if (par.contains("a")) {
            const RVector a = vector(par.at("a"), "protocol.parameters.a");
            require_length(static_cast<std::size_t>(a.size()), family,
                           "protocol.parameters.a");
            return zoo_protocol(a, mixed);
        }
        const Json &pz = field(par, "p_z", "protocol.parameters");
        if (!pz.is_array()) {
            throw SchemaError("protocol.parameters.p_z must be an array of {z, p}");
        }
        std::map<std::vector<int>, double> weights;
        for (const auto &e : pz) {
            auto z = signs(field(e, "z", "p_z entry"), "p_z entry z");
            require_length(z.size(), family, "p_z entry z");
            weights[std::move(z)] += number(field(e, "p", "p_z entry"), "p_z entry p");
        }
        return zoo_protocol(weights, family.parameter_count(), mixed);
    }
    if (kind == "bloch") {
        if (family.kind() != ProcessFamily::Kind::Bloch) {
            throw SchemaError("protocol 'bloch' needs a bloch family");
        }
        return bloch_protocol(dq);
    }
    if (kind == "cusp") {
        if (family.kind() != ProcessFamily::Kind::EpsilonPair) {
            throw SchemaError("protocol 'cusp' needs an epsilon-pair family");
        }
        return cusp_protocol(family, dq);
    }
    if (kind == "tangent") {
        return tangent_protocol(family, dq, bmin);
    }
    throw SchemaError("unknown protocol kind '" + kind + "'");
}

} // namespace qproc::cli
