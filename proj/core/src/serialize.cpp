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

#include "qproc/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "qproc/errors.hpp"

namespace qproc {

namespace {

void write(const Json &j, int indent, int depth, std::string &out) {
    const std::string pad =
        indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ')
                   : "";
    const std::string close_pad =
        indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ')
                   : "";
    const char *nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{";
        out += nl;
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) {
                out += ",";
                out += nl;
            }
            first = false;
            out += pad;
            out += Json(it.key()).dump();
            out += indent > 0 ? ": " : ":";
            write(it.value(), indent, depth + 1, out);
        }
        out += nl;
        out += close_pad;
        out += "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        bool flat = true;
        for (const auto &e : j) {
            if (e.is_structured()) {
                flat = false;
                break;
            }
        }
        out += "[";
        bool first = true;
        for (const auto &e : j) {
            if (!first) {
                out += flat && indent > 0 ? ", " : ",";
            }
            if (!flat) {
                out += nl;
                out += pad;
            }
            first = false;
            write(e, indent, depth + 1, out);
        }
        if (!flat) {
            out += nl;
            out += close_pad;
        }
        out += "]";
        return;
    }
    case Json::value_t::number_float:
        out += format_double(j.get<double>());
        return;
    default:
        out += j.dump();
        return;
    }
}

const Json &require(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ArgumentError(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

Json fiducial_to_json(const Fiducial &f) {
    return std::visit(
        [](const auto &s) -> Json {
            using S = std::decay_t<decltype(s)>;
            Json j;
            if constexpr (std::is_same_v<S, PureState>) {
                j["kind"] = "pure";
                j["amplitudes"] = complex_to_json(s.amplitudes());
            } else {
                j["kind"] = "density";
                j["matrix"] = complex_to_json(s.matrix());
            }
            return j;
        },
        f);
}

Fiducial fiducial_from_json(const Json &j) {
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "pure") {
        return PureState(complex_vector_from_json(require(j, "amplitudes")));
    }
    if (kind == "density") {
        return DensityOperator(complex_matrix_from_json(require(j, "matrix")));
    }
    throw ArgumentError("unknown fiducial kind '" + kind + "'");
}

Json povm_to_json(const Povm &m) {
    Json j;
    j["labels"] = m.labels();
    if (m.basis()) {
        j["basis"] = complex_to_json(*m.basis());
    } else {
        Json elems = Json::array();
        for (const auto &e : m.elements()) {
            elems.push_back(complex_to_json(e.matrix()));
        }
        j["elements"] = std::move(elems);
    }
    return j;
}

Povm povm_from_json(const Json &j) {
    auto labels = require(j, "labels").get<std::vector<std::string>>();
    if (j.contains("basis")) {
        return Povm::from_orthonormal_basis(complex_matrix_from_json(j.at("basis")),
                                            std::move(labels));
    }
    std::vector<HermitianOperator> elems;
    for (const auto &e : require(j, "elements")) {
        elems.emplace_back(complex_matrix_from_json(e));
    }
    return Povm(std::move(elems), std::move(labels));
}

} // namespace

std::string format_double(double x) {
    if (!std::isfinite(x)) {
        // JSON has no representation for these.
        return "null";
    }
    if (x == 0.0) {
        // "-0" would re-parse as the integer 0.
        return "0";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string dump(const Json &j, int indent) {
    std::string out;
    write(j, indent, 0, out);
    return out;
}

Json to_json(const RVector &v) {
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        j.push_back(v(i));
    }
    return j;
}

Json to_json(const RMatrix &m) {
    Json j = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        j.push_back(std::move(row));
    }
    return j;
}

Json complex_to_json(const CMatrix &m) {
    Json j = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        }
        j.push_back(std::move(row));
    }
    return j;
}

Json complex_to_json(const CVector &v) {
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        j.push_back(Json::array({v(i).real(), v(i).imag()}));
    }
    return j;
}

RVector real_vector_from_json(const Json &j) {
    if (!j.is_array()) {
        throw ArgumentError("expected an array of numbers");
    }
    RVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            throw ArgumentError("expected an array of numbers");
        }
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

RMatrix real_matrix_from_json(const Json &j) {
    if (!j.is_array() || j.empty()) {
        throw ArgumentError("expected a nonempty array of rows");
    }
    const std::size_t cols = j[0].size();
    RMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const RVector row = real_vector_from_json(j[r]);
        if (static_cast<std::size_t>(row.size()) != cols) {
            throw ArgumentError("ragged matrix rows");
        }
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

CVector complex_vector_from_json(const Json &j) {
    if (!j.is_array()) {
        throw ArgumentError("expected an array of [re, im] pairs");
    }
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json &e = j[i];
        if (e.is_number()) {
            v(static_cast<Eigen::Index>(i)) = e.get<double>();
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() &&
                   e[1].is_number()) {
            v(static_cast<Eigen::Index>(i)) =
                Complex(e[0].get<double>(), e[1].get<double>());
        } else {
            throw ArgumentError("expected [re, im] pair");
        }
    }
    return v;
}

CMatrix complex_matrix_from_json(const Json &j) {
    if (!j.is_array() || j.empty()) {
        throw ArgumentError("expected a nonempty array of rows");
    }
    const std::size_t cols = j[0].size();
    CMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const CVector row = complex_vector_from_json(j[r]);
        if (static_cast<std::size_t>(row.size()) != cols) {
            throw ArgumentError("ragged matrix rows");
        }
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

Json to_json(const FisherMatrix &f) { return to_json(f.entries()); }

Json to_json(const BMinResult &r) {
    Json j;
    j["b_min"] = to_json(r.b_min.components());
    j["norm"] = r.norm;
    j["dual_norm"] = r.dual_norm;
    j["at_corner"] = r.at_corner;
    if (r.adjacent_faces) {
        j["adjacent_faces"] = *r.adjacent_faces;
    }
    j["iterations"] = r.iterations;
    return j;
}

Json to_json(const CanonicalForm &c) {
    Json j;
    j["permutation"] = c.permutation;
    j["scale"] = c.scale;
    j["sign"] = c.sign;
    j["dropped"] = c.dropped;
    j["canonical"] = to_json(c.canonical.components());
    return j;
}

Json to_json(const UnitBallMesh &m) {
    Json j;
    Json v = Json::array();
    for (const auto &x : m.vertices) {
        v.push_back(to_json(x));
    }
    Json s = Json::array();
    for (const auto &x : m.samples) {
        s.push_back(to_json(x));
    }
    j["vertices"] = std::move(v);
    j["samples"] = std::move(s);
    j["norm"] = m.norm;
    return j;
}

Json to_json(const EstimatorReport &r, bool include_samples) {
    Json j;
    j["shots"] = r.shots;
    j["repetitions"] = r.repetitions;
    j["mean"] = r.mean;
    j["mean_standard_error"] = r.mean_standard_error;
    j["empirical_variance"] = r.empirical_variance;
    j["variance_standard_error"] = r.variance_standard_error;
    j["variance_times_shots"] = r.empirical_variance * static_cast<double>(r.shots);
    j["bound_per_shot"] = r.bound_per_shot;
    j["bound"] = r.bound;
    j["z_score"] = r.z_score;
    j["tolerance"] = r.tolerance;
    j["verdict"] = r.verdict;
    j["within_tolerance"] = r.within_tolerance;
    j["sanity_alarm"] = r.sanity_alarm;
    if (r.ccrb) {
        j["ccrb_check"] = {{"mode", r.ccrb->mode},
                           {"passed", r.ccrb->passed},
                           {"min_eigenvalue", r.ccrb->min_eigenvalue},
                           {"slack", r.ccrb->slack}};
    }
    if (include_samples) {
        j["q_hat_samples"] = r.q_hat_samples;
    }
    return j;
}

Json to_json(const BiasFit &f) {
    Json j;
    j["linear"] = f.linear;
    j["linear_standard_error"] = f.linear_se;
    j["linear_z"] = f.linear_z();
    j["quadratic"] = f.quadratic;
    j["quadratic_standard_error"] = f.quadratic_se;
    return j;
}

Json to_json(const ChainReport &c) {
    Json j;
    j["fisher"] = c.fisher;
    j["quantum"] = c.quantum;
    j["norm_squared"] = c.norm_sq;
    j["fisher_slack"] = c.fisher_slack;
    j["quantum_slack"] = c.quantum_slack;
    j["fisher_saturated"] = c.fisher_saturated;
    j["quantum_saturated"] = c.quantum_saturated;
    return j;
}

Json to_json(const Protocol &p) {
    Json j;
    j["kind"] = to_string(p.kind);
    j["N"] = p.family_dim;
    j["target"] = to_json(p.target.components());
    Json branches = Json::array();
    for (const auto &br : p.branches) {
        Json b;
        b["weight"] = br.weight;
        if (br.string) {
            b["string"] = br.string->entries();
        }
        b["ancilla_qubits"] = br.ancilla_qubits;
        b["fiducial"] = fiducial_to_json(br.fiducial);
        b["measurement"] = povm_to_json(br.measurement);
        Json rs = Json::array();
        for (const auto &r : br.readouts) {
            rs.push_back({{"plus", r.plus},
                          {"minus", r.minus},
                          {"form", to_json(r.form.components())},
                          {"share", r.share},
                          {"coefficient", r.coefficient}});
        }
        b["readouts"] = std::move(rs);
        branches.push_back(std::move(b));
    }
    j["branches"] = std::move(branches);
    return j;
}

Protocol protocol_from_json(const Json &j) {
    Protocol p;
    p.kind = protocol_kind_from_string(require(j, "kind").get<std::string>());
    p.family_dim = require(j, "N").get<std::size_t>();
    p.target = OneForm(real_vector_from_json(require(j, "target")));
    for (const auto &b : require(j, "branches")) {
        std::vector<Readout> readouts;
        for (const auto &r : require(b, "readouts")) {
            readouts.push_back(
                Readout{require(r, "plus").get<std::size_t>(),
                        require(r, "minus").get<std::size_t>(),
                        OneForm(real_vector_from_json(require(r, "form"))),
                        require(r, "share").get<double>(),
                        require(r, "coefficient").get<double>()});
        }
        std::optional<SignString> string;
        if (b.contains("string")) {
            string = SignString(b.at("string").get<std::vector<int>>());
        }
        p.branches.push_back(Branch{require(b, "weight").get<double>(),
                                    fiducial_from_json(require(b, "fiducial")),
                                    povm_from_json(require(b, "measurement")),
                                    std::move(readouts),
                                    b.value("ancilla_qubits", std::size_t{0}),
                                    std::move(string)});
    }
    validate(p);
    return p;
}

} // namespace qproc
