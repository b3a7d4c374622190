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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qproc/estimation.hpp"
#include "qproc/quantum_fisher.hpp"

namespace qproc::cli {

namespace {

constexpr double kKissingTol = 1e-8;

Json family_json(const ProcessFamily &f) {
    Json j;
    j["kind"] = f.name();
    j["N"] = f.parameter_count();
    if (f.kind() == ProcessFamily::Kind::EpsilonPair) {
        j["epsilon"] = f.epsilon();
    }
    return j;
}

std::string joined(const RVector &v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) {
            s += ';';
        }
        s += format_double(v(i));
    }
    return s;
}

std::string csv_line(std::initializer_list<std::string> cells) {
    std::string s;
    bool first = true;
    for (const auto &c : cells) {
        if (!first) {
            s += ',';
        }
        first = false;
        s += c;
    }
    return s + '\n';
}

Json nullable(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

/// The branch alone, reweighted to a protocol of its own.
Protocol single_branch(const Protocol &p, std::size_t n) {
    Protocol q;
    q.kind = p.kind;
    q.family_dim = p.family_dim;
    q.target = p.target;
    q.branches.push_back(p.branches[n]);
    q.branches.back().weight = 1.0;
    return q;
}

/// Protocol named in the config, or the automatic one.
Protocol chosen_protocol(const ProblemConfig &c, const BMinResult &bmin) {
    const ProtocolSpec spec = c.protocol.value_or(ProtocolSpec{"optimal", Json::object()});
    return build_protocol(spec, c.family, c.dq, bmin);
}

std::string protocol_kind(const ProblemConfig &c) {
    return c.protocol ? c.protocol->kind : std::string("optimal");
}

} // namespace

CommandResult cmd_bound(const ProblemConfig &c) {
    const BMinResult r = b_min_solve(c.family, c.dq);
    const double bound = r.dual_norm * r.dual_norm;
    Json j;
    j["command"] = "bound";
    j["family"] = family_json(c.family);
    j["q"] = to_json(c.dq.components());
    j["b_min"] = to_json(r.b_min.components());
    j["process_norm"] = r.norm;
    j["dual_norm"] = r.dual_norm;
    j["bound"] = bound;
    j["variance_bound_per_shot"] = bound;
    j["at_corner"] = r.at_corner;
    if (r.adjacent_faces) {
        j["adjacent_faces"] = *r.adjacent_faces;
    }
    j["iterations"] = r.iterations;
    j["canonical"] = to_json(canonicalize(c.dq));

    CommandResult out;
    out.csv = csv_line({"family", "q", "process_norm", "dual_norm", "bound",
                        "at_corner", "b_min"}) +
              csv_line({c.family.name(), joined(c.dq.components()),
                        format_double(r.norm), format_double(r.dual_norm),
                        format_double(bound), r.at_corner ? "true" : "false",
                        joined(r.b_min.components())});
    out.document = std::move(j);
    return out;
}

CommandResult cmd_protocol(const ProblemConfig &c) {
    const BMinResult bmin = b_min_solve(c.family, c.dq);
    const Protocol p = chosen_protocol(c, bmin);
    const FisherMatrix fisher = protocol_fisher(p, c.family);
    const FisherMatrix claimed = claimed_fisher(p);
    const double residual = kissing_residual(fisher, bmin.b_min, c.family, c.dq);
    double attained = std::numeric_limits<double>::infinity();
    try {
        attained = fisher_dual(fisher, c.dq);
    } catch (const UnboundedVarianceError &) {
        // Stays infinite: this protocol cannot estimate q.
    }
    const std::string kind = protocol_kind(c);
    const bool optimal = claims_optimal(kind);
    const bool kissing_ok = residual <= kKissingTol;

    Json j;
    j["command"] = "protocol";
    j["family"] = family_json(c.family);
    j["q"] = to_json(c.dq.components());
    j["requested"] = kind;
    j["claimed_optimal"] = optimal;
    j["bound"] = bmin.dual_norm * bmin.dual_norm;
    j["variance_per_shot"] = nullable(attained);
    j["b_min"] = to_json(bmin.b_min.components());
    j["kissing_residual"] = residual;
    j["kissing_ok"] = kissing_ok;
    j["fisher"] = to_json(fisher);
    j["claimed_fisher"] = to_json(claimed);
    j["protocol"] = to_json(p);

    CommandResult out;
    out.csv = csv_line({"branch", "weight", "string", "readouts"});
    for (std::size_t n = 0; n < p.branches.size(); ++n) {
        const Branch &br = p.branches[n];
        std::string s = br.string ? br.string->str() : std::string();
        out.csv += csv_line({std::to_string(n), format_double(br.weight), s,
                             std::to_string(br.readouts.size())});
    }
    out.document = std::move(j);
    out.exit_code = optimal && !kissing_ok ? kVerificationFailed : kSuccess;
    return out;
}

CommandResult cmd_simulate(const ProblemConfig &c) {
    if (!c.simulate) {
        throw SchemaError("simulate needs a 'simulate' block");
    }
    if (!c.protocol) {
        throw SchemaError("simulate needs a 'protocol' block");
    }
    const SimulateSpec &sim = *c.simulate;
    const BMinResult bmin = b_min_solve(c.family, c.dq);
    const Protocol p = chosen_protocol(c, bmin);
    const RVector gap = p.target.components() - c.dq.components();
    if (gap.cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, c.dq.components().cwiseAbs().maxCoeff())) {
        throw SchemaError("protocol estimates a different form than q");
    }
    StudyOptions opt;
    opt.shots = sim.shots;
    opt.repetitions = sim.repetitions;
    opt.seed = sim.seed;
    opt.debias = sim.debias;
    const StudySamples samples = run_study(p, c.family, sim.theta_true, opt);
    const FisherMatrix fisher = protocol_fisher(p, c.family);
    const double bound_per_shot = bmin.dual_norm * bmin.dual_norm;
    const EstimatorReport rep = report(samples.q_hat, bound_per_shot, sim.shots, fisher,
                                       c.dq, samples.readouts, &p, sim.tolerance);

    Json j;
    j["command"] = "simulate";
    j["family"] = family_json(c.family);
    j["q"] = to_json(c.dq.components());
    j["protocol"] = protocol_kind(c);
    j["theta_true"] = to_json(sim.theta_true);
    j["seed"] = sim.seed;
    j["debias"] = sim.debias;
    j["q_true"] = c.dq.components().dot(sim.theta_true);
    j["report"] = to_json(rep);
    if (!sim.bias_magnitudes.empty()) {
        const BiasFit fit =
            unbiasedness_study(p, c.family, sim.bias_direction, sim.bias_magnitudes, opt);
        j["bias_fit"] = to_json(fit);
    }

    CommandResult out;
    out.csv = csv_header() + '\n' + csv_row(protocol_kind(c), c.dq, rep, sim.seed) + '\n';
    out.document = std::move(j);
    out.exit_code = rep.within_tolerance ? kSuccess : kVerificationFailed;
    return out;
}

CommandResult cmd_geometry(const ProblemConfig &c) {
    const std::size_t n = c.family.parameter_count();
    if (n > 3) {
        throw SchemaError("geometry export needs N <= 3, got N = " + std::to_string(n));
    }
    Json j;
    j["command"] = "geometry";
    j["family"] = family_json(c.family);
    j["q"] = to_json(c.dq.components());

    std::vector<std::pair<Json, UnitBallMesh>> meshes;
    if (c.family.kind() == ProcessFamily::Kind::EpsilonPair &&
        !c.geometry.epsilon_sweep.empty()) {
        for (double eps : c.geometry.epsilon_sweep) {
            meshes.emplace_back(Json(eps), unit_ball_mesh(ProcessFamily::epsilon_pair(eps),
                                                          c.geometry.resolution));
        }
    } else {
        const Json tag = c.family.kind() == ProcessFamily::Kind::EpsilonPair
                             ? Json(c.family.epsilon())
                             : Json(nullptr);
        meshes.emplace_back(tag, unit_ball_mesh(c.family, c.geometry.resolution));
    }
    Json ms = Json::array();
    CommandResult out;
    out.csv = csv_line({"mesh", "epsilon", "type", "x", "y", "z"});
    for (std::size_t m = 0; m < meshes.size(); ++m) {
        Json mj = to_json(meshes[m].second);
        if (!meshes[m].first.is_null()) {
            mj["epsilon"] = meshes[m].first;
        }
        ms.push_back(std::move(mj));
        const std::string eps = meshes[m].first.is_null()
                                    ? std::string()
                                    : format_double(meshes[m].first.get<double>());
        auto rows = [&](const std::vector<RVector> &pts, const char *type) {
            for (const auto &v : pts) {
                std::string xyz[3];
                for (Eigen::Index i = 0; i < v.size(); ++i) {
                    xyz[i] = format_double(v(i));
                }
                out.csv += csv_line({std::to_string(m), eps, type, xyz[0], xyz[1], xyz[2]});
            }
        };
        rows(meshes[m].second.vertices, "vertex");
        rows(meshes[m].second.samples, "sample");
    }
    j["meshes"] = std::move(ms);

    if (!c.dq.is_zero()) {
        const BMinResult bmin = b_min_solve(c.family, c.dq);
        // The level plane dq(b) = const touching the unit ball.
        j["tangency"] = {{"normal", to_json(c.dq.components())},
                         {"point", to_json(RVector(bmin.b_min.components() / bmin.norm))},
                         {"plane_offset", bmin.dual_norm},
                         {"at_corner", bmin.at_corner}};
        try {
            const Protocol p = chosen_protocol(c, bmin);
            Json branches = Json::array();
            for (std::size_t k = 0; k < p.branches.size(); ++k) {
                branches.push_back(
                    {{"weight", p.branches[k].weight},
                     {"fisher", to_json(protocol_fisher(single_branch(p, k), c.family))}});
            }
            j["fisher_ellipsoids"] = {{"protocol", protocol_kind(c)},
                                      {"fisher", to_json(protocol_fisher(p, c.family))},
                                      {"branches", std::move(branches)}};
        } catch (const UnsupportedError &e) {
            j["fisher_ellipsoids"] = {{"unsupported", e.what()}};
        }
    }
    out.document = std::move(j);
    return out;
}

CommandResult cmd_verify(const ProblemConfig &c) {
    const std::size_t n = c.family.parameter_count();
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> gauss;
    auto random_vector = [&] {
        RVector v(static_cast<Eigen::Index>(n));
        for (auto &x : v) {
            x = gauss(rng);
        }
        return v;
    };
    Json checks = Json::array();
    bool all_passed = true;
    auto record = [&](const std::string &name, bool passed, double value, double tol) {
        checks.push_back(
            {{"name", name}, {"passed", passed}, {"value", value}, {"tolerance", tol}});
        all_passed = all_passed && passed;
    };
    auto skip = [&](const std::string &name, const std::string &reason) {
        checks.push_back({{"name", name}, {"skipped", true}, {"reason", reason}});
    };

    // Closed form against the spectral spread of the generator.
    bool dense = true;
    try {
        (void)c.family.generators();
    } catch (const ResourceError &) {
        dense = false;
    }
    if (dense) {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const TangentVector b(random_vector());
            const double norm = process_norm(c.family, b);
            worst = std::max(worst, std::abs(norm - generator_seminorm(c.family, b)) /
                                        std::max(1.0, norm));
        }
        record("norm-closed-form", worst <= 1e-10, worst, 1e-10);
    } else {
        skip("norm-closed-form", "generators exceed the dimension limit");
    }

    double triangle = 0.0;
    double homogeneity = 0.0;
    double nondegeneracy = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        const RVector a = random_vector();
        const RVector b = random_vector();
        const double s = gauss(rng);
        const double na = process_norm(c.family, TangentVector(a));
        const double nb = process_norm(c.family, TangentVector(b));
        triangle = std::max(triangle, process_norm(c.family, TangentVector(a + b)) - na - nb);
        homogeneity = std::max(homogeneity,
                               std::abs(process_norm(c.family, TangentVector(s * a)) -
                                        std::abs(s) * na) / std::max(1.0, std::abs(s) * na));
        nondegeneracy = std::min(nondegeneracy, na / a.norm());
    }
    record("triangle-inequality", triangle <= 1e-10, triangle, 1e-10);
    record("homogeneity", homogeneity <= 1e-10, homogeneity, 1e-10);
    if (c.family.kind() == ProcessFamily::Kind::CustomUnitary) {
        skip("nondegeneracy", "custom generators define a seminorm");
    } else {
        record("nondegeneracy", nondegeneracy > 1e-10, nondegeneracy, 1e-10);
    }

    if (c.dq.is_zero()) {
        skip("dual-pairing", "q is zero");
        checks.push_back({{"name", "kissing"}, {"skipped", true}, {"reason", "q is zero"}});
    } else {
        const BMinResult bmin = b_min_solve(c.family, c.dq);
        const double pairing = std::max(std::abs(pair(c.dq, bmin.b_min) - 1.0),
                                        std::abs(bmin.norm * bmin.dual_norm - 1.0));
        record("dual-pairing", pairing <= 1e-9, pairing, 1e-9);

        // No point of the unit ball may beat the dual norm.
        double excess = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < 2000; ++i) {
            const RVector b = random_vector();
            const double nb = process_norm(c.family, TangentVector(b));
            if (nb > 0.0) {
                excess = std::max(excess, c.dq.components().dot(b) / nb - bmin.dual_norm);
            }
        }
        record("dual-supremum", excess <= 1e-9, excess, 1e-9);

        try {
            const Protocol p = chosen_protocol(c, bmin);
            const FisherMatrix fisher = protocol_fisher(p, c.family);
            const double residual = kissing_residual(fisher, bmin.b_min, c.family, c.dq);
            if (claims_optimal(protocol_kind(c))) {
                record("kissing", residual <= kKissingTol, residual, kKissingTol);
            }
            const double readout_gap =
                (fisher.entries() - claimed_fisher(p).entries()).cwiseAbs().maxCoeff();
            record("readout-fisher", readout_gap <= 1e-8, readout_gap, 1e-8);

            // F_bb <= Q_bb <= ||b||^2 for every pure-state branch.
            double chain = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < p.branches.size(); ++k) {
                const Branch &br = p.branches[k];
                const auto *psi = std::get_if<PureState>(&br.fiducial);
                if (psi == nullptr) {
                    continue;
                }
                const auto gens = c.family.extended_generators(br.ancilla_qubits);
                HermitianOperator y = HermitianOperator::zero(gens.front().dim());
                for (std::size_t i = 0; i < n; ++i) {
                    y = y + bmin.b_min[i] * gens[i];
                }
                const FisherMatrix f = protocol_fisher(single_branch(p, k), c.family);
                const double f_bb = fisher_form(f, bmin.b_min, bmin.b_min);
                const double q_bb = qfi_pure(*psi, y);
                chain = std::max({chain, f_bb - q_bb, q_bb - bmin.norm * bmin.norm});
            }
            if (std::isfinite(chain)) {
                record("chain-ordering", chain <= 1e-9, chain, 1e-9);
            } else {
                skip("chain-ordering", "no pure-state branch");
            }
        } catch (const UnsupportedError &e) {
            skip("kissing", e.what());
        }
    }

    Json j;
    j["command"] = "verify";
    j["family"] = family_json(c.family);
    j["q"] = to_json(c.dq.components());
    j["seed"] = c.seed;
    j["passed"] = all_passed;
    j["checks"] = checks;

    CommandResult out;
    out.csv = csv_line({"check", "status", "value", "tolerance"});
    for (const auto &ch : checks) {
        if (ch.contains("skipped")) {
            out.csv += csv_line({ch["name"].get<std::string>(), "skipped", "", ""});
        } else {
            out.csv += csv_line({ch["name"].get<std::string>(),
                                 ch["passed"].get<bool>() ? "pass" : "fail",
                                 format_double(ch["value"].get<double>()),
                                 format_double(ch["tolerance"].get<double>())});
        }
    }
    out.document = std::move(j);
    out.exit_code = all_passed ? kSuccess : kVerificationFailed;
    return out;
}

namespace {

void write_error(std::ostream &err, const std::string &kind, const std::string &message) {
    Json e;
    e["error"] = {{"kind", kind}, {"message", message}};
    err << dump(e) << '\n';
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Achievable bounds and optimal protocols for one-from-many estimation",
                 "qproc"};
    std::string command;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    std::string output;
    std::string format;
    app.add_option("command", command, "bound, protocol, simulate, geometry or verify")
        ->required()
        ->check(CLI::IsMember({"bound", "protocol", "simulate", "geometry", "verify"}));
    app.add_option("config", config_path, "problem description (JSON)")->required();
    app.add_option("--seed", seed, "override the RNG seed");
    app.add_option("--shots", shots, "override simulate.shots");
    app.add_option("--output", output, "output file (default: stdout)");
    app.add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError &e) {
        write_error(err, "usage", e.what());
        return kUsageError;
    }

    CommandResult result;
    ProblemConfig c;
    try {
        c = load_config(config_path);
        if (seed) {
            c.seed = *seed;
            if (c.simulate) {
                c.simulate->seed = *seed;
            }
        }
        if (shots) {
            if (!c.simulate || *shots == 0) {
                throw SchemaError("--shots needs a simulate block and a positive count");
            }
            c.simulate->shots = *shots;
        }
        if (!output.empty()) {
            c.output_path = output;
        }
        if (!format.empty()) {
            c.output_format = format;
        }
        if (command == "bound") {
            result = cmd_bound(c);
        } else if (command == "protocol") {
            result = cmd_protocol(c);
        } else if (command == "simulate") {
            result = cmd_simulate(c);
        } else if (command == "geometry") {
            result = cmd_geometry(c);
        } else {
            result = cmd_verify(c);
        }
    } catch (const SchemaError &e) {
        write_error(err, e.kind(), e.what());
        return kUsageError;
    } catch (const NumericalError &e) {
        write_error(err, e.kind(), e.what());
        return kVerificationFailed;
    } catch (const ChainViolationError &e) {
        write_error(err, e.kind(), e.what());
        return kVerificationFailed;
    } catch (const Error &e) {
        // Invalid input caught by the library: bad arguments, broken
        // invariants, resource limits, unsupported constructions.
        write_error(err, e.kind(), e.what());
        return kUsageError;
    } catch (const std::exception &e) {
        write_error(err, "internal", e.what());
        return kUsageError;
    }

    const std::string text =
        c.output_format == "csv" ? result.csv : dump(result.document) + '\n';
    if (c.output_path.empty()) {
        out << text;
    } else {
        std::ofstream f(c.output_path, std::ios::binary);
        if (!(f << text)) {
            write_error(err, "io", "cannot write '" + c.output_path + "'");
            return kUsageError;
        }
    }
    return result.exit_code;
}

} // namespace qproc::cli
