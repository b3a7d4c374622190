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

#include "qproc/protocols.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "qproc/errors.hpp"

namespace qproc {

namespace {

constexpr double kDropWeight = 1e-15;
const Complex kI{0.0, 1.0};

std::size_t qubit_dim(std::size_t n) {
    if (n >= 63 || (std::size_t{1} << n) > dimension_limit()) {
        throw ResourceError("protocol on " + std::to_string(n) +
                            " qubits exceeds the dimension limit");
    }
    return std::size_t{1} << n;
}

std::string bits(std::size_t index, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t j = 0; j < n; ++j) {
        if ((index >> (n - 1 - j)) & 1U) {
            s[j] = '1';
        }
    }
    return s;
}

HermitianOperator hamiltonian(const std::vector<HermitianOperator> &gens,
                              const RVector &theta) {
    HermitianOperator h = HermitianOperator::zero(gens.front().dim());
    for (std::size_t j = 0; j < gens.size(); ++j) {
        const double t = theta(static_cast<Eigen::Index>(j));
        if (t != 0.0) {
            h = h + t * gens[j];
        }
    }
    return h;
}

std::size_t fiducial_dim(const Fiducial &f) {
    return std::visit([](const auto &s) { return s.dim(); }, f);
}

// Single-branch protocol measuring the icat pair of z on its cat state.
Protocol cat_protocol(const SignString &z, ProtocolKind kind) {
    std::vector<std::string> labels{"+i", "-i"};
    const std::size_t n = z.size();
    const std::size_t d = qubit_dim(n);
    const std::size_t a = z.basis_index();
    const std::size_t b = z.negated().basis_index();
    for (std::size_t k = 0; k < d; ++k) {
        if (k != a && k != b) {
            labels.push_back("z:" + bits(k, n));
        }
    }
    Branch branch{1.0, cat_state(z),
                  Povm::from_orthonormal_basis(icat_basis(z), std::move(labels)),
                  {Readout{0, 1, z.form(), 1.0, 1.0}},
                  0,
                  z};
    Protocol p;
    p.kind = kind;
    p.family_dim = n;
    p.target = z.form();
    p.branches.push_back(std::move(branch));
    return p;
}

// Mixture of hyperface/hyperedge measurements over the corner strings.
Protocol corner_from(const CornerDecomposition &dec, ProtocolKind kind,
                     const OneForm &target) {
    Protocol p;
    p.kind = kind;
    p.family_dim = target.size();
    p.target = target;
    double kept = 0.0;
    for (std::size_t k = 0; k < dec.strings.size(); ++k) {
        if (dec.weights[k] < kDropWeight) {
            continue;
        }
        const SignString z(dec.strings[k]);
        Protocol single = cat_protocol(
            z, z.has_zero() ? ProtocolKind::Hyperedge : ProtocolKind::Hyperface);
        Branch br = std::move(single.branches.front());
        br.weight = dec.weights[k];
        br.readouts.front().coefficient = dec.scale;
        kept += dec.weights[k];
        p.branches.push_back(std::move(br));
    }
    // Dropped weights are below 1e-15 each; renormalize the remainder.
    for (auto &br : p.branches) {
        br.weight /= kept;
    }
    return p;
}

} // namespace

// ---------------------------------------------------------------------------
// SignString

SignString::SignString(std::vector<int> entries) : z_(std::move(entries)) {
    if (z_.empty()) {
        throw ArgumentError("SignString: empty string");
    }
    for (int v : z_) {
        if (v != -1 && v != 0 && v != 1) {
            throw ArgumentError("SignString: entries must be -1, 0 or +1");
        }
    }
}

bool SignString::has_zero() const {
    for (int v : z_) {
        if (v == 0) {
            return true;
        }
    }
    return false;
}

bool SignString::all_zero() const {
    for (int v : z_) {
        if (v != 0) {
            return false;
        }
    }
    return true;
}

SignString SignString::negated() const {
    std::vector<int> out(z_);
    for (int &v : out) {
        v = -v;
    }
    return SignString(std::move(out));
}

SignString SignString::filled() const {
    std::vector<int> out(z_);
    for (int &v : out) {
        if (v == 0) {
            v = 1;
        }
    }
    return SignString(std::move(out));
}

OneForm SignString::form() const {
    RVector v(static_cast<Eigen::Index>(z_.size()));
    for (std::size_t j = 0; j < z_.size(); ++j) {
        v(static_cast<Eigen::Index>(j)) = z_[j];
    }
    return OneForm(std::move(v));
}

std::size_t SignString::basis_index() const {
    std::size_t index = 0;
    for (int v : z_) {
        index = (index << 1U) | (v == -1 ? 1U : 0U);
    }
    return index;
}

std::string SignString::str() const {
    std::string s;
    for (int v : z_) {
        s += v > 0 ? '+' : (v < 0 ? '-' : '0');
    }
    return s;
}

std::string to_string(ProtocolKind kind) {
    switch (kind) {
    case ProtocolKind::Hyperface:
        return "hyperface";
    case ProtocolKind::Corner:
        return "corner";
    case ProtocolKind::Hyperedge:
        return "hyperedge";
    case ProtocolKind::Zoo:
        return "zoo";
    case ProtocolKind::Bloch:
        return "bloch";
    case ProtocolKind::Cusp:
        return "cusp";
    case ProtocolKind::Tangent:
        return "tangent";
    case ProtocolKind::Mixture:
        return "mixture";
    }
    return "unknown";
}

ProtocolKind protocol_kind_from_string(const std::string &name) {
    for (auto k : {ProtocolKind::Hyperface, ProtocolKind::Corner,
                   ProtocolKind::Hyperedge, ProtocolKind::Zoo,
                   ProtocolKind::Bloch, ProtocolKind::Cusp,
                   ProtocolKind::Tangent, ProtocolKind::Mixture}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw ArgumentError("unknown protocol kind '" + name + "'");
}

void validate(const Protocol &p) {
    if (p.branches.empty()) {
        throw InvariantError("protocol has no branches");
    }
    if (p.target.size() != p.family_dim) {
        throw InvariantError("protocol target has the wrong length");
    }
    double total = 0.0;
    for (const auto &br : p.branches) {
        if (!(br.weight > 0.0)) {
            throw InvariantError("protocol branch weight must be positive");
        }
        total += br.weight;
        if (fiducial_dim(br.fiducial) != br.measurement.dim()) {
            throw InvariantError("branch fiducial and measurement dimensions "
                                 "differ");
        }
        for (const auto &r : br.readouts) {
            if (r.plus >= br.measurement.size() ||
                r.minus >= br.measurement.size() || r.plus == r.minus) {
                throw InvariantError("readout outcome index out of range");
            }
            if (r.form.size() != p.family_dim) {
                throw InvariantError("readout form has the wrong length");
            }
        }
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw InvariantError("protocol weights sum to " +
                             std::to_string(total) + ", not 1");
    }
}

// ---------------------------------------------------------------------------
// Cat states and parity

PureState cat_state(const SignString &z) {
    const std::size_t d = qubit_dim(z.size());
    if (z.all_zero()) {
        throw ArgumentError("cat_state: string has no nonzero entry");
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(d));
    v(static_cast<Eigen::Index>(z.basis_index())) += 1.0 / std::numbers::sqrt2;
    v(static_cast<Eigen::Index>(z.negated().basis_index())) +=
        1.0 / std::numbers::sqrt2;
    return PureState::normalized(std::move(v));
}

CMatrix icat_basis(const SignString &z) {
    const std::size_t d = qubit_dim(z.size());
    if (z.all_zero()) {
        throw ArgumentError("icat_basis: string has no nonzero entry");
    }
    const auto a = static_cast<Eigen::Index>(z.basis_index());
    const auto b = static_cast<Eigen::Index>(z.negated().basis_index());
    const auto dd = static_cast<Eigen::Index>(d);
    CMatrix basis = CMatrix::Zero(dd, dd);
    basis(a, 0) = 1.0 / std::numbers::sqrt2;
    basis(b, 0) = kI / std::numbers::sqrt2;
    basis(a, 1) = 1.0 / std::numbers::sqrt2;
    basis(b, 1) = -kI / std::numbers::sqrt2;
    Eigen::Index col = 2;
    for (Eigen::Index k = 0; k < dd; ++k) {
        if (k != a && k != b) {
            basis(k, col++) = 1.0;
        }
    }
    return basis;
}

HermitianOperator parity_operator(std::size_t n) {
    if (n < 1) {
        throw ArgumentError("parity_operator: N must be >= 1");
    }
    qubit_dim(n);
    std::vector<HermitianOperator> ops(n, sigma_y());
    if (n % 2 == 0) {
        ops.back() = sigma_x();
    }
    return tensor(ops);
}

int parity_eigenvalue(const SignString &z, bool plus) {
    const std::size_t n = z.size();
    int prod = 1;
    const std::size_t upto = n % 2 == 1 ? n : n - 1;
    for (std::size_t j = 0; j < upto; ++j) {
        prod *= z[j] == 0 ? 1 : z[j];
    }
    const std::size_t power = n % 2 == 1 ? (n + 1) / 2 : n / 2;
    const int phase = power % 2 == 0 ? 1 : -1;
    return (plus ? -1 : 1) * phase * prod;
}

// ---------------------------------------------------------------------------
// Constructors

Protocol hyperface_protocol(const SignString &z) {
    if (z.has_zero()) {
        throw ArgumentError(
            "hyperface_protocol: string has a zero entry; use a hyperedge "
            "protocol");
    }
    return cat_protocol(z, ProtocolKind::Hyperface);
}

Protocol hyperedge_protocol(const SignString &w) {
    if (w.all_zero()) {
        throw ArgumentError("hyperedge_protocol: all-zero string");
    }
    return cat_protocol(w, ProtocolKind::Hyperedge);
}

Protocol corner_strategy(const OneForm &canonical) {
    const CornerDecomposition dec = corner_decomposition(canonical);
    return corner_from(dec, ProtocolKind::Corner, canonical);
}

Protocol corner_protocol(const OneForm &dq) {
    if (dq.size() == 0 || dq.is_zero()) {
        throw ArgumentError("corner_protocol: zero form");
    }
    const CanonicalForm cf = canonicalize(dq);
    const CornerDecomposition dec =
        corner_about_axis(dq, cf.permutation.front());
    return corner_from(dec, ProtocolKind::Corner, dq);
}

Protocol zoo_protocol(const std::map<std::vector<int>, double> &p_z,
                      std::size_t n, bool mixed) {
    if (p_z.empty()) {
        throw ArgumentError("zoo_protocol: empty distribution");
    }
    double total = 0.0;
    for (const auto &[z, p] : p_z) {
        if (z.size() != n) {
            throw ArgumentError("zoo_protocol: string length differs from N");
        }
        if (SignString(z).has_zero()) {
            throw ArgumentError("zoo_protocol: strings must not contain 0");
        }
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw ArgumentError("zoo_protocol: negative or non-finite weight");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ArgumentError("zoo_protocol: weights sum to " +
                            std::to_string(total) + ", not 1");
    }
    const std::size_t dp = qubit_dim(n);
    const std::size_t d = qubit_dim(n + 1);
    const auto ddp = static_cast<Eigen::Index>(dp);
    const auto dd = static_cast<Eigen::Index>(d);

    // Basis |z_1⟩ ⊗ icat_z(±) over every full string z.
    CMatrix basis = CMatrix::Zero(dd, dd);
    std::vector<std::string> labels;
    std::map<std::vector<int>, std::size_t> plus_index;
    Eigen::Index col = 0;
    for (std::size_t idx = 0; idx < dp; ++idx) {
        std::vector<int> zs(n);
        for (std::size_t j = 0; j < n; ++j) {
            zs[j] = ((idx >> (n - 1 - j)) & 1U) ? -1 : 1;
        }
        const SignString z(zs);
        const Eigen::Index anc = z[0] == 1 ? 0 : 1;
        const auto a = static_cast<Eigen::Index>(z.basis_index());
        const auto b = static_cast<Eigen::Index>(z.negated().basis_index());
        for (const Complex phase : {kI, -kI}) {
            basis(anc * ddp + a, col) = 1.0 / std::numbers::sqrt2;
            basis(anc * ddp + b, col) = phase / std::numbers::sqrt2;
            ++col;
        }
        plus_index[zs] = static_cast<std::size_t>(col - 2);
        labels.push_back(z.str() + ":+i");
        labels.push_back(z.str() + ":-i");
    }

    CVector psi = CVector::Zero(dd);
    CMatrix rho = CMatrix::Zero(dd, dd);
    std::vector<Readout> readouts;
    RVector target = RVector::Zero(static_cast<Eigen::Index>(n));
    for (const auto &[zs, p] : p_z) {
        if (p <= 0.0) {
            continue;
        }
        const SignString z(zs);
        const Eigen::Index anc = z[0] == 1 ? 0 : 1;
        CVector cat = CVector::Zero(dd);
        cat(anc * ddp + static_cast<Eigen::Index>(z.basis_index())) =
            1.0 / std::numbers::sqrt2;
        cat(anc * ddp + static_cast<Eigen::Index>(z.negated().basis_index())) =
            1.0 / std::numbers::sqrt2;
        psi += std::sqrt(p) * cat;
        rho += p * cat * cat.adjoint();
        const std::size_t pi = plus_index.at(zs);
        readouts.push_back(Readout{pi, pi + 1, z.form(), p, 1.0});
        target += p * z.form().components();
    }

    Fiducial fid = mixed ? Fiducial(DensityOperator(
                               CMatrix(0.5 * (rho + rho.adjoint()))))
                         : Fiducial(PureState::normalized(psi));
    Branch br{1.0, std::move(fid),
              Povm::from_orthonormal_basis(basis, std::move(labels)),
              std::move(readouts), 1, std::nullopt};
    Protocol p;
    p.kind = ProtocolKind::Zoo;
    p.family_dim = n;
    p.target = OneForm(std::move(target));
    p.branches.push_back(std::move(br));
    return p;
}

Protocol zoo_protocol(const RVector &a, bool mixed) {
    const auto n = static_cast<std::size_t>(a.size());
    if (n == 0) {
        throw ArgumentError("zoo_protocol: empty amplitude vector");
    }
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        if (!(std::abs(a(j)) <= 1.0)) {
            throw ArgumentError("zoo_protocol: |a_j| must not exceed 1");
        }
    }
    qubit_dim(n + 1);
    std::map<std::vector<int>, double> p_z;
    const std::size_t count = std::size_t{1} << n;
    for (std::size_t idx = 0; idx < count; ++idx) {
        std::vector<int> z(n);
        double p = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            z[j] = ((idx >> (n - 1 - j)) & 1U) ? -1 : 1;
            p *= 0.5 * (1.0 + z[j] * a(static_cast<Eigen::Index>(j)));
        }
        p_z[z] = p;
    }
    // Products of exact binary fractions can drift by an ulp; rescale.
    double total = 0.0;
    for (const auto &kv : p_z) {
        total += kv.second;
    }
    for (auto &kv : p_z) {
        kv.second /= total;
    }
    return zoo_protocol(p_z, n, mixed);
}

Protocol bloch_protocol(const OneForm &dq) {
    if (dq.size() != 3) {
        throw ArgumentError("bloch_protocol: form must have 3 components");
    }
    if (dq.is_zero()) {
        throw ArgumentError("bloch_protocol: zero form");
    }
    const RVector &q = dq.components();
    const double len = q.norm();
    const RVector dir = q / len;
    const CMatrix y = dir(0) * sigma_x().matrix() + dir(1) * sigma_y().matrix() +
                      dir(2) * sigma_z().matrix();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(y);
    const CVector up = es.eigenvectors().col(1);
    const CVector down = es.eigenvectors().col(0);
    CMatrix basis(2, 2);
    basis.col(0) = (up + kI * down) / std::numbers::sqrt2;
    basis.col(1) = (up - kI * down) / std::numbers::sqrt2;
    Branch br{1.0, PureState::normalized((up + down) / std::numbers::sqrt2),
              Povm::from_orthonormal_basis(basis, {"+i", "-i"}),
              {Readout{0, 1, OneForm(dir), 1.0, len}},
              0,
              std::nullopt};
    Protocol p;
    p.kind = ProtocolKind::Bloch;
    p.family_dim = 3;
    p.target = dq;
    p.branches.push_back(std::move(br));
    return p;
}

Protocol cusp_protocol(const ProcessFamily &family, const OneForm &dq) {
    if (family.kind() != ProcessFamily::Kind::EpsilonPair) {
        throw ArgumentError("cusp_protocol: requires an epsilon-pair family");
    }
    if (dq.size() != 2 || dq.is_zero()) {
        throw ArgumentError("cusp_protocol: need a nonzero two-component form");
    }
    std::size_t lead = 1;
    if (std::abs(dq[1]) < std::abs(dq[0])) {
        if (family.epsilon() > 0.0) {
            throw ArgumentError(
                "cusp_protocol: |q_2| < |q_1| has no cusp minimizer");
        }
        lead = 0;
    }
    const CornerDecomposition dec = corner_about_axis(dq, lead);
    return corner_from(dec, ProtocolKind::Cusp, dq);
}

Protocol tangent_protocol(const ProcessFamily &family, const OneForm &dq,
                          const BMinResult &bmin) {
    if (bmin.at_corner) {
        throw UnsupportedError(
            "tangent_protocol: b_min is a corner of the unit ball");
    }
    const HermitianOperator y = generator(family, bmin.b_min);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(y.matrix());
    const Eigen::Index last = es.eigenvalues().size() - 1;
    const CVector vmax = es.eigenvectors().col(last);
    const CVector vmin = es.eigenvectors().col(0);
    CMatrix pairs(vmax.size(), 2);
    pairs.col(0) = (vmax + kI * vmin) / std::numbers::sqrt2;
    pairs.col(1) = (vmax - kI * vmin) / std::numbers::sqrt2;
    const CMatrix basis = complete_basis(pairs);
    std::vector<std::string> labels{"+i", "-i"};
    for (Eigen::Index k = 2; k < basis.cols(); ++k) {
        labels.push_back("rest:" + std::to_string(k - 2));
    }
    PureState fid = PureState::normalized((vmax + vmin) / std::numbers::sqrt2);
    Povm m = Povm::from_orthonormal_basis(basis, std::move(labels));
    const RMatrix jac =
        unitary_probability_jacobian(fid, family.generators(), m);
    const RVector r = 2.0 * jac.row(0).transpose();
    const double rr = r.squaredNorm();
    if (!(rr > 0.0)) {
        throw ModelError("tangent_protocol: measurement carries no information");
    }
    const double c = dq.components().dot(r) / rr;
    Branch br{1.0, std::move(fid), std::move(m),
              {Readout{0, 1, OneForm(r), 1.0, c}}, 0, std::nullopt};
    Protocol p;
    p.kind = ProtocolKind::Tangent;
    p.family_dim = dq.size();
    p.target = OneForm(RVector(c * r));
    p.branches.push_back(std::move(br));
    return p;
}

Protocol mixture(const std::vector<std::pair<double, Protocol>> &parts) {
    if (parts.empty()) {
        throw ArgumentError("mixture: no parts");
    }
    Protocol out;
    out.kind = ProtocolKind::Mixture;
    out.family_dim = parts.front().second.family_dim;
    RVector target = RVector::Zero(static_cast<Eigen::Index>(out.family_dim));
    double total = 0.0;
    for (const auto &[w, p] : parts) {
        if (!(w > 0.0)) {
            throw ArgumentError("mixture: weights must be positive");
        }
        if (p.family_dim != out.family_dim) {
            throw ArgumentError("mixture: parts disagree on N");
        }
        total += w;
        target += w * p.target.components();
        for (const auto &br : p.branches) {
            Branch b = br;
            b.weight *= w;
            out.branches.push_back(std::move(b));
        }
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ArgumentError("mixture: weights must sum to 1");
    }
    out.target = OneForm(std::move(target));
    return out;
}

Protocol optimal_protocol(const ProcessFamily &family, const OneForm &dq,
                          const BMinResult &bmin) {
    switch (family.kind()) {
    case ProcessFamily::Kind::PauliZ:
        return corner_protocol(dq);
    case ProcessFamily::Kind::Bloch:
        return bloch_protocol(dq);
    case ProcessFamily::Kind::EpsilonPair:
        return bmin.at_corner ? cusp_protocol(family, dq)
                              : tangent_protocol(family, dq, bmin);
    case ProcessFamily::Kind::CustomUnitary:
        if (bmin.at_corner) {
            throw UnsupportedError(
                "unsupported generic corner: no constructive protocol for a "
                "corner of a custom family's unit ball");
        }
        return tangent_protocol(family, dq, bmin);
    }
    throw ArgumentError("optimal_protocol: unknown family");
}

// ---------------------------------------------------------------------------
// Fisher information

std::vector<double> branch_probabilities(const Branch &branch,
                                         const ProcessFamily &family,
                                         const RVector &theta) {
    if (static_cast<std::size_t>(theta.size()) != family.parameter_count()) {
        throw ArgumentError("branch_probabilities: theta has the wrong length");
    }
    const auto gens = family.extended_generators(branch.ancilla_qubits);
    if (gens.front().dim() != fiducial_dim(branch.fiducial)) {
        throw ArgumentError(
            "branch_probabilities: branch and family dimensions differ");
    }
    const bool at_origin = theta.isZero(0.0);
    return std::visit(
        [&](const auto &state) {
            using S = std::decay_t<decltype(state)>;
            if (at_origin) {
                return born_probabilities(state, branch.measurement);
            }
            const HermitianOperator h = hamiltonian(gens, theta);
            if constexpr (std::is_same_v<S, PureState>) {
                return born_probabilities(evolve_pure(state, h),
                                          branch.measurement);
            } else {
                return born_probabilities(evolve(state, h), branch.measurement);
            }
        },
        branch.fiducial);
}

FisherMatrix protocol_fisher(const Protocol &p, const ProcessFamily &family,
                             DerivativeMode mode) {
    validate(p);
    const std::size_t n = family.parameter_count();
    if (p.family_dim != n) {
        throw ArgumentError("protocol_fisher: protocol and family disagree on N");
    }
    RMatrix total = RMatrix::Zero(static_cast<Eigen::Index>(n),
                                  static_cast<Eigen::Index>(n));
    for (const auto &br : p.branches) {
        auto gens = family.extended_generators(br.ancilla_qubits);
        if (gens.front().dim() != fiducial_dim(br.fiducial)) {
            throw ArgumentError(
                "protocol_fisher: branch and family dimensions differ");
        }
        MeasurementModel model = std::visit(
            [&](const auto &state) {
                return unitary_measurement_model(state, std::move(gens),
                                                 br.measurement, mode);
            },
            br.fiducial);
        total += br.weight * classical_fisher(model, n).entries();
    }
    return FisherMatrix(0.5 * (total + total.transpose()));
}

FisherMatrix claimed_fisher(const Protocol &p) {
    const auto n = static_cast<Eigen::Index>(p.family_dim);
    RMatrix total = RMatrix::Zero(n, n);
    for (const auto &br : p.branches) {
        for (const auto &r : br.readouts) {
            const RVector &v = r.form.components();
            total += br.weight * r.share * v * v.transpose();
        }
    }
    return FisherMatrix(0.5 * (total + total.transpose()));
}

double kissing_residual(const FisherMatrix &f, const TangentVector &b,
                        const ProcessFamily &family, const OneForm &dq) {
    if (f.size() != b.size() || b.size() != dq.size()) {
        throw ArgumentError("kissing_residual: size mismatch");
    }
    if (std::abs(pair(dq, b) - 1.0) > 1e-9) {
        throw ArgumentError("kissing_residual: b is not on the unit surface "
                            "of q (dq(b) != 1)");
    }
    const double norm = process_norm(family, b);
    const RVector diff =
        f.entries() * b.components() - norm * norm * dq.components();
    return diff.cwiseAbs().maxCoeff();
}

} // namespace qproc
