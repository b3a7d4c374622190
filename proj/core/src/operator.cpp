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

#include "qproc/operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <Eigen/Eigenvalues>

#include "qproc/errors.hpp"

namespace qproc {

namespace {

double max_abs(const CMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const CMatrix &m, const char *what) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw InvariantError(std::string(what) +
                             ": matrix must be square with dim >= 1");
    }
}

void require_dim(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw ArgumentError(std::string(what) + ": dimension mismatch (" +
                            std::to_string(a) + " vs " + std::to_string(b) +
                            ")");
    }
}

// Raw probabilities clipped and renormalized as documented on
// born_probabilities().
std::vector<double> finish_probabilities(std::vector<double> p) {
    double total = 0.0;
    for (double v : p) {
        total += v;
    }
    if (std::abs(total - 1.0) >= 1e-9) {
        throw InvariantError("born_probabilities: total probability " +
                             std::to_string(total) + " deviates from 1");
    }
    double clipped_total = 0.0;
    for (double &v : p) {
        v = std::clamp(v, 0.0, 1.0);
        clipped_total += v;
    }
    for (double &v : p) {
        v /= clipped_total;
    }
    return p;
}

} // namespace

std::size_t dimension_limit() {
    if (const char *env = std::getenv("QPROC_MAX_DIM")) {
        char *end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return kDefaultMaxDim;
}

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(CMatrix entries)
    : entries_(std::move(entries)) {
    require_square(entries_, "HermitianOperator");
    const double dev = max_abs(entries_ - entries_.adjoint());
    if (!(dev <= kHermitianTol)) {
        throw InvariantError("HermitianOperator: not Hermitian (deviation " +
                             std::to_string(dev) + ")");
    }
}

HermitianOperator::HermitianOperator(CMatrix entries, Trusted)
    : entries_(std::move(entries)) {}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
    if (dim < 1) {
        throw ArgumentError("identity: dim must be >= 1");
    }
    const auto d = static_cast<Eigen::Index>(dim);
    return {CMatrix::Identity(d, d), Trusted{}};
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
    if (dim < 1) {
        throw ArgumentError("zero: dim must be >= 1");
    }
    const auto d = static_cast<Eigen::Index>(dim);
    return {CMatrix::Zero(d, d), Trusted{}};
}

HermitianOperator operator+(const HermitianOperator &a,
                            const HermitianOperator &b) {
    require_dim(a.dim(), b.dim(), "operator+");
    return {a.entries_ + b.entries_, HermitianOperator::Trusted{}};
}

HermitianOperator operator-(const HermitianOperator &a,
                            const HermitianOperator &b) {
    require_dim(a.dim(), b.dim(), "operator-");
    return {a.entries_ - b.entries_, HermitianOperator::Trusted{}};
}

HermitianOperator operator*(double c, const HermitianOperator &a) {
    return {c * a.entries_, HermitianOperator::Trusted{}};
}

// ---------------------------------------------------------------------------
// States

PureState::PureState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1) {
        throw InvariantError("PureState: dim must be >= 1");
    }
    const double n = amplitudes_.norm();
    if (!(std::abs(n - 1.0) <= kNormTol)) {
        throw InvariantError("PureState: norm " + std::to_string(n) +
                             " is not 1");
    }
}

PureState PureState::normalized(CVector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ArgumentError("PureState::normalized: zero or non-finite vector");
    }
    amplitudes /= n;
    return PureState(std::move(amplitudes));
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw ArgumentError("PureState::basis: index out of range");
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(std::move(v));
}

DensityOperator::DensityOperator(CMatrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "DensityOperator");
    const double dev = max_abs(entries_ - entries_.adjoint());
    if (!(dev <= kHermitianTol)) {
        throw InvariantError("DensityOperator: not Hermitian");
    }
    const double tr = entries_.trace().real();
    if (!(std::abs(tr - 1.0) <= kTraceTol)) {
        throw InvariantError("DensityOperator: trace " + std::to_string(tr) +
                             " is not 1");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(entries_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdTol) {
        throw InvariantError("DensityOperator: negative eigenvalue");
    }
}

DensityOperator DensityOperator::from_pure(const PureState &psi) {
    const CVector &a = psi.amplitudes();
    return DensityOperator(a * a.adjoint());
}

// ---------------------------------------------------------------------------
// Povm

Povm::Povm(std::vector<HermitianOperator> elements,
           std::vector<std::string> labels)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
    if (elements_.empty()) {
        throw InvariantError("Povm: no elements");
    }
    if (labels_.size() != elements_.size()) {
        throw ArgumentError("Povm: label count does not match element count");
    }
    const std::size_t d = elements_.front().dim();
    CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(d),
                                static_cast<Eigen::Index>(d));
    for (const auto &e : elements_) {
        if (e.dim() != d) {
            throw InvariantError("Povm: elements of differing dimension");
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> es(e.matrix(),
                                                  Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdTol) {
            throw InvariantError("Povm: element is not positive-semidefinite");
        }
        sum += e.matrix();
    }
    const auto dd = static_cast<Eigen::Index>(d);
    if (max_abs(sum - CMatrix::Identity(dd, dd)) > kPsdTol) {
        throw InvariantError("Povm: elements do not sum to the identity");
    }
}

Povm Povm::from_orthonormal_basis(const CMatrix &basis,
                                  std::vector<std::string> labels) {
    require_square(basis, "Povm::from_orthonormal_basis");
    if (labels.size() != static_cast<std::size_t>(basis.cols())) {
        throw ArgumentError("Povm: label count does not match basis size");
    }
    const auto d = basis.rows();
    if (static_cast<std::size_t>(d) > kMaxDensePovmDim) {
        throw ResourceError("Povm: dimension " + std::to_string(d) +
                            " is too large for a dense measurement");
    }
    if (max_abs(basis.adjoint() * basis - CMatrix::Identity(d, d)) > kPsdTol) {
        throw InvariantError("Povm: basis is not orthonormal");
    }
    Povm m;
    m.elements_.reserve(static_cast<std::size_t>(d));
    for (Eigen::Index k = 0; k < d; ++k) {
        CMatrix proj = basis.col(k) * basis.col(k).adjoint();
        // Exactly Hermitian up to the symmetrization below.
        proj = 0.5 * (proj + proj.adjoint()).eval();
        m.elements_.push_back(HermitianOperator(std::move(proj)));
    }
    m.labels_ = std::move(labels);
    m.basis_ = basis;
    return m;
}

std::size_t Povm::dim() const noexcept { return elements_.front().dim(); }

std::size_t Povm::index_of(const std::string &label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) {
            return i;
        }
    }
    throw ArgumentError("Povm: no outcome labelled '" + label + "'");
}

// ---------------------------------------------------------------------------
// Constructors of common operators

HermitianOperator sigma_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return HermitianOperator(std::move(m));
}

HermitianOperator sigma_y() {
    CMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return HermitianOperator(std::move(m));
}

HermitianOperator sigma_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return HermitianOperator(std::move(m));
}

std::vector<HermitianOperator> pauli_z_generators(std::size_t n_qubits) {
    return pauli_z_generators(n_qubits, dimension_limit());
}

std::vector<HermitianOperator> pauli_z_generators(std::size_t n_qubits,
                                                  std::size_t max_dim) {
    if (n_qubits < 1) {
        throw ArgumentError("pauli_z_generators: N must be >= 1");
    }
    if (n_qubits >= 63 || (std::size_t{1} << n_qubits) > max_dim) {
        throw ResourceError("pauli_z_generators: dimension 2^" +
                            std::to_string(n_qubits) +
                            " exceeds the configured limit " +
                            std::to_string(max_dim));
    }
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<HermitianOperator> out;
    out.reserve(n_qubits);
    for (std::size_t j = 0; j < n_qubits; ++j) {
        // Qubit j is bit (n-1-j) of the basis index: qubit 1 is leftmost.
        const std::size_t bit = n_qubits - 1 - j;
        CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim),
                                  static_cast<Eigen::Index>(dim));
        for (std::size_t k = 0; k < dim; ++k) {
            const bool up = ((k >> bit) & 1U) == 0;
            m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) =
                up ? 0.5 : -0.5;
        }
        out.push_back(HermitianOperator(std::move(m)));
    }
    return out;
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

HermitianOperator tensor(std::span<const HermitianOperator> ops) {
    if (ops.empty()) {
        throw ArgumentError("tensor: empty operator list");
    }
    CMatrix acc = ops.front().matrix();
    for (std::size_t i = 1; i < ops.size(); ++i) {
        acc = kron(acc, ops[i].matrix());
    }
    return HermitianOperator(std::move(acc));
}

double seminorm(const HermitianOperator &h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix(),
                                              Eigen::EigenvaluesOnly);
    const auto &ev = es.eigenvalues();
    return ev.maxCoeff() - ev.minCoeff();
}

CMatrix unitary(const HermitianOperator &h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
    const RVector &lambda = es.eigenvalues();
    CVector phases(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        phases(k) = std::exp(Complex(0.0, -lambda(k)));
    }
    const CMatrix &v = es.eigenvectors();
    return v * phases.asDiagonal() * v.adjoint();
}

PureState evolve_pure(const PureState &psi, const HermitianOperator &h) {
    require_dim(psi.dim(), h.dim(), "evolve_pure");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
    const CMatrix &v = es.eigenvectors();
    CVector coeffs = v.adjoint() * psi.amplitudes();
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        coeffs(k) *= std::exp(Complex(0.0, -es.eigenvalues()(k)));
    }
    CVector out = v * coeffs;
    // Unitary to round-off; renormalize so the 1e-12 invariant is robust.
    out /= out.norm();
    return PureState(std::move(out));
}

DensityOperator evolve(const DensityOperator &rho, const HermitianOperator &h) {
    require_dim(rho.dim(), h.dim(), "evolve");
    const CMatrix u = unitary(h);
    CMatrix out = u * rho.matrix() * u.adjoint();
    out = 0.5 * (out + out.adjoint()).eval();
    out /= out.trace().real();
    return DensityOperator(std::move(out));
}

std::vector<double> born_probabilities(const DensityOperator &rho,
                                       const Povm &m) {
    require_dim(rho.dim(), m.dim(), "born_probabilities");
    std::vector<double> p;
    p.reserve(m.size());
    for (const auto &e : m.elements()) {
        p.push_back((e.matrix().cwiseProduct(rho.matrix().transpose()))
                        .sum()
                        .real());
    }
    return finish_probabilities(std::move(p));
}

std::vector<double> born_probabilities(const PureState &psi, const Povm &m) {
    require_dim(psi.dim(), m.dim(), "born_probabilities");
    std::vector<double> p;
    p.reserve(m.size());
    if (m.basis()) {
        const CVector overlaps = m.basis()->adjoint() * psi.amplitudes();
        for (Eigen::Index k = 0; k < overlaps.size(); ++k) {
            p.push_back(std::norm(overlaps(k)));
        }
    } else {
        for (const auto &e : m.elements()) {
            p.push_back(psi.amplitudes()
                            .dot(e.matrix() * psi.amplitudes())
                            .real());
        }
    }
    return finish_probabilities(std::move(p));
}

double commutator_norm(const HermitianOperator &a, const HermitianOperator &b) {
    require_dim(a.dim(), b.dim(), "commutator_norm");
    return max_abs(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

double expectation(const PureState &psi, const HermitianOperator &h) {
    require_dim(psi.dim(), h.dim(), "expectation");
    return psi.amplitudes().dot(h.matrix() * psi.amplitudes()).real();
}

CMatrix complete_basis(const CMatrix &partial) {
    const Eigen::Index d = partial.rows();
    if (partial.cols() > d) {
        throw ArgumentError("complete_basis: more vectors than dimensions");
    }
    CMatrix out(d, d);
    Eigen::Index filled = partial.cols();
    out.leftCols(filled) = partial;
    for (Eigen::Index k = 0; k < d && filled < d; ++k) {
        CVector v = CVector::Zero(d);
        v(k) = 1.0;
        // Two Gram–Schmidt passes for numerical orthogonality.
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index c = 0; c < filled; ++c) {
                v -= out.col(c).dot(v) * out.col(c);
            }
        }
        const double n = v.norm();
        if (n > 1e-6) {
            out.col(filled++) = v / n;
        }
    }
    return out;
}

} // namespace qproc
