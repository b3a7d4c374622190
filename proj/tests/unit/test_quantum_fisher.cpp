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

#include <cmath>

#include "qproc/errors.hpp"
#include "qproc/protocols.hpp"
#include "qproc/quantum_fisher.hpp"
#include "random.hpp"

using namespace qproc;
using Catch::Matchers::WithinAbs;

namespace {

double max_abs(const CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

/// p(±|θ) = ½(1 ± sin r·θ) with its analytic jacobian.
MeasurementModel sinusoid(const RVector &r, DerivativeMode mode) {
    MeasurementModel m;
    m.probabilities = [r](const RVector &theta) {
        const double s = std::sin(r.dot(theta));
        return std::vector<double>{0.5 * (1 + s), 0.5 * (1 - s)};
    };
    m.jacobian = [r](const RVector &theta) {
        const double c = 0.5 * std::cos(r.dot(theta));
        RMatrix j(2, r.size());
        j.row(0) = c * r.transpose();
        j.row(1) = -c * r.transpose();
        return j;
    };
    m.mode = mode;
    return m;
}

HermitianOperator traceless(testing::Sampler &s, std::size_t d) {
    CMatrix h = s.hermitian(d).matrix();
    h -= (h.trace() / static_cast<double>(d)) *
         CMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    return HermitianOperator(h);
}

} // namespace

TEST_CASE("sld examples") {
    SECTION("maximally mixed qubit") {
        const DensityOperator rho(0.5 * CMatrix::Identity(2, 2));
        const HermitianOperator drho = 0.3 * sigma_x() + (-0.2) * sigma_z();
        const SldResult r = sld(rho, drho);
        CHECK(max_abs(r.op.matrix() - 2.0 * drho.matrix()) < 1e-14);
        CHECK(r.residual < 1e-12);
    }
    SECTION("pure state commutator") {
        testing::Sampler s(31);
        const PureState psi = s.pure(4);
        const HermitianOperator y = s.hermitian(4);
        const DensityOperator rho = DensityOperator::from_pure(psi);
        const CMatrix comm = y.matrix() * rho.matrix() - rho.matrix() * y.matrix();
        const Complex i(0, 1);
        const HermitianOperator drho(CMatrix(-i * comm));
        const SldResult r = sld(rho, drho);
        CHECK(max_abs(r.op.matrix() - 2.0 * (-i * comm)) < 1e-10);
        CHECK_THAT(qfi_from_sld(rho, r.op), WithinAbs(qfi_pure(psi, y), 1e-9));
    }
    SECTION("zero derivative") {
        testing::Sampler s(32);
        const SldResult r = sld(s.full_rank(3), HermitianOperator::zero(3));
        CHECK(max_abs(r.op.matrix()) == 0.0);
    }
    SECTION("derivative outside the support") {
        CMatrix rho = CMatrix::Zero(2, 2);
        rho(0, 0) = 1.0;
        CMatrix d = CMatrix::Zero(2, 2);
        d(1, 1) = 0.5;
        d(0, 0) = -0.5;
        CHECK_THROWS_AS(sld(DensityOperator(rho), HermitianOperator(d)),
                        InconsistentDerivativeError);
    }
    SECTION("non-traceless derivative") {
        CHECK_THROWS_AS(sld(DensityOperator(0.5 * CMatrix::Identity(2, 2)),
                            HermitianOperator::identity(2)),
                        ArgumentError);
    }
}

TEST_CASE("sld solves the lyapunov equation") {
    testing::Sampler s(33);
    for (int t = 0; t < 200; ++t) {
        const std::size_t d = s.index(2, 8);
        const DensityOperator rho = s.full_rank(d);
        const HermitianOperator drho = traceless(s, d);
        const SldResult r = sld(rho, drho);
        const CMatrix lhs = 0.5 * (rho.matrix() * r.op.matrix() + r.op.matrix() * rho.matrix());
        CHECK(max_abs(lhs - drho.matrix()) < 1e-10);
        CHECK(std::abs((rho.matrix() * r.op.matrix()).trace()) < 1e-9);
        CHECK(qfi_from_sld(rho, r.op) >= 0.0);
    }
}

TEST_CASE("qfi_pure") {
    CVector plus(2);
    plus << 1.0, 1.0;
    CHECK_THAT(qfi_pure(PureState::normalized(plus), 0.5 * sigma_z()), WithinAbs(1.0, 1e-15));
    CHECK_THAT(qfi_pure(PureState::basis(2, 1), 0.5 * sigma_z()), WithinAbs(0.0, 1e-15));
    // Cat state against a generator with Σ|b| = 1.
    const auto g = pauli_z_generators(3);
    const HermitianOperator y = 0.5 * g[0] + (-0.3) * g[1] + 0.2 * g[2];
    CHECK_THAT(qfi_pure(cat_state(SignString({1, -1, 1})), y), WithinAbs(1.0, 1e-14));
    CHECK_THROWS_AS(qfi_pure(PureState::basis(2, 0), HermitianOperator::zero(4)), ArgumentError);
}

TEST_CASE("qfi_from_sld") {
    const DensityOperator mixed(0.5 * CMatrix::Identity(2, 2));
    CHECK_THAT(qfi_from_sld(mixed, sigma_x()), WithinAbs(1.0, 1e-15));
    CHECK(qfi_from_sld(mixed, HermitianOperator::zero(2)) == 0.0);
    testing::Sampler s(34);
    const Complex i(0, 1);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = s.index(2, 8);
        const PureState psi = s.pure(d);
        const HermitianOperator y = s.hermitian(d);
        const DensityOperator rho = DensityOperator::from_pure(psi);
        const CMatrix drho = -i * (y.matrix() * rho.matrix() - rho.matrix() * y.matrix());
        const SldResult r = sld(rho, HermitianOperator(drho));
        CHECK_THAT(qfi_from_sld(rho, r.op), WithinAbs(qfi_pure(psi, y), 1e-9));
    }
}

TEST_CASE("classical fisher") {
    SECTION("hyperface sinusoid") {
        const RVector z = (RVector(2) << 1.0, 1.0).finished();
        for (auto mode : {DerivativeMode::Analytic, DerivativeMode::CentralDifference}) {
            const FisherMatrix f = classical_fisher(sinusoid(z, mode), 2);
            CHECK((f.entries() - RMatrix::Ones(2, 2)).cwiseAbs().maxCoeff() < 1e-7);
        }
    }
    SECTION("parameter-independent model") {
        MeasurementModel m;
        m.probabilities = [](const RVector &) { return std::vector<double>{0.3, 0.7}; };
        CHECK(classical_fisher(m, 3).entries().cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("bloch readout along z") {
        const RVector q = (RVector(3) << 0.0, 0.0, 1.0).finished();
        const FisherMatrix f = classical_fisher(sinusoid(q, DerivativeMode::Analytic), 3);
        RMatrix expect = RMatrix::Zero(3, 3);
        expect(2, 2) = 1.0;
        CHECK((f.entries() - expect).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("central differences track the analytic result") {
        testing::Sampler s(35);
        for (int t = 0; t < 50; ++t) {
            const RVector r = s.vector(3);
            MeasurementModel a = sinusoid(r, DerivativeMode::Analytic);
            MeasurementModel c = sinusoid(r, DerivativeMode::CentralDifference);
            const RVector at = 0.1 * s.vector(3);
            a.fiducial = at;
            c.fiducial = at;
            const RMatrix diff = classical_fisher(a, 3).entries() - classical_fisher(c, 3).entries();
            CHECK(diff.cwiseAbs().maxCoeff() < 1e-7);
        }
    }
    SECTION("negative probabilities") {
        MeasurementModel m;
        m.probabilities = [](const RVector &) { return std::vector<double>{1.2, -0.2}; };
        CHECK_THROWS_AS(classical_fisher(m, 1), ModelError);
    }
}

TEST_CASE("chain ordering") {
    const ChainReport r = verify_chain(1.0, 1.0, 1.0);
    CHECK(r.fisher_saturated);
    CHECK(r.quantum_saturated);

    // Hyperface protocol with b on its face.
    const Protocol p = hyperface_protocol(SignString({1, 1}));
    const FisherMatrix f = protocol_fisher(p, ProcessFamily::pauli_z(2));
    const TangentVector b{0.25, 0.75};
    const auto g = pauli_z_generators(2);
    const double q_bb =
        qfi_pure(std::get<PureState>(p.branches[0].fiducial), 0.25 * g[0] + 0.75 * g[1]);
    const ChainReport h = verify_chain(fisher_form(f, b, b), q_bb, 1.0);
    CHECK(h.fisher_saturated);
    CHECK(h.quantum_saturated);

    // An eigenstate carries no information.
    const ChainReport e = verify_chain(0.0, qfi_pure(PureState::basis(2, 0), 0.5 * sigma_z()), 1.0);
    CHECK(e.quantum == 0.0);
    CHECK(!e.quantum_saturated);

    try {
        verify_chain(1.2, 1.0, 1.0);
        FAIL("expected a chain violation");
    } catch (const ChainViolationError &err) {
        CHECK(err.link() == "F_bb<=Q_bb");
    }
    CHECK_THROWS_AS(verify_chain(0.5, 1.5, 1.0), ChainViolationError);
}

TEST_CASE("projective qubit measurements never beat the quantum fisher information") {
    testing::Sampler s(36);
    const HermitianOperator y = 0.5 * sigma_z();
    for (int t = 0; t < 20; ++t) {
        const PureState psi = s.pure(2);
        const double q = qfi_pure(psi, y);
        for (int m = 0; m < 200; ++m) {
            Eigen::SelfAdjointEigenSolver<CMatrix> eig(s.hermitian(2).matrix());
            const Povm povm = Povm::from_orthonormal_basis(eig.eigenvectors(), {"a", "b"});
            const FisherMatrix f = classical_fisher(
                unitary_measurement_model(psi, {y}, povm, DerivativeMode::Analytic), 1);
            CHECK(f.entries()(0, 0) <= q + 1e-6);
        }
    }
}
