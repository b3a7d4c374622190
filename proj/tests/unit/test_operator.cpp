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
#include <complex>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "qproc/errors.hpp"
#include "qproc/operator.hpp"
#include "qproc/protocols.hpp"
#include "random.hpp"

using namespace qproc;
using Catch::Matchers::WithinAbs;

namespace {

double max_abs(const CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

} // namespace

TEST_CASE("hermitian operator rejects non-hermitian input") {
    CHECK_THROWS_AS(HermitianOperator(mat2(0, 1, 0, 0)), InvariantError);
    CHECK_THROWS_AS(HermitianOperator(CMatrix(2, 3)), InvariantError);
    CHECK_NOTHROW(HermitianOperator(mat2(1, Complex(0, 1), Complex(0, -1), 2)));
}

TEST_CASE("pure and density states check their invariants") {
    CVector v(2);
    v << 1.0, 1.0;
    CHECK_THROWS_AS(PureState(v), InvariantError);
    CHECK_NOTHROW(PureState::normalized(v));
    CHECK_THROWS_AS(DensityOperator(mat2(0.6, 0, 0, 0.6)), InvariantError);
    CHECK_THROWS_AS(DensityOperator(mat2(1.5, 0, 0, -0.5)), InvariantError);
    CHECK_NOTHROW(DensityOperator(mat2(0.5, 0, 0, 0.5)));
}

TEST_CASE("povm checks completeness and positivity") {
    const HermitianOperator p0(mat2(1, 0, 0, 0));
    const HermitianOperator p1(mat2(0, 0, 0, 1));
    CHECK_NOTHROW(Povm({p0, p1}, {"0", "1"}));
    CHECK_THROWS_AS(Povm({p0}, {"0"}), InvariantError);
    CHECK_THROWS_AS(Povm({p0, p1, HermitianOperator(mat2(-0.1, 0, 0, 0.1))},
                         {"a", "b", "c"}),
                    InvariantError);
}

TEST_CASE("pauli z generators") {
    SECTION("N = 1 is half sigma z") {
        const auto g = pauli_z_generators(1);
        REQUIRE(g.size() == 1);
        CHECK(max_abs(g[0].matrix() - 0.5 * sigma_z().matrix()) == 0.0);
    }
    SECTION("N = 2 Kronecker products") {
        const auto g = pauli_z_generators(2);
        REQUIRE(g.size() == 2);
        // Hand Kronecker products: qubit 1 is the left factor.
        const std::vector<double> first{0.5, 0.5, -0.5, -0.5};
        const std::vector<double> second{0.5, -0.5, 0.5, -0.5};
        for (int i = 0; i < 4; ++i) {
            CHECK(g[0].matrix()(i, i) == Complex(first[i]));
            CHECK(g[1].matrix()(i, i) == Complex(second[i]));
        }
        CHECK(commutator_norm(g[0], g[1]) < 1e-14);
    }
    SECTION("dimension limit") {
        CHECK_THROWS_AS(pauli_z_generators(13), ResourceError);
        CHECK_THROWS_AS(pauli_z_generators(4, 8), ResourceError);
        CHECK(pauli_z_generators(3, 8).size() == 3);
    }
}

TEST_CASE("tensor products by hand") {
    const std::vector<HermitianOperator> zi{sigma_z(), HermitianOperator::identity(2)};
    const CMatrix t = tensor(zi).matrix();
    CHECK(max_abs(t - CVector((CVector(4) << 1, 1, -1, -1).finished()).asDiagonal().toDenseMatrix()) == 0.0);

    const std::vector<HermitianOperator> id{HermitianOperator::identity(2)};
    CHECK(max_abs(tensor(id).matrix() - CMatrix::Identity(2, 2)) == 0.0);

    // σ^y ⊗ σ^x = [[0, -iσx], [iσx, 0]].
    const Complex i(0, 1);
    CMatrix expect = CMatrix::Zero(4, 4);
    expect(0, 3) = -i;
    expect(1, 2) = -i;
    expect(2, 1) = i;
    expect(3, 0) = i;
    const std::vector<HermitianOperator> yx{sigma_y(), sigma_x()};
    CHECK(max_abs(tensor(yx).matrix() - expect) == 0.0);

    CHECK_THROWS_AS(tensor(std::vector<HermitianOperator>{}), ArgumentError);
}

TEST_CASE("seminorm examples") {
    CHECK_THAT(seminorm(0.5 * sigma_z()), WithinAbs(1.0, 1e-15));
    CHECK_THAT(seminorm(HermitianOperator::identity(5)), WithinAbs(0.0, 1e-15));
    const auto g = pauli_z_generators(2);
    CHECK_THAT(seminorm(0.3 * g[0] + (-0.4) * g[1]), WithinAbs(0.7, 1e-12));
}

TEST_CASE("seminorm is a seminorm") {
    testing::Sampler s(11);
    for (int t = 0; t < 200; ++t) {
        const std::size_t d = s.index(1, 8);
        const auto h = s.hermitian(d);
        const auto g = s.hermitian(d);
        const double c = s.normal();
        CHECK(seminorm(h + g) <= seminorm(h) + seminorm(g) + 1e-10);
        CHECK_THAT(seminorm(c * h), WithinAbs(std::abs(c) * seminorm(h), 1e-10));
    }
}

TEST_CASE("evolve_pure") {
    SECTION("zero hamiltonian leaves the state alone") {
        testing::Sampler s(3);
        const auto psi = s.pure(4);
        const auto out = evolve_pure(psi, HermitianOperator::zero(4));
        CHECK(max_abs(out.amplitudes() - psi.amplitudes()) < 1e-15);
    }
    SECTION("diagonal exponential by hand") {
        CVector v(2);
        v << 1.0, 1.0;
        const auto psi = PureState::normalized(v);
        const auto out =
            evolve_pure(psi, (std::numbers::pi / 2.0) * (0.5 * sigma_z()));
        const Complex e = std::exp(Complex(0, -std::numbers::pi / 4.0)) / std::sqrt(2.0);
        CHECK(std::abs(out.amplitudes()(0) - e) < 1e-15);
        CHECK(std::abs(out.amplitudes()(1) - std::conj(e)) < 1e-15);
    }
    SECTION("identity shift is a global phase") {
        testing::Sampler s(5);
        const auto psi = s.pure(4);
        const auto h = s.hermitian(4);
        const double c = 0.7;
        const auto a = evolve_pure(psi, h);
        const auto b = evolve_pure(psi, h + c * HermitianOperator::identity(4));
        CHECK(max_abs(b.amplitudes() - std::exp(Complex(0, -c)) * a.amplitudes()) < 1e-12);
    }
    SECTION("norm preserved") {
        testing::Sampler s(7);
        for (int t = 0; t < 200; ++t) {
            const std::size_t d = s.index(1, 16);
            const auto out = evolve_pure(s.pure(d), s.hermitian(d));
            CHECK_THAT(out.amplitudes().norm(), WithinAbs(1.0, 1e-12));
        }
    }
    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(evolve_pure(PureState::basis(2, 0), HermitianOperator::zero(4)),
                        ArgumentError);
    }
}

TEST_CASE("born probabilities") {
    const auto computational =
        Povm::from_orthonormal_basis(CMatrix::Identity(2, 2), {"0", "1"});
    const auto p0 = born_probabilities(DensityOperator::from_pure(PureState::basis(2, 0)),
                                       computational);
    CHECK(p0 == std::vector<double>{1.0, 0.0});

    const DensityOperator mixed(0.5 * CMatrix::Identity(2, 2));
    testing::Sampler s(9);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(s.hermitian(2).matrix());
    const auto random_basis = Povm::from_orthonormal_basis(eig.eigenvectors(), {"a", "b"});
    const auto pm = born_probabilities(mixed, random_basis);
    CHECK_THAT(pm[0], WithinAbs(0.5, 1e-12));
    CHECK_THAT(pm[1], WithinAbs(0.5, 1e-12));

    // |+> in the N = 1 icat basis (|0> ± i|1>)/√2.
    CVector plus(2);
    plus << 1.0, 1.0;
    const auto icat = Povm::from_orthonormal_basis(icat_basis(SignString({1})), {"+i", "-i"});
    const auto pp = born_probabilities(PureState::normalized(plus), icat);
    CHECK_THAT(pp[0], WithinAbs(0.5, 1e-12));
    CHECK_THAT(pp[1], WithinAbs(0.5, 1e-12));

    for (int t = 0; t < 100; ++t) {
        const std::size_t d = s.index(2, 8);
        Eigen::SelfAdjointEigenSolver<CMatrix> e(s.hermitian(d).matrix());
        std::vector<std::string> labels;
        for (std::size_t k = 0; k < d; ++k) {
            labels.push_back(std::to_string(k));
        }
        const auto m = Povm::from_orthonormal_basis(e.eigenvectors(), labels);
        double total = 0.0;
        for (double p : born_probabilities(s.full_rank(d), m)) {
            total += p;
        }
        CHECK_THAT(total, WithinAbs(1.0, 1e-10));
    }
}

TEST_CASE("dimension limit follows the environment") {
    const char *old = std::getenv("QPROC_MAX_DIM");
    ::setenv("QPROC_MAX_DIM", "8", 1);
    CHECK(dimension_limit() == 8);
    CHECK_THROWS_AS(pauli_z_generators(4), ResourceError);
    if (old != nullptr) {
        ::setenv("QPROC_MAX_DIM", old, 1);
    } else {
        ::unsetenv("QPROC_MAX_DIM");
    }
    CHECK(pauli_z_generators(4).size() == 4);
}
