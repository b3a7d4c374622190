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

// Random inputs shared by the unit and acceptance tests.
#pragma once

#include <cstdint>
#include <random>

#include "qproc/operator.hpp"
#include "qproc/tangent.hpp"

namespace qproc::testing {

class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double normal() { return gauss_(rng_); }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    RVector vector(std::size_t n) {
        RVector v(static_cast<Eigen::Index>(n));
        for (auto &x : v) {
            x = normal();
        }
        return v;
    }

    CMatrix complex_matrix(std::size_t d) {
        CMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            m.data()[i] = Complex(normal(), normal());
        }
        return m;
    }

    HermitianOperator hermitian(std::size_t d) {
        const CMatrix a = complex_matrix(d);
        return HermitianOperator(CMatrix(0.5 * (a + a.adjoint())));
    }

    PureState pure(std::size_t d) {
        CVector v(static_cast<Eigen::Index>(d));
        for (auto &x : v) {
            x = Complex(normal(), normal());
        }
        return PureState::normalized(v);
    }

    /// Full rank with a spectrum bounded away from zero.
    DensityOperator full_rank(std::size_t d) {
        const CMatrix a = complex_matrix(d);
        CMatrix rho = a * a.adjoint() +
                      0.1 * CMatrix::Identity(static_cast<Eigen::Index>(d),
                                              static_cast<Eigen::Index>(d));
        rho /= rho.trace().real();
        rho = 0.5 * (rho + rho.adjoint()).eval();
        return DensityOperator(rho);
    }

    /// Canonical form 1 = q_1 >= |q_2| >= ... >= |q_n| > 0.
    OneForm canonical(std::size_t n) {
        RVector q(static_cast<Eigen::Index>(n));
        q(0) = 1.0;
        double prev = 1.0;
        for (std::size_t j = 1; j < n; ++j) {
            prev = uniform(0.05, 1.0) * prev;
            q(static_cast<Eigen::Index>(j)) = uniform(0.0, 1.0) < 0.5 ? -prev : prev;
        }
        return OneForm(q);
    }

    std::mt19937_64 &engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_;
};

} // namespace qproc::testing
