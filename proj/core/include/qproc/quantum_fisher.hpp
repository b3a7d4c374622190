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

/**
 * @file
 * Quantum side of the bound chain F_bb <= Q_bb <= ||b||^2: symmetric
 * logarithmic derivative, quantum Fisher information, and classical Fisher
 * information of a measurement model.
 */
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qproc/operator.hpp"
#include "qproc/tangent.hpp"

namespace qproc {

enum class DerivativeMode { Analytic, CentralDifference };

/// Outcome distribution p(x|θ) near a fiducial point.
///
/// `probabilities` must be re-entrant. When `jacobian` is set and the mode is
/// Analytic it returns the outcomes×N matrix ∂_j p(x|θ).
struct MeasurementModel {
    std::function<std::vector<double>(const RVector &)> probabilities;
    std::function<RMatrix(const RVector &)> jacobian;
    DerivativeMode mode = DerivativeMode::CentralDifference;
    double step = 1e-5;
    double p_floor = 1e-12;
    std::optional<RVector> fiducial;
};

struct SldResult {
    HermitianOperator op;
    double residual;
};

/// Solves ½(ρL + Lρ) = dρ in the eigenbasis of ρ. Elements where
/// λ_m + λ_n falls below the cutoff are set to zero; if dρ has weight there
/// the equation is inconsistent and InconsistentDerivativeError is thrown.
SldResult sld(const DensityOperator &rho, const HermitianOperator &drho);

/// 4(<Y²> − <Y>²).
double qfi_pure(const PureState &psi, const HermitianOperator &y);

/// tr(ρL²).
double qfi_from_sld(const DensityOperator &rho, const HermitianOperator &l);

/// F_jk = Σ_x ∂_j p ∂_k p / p at the fiducial point (outcomes with
/// p < p_floor skipped).
FisherMatrix classical_fisher(const MeasurementModel &model, std::size_t n);

/// ∂_j p_x at θ = 0 for the unitary family exp(−iθ^j X_j), computed as
/// 2 Im tr(E_x X_j ρ). Returns an outcomes×N matrix.
RMatrix unitary_probability_jacobian(const DensityOperator &rho,
                                     std::span<const HermitianOperator> gens,
                                     const Povm &m);
RMatrix unitary_probability_jacobian(const PureState &psi,
                                     std::span<const HermitianOperator> gens,
                                     const Povm &m);

/// Measurement model for state → exp(−iθ^j X_j) → POVM. Works for both pure
/// states and density operators.
MeasurementModel unitary_measurement_model(
    const PureState &psi, std::vector<HermitianOperator> gens, Povm m,
    DerivativeMode mode = DerivativeMode::Analytic);
MeasurementModel unitary_measurement_model(
    const DensityOperator &rho, std::vector<HermitianOperator> gens, Povm m,
    DerivativeMode mode = DerivativeMode::Analytic);

struct ChainReport {
    double fisher;   ///< F_bb
    double quantum;  ///< Q_bb
    double norm_sq;  ///< ||b||^2
    double fisher_slack;   ///< Q_bb − F_bb
    double quantum_slack;  ///< ||b||^2 − Q_bb
    bool fisher_saturated;
    bool quantum_saturated;
};

/// Checks F_bb <= Q_bb + 1e-9 and Q_bb <= norm² + 1e-9; throws
/// ChainViolationError naming the broken link otherwise.
ChainReport verify_chain(double f_bb, double q_bb, double norm,
                         double saturation_tol = 1e-9);

} // namespace qproc
