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
 * Process norm ||b|| of unitary families, the minimizer b_min of ||b|| on the
 * unit plane of q, and the dual norm ||dq||_* whose square bounds Var(q̂).
 *
 * For a unitary family exp(−iθ^j X_j) the process norm is the seminorm of the
 * generator b^j X_j. Named families carry closed forms; CustomUnitary falls
 * back to the seminorm and to numerical minimization.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qproc/operator.hpp"
#include "qproc/tangent.hpp"

namespace qproc {

class ProcessFamily {
  public:
    enum class Kind { PauliZ, Bloch, EpsilonPair, CustomUnitary };

    /// θ^j rotates qubit j about z: X_j = ½σ^z_j.
    static ProcessFamily pauli_z(std::size_t n);
    /// Single qubit, X = ½(σ^x, σ^y, σ^z).
    static ProcessFamily bloch();
    /// Two qubits, X_1 = ½(σ^z_1 + √(2ε) σ^x_2), X_2 = ½σ^z_2.
    static ProcessFamily epsilon_pair(double epsilon);
    /// Arbitrary Hermitian generators sharing one dimension.
    static ProcessFamily custom_unitary(std::vector<HermitianOperator> generators);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t parameter_count() const noexcept { return n_; }
    [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
    /// Hilbert-space dimension the generators act on.
    [[nodiscard]] std::size_t hilbert_dim() const noexcept { return dim_; }
    /// Throws ResourceError when the family is too large to materialize.
    [[nodiscard]] const std::vector<HermitianOperator> &generators() const;
    /// Generators padded with `ancilla_qubits` idle qubits on the left.
    [[nodiscard]] std::vector<HermitianOperator>
    extended_generators(std::size_t ancilla_qubits) const;
    [[nodiscard]] std::string name() const;

  private:
    ProcessFamily() = default;
    Kind kind_ = Kind::PauliZ;
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    double epsilon_ = 0.0;
    std::shared_ptr<const std::vector<HermitianOperator>> generators_;
};

/// Y = b^j X_j.
HermitianOperator generator(const ProcessFamily &family, const TangentVector &b);

/// ||b||: closed forms for named families, seminorm of the generator for
/// CustomUnitary.
double process_norm(const ProcessFamily &family, const TangentVector &b);

/// Always the seminorm of the generator (used to cross-check closed forms).
double generator_seminorm(const ProcessFamily &family, const TangentVector &b);

/// Subgradient of b ↦ ||b|| built from extremal eigenvectors of Y
/// (Hellmann–Feynman). Exact gradient where the extremes are nondegenerate.
RVector norm_subgradient(const ProcessFamily &family, const TangentVector &b);

struct BMinResult {
    TangentVector b_min{RVector()};
    double norm = 0.0;
    double dual_norm = 0.0;
    bool at_corner = false;
    /// Sign strings of the faces meeting at the corner (PauliZ and the
    /// EpsilonPair cusp), in the original parameter order; 0 marks dropped
    /// parameters.
    std::optional<std::vector<std::vector<int>>> adjacent_faces;
    std::size_t iterations = 0;
};

struct MinimizerOptions {
    std::size_t max_iterations = 20000;
    std::size_t window = 50;
    double improvement_tol = 1e-10;
    /// 0 = hardware concurrency.
    unsigned threads = 0;
    std::uint64_t seed = 0x5eed;
};

/// Minimize ||b|| subject to dq(b) = 1.
BMinResult b_min_solve(const ProcessFamily &family, const OneForm &dq,
                       const MinimizerOptions &options = {});

/// ||dq||_* = 1/||b_min||; 0 for the zero form.
double dual_norm(const ProcessFamily &family, const OneForm &dq,
                 const MinimizerOptions &options = {});

/// Subdifferential width test at b on the plane dq(b) = 1: true when some
/// in-plane direction has one-sided derivatives summing to more than `gap`.
bool is_corner(const ProcessFamily &family, const OneForm &dq,
               const TangentVector &b, double gap = 1e-6);

/// Convex decomposition of a form over the hyperfaces adjacent to a vertex
/// of the cross-polytope: dq = scale · Σ_k p_k dz^(k).
struct CornerDecomposition {
    /// Sign strings z^(k); 0 marks parameters with q_j = 0.
    std::vector<std::vector<int>> strings;
    std::vector<double> weights;
    double scale = 1.0;
    /// Index of the vertex axis ±∂_lead.
    std::size_t lead = 0;
};

/// Strings and weights for a canonical form 1 = q_1 >= |q_2| >= ... > 0
/// (ArgumentError otherwise).
CornerDecomposition corner_decomposition(const OneForm &canonical);

/// Same construction about the vertex on axis `lead` of an arbitrary form;
/// requires |q_lead| >= |q_j| for all j. Strings are oriented so the face
/// contains b_min = ∂_lead / q_lead.
CornerDecomposition corner_about_axis(const OneForm &dq, std::size_t lead);

struct UnitBallMesh {
    std::vector<RVector> vertices;
    std::vector<RVector> samples;
    std::string norm;
};

/// Rays sampled on the circle (N=2) or sphere (N=3), scaled to unit norm,
/// plus exact cross-polytope vertices where the family has them. N=1 gives
/// the two endpoints of the segment.
UnitBallMesh unit_ball_mesh(const ProcessFamily &family, std::size_t resolution);

} // namespace qproc
