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
 * Dense complex linear algebra over small Hilbert spaces: Hermitian
 * operators, pure and mixed states, POVMs, unitary evolution and the Born
 * rule.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qproc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kNormTol = 1e-12;
inline constexpr std::size_t kDefaultMaxDim = std::size_t{1} << 12;
/// Largest dimension for which a POVM is stored as dense projectors.
inline constexpr std::size_t kMaxDensePovmDim = 128;

/// Hilbert-space dimension cap. `QPROC_MAX_DIM` in the environment overrides
/// the default of 2^12.
std::size_t dimension_limit();

class HermitianOperator {
  public:
    /// Throws InvariantError when `entries` is not square or deviates from
    /// its adjoint by more than kHermitianTol in any entry.
    explicit HermitianOperator(CMatrix entries);

    static HermitianOperator identity(std::size_t dim);
    static HermitianOperator zero(std::size_t dim);

    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(entries_.rows());
    }
    [[nodiscard]] const CMatrix &matrix() const noexcept { return entries_; }

    friend HermitianOperator operator+(const HermitianOperator &a,
                                       const HermitianOperator &b);
    friend HermitianOperator operator-(const HermitianOperator &a,
                                       const HermitianOperator &b);
    friend HermitianOperator operator*(double c, const HermitianOperator &a);

  private:
    struct Trusted {};
    HermitianOperator(CMatrix entries, Trusted);
    CMatrix entries_;
};

class PureState {
  public:
    /// Throws InvariantError unless the Euclidean norm is 1 within 1e-12.
    explicit PureState(CVector amplitudes);

    /// Normalizes first; throws ArgumentError on the zero vector.
    static PureState normalized(CVector amplitudes);
    /// Computational basis state |index>.
    static PureState basis(std::size_t dim, std::size_t index);

    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(amplitudes_.size());
    }
    [[nodiscard]] const CVector &amplitudes() const noexcept {
        return amplitudes_;
    }

  private:
    CVector amplitudes_;
};

class DensityOperator {
  public:
    /// Checks Hermiticity (1e-12), eigenvalues >= -1e-10 and unit trace
    /// (1e-10).
    explicit DensityOperator(CMatrix entries);
    static DensityOperator from_pure(const PureState &psi);

    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(entries_.rows());
    }
    [[nodiscard]] const CMatrix &matrix() const noexcept { return entries_; }

  private:
    CMatrix entries_;
};

class Povm {
  public:
    /// General POVM. Each element must be PSD within 1e-10 and the elements
    /// must sum to the identity within 1e-10.
    Povm(std::vector<HermitianOperator> elements,
         std::vector<std::string> labels);

    /// Projective measurement onto the columns of `basis`, which must be
    /// orthonormal and complete within 1e-10. Throws ResourceError above
    /// kMaxDensePovmDim.
    static Povm from_orthonormal_basis(const CMatrix &basis,
                                       std::vector<std::string> labels);

    [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
    [[nodiscard]] std::size_t dim() const noexcept;
    [[nodiscard]] const std::vector<HermitianOperator> &elements() const noexcept {
        return elements_;
    }
    [[nodiscard]] const std::vector<std::string> &labels() const noexcept {
        return labels_;
    }
    /// Orthonormal basis vectors when the POVM is projective rank-one.
    [[nodiscard]] const std::optional<CMatrix> &basis() const noexcept {
        return basis_;
    }
    /// Index of `label`; throws ArgumentError if absent.
    [[nodiscard]] std::size_t index_of(const std::string &label) const;

  private:
    Povm() = default;
    std::vector<HermitianOperator> elements_;
    std::vector<std::string> labels_;
    std::optional<CMatrix> basis_;
};

// Single-qubit Paulis.
HermitianOperator sigma_x();
HermitianOperator sigma_y();
HermitianOperator sigma_z();

/// N generators ½σ^z_j, each acting on qubit j of N (qubit 1 leftmost).
std::vector<HermitianOperator> pauli_z_generators(std::size_t n_qubits);
std::vector<HermitianOperator> pauli_z_generators(std::size_t n_qubits,
                                                  std::size_t max_dim);

/// Kronecker product in list order.
HermitianOperator tensor(std::span<const HermitianOperator> ops);
CMatrix kron(const CMatrix &a, const CMatrix &b);

/// Spectral spread λ_max − λ_min.
double seminorm(const HermitianOperator &h);

/// exp(−iH)|ψ> through the eigendecomposition of H.
PureState evolve_pure(const PureState &psi, const HermitianOperator &h);
/// exp(−iH) ρ exp(iH).
DensityOperator evolve(const DensityOperator &rho, const HermitianOperator &h);
/// exp(−iH) as a dense unitary.
CMatrix unitary(const HermitianOperator &h);

/// p_x = tr(E_x ρ), clipped to [0, 1] and renormalized. Throws
/// InvariantError when the raw total is off by 1e-9 or more.
std::vector<double> born_probabilities(const DensityOperator &rho,
                                       const Povm &m);
std::vector<double> born_probabilities(const PureState &psi, const Povm &m);

/// Maximum absolute entry of AB − BA.
double commutator_norm(const HermitianOperator &a, const HermitianOperator &b);

/// <ψ|H|ψ> (real part).
double expectation(const PureState &psi, const HermitianOperator &h);

/// Completes the orthonormal columns of `partial` to a basis of C^dim using
/// computational-basis vectors in index order (Gram–Schmidt).
CMatrix complete_basis(const CMatrix &partial);

} // namespace qproc
