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
 * Explicit measurement protocols for unitary families: cat-state hyperface
 * and hyperedge measurements, probabilistic corner mixtures, ancilla-assisted
 * zoo measurements, the Bloch qubit protocol, and the tangent construction
 * for smooth points of the unit ball.
 *
 * Every branch records one or more readouts: a pair of outcomes whose
 * probabilities behave as share·½(1 ± sin s) with s = r_j θ^j to first order.
 * The estimation module inverts the sine per readout and combines the results
 * linearly.
 */
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qproc/operator.hpp"
#include "qproc/process_norm.hpp"
#include "qproc/quantum_fisher.hpp"
#include "qproc/tangent.hpp"

namespace qproc {

/// Sign string over {+1, −1}, or {+1, 0, −1} for hyperedges.
class SignString {
  public:
    /// Throws ArgumentError on entries outside {−1, 0, 1} or an empty list.
    explicit SignString(std::vector<int> entries);

    [[nodiscard]] std::size_t size() const noexcept { return z_.size(); }
    [[nodiscard]] int operator[](std::size_t j) const { return z_[j]; }
    [[nodiscard]] const std::vector<int> &entries() const noexcept { return z_; }
    [[nodiscard]] bool has_zero() const;
    [[nodiscard]] bool all_zero() const;
    [[nodiscard]] SignString negated() const;
    /// Zeros replaced by +1.
    [[nodiscard]] SignString filled() const;
    /// The string as a one-form (entries as reals).
    [[nodiscard]] OneForm form() const;
    /// Computational-basis index: qubit 1 is the most significant bit and
    /// z_j = −1 sets it. Zeros count as +1.
    [[nodiscard]] std::size_t basis_index() const;
    [[nodiscard]] std::string str() const;

    friend bool operator==(const SignString &, const SignString &) = default;

  private:
    std::vector<int> z_;
};

enum class ProtocolKind {
    Hyperface,
    Corner,
    Hyperedge,
    Zoo,
    Bloch,
    Cusp,
    Tangent,
    Mixture
};

std::string to_string(ProtocolKind kind);
/// Throws ArgumentError on an unknown name.
ProtocolKind protocol_kind_from_string(const std::string &name);

/// A pair of outcomes read as an inverted sine.
struct Readout {
    std::size_t plus = 0;
    std::size_t minus = 0;
    /// r in s = r_j θ^j.
    OneForm form{RVector()};
    /// p(plus) + p(minus) at the fiducial point.
    double share = 1.0;
    /// q̂ gains weight · coefficient · (pair shots / branch shots) · ŝ.
    double coefficient = 1.0;
};

using Fiducial = std::variant<PureState, DensityOperator>;

struct Branch {
    double weight = 1.0;
    Fiducial fiducial;
    Povm measurement;
    std::vector<Readout> readouts;
    /// Idle qubits on the left of the family's Hilbert space.
    std::size_t ancilla_qubits = 0;
    std::optional<SignString> string;
};

struct Protocol {
    ProtocolKind kind = ProtocolKind::Hyperface;
    std::vector<Branch> branches;
    /// Parameter count N.
    std::size_t family_dim = 0;
    /// Form whose value q̂ estimates.
    OneForm target{RVector()};
};

/// Throws InvariantError unless weights are positive and sum to 1 within
/// 1e-12 and every branch is dimensionally consistent.
void validate(const Protocol &p);

/// Cat state (|z⟩+|−z⟩)/√2 and its icat basis on N qubits; zero entries
/// of a hyperedge string are filled with +1.
PureState cat_state(const SignString &z);
/// Columns (|z⟩ + i|−z⟩)/√2, (|z⟩ − i|−z⟩)/√2 followed by the remaining
/// computational basis states in index order.
CMatrix icat_basis(const SignString &z);

/// (σ^y)^{⊗N} for odd N, (σ^y)^{⊗N−1}⊗σ^x for even N.
HermitianOperator parity_operator(std::size_t n);
/// Eigenvalue of the parity operator on the icat state of sign `plus`.
int parity_eigenvalue(const SignString &z, bool plus);

/// Single-branch cat/icat protocol for a string without zeros; Fisher z⊗z.
Protocol hyperface_protocol(const SignString &z);

/// Hyperface mixture for a canonical form (1 = q_1 >= |q_2| >= ... > 0).
Protocol corner_strategy(const OneForm &canonical);

/// Corner mixture for any nonzero form on a PauliZ family, built about the
/// axis of the largest |q_j|; the target is dq itself.
Protocol corner_protocol(const OneForm &dq);

/// Cat/icat protocol on the hyperedge w; Fisher w⊗w.
Protocol hyperedge_protocol(const SignString &w);

/// Ancilla-assisted protocol with one ancilla qubit and string weights
/// p_z over full strings of length N. With `mixed` the fiducial is the
/// dephased mixture. Target Σ p_z z.
Protocol zoo_protocol(const std::map<std::vector<int>, double> &p_z,
                      std::size_t n, bool mixed = false);
/// Factorized weights p_{j,±} = (1 ± a_j)/2.
Protocol zoo_protocol(const RVector &a, bool mixed = false);

/// Bloch-qubit protocol along q/|q|; target dq.
Protocol bloch_protocol(const OneForm &dq);

/// Epsilon-pair protocol at the ±∂_2 cusp: hyperface measurements about
/// parameter 2 mixed with corner weights. Requires |q_2| >= |q_1|.
Protocol cusp_protocol(const ProcessFamily &family, const OneForm &dq);

/// Cat of the extreme eigenvectors of b_min·X measured in its icat basis.
/// For smooth points of the unit ball; the Fisher matrix is g⊗g with g the
/// norm gradient at b_min.
Protocol tangent_protocol(const ProcessFamily &family, const OneForm &dq,
                          const BMinResult &bmin);

/// Probabilistic mixture; weights must sum to 1.
Protocol mixture(const std::vector<std::pair<double, Protocol>> &parts);

/// Σ_n p_n F^(n), each branch evaluated from its fiducial, measurement and
/// the family's generators.
FisherMatrix protocol_fisher(const Protocol &p, const ProcessFamily &family,
                             DerivativeMode mode = DerivativeMode::Analytic);

/// Fisher matrix implied by the readouts: Σ_n p_n Σ share·r⊗r.
FisherMatrix claimed_fisher(const Protocol &p);

/// max |F b − ||b||² dq|. Throws ArgumentError unless dq(b) = 1 within 1e-9.
double kissing_residual(const FisherMatrix &f, const TangentVector &b,
                        const ProcessFamily &family, const OneForm &dq);

/// Exact outcome distribution of a branch at θ.
std::vector<double> branch_probabilities(const Branch &branch,
                                         const ProcessFamily &family,
                                         const RVector &theta);

/// Automatic protocol for estimating dq on the family:
/// PauliZ → corner, Bloch → bloch, EpsilonPair → cusp or tangent,
/// CustomUnitary → tangent (UnsupportedError at a corner).
Protocol optimal_protocol(const ProcessFamily &family, const OneForm &dq,
                          const BMinResult &bmin);

} // namespace qproc
