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
 * Geometry of the parameter tangent space at the fiducial point.
 *
 * Displacements are vectors (upper index, `TangentVector`); the gradient of
 * the target functional q is a one-form (lower index, `OneForm`). The two are
 * distinct types so that they only meet through `pair()` or through a metric
 * such as the Fisher matrix.
 */
#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "qproc/operator.hpp"

namespace qproc {

/// Components b^j of a displacement.
class TangentVector {
  public:
    explicit TangentVector(RVector components);
    TangentVector(std::initializer_list<double> components);
    static TangentVector zero(std::size_t n);
    static TangentVector axis(std::size_t n, std::size_t j);

    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(c_.size());
    }
    [[nodiscard]] const RVector &components() const noexcept { return c_; }
    [[nodiscard]] double operator[](std::size_t j) const {
        return c_(static_cast<Eigen::Index>(j));
    }

  private:
    RVector c_;
};

/// Components q_j of dq = q_j dθ^j.
class OneForm {
  public:
    explicit OneForm(RVector components);
    OneForm(std::initializer_list<double> components);

    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(c_.size());
    }
    [[nodiscard]] const RVector &components() const noexcept { return c_; }
    [[nodiscard]] double operator[](std::size_t j) const {
        return c_(static_cast<Eigen::Index>(j));
    }
    [[nodiscard]] bool is_zero() const { return c_.cwiseAbs().maxCoeff() == 0.0; }

  private:
    RVector c_;
};

/// Symmetric PSD covariant tensor F_jk. Rank deficiency is allowed.
class FisherMatrix {
  public:
    /// Symmetry within 1e-12 (the stored matrix is then symmetrized);
    /// eigenvalues >= -1e-10.
    explicit FisherMatrix(RMatrix entries, double rank_tolerance = 1e-10);
    static FisherMatrix zero(std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(f_.rows());
    }
    [[nodiscard]] const RMatrix &entries() const noexcept { return f_; }
    [[nodiscard]] double rank_tolerance() const noexcept { return tol_; }

    /// Spectral pseudo-inverse with relative cutoff rank_tolerance·λ_max.
    [[nodiscard]] RMatrix pseudo_inverse() const;
    [[nodiscard]] std::size_t rank() const;

  private:
    RMatrix f_;
    double tol_;
};

/// Record of the normalization applied by `canonicalize`. With
/// `sign·scale·embed(canonical)` the original form is recovered.
struct CanonicalForm {
    /// permutation[k] = original index of canonical slot k.
    std::vector<std::size_t> permutation;
    double scale = 1.0;
    /// +1 or −1: overall sign removed so the leading component is positive.
    int sign = 1;
    /// Original indices with q_j = 0.
    std::vector<std::size_t> dropped;
    std::size_t original_size = 0;
    OneForm canonical{RVector()};

    /// Canonical-space form back to the original indexing.
    [[nodiscard]] OneForm to_original(const OneForm &canonical_form) const;
    /// Canonical-space vector back to the original indexing. Preserves
    /// pairing: pair(original, to_original(v)) = pair(canonical, v).
    [[nodiscard]] TangentVector to_original(const TangentVector &v) const;
    /// Original-space form into canonical coordinates (dropped slots removed).
    [[nodiscard]] OneForm to_canonical(const OneForm &original_form) const;
    /// Variance bounds scale by scale^2 when mapped back.
    [[nodiscard]] double variance_factor() const noexcept {
        return scale * scale;
    }
};

/// dq(v) = q_j v^j.
double pair(const OneForm &dq, const TangentVector &v);

/// F_jk u^j v^k.
double fisher_form(const FisherMatrix &f, const TangentVector &u,
                   const TangentVector &v);

/// q_j (F⁺)^{jk} q_k. Throws UnboundedVarianceError when dq has a component
/// in the null space of F larger than rank_tolerance·‖dq‖.
double fisher_dual(const FisherMatrix &f, const OneForm &dq);

/// Raised-index form q_F = F⁺ dq (same preconditions as fisher_dual).
TangentVector raise_index(const FisherMatrix &f, const OneForm &dq);

/// The Fisher-orthogonal vector on the unit surface of q:
/// q_F / <q_F, q_F>_F, so that pair(dq, b_F) = 1.
TangentVector b_F(const FisherMatrix &f, const OneForm &dq);

/// Drop zero components, order by descending |q_j| (stable), and scale so the
/// leading component is +1.
CanonicalForm canonicalize(const OneForm &dq);

/// True when 1 = q_1 >= |q_2| >= ... >= |q_N| > 0 within `tol`.
bool is_canonical(const OneForm &dq, double tol = 1e-12);

} // namespace qproc
