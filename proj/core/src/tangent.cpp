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

#include "qproc/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "qproc/errors.hpp"

namespace qproc {

namespace {

void require_finite(const RVector &v, const char *what) {
    if (!v.allFinite()) {
        throw InvariantError(std::string(what) + ": non-finite component");
    }
}

RVector from_list(std::initializer_list<double> xs) {
    RVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index k = 0;
    for (double x : xs) {
        v(k++) = x;
    }
    return v;
}

void require_size(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw ArgumentError(std::string(what) + ": size mismatch (" +
                            std::to_string(a) + " vs " + std::to_string(b) +
                            ")");
    }
}

struct Spectrum {
    RVector values;
    RMatrix vectors;
    double cutoff;
};

Spectrum spectrum(const FisherMatrix &f) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(f.entries());
    Spectrum s{es.eigenvalues(), es.eigenvectors(), 0.0};
    const double lmax = s.values.size() ? s.values.maxCoeff() : 0.0;
    s.cutoff = f.rank_tolerance() * std::max(lmax, 0.0);
    return s;
}

} // namespace

TangentVector::TangentVector(RVector components) : c_(std::move(components)) {
    require_finite(c_, "TangentVector");
}
TangentVector::TangentVector(std::initializer_list<double> components)
    : TangentVector(from_list(components)) {}

TangentVector TangentVector::zero(std::size_t n) {
    return TangentVector(RVector::Zero(static_cast<Eigen::Index>(n)));
}

TangentVector TangentVector::axis(std::size_t n, std::size_t j) {
    if (j >= n) {
        throw ArgumentError("TangentVector::axis: index out of range");
    }
    RVector v = RVector::Zero(static_cast<Eigen::Index>(n));
    v(static_cast<Eigen::Index>(j)) = 1.0;
    return TangentVector(std::move(v));
}

OneForm::OneForm(RVector components) : c_(std::move(components)) {
    require_finite(c_, "OneForm");
}
OneForm::OneForm(std::initializer_list<double> components)
    : OneForm(from_list(components)) {}

FisherMatrix::FisherMatrix(RMatrix entries, double rank_tolerance)
    : f_(std::move(entries)), tol_(rank_tolerance) {
    if (f_.rows() != f_.cols()) {
        throw InvariantError("FisherMatrix: not square");
    }
    if (!f_.allFinite()) {
        throw InvariantError("FisherMatrix: non-finite entry");
    }
    if (f_.size() > 0) {
        const double asym = (f_ - f_.transpose()).cwiseAbs().maxCoeff();
        const double scale = std::max(1.0, f_.cwiseAbs().maxCoeff());
        if (asym > 1e-12 * scale) {
            throw InvariantError("FisherMatrix: not symmetric");
        }
        f_ = 0.5 * (f_ + f_.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<RMatrix> es(f_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10 * scale) {
            throw InvariantError("FisherMatrix: not positive-semidefinite");
        }
    }
}

FisherMatrix FisherMatrix::zero(std::size_t n) {
    const auto k = static_cast<Eigen::Index>(n);
    return FisherMatrix(RMatrix::Zero(k, k));
}

RMatrix FisherMatrix::pseudo_inverse() const {
    const Spectrum s = spectrum(*this);
    RMatrix out = RMatrix::Zero(f_.rows(), f_.cols());
    for (Eigen::Index k = 0; k < s.values.size(); ++k) {
        if (s.values(k) > s.cutoff && s.values(k) > 0.0) {
            out += s.vectors.col(k) * s.vectors.col(k).transpose() /
                   s.values(k);
        }
    }
    return out;
}

std::size_t FisherMatrix::rank() const {
    const Spectrum s = spectrum(*this);
    std::size_t r = 0;
    for (Eigen::Index k = 0; k < s.values.size(); ++k) {
        if (s.values(k) > s.cutoff && s.values(k) > 0.0) {
            ++r;
        }
    }
    return r;
}

double pair(const OneForm &dq, const TangentVector &v) {
    require_size(dq.size(), v.size(), "pair");
    return dq.components().dot(v.components());
}

double fisher_form(const FisherMatrix &f, const TangentVector &u,
                   const TangentVector &v) {
    require_size(f.size(), u.size(), "fisher_form");
    require_size(f.size(), v.size(), "fisher_form");
    return u.components().dot(f.entries() * v.components());
}

TangentVector raise_index(const FisherMatrix &f, const OneForm &dq) {
    require_size(f.size(), dq.size(), "raise_index");
    const Spectrum s = spectrum(f);
    const RVector &q = dq.components();
    RVector raised = RVector::Zero(q.size());
    RVector null_part = RVector::Zero(q.size());
    for (Eigen::Index k = 0; k < s.values.size(); ++k) {
        const double coeff = s.vectors.col(k).dot(q);
        if (s.values(k) > s.cutoff && s.values(k) > 0.0) {
            raised += (coeff / s.values(k)) * s.vectors.col(k);
        } else {
            null_part += coeff * s.vectors.col(k);
        }
    }
    if (null_part.norm() >= f.rank_tolerance() * q.norm() && q.norm() > 0.0) {
        throw UnboundedVarianceError(
            "target form has a component in the null space of the Fisher "
            "matrix; its marginal variance is unbounded");
    }
    return TangentVector(std::move(raised));
}

double fisher_dual(const FisherMatrix &f, const OneForm &dq) {
    const TangentVector raised = raise_index(f, dq);
    return dq.components().dot(raised.components());
}

TangentVector b_F(const FisherMatrix &f, const OneForm &dq) {
    const TangentVector raised = raise_index(f, dq);
    const double norm2 = dq.components().dot(raised.components());
    if (!(norm2 > 0.0)) {
        throw UnboundedVarianceError("b_F: zero target form");
    }
    return TangentVector(raised.components() / norm2);
}

CanonicalForm canonicalize(const OneForm &dq) {
    if (dq.size() == 0 || dq.is_zero()) {
        throw ArgumentError("canonicalize: zero form");
    }
    const RVector &q = dq.components();
    CanonicalForm out;
    out.original_size = dq.size();
    for (std::size_t j = 0; j < dq.size(); ++j) {
        if (q(static_cast<Eigen::Index>(j)) == 0.0) {
            out.dropped.push_back(j);
        } else {
            out.permutation.push_back(j);
        }
    }
    std::stable_sort(out.permutation.begin(), out.permutation.end(),
                     [&](std::size_t a, std::size_t b) {
                         return std::abs(q(static_cast<Eigen::Index>(a))) >
                                std::abs(q(static_cast<Eigen::Index>(b)));
                     });
    const double lead = q(static_cast<Eigen::Index>(out.permutation.front()));
    out.sign = lead > 0 ? 1 : -1;
    out.scale = std::abs(lead);
    RVector c(static_cast<Eigen::Index>(out.permutation.size()));
    for (std::size_t k = 0; k < out.permutation.size(); ++k) {
        c(static_cast<Eigen::Index>(k)) =
            q(static_cast<Eigen::Index>(out.permutation[k])) /
            (out.sign * out.scale);
    }
    c(0) = 1.0;
    out.canonical = OneForm(std::move(c));
    return out;
}

OneForm CanonicalForm::to_original(const OneForm &canonical_form) const {
    require_size(canonical_form.size(), permutation.size(),
                 "CanonicalForm::to_original");
    RVector out = RVector::Zero(static_cast<Eigen::Index>(original_size));
    for (std::size_t k = 0; k < permutation.size(); ++k) {
        out(static_cast<Eigen::Index>(permutation[k])) =
            sign * scale * canonical_form[k];
    }
    return OneForm(std::move(out));
}

TangentVector CanonicalForm::to_original(const TangentVector &v) const {
    require_size(v.size(), permutation.size(), "CanonicalForm::to_original");
    RVector out = RVector::Zero(static_cast<Eigen::Index>(original_size));
    for (std::size_t k = 0; k < permutation.size(); ++k) {
        out(static_cast<Eigen::Index>(permutation[k])) =
            v[k] / (sign * scale);
    }
    return TangentVector(std::move(out));
}

OneForm CanonicalForm::to_canonical(const OneForm &original_form) const {
    require_size(original_form.size(), original_size,
                 "CanonicalForm::to_canonical");
    RVector out(static_cast<Eigen::Index>(permutation.size()));
    for (std::size_t k = 0; k < permutation.size(); ++k) {
        out(static_cast<Eigen::Index>(k)) =
            original_form[permutation[k]] / (sign * scale);
    }
    return OneForm(std::move(out));
}

bool is_canonical(const OneForm &dq, double tol) {
    if (dq.size() == 0 || std::abs(dq[0] - 1.0) > tol) {
        return false;
    }
    for (std::size_t j = 1; j < dq.size(); ++j) {
        if (std::abs(dq[j]) > std::abs(dq[j - 1]) + tol ||
            std::abs(dq[j]) <= 0.0) {
            return false;
        }
    }
    return true;
}

} // namespace qproc
