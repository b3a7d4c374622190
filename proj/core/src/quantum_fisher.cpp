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

#include "qproc/quantum_fisher.hpp"

#include <cmath>
#include <memory>
#include <string>

#include <Eigen/Eigenvalues>

#include "qproc/errors.hpp"

namespace qproc {

namespace {

constexpr double kSldCutoff = 1e-12;
constexpr double kSldInconsistency = 1e-9;

HermitianOperator linear_hamiltonian(std::span<const HermitianOperator> gens,
                                     const RVector &theta) {
    HermitianOperator h = HermitianOperator::zero(gens.front().dim());
    for (std::size_t j = 0; j < gens.size(); ++j) {
        const double t = theta(static_cast<Eigen::Index>(j));
        if (t != 0.0) {
            h = h + t * gens[j];
        }
    }
    return h;
}

void check_generators(std::span<const HermitianOperator> gens,
                      std::size_t dim) {
    if (gens.empty()) {
        throw ArgumentError("unitary model: no generators");
    }
    for (const auto &g : gens) {
        if (g.dim() != dim) {
            throw ArgumentError("unitary model: generator dimension mismatch");
        }
    }
}

RVector at_fiducial(const MeasurementModel &model, std::size_t n) {
    if (model.fiducial) {
        if (static_cast<std::size_t>(model.fiducial->size()) != n) {
            throw ArgumentError("classical_fisher: fiducial size mismatch");
        }
        return *model.fiducial;
    }
    return RVector::Zero(static_cast<Eigen::Index>(n));
}

void check_distribution(const std::vector<double> &p) {
    for (double v : p) {
        if (v < 0.0 || !std::isfinite(v)) {
            throw ModelError("measurement model returned a negative or "
                             "non-finite probability");
        }
    }
}

} // namespace

SldResult sld(const DensityOperator &rho, const HermitianOperator &drho) {
    if (rho.dim() != drho.dim()) {
        throw ArgumentError("sld: dimension mismatch");
    }
    if (std::abs(drho.matrix().trace()) > 1e-10) {
        throw ArgumentError("sld: derivative must be traceless");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
    const RVector &lambda = es.eigenvalues();
    const CMatrix &v = es.eigenvectors();
    const CMatrix d = v.adjoint() * drho.matrix() * v;
    const Eigen::Index n = d.rows();
    CMatrix l = CMatrix::Zero(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double denom = lambda(m) + lambda(k);
            if (denom > kSldCutoff) {
                l(m, k) = 2.0 * d(m, k) / denom;
            } else if (std::abs(d(m, k)) > kSldInconsistency) {
                throw InconsistentDerivativeError(
                    "sld: derivative has support outside the state's support");
            }
        }
    }
    CMatrix lb = v * l * v.adjoint();
    lb = 0.5 * (lb + lb.adjoint()).eval();
    const CMatrix defect =
        0.5 * (rho.matrix() * lb + lb * rho.matrix()) - drho.matrix();
    const double residual = defect.size() ? defect.cwiseAbs().maxCoeff() : 0.0;
    return SldResult{HermitianOperator(std::move(lb)), residual};
}

double qfi_pure(const PureState &psi, const HermitianOperator &y) {
    if (psi.dim() != y.dim()) {
        throw ArgumentError("qfi_pure: dimension mismatch");
    }
    const CVector ypsi = y.matrix() * psi.amplitudes();
    const double mean = psi.amplitudes().dot(ypsi).real();
    const double second = ypsi.squaredNorm();
    return std::max(0.0, 4.0 * (second - mean * mean));
}

double qfi_from_sld(const DensityOperator &rho, const HermitianOperator &l) {
    if (rho.dim() != l.dim()) {
        throw ArgumentError("qfi_from_sld: dimension mismatch");
    }
    const CMatrix l2 = l.matrix() * l.matrix();
    return (rho.matrix() * l2).trace().real();
}

FisherMatrix classical_fisher(const MeasurementModel &model, std::size_t n) {
    if (!model.probabilities) {
        throw ArgumentError("classical_fisher: model has no probabilities");
    }
    const RVector theta0 = at_fiducial(model, n);
    const std::vector<double> p0 = model.probabilities(theta0);
    check_distribution(p0);
    const auto outcomes = static_cast<Eigen::Index>(p0.size());
    const auto nn = static_cast<Eigen::Index>(n);

    RMatrix jac(outcomes, nn);
    if (model.mode == DerivativeMode::Analytic && model.jacobian) {
        jac = model.jacobian(theta0);
        if (jac.rows() != outcomes || jac.cols() != nn) {
            throw ModelError("classical_fisher: jacobian has the wrong shape");
        }
    } else {
        for (Eigen::Index j = 0; j < nn; ++j) {
            RVector plus = theta0;
            RVector minus = theta0;
            plus(j) += model.step;
            minus(j) -= model.step;
            const auto pp = model.probabilities(plus);
            const auto pm = model.probabilities(minus);
            check_distribution(pp);
            check_distribution(pm);
            if (static_cast<Eigen::Index>(pp.size()) != outcomes ||
                static_cast<Eigen::Index>(pm.size()) != outcomes) {
                throw ModelError("classical_fisher: outcome count changed");
            }
            for (Eigen::Index x = 0; x < outcomes; ++x) {
                jac(x, j) = (pp[static_cast<std::size_t>(x)] -
                             pm[static_cast<std::size_t>(x)]) /
                            (2.0 * model.step);
            }
        }
    }

    RMatrix f = RMatrix::Zero(nn, nn);
    for (Eigen::Index x = 0; x < outcomes; ++x) {
        const double p = p0[static_cast<std::size_t>(x)];
        if (p < model.p_floor) {
            continue;
        }
        f += jac.row(x).transpose() * jac.row(x) / p;
    }
    f = 0.5 * (f + f.transpose()).eval();
    return FisherMatrix(std::move(f));
}

RMatrix unitary_probability_jacobian(const DensityOperator &rho,
                                     std::span<const HermitianOperator> gens,
                                     const Povm &m) {
    check_generators(gens, rho.dim());
    if (m.dim() != rho.dim()) {
        throw ArgumentError("unitary_probability_jacobian: POVM dimension");
    }
    RMatrix jac(static_cast<Eigen::Index>(m.size()),
                static_cast<Eigen::Index>(gens.size()));
    for (std::size_t j = 0; j < gens.size(); ++j) {
        const CMatrix xr = gens[j].matrix() * rho.matrix();
        for (std::size_t x = 0; x < m.size(); ++x) {
            // tr(E X ρ) = Σ_ab E_ab (Xρ)_ba
            const Complex t =
                m.elements()[x].matrix().cwiseProduct(xr.transpose()).sum();
            jac(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(j)) =
                2.0 * t.imag();
        }
    }
    return jac;
}

RMatrix unitary_probability_jacobian(const PureState &psi,
                                     std::span<const HermitianOperator> gens,
                                     const Povm &m) {
    check_generators(gens, psi.dim());
    if (m.dim() != psi.dim()) {
        throw ArgumentError("unitary_probability_jacobian: POVM dimension");
    }
    const CVector &a = psi.amplitudes();
    RMatrix jac(static_cast<Eigen::Index>(m.size()),
                static_cast<Eigen::Index>(gens.size()));
    if (m.basis()) {
        // E = |v><v|: tr(E X ρ) = <ψ|v><v|X|ψ>.
        const CMatrix &basis = *m.basis();
        const CVector overlap = basis.adjoint() * a;
        for (std::size_t j = 0; j < gens.size(); ++j) {
            const CVector xo = basis.adjoint() * (gens[j].matrix() * a);
            for (Eigen::Index x = 0; x < overlap.size(); ++x) {
                jac(x, static_cast<Eigen::Index>(j)) =
                    2.0 * (std::conj(overlap(x)) * xo(x)).imag();
            }
        }
        return jac;
    }
    for (std::size_t j = 0; j < gens.size(); ++j) {
        const CVector xa = gens[j].matrix() * a;
        for (std::size_t x = 0; x < m.size(); ++x) {
            const Complex t = a.dot(m.elements()[x].matrix() * xa);
            jac(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(j)) =
                2.0 * t.imag();
        }
    }
    return jac;
}

MeasurementModel unitary_measurement_model(const PureState &psi,
                                           std::vector<HermitianOperator> gens,
                                           Povm m, DerivativeMode mode) {
    check_generators(gens, psi.dim());
    auto shared_gens =
        std::make_shared<const std::vector<HermitianOperator>>(std::move(gens));
    auto shared_m = std::make_shared<const Povm>(std::move(m));
    MeasurementModel model;
    model.mode = mode;
    model.probabilities = [psi, shared_gens, shared_m](const RVector &theta) {
        if (theta.isZero(0.0)) {
            return born_probabilities(psi, *shared_m);
        }
        return born_probabilities(
            evolve_pure(psi, linear_hamiltonian(*shared_gens, theta)),
            *shared_m);
    };
    model.jacobian = [psi, shared_gens, shared_m](const RVector &theta) {
        if (!theta.isZero(0.0)) {
            throw ModelError("analytic jacobian is only available at theta = 0");
        }
        return unitary_probability_jacobian(psi, *shared_gens, *shared_m);
    };
    return model;
}

MeasurementModel unitary_measurement_model(const DensityOperator &rho,
                                           std::vector<HermitianOperator> gens,
                                           Povm m, DerivativeMode mode) {
    check_generators(gens, rho.dim());
    auto shared_gens =
        std::make_shared<const std::vector<HermitianOperator>>(std::move(gens));
    auto shared_m = std::make_shared<const Povm>(std::move(m));
    MeasurementModel model;
    model.mode = mode;
    model.probabilities = [rho, shared_gens, shared_m](const RVector &theta) {
        if (theta.isZero(0.0)) {
            return born_probabilities(rho, *shared_m);
        }
        return born_probabilities(
            evolve(rho, linear_hamiltonian(*shared_gens, theta)), *shared_m);
    };
    model.jacobian = [rho, shared_gens, shared_m](const RVector &theta) {
        if (!theta.isZero(0.0)) {
            throw ModelError("analytic jacobian is only available at theta = 0");
        }
        return unitary_probability_jacobian(rho, *shared_gens, *shared_m);
    };
    return model;
}

ChainReport verify_chain(double f_bb, double q_bb, double norm,
                         double saturation_tol) {
    if (f_bb < -1e-12 || q_bb < -1e-12 || norm < 0.0) {
        throw ArgumentError("verify_chain: inputs must be nonnegative");
    }
    const double norm_sq = norm * norm;
    ChainReport r{f_bb,
                  q_bb,
                  norm_sq,
                  q_bb - f_bb,
                  norm_sq - q_bb,
                  std::abs(q_bb - f_bb) <= saturation_tol,
                  std::abs(norm_sq - q_bb) <= saturation_tol};
    if (f_bb > q_bb + 1e-9) {
        throw ChainViolationError("classical Fisher exceeds quantum Fisher",
                                  "F_bb<=Q_bb", f_bb - q_bb);
    }
    if (q_bb > norm_sq + 1e-9) {
        throw ChainViolationError("quantum Fisher exceeds squared process norm",
                                  "Q_bb<=norm^2", q_bb - norm_sq);
    }
    return r;
}

} // namespace qproc
