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

#include "qproc/process_norm.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qproc/errors.hpp"

namespace qproc {

namespace {

void require_length(const ProcessFamily &family, std::size_t n,
                    const char *what) {
    if (family.parameter_count() != n) {
        throw ArgumentError(std::string(what) + ": expected " +
                            std::to_string(family.parameter_count()) +
                            " components, got " + std::to_string(n));
    }
}

int sgn(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

// b = origin + basis·t parametrizes the plane dq(b) = 1.
struct Plane {
    RVector origin;
    RMatrix basis;
};

Plane make_plane(const OneForm &dq) {
    const RVector &q = dq.components();
    const auto n = q.size();
    Plane p;
    p.origin = q / q.squaredNorm();
    if (n == 1) {
        p.basis = RMatrix(1, 0);
        return p;
    }
    const RMatrix qm = q;
    Eigen::HouseholderQR<RMatrix> qr(qm);
    const RMatrix full = qr.householderQ() * RMatrix::Identity(n, n);
    p.basis = full.rightCols(n - 1);
    return p;
}

struct LineResult {
    double alpha;
    double value;
};

// Golden-section minimization of a convex φ over [lo, hi].
template <typename Phi>
LineResult golden(const Phi &phi, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = phi(c);
    double fd = phi(d);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(b)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = phi(d);
        }
    }
    return fc <= fd ? LineResult{c, fc} : LineResult{d, fd};
}

// Bracket along direction d starting at step s, then refine.
template <typename F>
LineResult line_search(const F &f, const RVector &t, const RVector &dir,
                       double f0, double step) {
    auto phi = [&](double a) { return f(RVector(t + a * dir)); };
    double a1 = step;
    double f1 = phi(a1);
    LineResult best{0.0, f0};
    if (f1 < f0) {
        double lo = 0.0;
        int doublings = 0;
        double a2 = 2.0 * a1;
        double f2 = phi(a2);
        while (f2 < f1 && doublings++ < 80) {
            lo = a1;
            a1 = a2;
            f1 = f2;
            a2 = 2.0 * a1;
            f2 = phi(a2);
        }
        best = golden(phi, lo, a2);
        if (f1 < best.value) {
            best = {a1, f1};
        }
    } else {
        best = golden(phi, 0.0, a1);
    }
    if (!(best.value < f0)) {
        return {0.0, f0};
    }
    return best;
}

struct StartResult {
    RVector b;
    double value;
    std::size_t iterations;
    bool converged;
};

StartResult minimize_from(const ProcessFamily &family, const Plane &plane,
                          RVector t, const MinimizerOptions &opt,
                          std::uint64_t stream) {
    const Eigen::Index k = plane.basis.cols();
    auto f = [&](const RVector &tt) {
        return process_norm(family,
                            TangentVector(plane.origin + plane.basis * tt));
    };
    std::mt19937_64 rng(opt.seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    std::normal_distribution<double> gauss;

    double value = f(t);
    double step = std::max(0.1, 0.1 * plane.origin.norm());
    std::deque<double> history{value};
    for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
        std::vector<RVector> dirs;
        const RVector g =
            plane.basis.transpose() *
            norm_subgradient(family,
                             TangentVector(plane.origin + plane.basis * t));
        if (g.norm() > 0.0) {
            dirs.push_back(-g / g.norm());
        }
        for (Eigen::Index i = 0; i < k; ++i) {
            RVector e = RVector::Zero(k);
            e(i) = 1.0;
            dirs.push_back(e);
            dirs.push_back(-e);
        }
        for (int r = 0; r < 2; ++r) {
            RVector v(k);
            for (Eigen::Index i = 0; i < k; ++i) {
                v(i) = gauss(rng);
            }
            dirs.push_back(v / v.norm());
        }

        LineResult best{0.0, value};
        std::size_t best_dir = 0;
        for (std::size_t di = 0; di < dirs.size(); ++di) {
            const LineResult lr = line_search(f, t, dirs[di], value, step);
            if (lr.value < best.value) {
                best = lr;
                best_dir = di;
            }
        }
        if (best.value < value) {
            t += best.alpha * dirs[best_dir];
            value = best.value;
            step = std::max(best.alpha, 1e-9);
        } else {
            step = std::max(0.5 * step, 1e-12);
        }

        history.push_back(value);
        if (history.size() > opt.window + 1) {
            history.pop_front();
        }
        if (history.size() == opt.window + 1 &&
            history.front() - history.back() < opt.improvement_tol) {
            return {plane.origin + plane.basis * t, value, it, true};
        }
    }
    return {plane.origin + plane.basis * t, value, opt.max_iterations, false};
}

bool lexicographically_less(const RVector &a, const RVector &b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (std::abs(a(i) - b(i)) > 1e-12) {
            return a(i) < b(i);
        }
    }
    return false;
}

// Newton steps on the in-plane gradient. Only valid where the norm is
// differentiable; each step is kept only if it lowers the gradient without
// raising the norm.
void polish_smooth(const ProcessFamily &family, const Plane &plane,
                   BMinResult &out) {
    const Eigen::Index k = plane.basis.cols();
    auto grad = [&](const RVector &b) -> RVector {
        return plane.basis.transpose() *
               norm_subgradient(family, TangentVector(b));
    };
    RVector b = out.b_min.components();
    RVector g = grad(b);
    for (int it = 0; it < 30 && g.norm() > 1e-15; ++it) {
        const double h = 1e-6 * std::max(1.0, b.norm());
        RMatrix hess(k, k);
        for (Eigen::Index i = 0; i < k; ++i) {
            const RVector d = plane.basis.col(i);
            hess.col(i) = (grad(b + h * d) - grad(b - h * d)) / (2.0 * h);
        }
        hess = 0.5 * (hess + hess.transpose()).eval();
        const RVector step = hess.ldlt().solve(-g);
        if (!step.allFinite()) {
            return;
        }
        const RVector nb = b + plane.basis * step;
        const double nv = process_norm(family, TangentVector(nb));
        const RVector ng = grad(nb);
        if (!(ng.norm() < g.norm()) || nv > out.norm + 1e-13) {
            return;
        }
        b = nb;
        g = ng;
        out.b_min = TangentVector(b);
        out.norm = nv;
    }
}

BMinResult numerical_b_min(const ProcessFamily &family, const OneForm &dq,
                           const MinimizerOptions &opt) {
    const Plane plane = make_plane(dq);
    const std::size_t n = dq.size();
    BMinResult out;
    if (n == 1) {
        out.b_min = TangentVector(plane.origin);
        out.norm = process_norm(family, out.b_min);
        out.dual_norm = 1.0 / out.norm;
        return out;
    }

    // 2N ± axis starts projected onto the plane, plus two random starts.
    std::vector<RVector> starts;
    for (std::size_t j = 0; j < n; ++j) {
        for (double s : {1.0, -1.0}) {
            RVector e = RVector::Zero(static_cast<Eigen::Index>(n));
            e(static_cast<Eigen::Index>(j)) = s;
            starts.push_back(plane.basis.transpose() * e);
        }
    }
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss;
    for (int r = 0; r < 2; ++r) {
        RVector t(plane.basis.cols());
        for (Eigen::Index i = 0; i < t.size(); ++i) {
            t(i) = gauss(rng) * plane.origin.norm();
        }
        starts.push_back(t);
    }

    unsigned threads = opt.threads ? opt.threads
                                   : std::max(1U, std::thread::hardware_concurrency());
    std::vector<StartResult> results(starts.size());
    if (threads <= 1) {
        for (std::size_t s = 0; s < starts.size(); ++s) {
            results[s] = minimize_from(family, plane, starts[s], opt, s);
        }
    } else {
        std::vector<std::future<StartResult>> futures;
        futures.reserve(starts.size());
        for (std::size_t s = 0; s < starts.size(); ++s) {
            futures.push_back(std::async(std::launch::async, [&, s] {
                return minimize_from(family, plane, starts[s], opt, s);
            }));
        }
        for (std::size_t s = 0; s < starts.size(); ++s) {
            results[s] = futures[s].get();
        }
    }

    // Reduce by minimum norm; ties within 1e-9 go to the lexicographically
    // smallest b so the outcome does not depend on scheduling.
    double best_value = results.front().value;
    for (const auto &r : results) {
        best_value = std::min(best_value, r.value);
    }
    const StartResult *chosen = nullptr;
    for (const auto &r : results) {
        if (r.value <= best_value + 1e-9 &&
            (chosen == nullptr || lexicographically_less(r.b, chosen->b))) {
            chosen = &r;
        }
    }
    std::size_t total_iterations = 0;
    for (const auto &r : results) {
        total_iterations += r.iterations;
    }
    if (!chosen->converged) {
        throw NumericalError(
            "b_min_solve: minimization did not converge",
            std::vector<double>(chosen->b.data(),
                                chosen->b.data() + chosen->b.size()),
            chosen->value);
    }
    out.b_min = TangentVector(chosen->b);
    out.norm = chosen->value;
    out.at_corner = is_corner(family, dq, out.b_min);
    if (!out.at_corner) {
        polish_smooth(family, plane, out);
    }
    out.dual_norm = 1.0 / out.norm;
    out.iterations = total_iterations;
    return out;
}

RVector fibonacci_direction(std::size_t i, std::size_t count) {
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) /
                               static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * static_cast<double>(i);
    RVector d(3);
    d << r * std::cos(phi), r * std::sin(phi), z;
    return d;
}

} // namespace

// ---------------------------------------------------------------------------
// ProcessFamily

ProcessFamily ProcessFamily::pauli_z(std::size_t n) {
    if (n < 1) {
        throw ArgumentError("pauli_z: N must be >= 1");
    }
    ProcessFamily f;
    f.kind_ = Kind::PauliZ;
    f.n_ = n;
    f.dim_ = n < 63 ? (std::size_t{1} << n) : 0;
    if (n < 63 && f.dim_ <= dimension_limit()) {
        f.generators_ = std::make_shared<const std::vector<HermitianOperator>>(
            pauli_z_generators(n));
    }
    return f;
}

ProcessFamily ProcessFamily::bloch() {
    ProcessFamily f;
    f.kind_ = Kind::Bloch;
    f.n_ = 3;
    f.dim_ = 2;
    f.generators_ = std::make_shared<const std::vector<HermitianOperator>>(
        std::vector<HermitianOperator>{0.5 * sigma_x(), 0.5 * sigma_y(),
                                       0.5 * sigma_z()});
    return f;
}

ProcessFamily ProcessFamily::epsilon_pair(double epsilon) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ArgumentError("epsilon_pair: epsilon must be finite and >= 0");
    }
    ProcessFamily f;
    f.kind_ = Kind::EpsilonPair;
    f.n_ = 2;
    f.dim_ = 4;
    f.epsilon_ = epsilon;
    const HermitianOperator id = HermitianOperator::identity(2);
    const std::vector<HermitianOperator> z1{sigma_z(), id};
    const std::vector<HermitianOperator> x2{id, sigma_x()};
    const std::vector<HermitianOperator> z2{id, sigma_z()};
    f.generators_ = std::make_shared<const std::vector<HermitianOperator>>(
        std::vector<HermitianOperator>{
            0.5 * (tensor(z1) + std::sqrt(2.0 * epsilon) * tensor(x2)),
            0.5 * tensor(z2)});
    return f;
}

ProcessFamily
ProcessFamily::custom_unitary(std::vector<HermitianOperator> generators) {
    if (generators.empty()) {
        throw ArgumentError("custom_unitary: no generators");
    }
    const std::size_t d = generators.front().dim();
    for (const auto &g : generators) {
        if (g.dim() != d) {
            throw ArgumentError(
                "custom_unitary: generators must share one dimension");
        }
    }
    if (d > dimension_limit()) {
        throw ResourceError("custom_unitary: dimension exceeds the limit");
    }
    ProcessFamily f;
    f.kind_ = Kind::CustomUnitary;
    f.n_ = generators.size();
    f.dim_ = d;
    f.generators_ = std::make_shared<const std::vector<HermitianOperator>>(
        std::move(generators));
    return f;
}

const std::vector<HermitianOperator> &ProcessFamily::generators() const {
    if (!generators_) {
        throw ResourceError("process family with N = " + std::to_string(n_) +
                            " exceeds the dimension limit");
    }
    return *generators_;
}

std::vector<HermitianOperator>
ProcessFamily::extended_generators(std::size_t ancilla_qubits) const {
    const auto &gens = generators();
    if (ancilla_qubits == 0) {
        return gens;
    }
    const auto a = static_cast<Eigen::Index>(std::size_t{1} << ancilla_qubits);
    const CMatrix id = CMatrix::Identity(a, a);
    std::vector<HermitianOperator> out;
    out.reserve(gens.size());
    for (const auto &g : gens) {
        out.push_back(HermitianOperator(kron(id, g.matrix())));
    }
    return out;
}

std::string ProcessFamily::name() const {
    switch (kind_) {
    case Kind::PauliZ:
        return "pauli-z";
    case Kind::Bloch:
        return "bloch";
    case Kind::EpsilonPair:
        return "epsilon-pair";
    case Kind::CustomUnitary:
        return "custom-unitary";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Norm evaluation

HermitianOperator generator(const ProcessFamily &family,
                            const TangentVector &b) {
    require_length(family, b.size(), "generator");
    const auto &gens = family.generators();
    HermitianOperator y = HermitianOperator::zero(family.hilbert_dim());
    for (std::size_t j = 0; j < gens.size(); ++j) {
        if (b[j] != 0.0) {
            y = y + b[j] * gens[j];
        }
    }
    return y;
}

double generator_seminorm(const ProcessFamily &family, const TangentVector &b) {
    return seminorm(generator(family, b));
}

double process_norm(const ProcessFamily &family, const TangentVector &b) {
    require_length(family, b.size(), "process_norm");
    const RVector &v = b.components();
    switch (family.kind()) {
    case ProcessFamily::Kind::PauliZ:
        return v.cwiseAbs().sum();
    case ProcessFamily::Kind::Bloch:
        return v.norm();
    case ProcessFamily::Kind::EpsilonPair:
        return std::abs(v(0)) +
               std::sqrt(v(1) * v(1) + 2.0 * family.epsilon() * v(0) * v(0));
    case ProcessFamily::Kind::CustomUnitary:
        return generator_seminorm(family, b);
    }
    return 0.0;
}

RVector norm_subgradient(const ProcessFamily &family, const TangentVector &b) {
    require_length(family, b.size(), "norm_subgradient");
    const RVector &v = b.components();
    const auto n = v.size();
    RVector g = RVector::Zero(n);
    switch (family.kind()) {
    case ProcessFamily::Kind::PauliZ:
        for (Eigen::Index j = 0; j < n; ++j) {
            g(j) = sgn(v(j));
        }
        return g;
    case ProcessFamily::Kind::Bloch: {
        const double r = v.norm();
        return r > 0.0 ? RVector(v / r) : g;
    }
    case ProcessFamily::Kind::EpsilonPair: {
        const double eps = family.epsilon();
        const double r = std::sqrt(v(1) * v(1) + 2.0 * eps * v(0) * v(0));
        g(0) = sgn(v(0)) + (r > 0.0 ? 2.0 * eps * v(0) / r : 0.0);
        g(1) = r > 0.0 ? v(1) / r : 0.0;
        return g;
    }
    case ProcessFamily::Kind::CustomUnitary: {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(generator(family, b).matrix());
        const auto last = es.eigenvalues().size() - 1;
        const CVector vmax = es.eigenvectors().col(last);
        const CVector vmin = es.eigenvectors().col(0);
        const auto &gens = family.generators();
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto &x = gens[static_cast<std::size_t>(j)].matrix();
            g(j) = vmax.dot(x * vmax).real() - vmin.dot(x * vmin).real();
        }
        return g;
    }
    }
    return g;
}

bool is_corner(const ProcessFamily &family, const OneForm &dq,
               const TangentVector &b, double gap) {
    require_length(family, dq.size(), "is_corner");
    const Plane plane = make_plane(dq);
    const double h = 1e-7 * std::max(1.0, b.components().norm());
    const double f0 = process_norm(family, b);
    for (Eigen::Index i = 0; i < plane.basis.cols(); ++i) {
        const RVector d = plane.basis.col(i);
        const double up =
            (process_norm(family, TangentVector(b.components() + h * d)) - f0) /
            h;
        const double down =
            (process_norm(family, TangentVector(b.components() - h * d)) - f0) /
            h;
        if (up + down > gap) {
            return true;
        }
    }
    return false;
}

CornerDecomposition corner_decomposition(const OneForm &canonical) {
    if (!is_canonical(canonical)) {
        throw ArgumentError("corner_decomposition: form is not canonical "
                            "(need 1 = q_1 >= |q_2| >= ... >= |q_N| > 0)");
    }
    const std::size_t n = canonical.size();
    CornerDecomposition out;
    std::vector<int> first(n);
    for (std::size_t j = 0; j < n; ++j) {
        first[j] = sgn(canonical[j]);
    }
    out.strings.push_back(first);
    out.weights.push_back(0.5 * (1.0 + std::abs(canonical[n - 1])));
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<int> z(n);
        for (std::size_t j = 0; j < n; ++j) {
            z[j] = j < k ? first[j] : -first[j];
        }
        out.strings.push_back(std::move(z));
        out.weights.push_back(
            0.5 * (std::abs(canonical[k - 1]) - std::abs(canonical[k])));
    }
    return out;
}

CornerDecomposition corner_about_axis(const OneForm &dq, std::size_t lead) {
    if (lead >= dq.size() || dq[lead] == 0.0) {
        throw ArgumentError("corner_about_axis: lead component is zero");
    }
    const double lead_abs = std::abs(dq[lead]);
    std::vector<std::size_t> order{lead};
    for (std::size_t j = 0; j < dq.size(); ++j) {
        if (j == lead || dq[j] == 0.0) {
            continue;
        }
        if (std::abs(dq[j]) > lead_abs * (1.0 + 1e-12)) {
            throw ArgumentError(
                "corner_about_axis: lead component is not the largest");
        }
        order.push_back(j);
    }
    std::stable_sort(order.begin() + 1, order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return std::abs(dq[a]) > std::abs(dq[b]);
                     });
    const int orientation = sgn(dq[lead]);
    RVector c(static_cast<Eigen::Index>(order.size()));
    for (std::size_t k = 0; k < order.size(); ++k) {
        c(static_cast<Eigen::Index>(k)) =
            std::clamp(dq[order[k]] / dq[lead], -1.0, 1.0);
    }
    c(0) = 1.0;
    const CornerDecomposition canon = corner_decomposition(OneForm(c));
    CornerDecomposition out;
    out.scale = lead_abs;
    out.lead = lead;
    out.weights = canon.weights;
    for (const auto &z : canon.strings) {
        std::vector<int> full(dq.size(), 0);
        for (std::size_t k = 0; k < order.size(); ++k) {
            full[order[k]] = orientation * z[k];
        }
        out.strings.push_back(std::move(full));
    }
    return out;
}

// ---------------------------------------------------------------------------
// b_min and the dual norm

BMinResult b_min_solve(const ProcessFamily &family, const OneForm &dq,
                       const MinimizerOptions &options) {
    require_length(family, dq.size(), "b_min_solve");
    if (dq.is_zero()) {
        throw ArgumentError("b_min_solve: zero form");
    }
    switch (family.kind()) {
    case ProcessFamily::Kind::PauliZ: {
        const CanonicalForm cf = canonicalize(dq);
        BMinResult out;
        out.b_min = cf.to_original(TangentVector::axis(cf.permutation.size(), 0));
        out.norm = 1.0 / cf.scale;
        out.dual_norm = cf.scale;
        const RVector &c = cf.canonical.components();
        out.at_corner = (c.cwiseAbs().array() != 1.0).any();
        const CornerDecomposition dec =
            corner_about_axis(dq, cf.permutation.front());
        std::vector<std::vector<int>> faces;
        for (std::size_t k = 0; k < dec.strings.size(); ++k) {
            if (dec.weights[k] >= 1e-15) {
                faces.push_back(dec.strings[k]);
            }
        }
        out.adjacent_faces = std::move(faces);
        return out;
    }
    case ProcessFamily::Kind::Bloch: {
        const RVector &q = dq.components();
        BMinResult out;
        out.b_min = TangentVector(q / q.squaredNorm());
        out.norm = 1.0 / q.norm();
        out.dual_norm = q.norm();
        return out;
    }
    case ProcessFamily::Kind::EpsilonPair:
    case ProcessFamily::Kind::CustomUnitary: {
        BMinResult out = numerical_b_min(family, dq, options);
        if (family.kind() == ProcessFamily::Kind::EpsilonPair) {
            // The iterate can only approach a kink; snap to it when the
            // exact vertex is at least as short.
            std::vector<std::size_t> axes{1};
            if (family.epsilon() == 0.0) {
                axes.insert(axes.begin(), 0);
            }
            std::optional<TangentVector> snapped;
            double snapped_norm = out.norm + 1e-9;
            for (std::size_t j : axes) {
                if (dq[j] == 0.0) {
                    continue;
                }
                const TangentVector v(RVector(
                    RVector::Unit(2, static_cast<Eigen::Index>(j)) / dq[j]));
                const double nv = process_norm(family, v);
                if (nv <= snapped_norm &&
                    (!snapped || nv < snapped_norm - 1e-12 ||
                     lexicographically_less(v.components(),
                                            snapped->components()))) {
                    snapped = v;
                    snapped_norm = nv;
                }
            }
            if (snapped) {
                out.b_min = *snapped;
                out.norm = snapped_norm;
                out.dual_norm = 1.0 / snapped_norm;
                out.at_corner = is_corner(family, dq, out.b_min);
            }
        }
        if (family.kind() == ProcessFamily::Kind::EpsilonPair && out.at_corner) {
            // Corners sit on the ±∂_2 cusps (and on ±∂_1 as well at ε = 0).
            std::size_t lead = std::abs(dq[1]) >= std::abs(dq[0]) ? 1 : 0;
            if (family.epsilon() > 0.0) {
                lead = 1;
            }
            if (std::abs(dq[lead]) + 1e-12 >= std::abs(dq[1 - lead])) {
                const CornerDecomposition dec = corner_about_axis(dq, lead);
                std::vector<std::vector<int>> faces;
                for (std::size_t k = 0; k < dec.strings.size(); ++k) {
                    if (dec.weights[k] >= 1e-15) {
                        faces.push_back(dec.strings[k]);
                    }
                }
                out.adjacent_faces = std::move(faces);
            }
        }
        return out;
    }
    }
    throw ArgumentError("b_min_solve: unknown family");
}

double dual_norm(const ProcessFamily &family, const OneForm &dq,
                 const MinimizerOptions &options) {
    require_length(family, dq.size(), "dual_norm");
    if (dq.is_zero()) {
        return 0.0;
    }
    switch (family.kind()) {
    case ProcessFamily::Kind::PauliZ:
        return dq.components().cwiseAbs().maxCoeff();
    case ProcessFamily::Kind::Bloch:
        return dq.components().norm();
    default:
        return b_min_solve(family, dq, options).dual_norm;
    }
}

UnitBallMesh unit_ball_mesh(const ProcessFamily &family,
                            std::size_t resolution) {
    const std::size_t n = family.parameter_count();
    if (n < 1 || n > 3) {
        throw UnsupportedError("unit_ball_mesh: unsupported dimension N = " +
                               std::to_string(n) + " (need N <= 3)");
    }
    if (resolution < 1) {
        throw ArgumentError("unit_ball_mesh: resolution must be positive");
    }
    UnitBallMesh mesh;
    mesh.norm = family.name();
    // A segment has only its two endpoints.
    const std::size_t count = n == 1 ? 2 : resolution;
    for (std::size_t i = 0; i < count; ++i) {
        RVector d;
        if (n == 1) {
            d = RVector::Constant(1, i == 0 ? 1.0 : -1.0);
        } else if (n == 2) {
            const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) /
                               static_cast<double>(resolution);
            d = RVector(2);
            d << std::cos(phi), std::sin(phi);
        } else {
            d = fibonacci_direction(i, resolution);
        }
        mesh.samples.push_back(d / process_norm(family, TangentVector(d)));
    }
    auto add_axis = [&](std::size_t j) {
        for (double s : {1.0, -1.0}) {
            RVector v = RVector::Zero(static_cast<Eigen::Index>(n));
            v(static_cast<Eigen::Index>(j)) = s;
            mesh.vertices.push_back(v);
        }
    };
    switch (family.kind()) {
    case ProcessFamily::Kind::PauliZ:
        for (std::size_t j = 0; j < n; ++j) {
            add_axis(j);
        }
        break;
    case ProcessFamily::Kind::EpsilonPair:
        if (family.epsilon() == 0.0) {
            add_axis(0);
        }
        add_axis(1);
        break;
    default:
        break;
    }
    return mesh;
}

} // namespace qproc
