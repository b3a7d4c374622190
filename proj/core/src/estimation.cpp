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

#include "qproc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "qproc/errors.hpp"

namespace qproc {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53U;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57U;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9U;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85U;

std::uint64_t stream_id(std::uint64_t repetition, std::size_t branch) {
    return (repetition << 20U) ^ static_cast<std::uint64_t>(branch);
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
    unsigned t = requested ? requested
                           : std::max(1U, std::thread::hardware_concurrency());
    return static_cast<unsigned>(
        std::min<std::size_t>(t, std::max<std::size_t>(1, jobs)));
}

// Draw counts for every branch from precomputed distributions.
std::vector<OutcomeRecord>
draw(const std::vector<std::vector<double>> &probs,
     const std::vector<std::uint64_t> &shots, std::uint64_t seed,
     std::uint64_t repetition) {
    std::vector<OutcomeRecord> out;
    out.reserve(probs.size());
    for (std::size_t n = 0; n < probs.size(); ++n) {
        Philox4x32 rng(seed, stream_id(repetition, n));
        out.push_back(
            OutcomeRecord{n, sample_counts(probs[n], shots[n], rng), shots[n]});
    }
    return out;
}

std::vector<std::vector<double>> all_probabilities(const Protocol &p,
                                                   const ProcessFamily &family,
                                                   const RVector &theta) {
    std::vector<std::vector<double>> probs;
    probs.reserve(p.branches.size());
    for (const auto &br : p.branches) {
        probs.push_back(branch_probabilities(br, family, theta));
    }
    return probs;
}

double sample_variance(const std::vector<double> &x, double mean) {
    // A rounded mean would otherwise leave a tiny spread on constant data.
    if (std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end()) {
        return 0.0;
    }
    double ss = 0.0;
    for (double v : x) {
        ss += (v - mean) * (v - mean);
    }
    return ss / static_cast<double>(x.size() - 1);
}

} // namespace

// ---------------------------------------------------------------------------
// Philox

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32U);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32U);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32U)},
      counter_{0, 0, static_cast<std::uint32_t>(stream),
               static_cast<std::uint32_t>(stream >> 32U)} {}

Philox4x32::result_type Philox4x32::operator()() {
    if (used_ == 4) {
        buffer_ = block(counter_, key_);
        if (++counter_[0] == 0) {
            ++counter_[1];
        }
        used_ = 0;
    }
    return buffer_[used_++];
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<std::uint64_t> apportion(const Protocol &p, std::uint64_t shots) {
    const std::size_t n = p.branches.size();
    std::vector<std::uint64_t> out(n);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::uint64_t assigned = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double exact = p.branches[k].weight * static_cast<double>(shots);
        out[k] = static_cast<std::uint64_t>(std::floor(exact));
        assigned += out[k];
        remainders.emplace_back(exact - std::floor(exact), k);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto &a, const auto &b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < shots && i < remainders.size(); ++i) {
        ++out[remainders[i].second];
        ++assigned;
    }
    return out;
}

std::vector<std::uint64_t> sample_counts(const std::vector<double> &probs,
                                         std::uint64_t shots, Philox4x32 &rng) {
    std::vector<std::uint64_t> counts(probs.size(), 0);
    std::size_t last = probs.size();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0) {
            last = i;
        }
    }
    if (last == probs.size()) {
        throw EstimationError("sample_counts: distribution has no mass");
    }
    std::uint64_t remaining = shots;
    double mass = 1.0;
    for (std::size_t i = 0; i < last && remaining > 0; ++i) {
        if (probs[i] <= 0.0) {
            continue;
        }
        const double p = std::clamp(probs[i] / mass, 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> bin(remaining, p);
        counts[i] = bin(rng);
        remaining -= counts[i];
        mass = std::max(mass - probs[i], 0.0);
    }
    counts[last] += remaining;
    return counts;
}

std::vector<OutcomeRecord> simulate(const Protocol &p,
                                    const ProcessFamily &family,
                                    const RVector &theta_true,
                                    std::uint64_t shots, std::uint64_t seed,
                                    std::uint64_t repetition) {
    validate(p);
    if (static_cast<std::size_t>(theta_true.size()) != p.family_dim) {
        throw ArgumentError("simulate: theta_true has the wrong length");
    }
    if (shots == 0) {
        throw ArgumentError("simulate: shots must be positive");
    }
    return draw(all_probabilities(p, family, theta_true), apportion(p, shots),
                seed, repetition);
}

// ---------------------------------------------------------------------------
// Estimators

RVector readout_estimates(const std::vector<OutcomeRecord> &records,
                          const Protocol &p) {
    if (records.size() != p.branches.size()) {
        throw EstimationError("readout_estimates: one record per branch needed");
    }
    std::size_t total = 0;
    for (const auto &br : p.branches) {
        total += br.readouts.size();
    }
    RVector s(static_cast<Eigen::Index>(total));
    Eigen::Index g = 0;
    for (std::size_t n = 0; n < p.branches.size(); ++n) {
        const auto &rec = records[n];
        for (const auto &r : p.branches[n].readouts) {
            const auto plus = static_cast<double>(rec.counts.at(r.plus));
            const auto minus = static_cast<double>(rec.counts.at(r.minus));
            const double m = plus + minus;
            s(g++) = m > 0.0 ? std::asin(clamp_unit((plus - minus) / m)) : 0.0;
        }
    }
    return s;
}

double estimate_q(const std::vector<OutcomeRecord> &records, const Protocol &p,
                  const RVector &readouts) {
    if (records.size() != p.branches.size()) {
        throw EstimationError("estimate_q: one record per branch needed");
    }
    double q = 0.0;
    Eigen::Index g = 0;
    for (std::size_t n = 0; n < p.branches.size(); ++n) {
        const auto &rec = records[n];
        const auto &br = p.branches[n];
        if (rec.shots == 0) {
            throw EstimationError("estimate_q: branch " + std::to_string(n) +
                                  " received no shots");
        }
        for (const auto &r : br.readouts) {
            const auto k = static_cast<double>(rec.counts.at(r.plus) +
                                               rec.counts.at(r.minus));
            q += br.weight * r.coefficient *
                 (k / static_cast<double>(rec.shots)) * readouts(g++);
        }
    }
    return q;
}

double estimate_q(const std::vector<OutcomeRecord> &records,
                  const Protocol &p) {
    return estimate_q(records, p, readout_estimates(records, p));
}

// ---------------------------------------------------------------------------
// Bias correction

BiasCorrection make_bias_correction(RVector offset, RMatrix jacobian) {
    if (jacobian.rows() != jacobian.cols() ||
        jacobian.rows() != offset.size()) {
        throw ArgumentError("bias correction: inconsistent sizes");
    }
    double cond = 1.0;
    if (jacobian.size() > 0) {
        Eigen::JacobiSVD<RMatrix> svd(jacobian);
        const RVector &sv = svd.singularValues();
        const double smin = sv(sv.size() - 1);
        cond = smin > 0.0 ? sv(0) / smin
                          : std::numeric_limits<double>::infinity();
    }
    if (!(cond < 1e8)) {
        throw DegenerateModelError(
            "bias correction: Jacobian condition number " + fmt(cond) +
            " is too large");
    }
    return BiasCorrection{std::move(offset), std::move(jacobian), cond};
}

RVector debias(const BiasCorrection &c, const RVector &raw) {
    if (raw.size() != c.offset.size()) {
        throw ArgumentError("debias: sample has the wrong length");
    }
    return c.jacobian.partialPivLu().solve(RVector(raw - c.offset));
}

std::vector<RVector> debias(const BiasCorrection &c,
                            const std::vector<RVector> &raw) {
    std::vector<RVector> out;
    out.reserve(raw.size());
    const auto lu = c.jacobian.partialPivLu();
    for (const auto &r : raw) {
        if (r.size() != c.offset.size()) {
            throw ArgumentError("debias: sample has the wrong length");
        }
        out.push_back(lu.solve(RVector(r - c.offset)));
    }
    return out;
}

double arcsine_mean(std::uint64_t m, double s) {
    if (m == 0) {
        return 0.0;
    }
    const double p = std::clamp(0.5 * (1.0 + std::sin(s)), 0.0, 1.0);
    const auto md = static_cast<double>(m);
    if (p == 0.0) {
        return -std::numbers::pi / 2.0;
    }
    if (p == 1.0) {
        return std::numbers::pi / 2.0;
    }
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double lgm = std::lgamma(md + 1.0);
    double sum = 0.0;
    for (std::uint64_t k = 0; k <= m; ++k) {
        const auto kd = static_cast<double>(k);
        const double logw = lgm - std::lgamma(kd + 1.0) -
                            std::lgamma(md - kd + 1.0) + kd * lp +
                            (md - kd) * lq;
        if (logw < -745.0) {
            continue;
        }
        sum += std::exp(logw) * std::asin(clamp_unit(2.0 * kd / md - 1.0));
    }
    return sum;
}

BiasCorrection calibrate(const Protocol &p, const ProcessFamily &family,
                         std::uint64_t shots) {
    validate(p);
    const std::vector<std::uint64_t> alloc = apportion(p, shots);
    const RVector zero = RVector::Zero(static_cast<Eigen::Index>(p.family_dim));
    std::vector<double> offsets;
    std::vector<double> slopes;
    constexpr double h = 1e-4;
    for (std::size_t n = 0; n < p.branches.size(); ++n) {
        const auto probs = branch_probabilities(p.branches[n], family, zero);
        for (const auto &r : p.branches[n].readouts) {
            const double pp = probs[r.plus];
            const double pm = probs[r.minus];
            const double pair_mass = pp + pm;
            const auto m = static_cast<std::uint64_t>(
                std::llround(static_cast<double>(alloc[n]) * pair_mass));
            if (m == 0 || pair_mass <= 0.0) {
                offsets.push_back(0.0);
                slopes.push_back(1.0);
                continue;
            }
            const double s0 = std::asin(clamp_unit((pp - pm) / pair_mass));
            offsets.push_back(arcsine_mean(m, s0));
            slopes.push_back((arcsine_mean(m, s0 + h) - arcsine_mean(m, s0 - h)) /
                             (2.0 * h));
        }
    }
    const auto g = static_cast<Eigen::Index>(offsets.size());
    RVector off(g);
    RMatrix jac = RMatrix::Zero(g, g);
    for (Eigen::Index i = 0; i < g; ++i) {
        off(i) = offsets[static_cast<std::size_t>(i)];
        jac(i, i) = slopes[static_cast<std::size_t>(i)];
    }
    return make_bias_correction(std::move(off), std::move(jac));
}

// ---------------------------------------------------------------------------
// Studies

StudySamples run_study(const Protocol &p, const ProcessFamily &family,
                       const RVector &theta_true, const StudyOptions &options) {
    validate(p);
    if (static_cast<std::size_t>(theta_true.size()) != p.family_dim) {
        throw ArgumentError("run_study: theta_true has the wrong length");
    }
    if (options.shots == 0 || options.repetitions == 0) {
        throw ArgumentError("run_study: shots and repetitions must be positive");
    }
    const auto probs = all_probabilities(p, family, theta_true);
    const auto alloc = apportion(p, options.shots);
    for (std::size_t n = 0; n < alloc.size(); ++n) {
        if (alloc[n] == 0) {
            throw EstimationError("run_study: branch " + std::to_string(n) +
                                  " receives no shots at this budget");
        }
    }
    std::optional<BiasCorrection> correction;
    if (options.debias) {
        correction = calibrate(p, family, options.shots);
    }

    const auto reps = static_cast<std::size_t>(options.repetitions);
    StudySamples out;
    out.q_hat.assign(reps, 0.0);
    out.readouts.assign(reps, RVector());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            const auto records = draw(probs, alloc, options.seed, r);
            RVector s = readout_estimates(records, p);
            if (correction) {
                s = debias(*correction, s);
            }
            out.q_hat[r] = estimate_q(records, p, s);
            out.readouts[r] = std::move(s);
        }
    };
    const unsigned workers = worker_count(options.threads, reps);
    if (workers <= 1) {
        work(0, reps);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (reps + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t b = w * chunk;
            const std::size_t e = std::min(reps, b + chunk);
            if (b < e) {
                pool.emplace_back(work, b, e);
            }
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    return out;
}

EstimatorReport report(const std::vector<double> &q_hat_samples,
                       double bound_per_shot, std::uint64_t shots,
                       const FisherMatrix &fisher, const OneForm &dq,
                       const std::vector<RVector> &readouts,
                       const Protocol *protocol, double tolerance) {
    const std::size_t r = q_hat_samples.size();
    if (r < 2) {
        throw ArgumentError("report: need at least two samples");
    }
    if (shots == 0 || !(bound_per_shot > 0.0)) {
        throw ArgumentError("report: shots and bound must be positive");
    }
    EstimatorReport rep;
    rep.q_hat_samples = q_hat_samples;
    rep.shots = shots;
    rep.repetitions = r;
    rep.tolerance = tolerance;
    const auto rd = static_cast<double>(r);
    const auto md = static_cast<double>(shots);
    rep.mean = std::accumulate(q_hat_samples.begin(), q_hat_samples.end(), 0.0) /
               rd;
    rep.empirical_variance = sample_variance(q_hat_samples, rep.mean);
    rep.mean_standard_error = std::sqrt(rep.empirical_variance / rd);
    const double rel_se = std::sqrt(2.0 / (rd - 1.0));
    rep.variance_standard_error = rel_se * rep.empirical_variance;
    rep.bound_per_shot = bound_per_shot;
    rep.bound = bound_per_shot / md;
    rep.z_score = (rep.empirical_variance - rep.bound) / (rel_se * rep.bound);
    const double ratio = rep.empirical_variance / rep.bound;
    if (std::abs(ratio - 1.0) <= tolerance) {
        rep.verdict = "within";
        rep.within_tolerance = true;
    } else {
        rep.verdict = ratio > 1.0 ? "above" : "below";
    }
    rep.sanity_alarm =
        (rep.empirical_variance == 0.0 && r > 10) || rep.z_score < -5.0;

    if (protocol != nullptr && readouts.size() == r) {
        const auto n = static_cast<Eigen::Index>(protocol->family_dim);
        std::vector<RVector> rows;
        std::vector<double> w;
        for (const auto &br : protocol->branches) {
            for (const auto &ro : br.readouts) {
                rows.push_back(ro.form.components());
                w.push_back(br.weight * ro.share);
            }
        }
        const auto g = static_cast<Eigen::Index>(rows.size());
        RMatrix design(g, n);
        RVector wv(g);
        for (Eigen::Index i = 0; i < g; ++i) {
            design.row(i) = rows[static_cast<std::size_t>(i)].transpose();
            wv(i) = w[static_cast<std::size_t>(i)];
        }
        CcrbCheck check;
        const RMatrix normal = design.transpose() * wv.asDiagonal() * design;
        Eigen::FullPivLU<RMatrix> lu(normal);
        const RMatrix finv = fisher.pseudo_inverse() / md;
        if (g > 0 && lu.rank() == n) {
            check.mode = "full";
            const RMatrix solve =
                lu.inverse() * design.transpose() * wv.asDiagonal();
            RVector mean_t = RVector::Zero(n);
            std::vector<RVector> thetas;
            thetas.reserve(r);
            for (const auto &s : readouts) {
                thetas.push_back(solve * s);
                mean_t += thetas.back();
            }
            mean_t /= rd;
            RMatrix cov = RMatrix::Zero(n, n);
            for (const auto &t : thetas) {
                cov += (t - mean_t) * (t - mean_t).transpose();
            }
            cov /= (rd - 1.0);
            Eigen::SelfAdjointEigenSolver<RMatrix> es(
                RMatrix(0.5 * ((cov - finv) + (cov - finv).transpose())),
                Eigen::EigenvaluesOnly);
            Eigen::SelfAdjointEigenSolver<RMatrix> ef(finv,
                                                      Eigen::EigenvaluesOnly);
            check.min_eigenvalue = es.eigenvalues().minCoeff();
            check.slack = 3.0 * rel_se * std::max(0.0, ef.eigenvalues().maxCoeff());
        } else {
            check.mode = "scalar";
            const double floor = fisher_dual(fisher, dq) / md;
            check.min_eigenvalue = rep.empirical_variance - floor;
            check.slack = 3.0 * rel_se * floor;
        }
        check.passed = check.min_eigenvalue >= -check.slack;
        rep.ccrb = check;
    }
    return rep;
}

BiasFit fit_bias(const std::vector<double> &magnitudes,
                 const std::vector<double> &bias,
                 const std::vector<double> &standard_errors) {
    const std::size_t k = magnitudes.size();
    if (k < 2 || bias.size() != k || standard_errors.size() != k) {
        throw ArgumentError("fit_bias: need at least two matching points");
    }
    RMatrix x(static_cast<Eigen::Index>(k), 2);
    RVector y(static_cast<Eigen::Index>(k));
    RVector w(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        if (!(standard_errors[i] > 0.0)) {
            throw ArgumentError("fit_bias: standard errors must be positive");
        }
        x(ii, 0) = magnitudes[i];
        x(ii, 1) = magnitudes[i] * magnitudes[i];
        y(ii) = bias[i];
        w(ii) = 1.0 / (standard_errors[i] * standard_errors[i]);
    }
    const RMatrix normal = x.transpose() * w.asDiagonal() * x;
    const RMatrix cov = normal.inverse();
    const RVector c = cov * (x.transpose() * w.asDiagonal() * y);
    return BiasFit{c(0), std::sqrt(cov(0, 0)), c(1), std::sqrt(cov(1, 1))};
}

BiasFit unbiasedness_study(const Protocol &p, const ProcessFamily &family,
                           const RVector &direction,
                           const std::vector<double> &magnitudes,
                           const StudyOptions &options) {
    std::vector<double> bias;
    std::vector<double> se;
    for (std::size_t i = 0; i < magnitudes.size(); ++i) {
        const RVector theta = magnitudes[i] * direction;
        StudyOptions opt = options;
        opt.seed = options.seed + i;
        const StudySamples s = run_study(p, family, theta, opt);
        const auto rd = static_cast<double>(s.q_hat.size());
        const double mean =
            std::accumulate(s.q_hat.begin(), s.q_hat.end(), 0.0) / rd;
        bias.push_back(mean - p.target.components().dot(theta));
        se.push_back(std::sqrt(sample_variance(s.q_hat, mean) / rd));
    }
    return fit_bias(magnitudes, bias, se);
}

std::string csv_header() {
    return "protocol,dq,M,R,variance,bound,z_score,seed";
}

std::string csv_row(const std::string &protocol, const OneForm &dq,
                    const EstimatorReport &r, std::uint64_t seed) {
    std::string q;
    for (std::size_t j = 0; j < dq.size(); ++j) {
        q += (j ? ";" : "") + fmt(dq[j]);
    }
    return protocol + "," + q + "," + std::to_string(r.shots) + "," +
           std::to_string(r.repetitions) + "," + fmt(r.empirical_variance) +
           "," + fmt(r.bound) + "," + fmt(r.z_score) + "," +
           std::to_string(seed);
}

} // namespace qproc
