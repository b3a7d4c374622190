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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <numeric>

#include "qproc/errors.hpp"
#include "qproc/estimation.hpp"

using namespace qproc;
using Catch::Matchers::WithinAbs;

namespace {

OutcomeRecord record(std::size_t branch, std::vector<std::uint64_t> counts) {
    OutcomeRecord r;
    r.branch = branch;
    r.shots = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    r.counts = std::move(counts);
    return r;
}

/// Straight binomial sum with incremental coefficients.
double arcsine_mean_oracle(unsigned m, double s) {
    const double p = 0.5 * (1.0 + std::sin(s));
    double total = 0.0;
    double coeff = 1.0;
    for (unsigned k = 0; k <= m; ++k) {
        if (k > 0) {
            coeff = coeff * static_cast<double>(m - k + 1) / static_cast<double>(k);
        }
        const double w = coeff * std::pow(p, k) * std::pow(1.0 - p, m - k);
        total += w * std::asin(2.0 * k / m - 1.0);
    }
    return total;
}

} // namespace

TEST_CASE("philox known answers") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) ==
          C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                            K{0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                            K{0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("philox streams") {
    Philox4x32 a(7, 0);
    Philox4x32 b(7, 0);
    Philox4x32 c(7, 1);
    int same = 0;
    for (int i = 0; i < 64; ++i) {
        const auto x = a();
        CHECK(x == b());
        same += x == c() ? 1 : 0;
    }
    CHECK(same < 2);
}

TEST_CASE("apportion") {
    const Protocol corner = corner_protocol(OneForm{1.0, 0.5});
    CHECK(apportion(corner, 10000) == std::vector<std::uint64_t>{7500, 2500});
    CHECK(apportion(corner, 3) == std::vector<std::uint64_t>{2, 1});
    const Protocol five = corner_strategy(OneForm{1.0, 0.8, 2.0 / 3.0, -0.5, 0.25});
    for (std::uint64_t m : {1ULL, 7ULL, 100ULL, 12345ULL}) {
        const auto a = apportion(five, m);
        CHECK(std::accumulate(a.begin(), a.end(), std::uint64_t{0}) == m);
        for (std::size_t n = 0; n < a.size(); ++n) {
            CHECK(std::abs(static_cast<double>(a[n]) -
                           five.branches[n].weight * static_cast<double>(m)) < 1.0);
        }
    }
    // Equal remainders go to the lower index.
    const Protocol half = mixture({{0.5, hyperface_protocol(SignString({1, 1}))},
                                   {0.5, hyperface_protocol(SignString({1, -1}))}});
    CHECK(apportion(half, 3) == std::vector<std::uint64_t>{2, 1});
}

TEST_CASE("simulate") {
    const auto fam = ProcessFamily::pauli_z(2);
    const Protocol face = hyperface_protocol(SignString({1, 1}));
    SECTION("counts are consistent") {
        const auto recs = simulate(face, fam, RVector::Zero(2), 1000, 1);
        REQUIRE(recs.size() == 1);
        CHECK(recs[0].shots == 1000);
        CHECK(std::accumulate(recs[0].counts.begin(), recs[0].counts.end(), std::uint64_t{0}) ==
              1000);
    }
    SECTION("fiducial point splits evenly") {
        const std::uint64_t m = 200000;
        const auto recs = simulate(face, fam, RVector::Zero(2), m, 2);
        const double f = static_cast<double>(recs[0].counts[0]) / static_cast<double>(m);
        CHECK(std::abs(f - 0.5) < 5.0 * std::sqrt(0.25 / static_cast<double>(m)));
    }
    SECTION("z.theta = pi/6 gives a plus frequency of 0.75") {
        const std::uint64_t m = 200000;
        const RVector theta = (RVector(2) << std::numbers::pi / 12, std::numbers::pi / 12).finished();
        const auto probs = branch_probabilities(face.branches[0], fam, theta);
        CHECK_THAT(probs[0], WithinAbs(0.75, 1e-12));
        const auto recs = simulate(face, fam, theta, m, 3);
        const double f = static_cast<double>(recs[0].counts[0]) / static_cast<double>(m);
        CHECK(std::abs(f - 0.75) < 5.0 * std::sqrt(0.75 * 0.25 / static_cast<double>(m)));
    }
    SECTION("deterministic in the seed") {
        const Protocol corner = corner_protocol(OneForm{1.0, 0.5});
        const RVector theta = (RVector(2) << 0.01, -0.02).finished();
        const auto a = simulate(corner, fam, theta, 5000, 99, 4);
        const auto b = simulate(corner, fam, theta, 5000, 99, 4);
        const auto c = simulate(corner, fam, theta, 5000, 100, 4);
        bool differs = false;
        for (std::size_t n = 0; n < a.size(); ++n) {
            CHECK(a[n].counts == b[n].counts);
            differs = differs || a[n].counts != c[n].counts;
        }
        CHECK(differs);
    }
    SECTION("wrong theta length") {
        CHECK_THROWS_AS(simulate(face, fam, RVector::Zero(3), 10, 0), ArgumentError);
    }
}

TEST_CASE("study output does not depend on the thread count") {
    const auto fam = ProcessFamily::pauli_z(2);
    const Protocol corner = corner_protocol(OneForm{1.0, 0.5});
    const RVector theta = (RVector(2) << 0.01, 0.0).finished();
    StudyOptions opt;
    opt.shots = 500;
    opt.repetitions = 200;
    opt.seed = 5;
    opt.threads = 1;
    const StudySamples one = run_study(corner, fam, theta, opt);
    opt.threads = 4;
    const StudySamples four = run_study(corner, fam, theta, opt);
    CHECK(one.q_hat == four.q_hat);
}

TEST_CASE("estimate_q") {
    const Protocol face = hyperface_protocol(SignString({1}));
    SECTION("fiducial frequencies") {
        CHECK(estimate_q({record(0, {50, 50})}, face) == 0.0);
        const Protocol corner = corner_protocol(OneForm{1.0, 0.5});
        CHECK(estimate_q({record(0, {30, 30}), record(1, {10, 10})}, corner) == 0.0);
    }
    SECTION("f = 0.75") {
        CHECK_THAT(estimate_q({record(0, {75, 25})}, face),
                   WithinAbs(std::numbers::pi / 6, 1e-15));
        const Protocol corner = corner_protocol(OneForm{1.0, 0.5});
        CHECK_THAT(estimate_q({record(0, {75, 25}), record(1, {20, 20})}, corner),
                   WithinAbs(0.75 * std::numbers::pi / 6, 1e-15));
    }
    SECTION("clamped frequencies") {
        CHECK_THAT(estimate_q({record(0, {10, 0})}, face), WithinAbs(std::numbers::pi / 2, 1e-15));
    }
    SECTION("corner estimate approaches delta") {
        const auto fam = ProcessFamily::pauli_z(2);
        const Protocol corner = corner_protocol(OneForm{1.0, 0.5});
        const double delta = 0.01;
        const RVector theta = (RVector(2) << delta, 0.0).finished();
        StudyOptions opt;
        opt.shots = 100000;
        opt.repetitions = 200;
        opt.seed = 11;
        const StudySamples s = run_study(corner, fam, theta, opt);
        const double mean = std::accumulate(s.q_hat.begin(), s.q_hat.end(), 0.0) / 200.0;
        // Per-repetition sd is about 1/sqrt(M).
        CHECK(std::abs(mean - delta) < 5.0 / std::sqrt(1e5 * 200.0));
    }
    SECTION("empty branch") {
        const Protocol corner = corner_protocol(OneForm{1.0, 0.5});
        CHECK_THROWS_AS(estimate_q({record(0, {5, 5}), record(1, {0, 0})}, corner),
                        EstimationError);
    }
}

TEST_CASE("debias") {
    const std::vector<RVector> raw{(RVector(2) << 0.2, -0.4).finished(),
                                   (RVector(2) << 1.0, 3.0).finished()};
    const auto id = make_bias_correction(RVector::Zero(2), RMatrix::Identity(2, 2));
    CHECK(debias(id, raw) == raw);
    const auto twice = make_bias_correction(RVector::Zero(2), 2.0 * RMatrix::Identity(2, 2));
    const auto halved = debias(twice, raw);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        CHECK((halved[i] - 0.5 * raw[i]).norm() == 0.0);
    }
    const auto shifted =
        make_bias_correction((RVector(2) << 0.1, 0.2).finished(), RMatrix::Identity(2, 2));
    CHECK((debias(shifted, raw[0]) - (RVector(2) << 0.1, -0.6).finished()).norm() < 1e-15);
    RMatrix bad = RMatrix::Identity(2, 2);
    bad(1, 1) = 1e-9;
    CHECK_THROWS_AS(make_bias_correction(RVector::Zero(2), bad), DegenerateModelError);
}

TEST_CASE("arcsine calibration") {
    for (unsigned m : {1U, 2U, 10U, 57U, 400U}) {
        for (double s : {0.0, 0.01, -0.2, 0.7}) {
            CHECK_THAT(arcsine_mean(m, s), WithinAbs(arcsine_mean_oracle(m, s), 1e-12));
        }
    }
    CHECK(arcsine_mean(100, 0.0) == Catch::Approx(0.0).margin(1e-14));
    // The slope at the fiducial point tends to one.
    const Protocol face = hyperface_protocol(SignString({1, 1}));
    const BiasCorrection c = calibrate(face, ProcessFamily::pauli_z(2), 10000);
    CHECK(std::abs(c.offset(0)) < 1e-12);
    CHECK_THAT(c.jacobian(0, 0), WithinAbs(1.0, 1e-3));
}

TEST_CASE("report") {
    const FisherMatrix f(RMatrix::Identity(1, 1));
    const OneForm dq{1.0};
    SECTION("identical samples raise the sanity alarm") {
        const std::vector<double> same(20, 0.3);
        const EstimatorReport r = report(same, 1.0, 100, f, dq);
        CHECK(r.empirical_variance == 0.0);
        CHECK(r.verdict == "below");
        CHECK(r.sanity_alarm);
    }
    SECTION("statistics") {
        const std::vector<double> x{0.1, -0.1, 0.2, -0.2};
        const EstimatorReport r = report(x, 1.0, 10, f, dq);
        CHECK_THAT(r.mean, WithinAbs(0.0, 1e-16));
        CHECK_THAT(r.empirical_variance, WithinAbs(0.1 / 3.0, 1e-15));
        CHECK_THAT(r.variance_standard_error, WithinAbs(std::sqrt(2.0 / 3.0) * 0.1 / 3.0, 1e-15));
        CHECK_THAT(r.bound, WithinAbs(0.1, 1e-16));
        CHECK(r.repetitions == 4);
        CHECK(!r.sanity_alarm);
    }
    SECTION("too few samples") {
        CHECK_THROWS_AS(report({1.0}, 1.0, 10, f, dq), ArgumentError);
    }
    SECTION("simulated corner study passes the ccrb check") {
        const auto fam = ProcessFamily::pauli_z(2);
        const OneForm q{1.0, 0.5};
        const Protocol corner = corner_protocol(q);
        StudyOptions opt;
        opt.shots = 2000;
        opt.repetitions = 2000;
        opt.seed = 8;
        const StudySamples s = run_study(corner, fam, RVector::Zero(2), opt);
        const FisherMatrix fc = protocol_fisher(corner, fam);
        const EstimatorReport r =
            report(s.q_hat, 1.0, opt.shots, fc, q, s.readouts, &corner, 0.1);
        REQUIRE(r.ccrb.has_value());
        CHECK(r.ccrb->mode == "full");
        CHECK(r.ccrb->passed);
        CHECK(r.within_tolerance);
        CHECK(std::abs(r.mean) < 3.0 * r.mean_standard_error + 1e-12);
    }
}

TEST_CASE("bias fit") {
    const std::vector<double> d{0.005, 0.01, 0.02};
    const std::vector<double> se{1e-4, 1e-4, 1e-4};
    std::vector<double> quad;
    std::vector<double> lin;
    for (double x : d) {
        quad.push_back(3.0 * x * x);
        lin.push_back(0.5 * x + 3.0 * x * x);
    }
    const BiasFit a = fit_bias(d, quad, se);
    CHECK_THAT(a.linear, WithinAbs(0.0, 1e-10));
    CHECK_THAT(a.quadratic, WithinAbs(3.0, 1e-8));
    const BiasFit b = fit_bias(d, lin, se);
    CHECK_THAT(b.linear, WithinAbs(0.5, 1e-10));
    CHECK(std::abs(b.linear_z()) > 3.0);
    CHECK_THROWS_AS(fit_bias({0.1}, {0.0}, {1.0}), ArgumentError);
}

TEST_CASE("csv") {
    EstimatorReport r;
    r.shots = 100;
    r.repetitions = 10;
    r.empirical_variance = 0.25;
    r.bound = 0.01;
    r.z_score = -1.5;
    CHECK(csv_header() == "protocol,dq,M,R,variance,bound,z_score,seed");
    CHECK(csv_row("corner", OneForm{1.0, 0.5}, r, 42) ==
          "corner,1;0.5,100,10,0.25,0.01,-1.5,42");
}
