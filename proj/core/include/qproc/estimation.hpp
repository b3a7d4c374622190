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
 * Monte-Carlo estimation: sample protocol outcomes at a true parameter point,
 * invert each readout's sine, remove local bias, and compare the spread of q̂
 * with the Cramér–Rao and process bounds.
 */
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qproc/process_norm.hpp"
#include "qproc/protocols.hpp"
#include "qproc/tangent.hpp"

namespace qproc {

/// Philox4x32-10 counter-based generator. A stream is fixed by a 64-bit key
/// and a 64-bit stream id; draws within a stream advance the low half of the
/// counter.
class Philox4x32 {
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;
    using result_type = std::uint32_t;

    /// One ten-round block.
    static Counter block(Counter counter, Key key);

    Philox4x32(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }
    result_type operator()();

  private:
    Key key_;
    Counter counter_;
    Counter buffer_{};
    std::size_t used_ = 4;
};

/// Shots and outcome counts of one branch.
struct OutcomeRecord {
    std::size_t branch = 0;
    /// Indexed like the branch's POVM outcomes.
    std::vector<std::uint64_t> counts;
    std::uint64_t shots = 0;
};

/// Largest-remainder split of `shots` by branch weight (ties to the lower
/// index).
std::vector<std::uint64_t> apportion(const Protocol &p, std::uint64_t shots);

/// Draws one data set at theta_true. Repetition r of a study uses
/// `repetition = r`; the RNG stream is keyed by (seed, repetition, branch).
std::vector<OutcomeRecord> simulate(const Protocol &p,
                                    const ProcessFamily &family,
                                    const RVector &theta_true,
                                    std::uint64_t shots, std::uint64_t seed,
                                    std::uint64_t repetition = 0);

/// Multinomial draw from a fixed distribution.
std::vector<std::uint64_t> sample_counts(const std::vector<double> &probs,
                                         std::uint64_t shots, Philox4x32 &rng);

/// arcsin(clamp(2f − 1)) per readout, in branch then readout order, where f
/// is the plus fraction within the readout's pair. Readouts whose pair got
/// no shots read 0.
RVector readout_estimates(const std::vector<OutcomeRecord> &records,
                          const Protocol &p);

/// q̂ = Σ_n p_n Σ_g c_g (k_g / k_n) ŝ_g with k_g the shots landing in readout
/// g and k_n the branch shots. Throws EstimationError on a branch without
/// shots.
double estimate_q(const std::vector<OutcomeRecord> &records, const Protocol &p);
double estimate_q(const std::vector<OutcomeRecord> &records, const Protocol &p,
                  const RVector &readouts);

/// Affine correction θ̄ = J⁻¹(θ̂ − offset).
struct BiasCorrection {
    RVector offset;
    RMatrix jacobian;
    double condition = 1.0;
};

/// Builds the correction; throws DegenerateModelError when the condition
/// number of the Jacobian is 1e8 or more.
BiasCorrection make_bias_correction(RVector offset, RMatrix jacobian);

RVector debias(const BiasCorrection &c, const RVector &raw);
std::vector<RVector> debias(const BiasCorrection &c,
                            const std::vector<RVector> &raw);

/// Exact E[arcsin(clamp(2k/m − 1))] for k ~ Binomial(m, ½(1 + sin s)).
double arcsine_mean(std::uint64_t m, double s);

/// Readout-space correction for the arcsine estimator at the given shot
/// budget: offsets are the exact means at the fiducial point, the Jacobian
/// is diagonal with entries d⟨ŝ_g⟩/ds_g.
BiasCorrection calibrate(const Protocol &p, const ProcessFamily &family,
                         std::uint64_t shots);

struct StudyOptions {
    std::uint64_t shots = 1000;
    std::uint64_t repetitions = 1000;
    std::uint64_t seed = 0;
    bool debias = true;
    /// 0 = hardware concurrency. Output does not depend on this.
    unsigned threads = 0;
};

/// Per-repetition estimates of a study.
struct StudySamples {
    std::vector<double> q_hat;
    /// Corrected readout estimates, one vector per repetition.
    std::vector<RVector> readouts;
};

StudySamples run_study(const Protocol &p, const ProcessFamily &family,
                       const RVector &theta_true, const StudyOptions &options);

struct CcrbCheck {
    /// "full" compares Cov(θ̂) with F⁺/M; "scalar" compares Var(q̂) with
    /// dq F⁺ dq / M when the readouts do not determine θ.
    std::string mode;
    bool passed = false;
    double min_eigenvalue = 0.0;
    double slack = 0.0;
};

struct EstimatorReport {
    std::vector<double> q_hat_samples;
    double mean = 0.0;
    double mean_standard_error = 0.0;
    double empirical_variance = 0.0;
    double variance_standard_error = 0.0;
    std::uint64_t shots = 0;
    std::size_t repetitions = 0;
    /// ||dq||_*², the per-shot bound.
    double bound_per_shot = 0.0;
    /// ||dq||_*² / M.
    double bound = 0.0;
    /// (Var − bound) / SE.
    double z_score = 0.0;
    double tolerance = 0.05;
    /// "within", "above" or "below" the tolerance band around the bound.
    std::string verdict;
    bool within_tolerance = false;
    /// Zero spread with more than ten repetitions cannot happen honestly.
    bool sanity_alarm = false;
    std::optional<CcrbCheck> ccrb;
};

/// Summary statistics and verdict. `readouts` (optional) feeds the CCRB
/// check. Throws ArgumentError with fewer than two samples.
EstimatorReport report(const std::vector<double> &q_hat_samples,
                       double bound_per_shot, std::uint64_t shots,
                       const FisherMatrix &fisher, const OneForm &dq,
                       const std::vector<RVector> &readouts = {},
                       const Protocol *protocol = nullptr,
                       double tolerance = 0.05);

/// Weighted least-squares fit bias(δ) = c1 δ + c2 δ².
struct BiasFit {
    double linear = 0.0;
    double linear_se = 0.0;
    double quadratic = 0.0;
    double quadratic_se = 0.0;
    [[nodiscard]] double linear_z() const {
        return linear_se > 0.0 ? linear / linear_se : 0.0;
    }
};

BiasFit fit_bias(const std::vector<double> &magnitudes,
                 const std::vector<double> &bias,
                 const std::vector<double> &standard_errors);

/// Runs a study at δ·direction for each magnitude and fits the bias of q̂
/// against q(θ) = dq·θ.
BiasFit unbiasedness_study(const Protocol &p, const ProcessFamily &family,
                           const RVector &direction,
                           const std::vector<double> &magnitudes,
                           const StudyOptions &options);

/// One CSV line: protocol,dq,M,R,variance,bound,z-score,seed.
std::string csv_header();
std::string csv_row(const std::string &protocol, const OneForm &dq,
                    const EstimatorReport &r, std::uint64_t seed);

} // namespace qproc
