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
 * Exception hierarchy shared by every qproc module.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qproc {

/// Root of all qproc errors; `kind()` is a stable machine-readable tag.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string &what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    [[nodiscard]] const std::string &kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

/// Malformed or mismatched arguments.
class ArgumentError : public Error {
  public:
    explicit ArgumentError(const std::string &what)
        : Error("argument", what) {}
};

/// A domain-type invariant (Hermiticity, normalization, ...) does not hold.
class InvariantError : public Error {
  public:
    explicit InvariantError(const std::string &what)
        : Error("invariant", what) {}
};

/// A configured resource limit (e.g. Hilbert-space dimension) was exceeded.
class ResourceError : public Error {
  public:
    explicit ResourceError(const std::string &what)
        : Error("resource", what) {}
};

/// The target form leaks into the null space of a degenerate Fisher matrix,
/// so the marginal variance is infinite.
class UnboundedVarianceError : public Error {
  public:
    explicit UnboundedVarianceError(const std::string &what)
        : Error("unbounded-variance", what) {}
};

/// SLD equation has no solution: the derivative has weight where the state
/// has none.
class InconsistentDerivativeError : public Error {
  public:
    explicit InconsistentDerivativeError(const std::string &what)
        : Error("inconsistent-derivative", what) {}
};

/// A measurement model produced invalid probabilities.
class ModelError : public Error {
  public:
    explicit ModelError(const std::string &what) : Error("model", what) {}
};

/// Iterative solver failed; carries the best iterate found.
class NumericalError : public Error {
  public:
    NumericalError(const std::string &what, std::vector<double> best,
                   double best_value)
        : Error("numerical", what), best_(std::move(best)),
          best_value_(best_value) {}
    [[nodiscard]] const std::vector<double> &best_iterate() const noexcept {
        return best_;
    }
    [[nodiscard]] double best_value() const noexcept { return best_value_; }

  private:
    std::vector<double> best_;
    double best_value_;
};

/// One link of F_bb <= Q_bb <= ||b||^2 is violated.
class ChainViolationError : public Error {
  public:
    ChainViolationError(const std::string &what, std::string link,
                        double excess)
        : Error("chain-violation", what), link_(std::move(link)),
          excess_(excess) {}
    [[nodiscard]] const std::string &link() const noexcept { return link_; }
    [[nodiscard]] double excess() const noexcept { return excess_; }

  private:
    std::string link_;
    double excess_;
};

class EstimationError : public Error {
  public:
    explicit EstimationError(const std::string &what)
        : Error("estimation", what) {}
};

/// Ill-conditioned bias-correction Jacobian.
class DegenerateModelError : public Error {
  public:
    explicit DegenerateModelError(const std::string &what)
        : Error("degenerate-model", what) {}
};

/// Requested construction exists in principle but is not built here
/// (e.g. corner protocols for arbitrary custom generators).
class UnsupportedError : public Error {
  public:
    explicit UnsupportedError(const std::string &what)
        : Error("unsupported", what) {}
};

} // namespace qproc
