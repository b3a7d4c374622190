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
 * JSON encoding of qproc values. Complex matrices are row-major nested
 * arrays of [re, im] pairs; real vectors and matrices are plain arrays.
 */
#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "qproc/estimation.hpp"
#include "qproc/operator.hpp"
#include "qproc/process_norm.hpp"
#include "qproc/protocols.hpp"
#include "qproc/tangent.hpp"

namespace qproc {

using Json = nlohmann::ordered_json;

/// Serializes with every floating-point number at 17 significant digits.
std::string dump(const Json &j, int indent = 2);
/// Formats one double the same way.
std::string format_double(double x);

Json to_json(const RVector &v);
Json to_json(const RMatrix &m);
Json complex_to_json(const CMatrix &m);
Json complex_to_json(const CVector &v);

RVector real_vector_from_json(const Json &j);
RMatrix real_matrix_from_json(const Json &j);
CMatrix complex_matrix_from_json(const Json &j);
CVector complex_vector_from_json(const Json &j);

Json to_json(const FisherMatrix &f);
Json to_json(const BMinResult &r);
Json to_json(const CanonicalForm &c);
Json to_json(const UnitBallMesh &m);
Json to_json(const EstimatorReport &r, bool include_samples = true);
Json to_json(const BiasFit &f);
Json to_json(const ChainReport &c);

/// Full protocol: kind, N, target and every branch's weight, state,
/// measurement basis (or POVM elements), readouts and sign string.
Json to_json(const Protocol &p);
/// Inverse of to_json(Protocol); validates the result.
Protocol protocol_from_json(const Json &j);

} // namespace qproc
