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
#include <limits>

#include "qproc/serialize.hpp"
#include "random.hpp"

using namespace qproc;

TEST_CASE("doubles keep seventeen significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.0) == "0");
    CHECK(std::stod(format_double(-2.5e-20)) == -2.5e-20);
    testing::Sampler s(61);
    for (int t = 0; t < 1000; ++t) {
        const double x = s.normal() * std::pow(10.0, s.uniform(-30, 30));
        CHECK(std::stod(format_double(x)) == x);
    }
}

TEST_CASE("dump") {
    Json j = Json::object();
    j["x"] = 1.0 / 3.0;
    j["v"] = Json::array({1, 2.5});
    j["bad"] = std::numeric_limits<double>::quiet_NaN();
    const std::string text = dump(j);
    CHECK(text.find("0.33333333333333331") != std::string::npos);
    CHECK(text.find("[1, 2.5]") != std::string::npos);
    const Json back = Json::parse(text);
    CHECK(back["x"].get<double>() == 1.0 / 3.0);
    CHECK(back["bad"].is_null());
}

TEST_CASE("matrices round trip") {
    testing::Sampler s(62);
    const RVector v = s.vector(5);
    CHECK(real_vector_from_json(Json::parse(dump(to_json(v)))) == v);
    RMatrix m(3, 2);
    for (auto &x : m.reshaped()) {
        x = s.normal();
    }
    CHECK(real_matrix_from_json(Json::parse(dump(to_json(m)))) == m);
    const CMatrix c = s.complex_matrix(3);
    CHECK(complex_matrix_from_json(Json::parse(dump(complex_to_json(c)))) == c);
    const CVector cv = s.pure(4).amplitudes();
    CHECK(complex_vector_from_json(Json::parse(dump(complex_to_json(cv)))) == cv);
    CHECK_THROWS(real_matrix_from_json(Json::parse("[[1, 2], [3]]")));
}

TEST_CASE("protocols round trip") {
    const std::vector<Protocol> protocols{
        hyperface_protocol(SignString({1, -1, 1})),
        corner_protocol(OneForm{1.0, -0.6, 0.2}),
        hyperedge_protocol(SignString({0, 1})),
        zoo_protocol((RVector(2) << 0.3, -0.8).finished()),
        zoo_protocol((RVector(2) << 0.3, -0.8).finished(), true),
        bloch_protocol(OneForm{0.2, 0.0, -1.0}),
    };
    for (const Protocol &p : protocols) {
        const std::string text = dump(to_json(p));
        const Protocol back = protocol_from_json(Json::parse(text));
        CHECK(dump(to_json(back)) == text);
        CHECK(back.branches.size() == p.branches.size());
        CHECK(back.target.components() == p.target.components());
    }
}

TEST_CASE("reports") {
    EstimatorReport r;
    r.q_hat_samples = {0.1, -0.1};
    r.shots = 10;
    r.repetitions = 2;
    r.verdict = "above";
    const Json with = to_json(r);
    CHECK(with["q_hat_samples"].size() == 2);
    CHECK(!to_json(r, false).contains("q_hat_samples"));
    const Json fit = to_json(BiasFit{0.5, 0.25, 1.0, 2.0});
    CHECK(fit["linear_z"].get<double>() == 2.0);
}
