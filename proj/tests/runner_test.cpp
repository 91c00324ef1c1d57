// Copyright 2026 The quditft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "quditft/runner.hpp"

#include <cstdlib>

#include <gtest/gtest.h>

using namespace quditft;

namespace {

CircuitProgram parse_ok(const std::string &text) {
    auto r = parse_program(text);
    if (!r.ok()) {
        throw std::runtime_error(r.diagnostics.front().str());
    }
    return *r.program;
}

RunReport run(const std::string &text, BackendChoice b, std::uint64_t seed, std::size_t shots) {
    return run_program(parse_ok(text), {b, seed, shots});
}

// Random Clifford circuit text with named and anonymous measurements.
std::string random_program(std::mt19937_64 &rng, std::size_t n, int d, int gates) {
    std::string out = "qudits " + std::to_string(n) + " dim " + std::to_string(d) + "\n";
    auto q = [&]() { return rng() % n; };
    const char *single[] = {"r", "p", "x", "z"};
    int m = 0;
    for (int i = 0; i < gates; ++i) {
        switch (rng() % 5) {
            case 0:
            case 1:
                out += std::string(single[rng() % 4]) + "^" + std::to_string(1 + rng() % (d - 1)) + " " +
                       std::to_string(q()) + "\n";
                break;
            case 2: {
                std::size_t a = q();
                std::size_t b = (a + 1 + rng() % (n - 1)) % n;
                out += (rng() % 2 ? "sum " : "invsum ") + std::to_string(a) + " " + std::to_string(b) + "\n";
                break;
            }
            case 3:
                out += "scale " + std::to_string(1 + rng() % (d - 1)) + " " + std::to_string(q()) + "\n";
                break;
            default: {
                const char *f[] = {"X", "Z", "XZ", "I", "X2Z"};
                std::size_t a = q();
                std::size_t b = (a + 1) % n;
                out += std::string("measure ") + f[rng() % 5] + " " + f[rng() % 3] + " @ " + std::to_string(a) + " " +
                       std::to_string(b);
                if (rng() % 2) {
                    out += " -> m" + std::to_string(m++);
                }
                out += "\n";
            }
        }
    }
    return out;
}

}  // namespace

TEST(runner, pinv_gadget_agrees_and_realizes_map) {
    Dimension d(3);
    CliffordMap expected({parse_pauli(d, "XZ2")}, {parse_pauli(d, "Z")});
    for (std::uint64_t seed : {0u, 1u, 7u, 12345u}) {
        auto report = run("qudits 1 dim 3\ninit open\ngadget pinv 0\n", BackendChoice::Both, seed, 10);
        EXPECT_EQ(report.agreement(), true);
        EXPECT_TRUE(report.passed());
        for (const auto &s : report.shots) {
            ASSERT_TRUE(s.logical_map.has_value());
            EXPECT_EQ(*s.logical_map, expected);
            EXPECT_EQ(s.trajectory.size(), 1u);
        }
        auto j = report_json(report);
        EXPECT_EQ(j["agreement"], true);
        EXPECT_EQ(j["final"]["logical_map"]["X0"], "XZ2");
        EXPECT_EQ(j["final"]["logical_map"]["Z0"], "Z");
    }
}

TEST(runner, zero_state_z_measurement_is_always_zero) {
    for (auto b : {BackendChoice::Tableau, BackendChoice::Dense, BackendChoice::Both}) {
        auto report = run("qudits 1 dim 3\nmeasure Z @ 0 -> m\nexpect m == 0\n", b, 99, 100);
        ASSERT_EQ(report.shots.size(), 100u);
        for (const auto &s : report.shots) {
            ASSERT_EQ(s.outcomes.size(), 1u);
            EXPECT_EQ(s.outcomes[0], (std::pair<std::string, int>{"m", 0}));
        }
        EXPECT_TRUE(report.passed());
    }
}

TEST(runner, random_qutrit_programs_agree_between_backends) {
    std::mt19937_64 rng(2026);
    for (int i = 0; i < 5; ++i) {
        auto text = random_program(rng, 3, 3, 20);
        auto report = run(text, BackendChoice::Both, 1000 + i, 200);
        EXPECT_EQ(report.agreement(), true) << text;
        for (const auto &s : report.shots) {
            EXPECT_TRUE(s.agreement.value_or(false)) << s.agreement_detail;
        }
    }
    std::mt19937_64 rng5(5);
    auto text = random_program(rng5, 3, 5, 20);
    EXPECT_EQ(run(text, BackendChoice::Both, 3, 50).agreement(), true) << text;
}

TEST(runner, measurement_outcomes_are_uniform_when_random) {
    auto report = run("qudits 1 dim 3\nmeasure X @ 0 -> m\n", BackendChoice::Tableau, 5, 3000);
    std::array<int, 3> counts{};
    for (const auto &s : report.shots) {
        counts[static_cast<std::size_t>(s.outcomes[0].second)]++;
    }
    for (int c : counts) {
        EXPECT_GT(c, 850);
        EXPECT_LT(c, 1150);
    }
}

TEST(runner, dense_state_matches_basis_oracle) {
    auto report = run("qudits 2 dim 5\nx^3 0\nsum^2 0 1\n", BackendChoice::Dense, 0, 1);
    const auto &state = *report.shots.at(0).state;
    // |3, 0 + 2*3 mod 5> = |3, 1>; qudit 0 is the most significant digit.
    std::size_t index = 3 * 5 + 1;
    for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) {
        EXPECT_NEAR(std::abs(state.amplitudes()[i]), static_cast<std::size_t>(i) == index ? 1.0 : 0.0, 1e-12);
    }
    auto t = run("qudits 2 dim 5\nx^3 0\nsum^2 0 1\nexpect stabilized Z3 @ 0\n", BackendChoice::Tableau, 0, 1);
    EXPECT_FALSE(t.passed());
    // Z|j> = w^j |j>, so w^-3 Z and w^-1 Z stabilize |3, 1>.
    auto ok = run("qudits 2 dim 5\nx^3 0\nsum^2 0 1\nexpect stabilized w2 Z @ 0\nexpect stabilized w4 Z @ 1\n",
                  BackendChoice::Both, 0, 1);
    EXPECT_TRUE(ok.passed());
}

TEST(runner, post_selection_and_expectations) {
    auto report = run("qudits 2 dim 3\ninit plus\nmeasure Z Z @ 0 1 -> a == 2\nmeasure Z2 Z2 @ 0 1 -> b\nexpect b == 1\n",
                      BackendChoice::Both, 4, 20);
    EXPECT_TRUE(report.passed());
    for (const auto &s : report.shots) {
        EXPECT_EQ(s.outcomes[0].second, 2);
        EXPECT_EQ(s.outcomes[1].second, 1);
    }
    auto failing = run("qudits 1 dim 3\nmeasure Z @ 0 -> m\nexpect m == 1\n", BackendChoice::Tableau, 0, 3);
    EXPECT_FALSE(failing.expectations_passed());
    EXPECT_EQ(failing.shots[0].failures.at(0), "line 3: expected m == 1, got 0");
    EXPECT_EQ(report_json(failing)["expectations_passed"], false);
}

TEST(runner, json_is_deterministic) {
    std::mt19937_64 rng(8);
    auto text = random_program(rng, 3, 3, 20);
    for (auto b : {BackendChoice::Tableau, BackendChoice::Dense, BackendChoice::Both}) {
        auto a = report_json(run(text, b, 77, 25)).dump();
        auto c = report_json(run(text, b, 77, 25)).dump();
        EXPECT_EQ(a, c);
    }
    auto a = report_json(run(text, BackendChoice::Tableau, 77, 25)).dump();
    auto other = report_json(run(text, BackendChoice::Tableau, 78, 25)).dump();
    EXPECT_NE(a, other);
}

TEST(runner, shots_depend_only_on_seed_and_index) {
    auto text = "qudits 2 dim 3\nr 0\nmeasure X X @ 0 1 -> a\nmeasure Z @ 1 -> b\n";
    auto many = run(text, BackendChoice::Tableau, 31, 40);
    auto few = run(text, BackendChoice::Tableau, 31, 10);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(many.shots[i].outcomes, few.shots[i].outcomes);
    }
}

TEST(runner, json_schema) {
    auto j = report_json(run("qudits 2 dim 3\nsum 0 1\nmeasure Z @ 1 -> m\nmeasure X @ 0\n", BackendChoice::Both, 2, 2));
    EXPECT_EQ(j["header"]["qudits"], 2);
    EXPECT_EQ(j["header"]["dim"], 3);
    EXPECT_EQ(j["header"]["init"], "zero");
    EXPECT_EQ(j["header"]["backend"], "both");
    EXPECT_EQ(j["header"]["seed"], 2);
    EXPECT_EQ(j["shots"].size(), 2u);
    EXPECT_TRUE(j["shots"][0]["outcomes"].contains("m"));
    EXPECT_TRUE(j["shots"][0]["outcomes"].contains("line4"));
    EXPECT_EQ(j["final"]["stabilizer_rows"].size(), 2u);
    EXPECT_TRUE(j["final"]["logical_map"].is_null());
    EXPECT_EQ(j["final"]["state"].size(), 9u);
    EXPECT_EQ(j["agreement"], true);
    auto t = report_json(run("qudits 1 dim 3\n", BackendChoice::Tableau, 0, 1));
    EXPECT_FALSE(t.contains("agreement"));
    EXPECT_FALSE(t["final"].contains("state"));
}

TEST(runner, usage_errors) {
    auto toffoli = parse_ok("qudits 3 dim 3\ngadget toffoli 0 1 2\n");
    EXPECT_THROW(run_program(toffoli, {BackendChoice::Tableau, 0, 1}), UsageError);
    EXPECT_THROW(run_program(toffoli, {BackendChoice::Both, 0, 1}), UsageError);
    EXPECT_THROW(run_program(parse_ok("qudits 3 dim 5\ngadget toffoli 0 1 2\n"), {BackendChoice::Dense, 0, 1}),
                 UsageError);
    EXPECT_THROW(run_program(parse_ok("qudits 3 dim 3\ntoffoli 0 1 2\n"), {BackendChoice::Tableau, 0, 1}), UsageError);
    EXPECT_THROW(run_program(parse_ok("qudits 30 dim 3\n"), {BackendChoice::Dense, 0, 1}), UsageError);
    EXPECT_NO_THROW(run_program(parse_ok("qudits 30 dim 3\n"), {BackendChoice::Tableau, 0, 1}));
    EXPECT_EQ(backend_from_name("both"), BackendChoice::Both);
    EXPECT_FALSE(backend_from_name("gpu").has_value());
}

TEST(runner, dense_toffoli_program) {
    auto report = run("qudits 3 dim 3\nx^2 0\nx 1\ngadget toffoli 0 1 2\nmeasure Z @ 2 -> target\nexpect target == 2\n",
                      BackendChoice::Dense, 11, 5);
    EXPECT_TRUE(report.passed());
    for (const auto &s : report.shots) {
        EXPECT_EQ(s.trajectory.size(), 4u);
    }
}
