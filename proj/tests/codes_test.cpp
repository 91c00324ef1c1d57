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


#include "quditft/codes.hpp"

#include <gtest/gtest.h>

using namespace quditft;

namespace {

// Symplectic oracle: exponent c with g e = omega^c e g.
int symplectic_exponent(const PauliOperator &g, const PauliOperator &e) {
    int d = g.dim().d();
    long long c = 0;
    for (std::size_t q = 0; q < g.num_qudits(); ++q) {
        c += static_cast<long long>(g.z(q)) * e.x(q) - static_cast<long long>(g.x(q)) * e.z(q);
    }
    return static_cast<int>(((c % d) + d) % d);
}

bool contains(const ValidationReport &r, const std::string &needle) {
    for (const auto &v : r.violations) {
        if (v.find(needle) != std::string::npos) {
            return true;
        }
    }
    return false;
}

std::size_t parse_error_line(const std::string &text) {
    try {
        parse_code(text);
    } catch (const CodeParseError &e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST(codes, example_code_is_valid) {
    auto c = example_code_331();
    EXPECT_TRUE(validate_code(c).ok());
    EXPECT_NO_THROW(require_valid(c));
}

TEST(codes, validation_reports_violations) {
    Dimension d(3);
    StabilizerCode noncommuting{d, 3, 1, {parse_pauli(d, "X I I"), parse_pauli(d, "Z I I")},
                                {parse_pauli(d, "I X I")}, {parse_pauli(d, "I Z I")}};
    EXPECT_TRUE(contains(validate_code(noncommuting), "non-commuting pair"));
    StabilizerCode dependent{d, 3, 1, {parse_pauli(d, "X X X"), parse_pauli(d, "X2 X2 X2")},
                             {parse_pauli(d, "X X2 I")}, {parse_pauli(d, "Z2 Z I")}};
    EXPECT_TRUE(contains(validate_code(dependent), "dependence"));
    StabilizerCode bad_logical{d, 3, 1, {parse_pauli(d, "X X X"), parse_pauli(d, "Z Z Z")},
                               {parse_pauli(d, "X I I")}, {parse_pauli(d, "Z2 Z I")}};
    EXPECT_FALSE(validate_code(bad_logical).ok());
    StabilizerCode wrong_count{d, 3, 1, {parse_pauli(d, "X X X")}, {parse_pauli(d, "X X2 I")},
                               {parse_pauli(d, "Z2 Z I")}};
    EXPECT_FALSE(validate_code(wrong_count).ok());
    EXPECT_THROW(require_valid(noncommuting), std::invalid_argument);
}

TEST(codes, syndromes_match_symplectic_oracle_for_all_single_qudit_errors) {
    auto c = example_code_331();
    for (std::size_t q = 0; q < 3; ++q) {
        for (int x = 0; x < 3; ++x) {
            for (int z = 0; z < 3; ++z) {
                auto e = PauliOperator::identity(c.dim, 3);
                e.set_x(q, x);
                e.set_z(q, z);
                auto s = error_syndrome_of_pauli(c, e);
                ASSERT_EQ(s.size(), 2u);
                for (std::size_t g = 0; g < 2; ++g) {
                    EXPECT_EQ(s[g], symplectic_exponent(c.generators[g], e)) << e;
                }
            }
        }
    }
    EXPECT_EQ(error_syndrome_of_pauli(c, parse_pauli(c.dim, "X I I")), (Syndrome{0, 1}));
    EXPECT_THROW(error_syndrome_of_pauli(c, parse_pauli(c.dim, "X I")), std::invalid_argument);
}

TEST(codes, measured_syndromes_agree_with_prediction) {
    auto c = example_code_331();
    Rng rng(1);
    auto zero = tableau_to_state(encoded_zero_tableau(c));
    for (std::size_t g = 0; g < 2; ++g) {
        auto r = transversal_syndrome_extraction(c, zero, g, rng);
        EXPECT_EQ(r.outcome, 0);
        EXPECT_NEAR(fidelity(zero, r.state), 1.0, 1e-10);
    }
    for (std::size_t q = 0; q < 3; ++q) {
        for (int p = 1; p < 3; ++p) {
            for (auto e : {PauliOperator::x_on(c.dim, 3, q, p), PauliOperator::z_on(c.dim, 3, q, p)}) {
                auto damaged = apply_pauli(zero, e);
                auto want = error_syndrome_of_pauli(c, e);
                for (std::size_t g = 0; g < 2; ++g) {
                    EXPECT_EQ(transversal_syndrome_extraction(c, damaged, g, rng).outcome, want[g]) << e;
                    EXPECT_EQ(measure_pauli_dense(damaged, c.generators[g], rng).outcome, want[g]) << e;
                }
            }
        }
    }
    EXPECT_THROW(transversal_syndrome_extraction(c, zero, 2, rng), std::out_of_range);
}

TEST(codes, measurement_circuit_matches_projective_measurement) {
    Dimension d(3);
    Rng rng(6);
    auto c = example_code_331();
    auto circuit = pauli_measurement_circuit(c.logical_z[0], single_block_labels(3));
    EXPECT_FALSE(check_transversal_structure(circuit).has_value());
    for (int v = 0; v < 3; ++v) {
        auto s = tableau_to_state(encoded_basis_tableau(c, {v}));
        auto r = run_measurement_circuit(circuit, s, rng);
        EXPECT_EQ(r.outcome, measure_pauli_dense(s, c.logical_z[0], rng).outcome);
        EXPECT_NEAR(fidelity(s, r.state), 1.0, 1e-10);
    }
    // A phased operator with mixed factors on one of its eigenstates.
    auto op = parse_pauli(d, "w2 XZ2 X Z");
    auto plus = tableau_to_state(initial_tableau(3, d, InitialKind::XEigenstate));
    auto eig = measure_pauli_dense(plus, op, rng, 0).state;
    auto r = run_measurement_circuit(pauli_measurement_circuit(op, single_block_labels(3)), eig, rng);
    EXPECT_EQ(r.outcome, measure_pauli_dense(eig, op, rng).outcome);
    EXPECT_EQ(r.outcome, 0);
    EXPECT_THROW(pauli_measurement_circuit(parse_pauli(d, "I I"), single_block_labels(2)), std::invalid_argument);
}

TEST(codes, transversal_check_rejects_intra_block_gate) {
    Dimension d(3);
    AnnotatedCircuit circuit{d, single_block_labels(3), {}, 0, 3};
    circuit.ops.push_back({CircuitOp::Kind::Gate, {GateKind::Sum, 1}, {0, 1}});
    auto problem = check_transversal_structure(circuit);
    ASSERT_TRUE(problem.has_value());
    EXPECT_NE(problem->find("couples block 0 position 0 with block 0 position 1"), std::string::npos);

    BlockLayout layout{example_code_331(), 2};
    AnnotatedCircuit across{d, layout.labels(), {}, 0, 6};
    across.ops.push_back({CircuitOp::Kind::Gate, {GateKind::Sum, 1}, {1, 4}});
    EXPECT_FALSE(check_transversal_structure(across).has_value());
    across.ops.push_back({CircuitOp::Kind::Gate, {GateKind::Sum, 1}, {1, 5}});
    EXPECT_TRUE(check_transversal_structure(across).has_value());
}

TEST(codes, logical_sum_tableau_map_is_sum) {
    auto c = example_code_331();
    BlockLayout layout{c, 3};
    for (int seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        auto before = tensor(tensor(encoded_open_tableau(c), encoded_open_tableau(c)), encoded_zero_tableau(c));
        auto after = logical_sum_between_blocks(layout, before, 0, 1, 2, rng);
        auto data = tensor(encoded_open_tableau(c), encoded_open_tableau(c));
        CliffordMap sum({parse_pauli(c.dim, "X X"), parse_pauli(c.dim, "I X")},
                        {parse_pauli(c.dim, "Z I"), parse_pauli(c.dim, "Z2 Z")});
        EXPECT_EQ(extract_clifford_map(data, after), sum);
    }
    // Reverse direction: target block 0, source block 1.
    Rng rng(9);
    auto before = tensor(tensor(encoded_open_tableau(c), encoded_open_tableau(c)), encoded_zero_tableau(c));
    auto after = logical_sum_between_blocks(layout, before, 1, 0, 2, rng);
    auto data = tensor(encoded_open_tableau(c), encoded_open_tableau(c));
    CliffordMap rev({parse_pauli(c.dim, "X I"), parse_pauli(c.dim, "X X")},
                    {parse_pauli(c.dim, "Z Z2"), parse_pauli(c.dim, "I Z")});
    EXPECT_EQ(extract_clifford_map(data, after), rev);
}

TEST(codes, logical_sum_measurements_are_transversal) {
    BlockLayout layout{example_code_331(), 3};
    for (const auto &[a, m] : logical_sum_measurements(layout, 0, 1, 2)) {
        EXPECT_FALSE(check_transversal_structure(pauli_measurement_circuit(a, layout.labels())).has_value()) << a;
        EXPECT_FALSE(commutes(a, m));
    }
}

TEST(codes, logical_sum_dense_on_encoded_basis) {
    auto c = example_code_331();
    BlockLayout layout{c, 3};
    Rng rng(4);
    auto zero = tableau_to_state(encoded_zero_tableau(c));
    auto enc = [&](int v) { return tableau_to_state(encoded_basis_tableau(c, {v})); };
    for (const auto &forced : {std::vector<int>{0, 0, 0}, std::vector<int>{1, 2, 0}, std::vector<int>{2, 1, 2}}) {
        auto out = logical_sum_between_blocks_dense(layout, tensor(tensor(enc(1), enc(2)), zero), 0, 1, 2, rng, forced);
        EXPECT_NEAR(fidelity(tensor(enc(1), enc(0)), out), 1.0, 1e-9);
    }
}

TEST(codes, logical_sum_rejects_bad_indices_and_ancilla) {
    auto c = example_code_331();
    BlockLayout layout{c, 3};
    Rng rng(0);
    auto before = tensor(tensor(encoded_open_tableau(c), encoded_open_tableau(c)), encoded_zero_tableau(c));
    EXPECT_THROW(logical_sum_between_blocks(layout, before, 0, 0, 2, rng), std::invalid_argument);
    EXPECT_THROW(logical_sum_between_blocks(layout, before, 0, 1, 5, rng), std::out_of_range);
    auto open_ancilla = tensor(tensor(encoded_open_tableau(c), encoded_open_tableau(c)), encoded_open_tableau(c));
    EXPECT_THROW(logical_sum_between_blocks(layout, open_ancilla, 0, 1, 2, rng), std::invalid_argument);
}

TEST(codes, parse_round_trip_and_errors) {
    auto c = example_code_331();
    auto back = parse_code(str(c));
    EXPECT_EQ(back.generators, c.generators);
    EXPECT_EQ(back.logical_x, c.logical_x);
    EXPECT_EQ(back.logical_z, c.logical_z);

    EXPECT_EQ(parse_error_line("hello\n"), 1u);
    EXPECT_EQ(parse_error_line("# comment\ncode n=3 k=1 d=4\n"), 2u);
    EXPECT_EQ(parse_error_line("code n=3 k=1 d=3\nS: X X X\nS: Z Z Z3\n"), 3u);
    EXPECT_EQ(parse_error_line("code n=3 k=1 d=3\nS: X X\n"), 2u);
    EXPECT_EQ(parse_error_line("code n=3 k=1 d=3\nQ: X X X\n"), 2u);
    EXPECT_EQ(parse_error_line("code n=3 k=1 d=3\nLX1: X X X\n"), 2u);
    EXPECT_EQ(parse_error_line("code n=3 k=1 d=3\nS: X X X\nLX0: X X2 I\n"), 3u);
    EXPECT_THROW(parse_code(""), CodeParseError);
}
