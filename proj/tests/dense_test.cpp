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


#include "quditft/dense.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace quditft;
using quditft::testing::max_abs_diff;

TEST(dense, basis_indexing_puts_qudit_zero_first) {
    Dimension d(3);
    auto s = DenseState::basis(d, {1, 2});
    EXPECT_NEAR(std::abs(s.amplitudes()(1 * 3 + 2)), 1.0, 1e-12);
    EXPECT_EQ(s.digits(5), (std::vector<int>{1, 2}));
}

TEST(dense, gate_application_matches_full_matrix) {
    Dimension d(3);
    Rng rng(4);
    auto s = DenseState::random(d, 3, rng);
    // SUM from qudit 2 to qudit 0 via the full 27x27 matrix.
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(27, 27);
    for (int i = 0; i < 27; ++i) {
        int a = i / 9;
        int b = (i / 3) % 3;
        int c = i % 3;
        full(((a + c) % 3) * 9 + b * 3 + c, i) = 1.0;
    }
    auto got = apply(s, {GateKind::Sum, 1}, {2, 0});
    EXPECT_LT((got.amplitudes() - full * s.amplitudes()).norm(), 1e-12);
}

TEST(dense, pauli_application_matches_matrix) {
    Dimension d(5);
    Rng rng(5);
    auto s = DenseState::random(d, 2, rng);
    auto p = parse_pauli(d, "w3 XZ2 Z4");
    EXPECT_LT((apply_pauli(s, p).amplitudes() - quditft::testing::oracle_matrix(p) * s.amplitudes()).norm(), 1e-12);
}

TEST(dense, measurement_probabilities_and_projection) {
    Dimension d(3);
    Rng rng(6);
    auto s = DenseState::zero(d, 1);
    auto m = measure_pauli_dense(s, parse_pauli(d, "X"), rng, 2);
    for (double p : m.probabilities) {
        EXPECT_NEAR(p, 1.0 / 3.0, 1e-12);
    }
    auto image = apply_pauli(m.state, parse_pauli(d, "X"));
    EXPECT_LT((image.amplitudes() - d.omega(2) * m.state.amplitudes()).norm(), 1e-12);
    auto z = measure_pauli_dense(DenseState::basis(d, {2}), parse_pauli(d, "Z"), rng);
    EXPECT_EQ(z.outcome, 2);
    EXPECT_THROW(measure_pauli_dense(DenseState::basis(d, {2}), parse_pauli(d, "Z"), rng, 0), std::invalid_argument);
}

TEST(dense, diagonal_unitary_measurement) {
    Dimension d(3);
    Rng rng(8);
    auto s = DenseState::basis(d, {1, 2, 1});
    std::size_t qs[] = {0, 1, 2};
    // M3 eigenvalue on |a,b,c> is omega^(c - a b).
    auto m = measure_diagonal_unitary(s, {GateKind::M3, 1}, qs, rng);
    EXPECT_EQ(m.outcome, d.mod(1 - 2));
    EXPECT_THROW(measure_diagonal_unitary(s, {GateKind::M1, 1}, qs, rng), std::invalid_argument);
}

TEST(dense, discard_and_permute) {
    Dimension d(3);
    Rng rng(9);
    auto a = DenseState::random(d, 2, rng);
    auto b = DenseState::random(d, 1, rng);
    auto ab = tensor(a, b);
    std::size_t drop[] = {2};
    EXPECT_TRUE(equal_up_to_global_phase(discard_qudits(ab, drop), a).first);
    std::size_t perm[] = {2, 0, 1};
    auto moved = permute_qudits(ab, perm);
    std::size_t drop0[] = {0};
    EXPECT_TRUE(equal_up_to_global_phase(discard_qudits(moved, drop0), a).first);
    auto ent = apply(apply(DenseState::zero(d, 2), {GateKind::Fourier, 1}, {0}), {GateKind::Sum, 1}, {0, 1});
    std::size_t one[] = {1};
    EXPECT_THROW(discard_qudits(ent, one), std::invalid_argument);
}

TEST(dense, tableau_to_state_for_phased_rows) {
    Dimension d(5);
    auto t = StabilizerTableau(d, 2, {parse_pauli(d, "w2 Z Z"), parse_pauli(d, "w1 X X4")}, {});
    auto s = tableau_to_state(t);
    for (const auto &r : t.rows()) {
        EXPECT_LT((apply_pauli(s, r).amplitudes() - s.amplitudes()).norm(), 1e-9);
    }
}

TEST(dense, cap_is_enforced) {
    Dimension d(31);
    EXPECT_THROW(DenseState::zero(d, 5), std::length_error);
}

TEST(dense, unitary_of_clifford_map_round_trip) {
    Dimension d(5);
    auto map = clifford_map_of_gate({GateKind::Phase, 2}, d).then(clifford_map_of_gate({GateKind::Fourier, 1}, d));
    auto u = unitary_of_clifford_map(map);
    EXPECT_LT(max_abs_diff(u * u.adjoint(), Eigen::MatrixXcd::Identity(5, 5)), 1e-9);
    EXPECT_EQ(clifford_map_of_unitary(u, d, 1), map);
}
