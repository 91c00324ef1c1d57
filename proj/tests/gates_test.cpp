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

#include "quditft/gates.hpp"

#include <gtest/gtest.h>

#include "quditft/dense.hpp"
#include "test_util.hpp"

using namespace quditft;
using quditft::testing::max_abs_diff;
using quditft::testing::oracle_matrix;

namespace {

// Direct matrix conjugation U N U^dag of every generator, compared with the
// image Pauli's matrix.
void expect_map_matches_conjugation(const CliffordMap &map, const Eigen::MatrixXcd &u) {
    const Dimension &d = map.dim();
    std::size_t n = map.num_qudits();
    for (std::size_t q = 0; q < n; ++q) {
        auto x = oracle_matrix(PauliOperator::x_on(d, n, q));
        auto z = oracle_matrix(PauliOperator::z_on(d, n, q));
        EXPECT_LT(max_abs_diff(u * x * u.adjoint(), oracle_matrix(map.x_image(q))), 1e-9) << map;
        EXPECT_LT(max_abs_diff(u * z * u.adjoint(), oracle_matrix(map.z_image(q))), 1e-9) << map;
    }
}

std::vector<Gate> all_clifford_gates(const Dimension &d) {
    std::vector<Gate> out;
    for (auto kind : {GateKind::Fourier, GateKind::Phase, GateKind::Sum, GateKind::InvSum, GateKind::X, GateKind::Z,
                      GateKind::Phase2, GateKind::M1, GateKind::M2, GateKind::M3}) {
        for (int k : {1, 2, -1}) {
            out.push_back({kind, k});
        }
    }
    for (int a = 1; a < d.d(); ++a) {
        out.push_back({GateKind::Scale, a});
    }
    return out;
}

}  // namespace

TEST(gates, symbolic_maps_match_matrix_conjugation) {
    for (int dv : {3, 5, 7}) {
        Dimension d(dv);
        for (const Gate &g : all_clifford_gates(d)) {
            CliffordMap map = clifford_map_of_gate(g, d);
            EXPECT_TRUE(map.is_symplectic());
            expect_map_matches_conjugation(map, gate_matrix(g, d));
        }
    }
}

TEST(gates, unitaries_are_unitary) {
    for (int dv : {3, 5}) {
        Dimension d(dv);
        for (const Gate &g : all_clifford_gates(d)) {
            auto u = gate_matrix(g, d);
            EXPECT_LT(max_abs_diff(u * u.adjoint(), Eigen::MatrixXcd::Identity(u.rows(), u.cols())), 1e-10);
        }
        auto t = gate_matrix({GateKind::Toffoli, 1}, d);
        EXPECT_LT(max_abs_diff(t * t.adjoint(), Eigen::MatrixXcd::Identity(t.rows(), t.cols())), 1e-10);
    }
}

TEST(gates, fourier_has_order_four) {
    Dimension d(5);
    auto r = gate_matrix({GateKind::Fourier, 1}, d);
    EXPECT_LT(max_abs_diff(quditft::testing::matrix_power(r, 4), Eigen::MatrixXcd::Identity(5, 5)), 1e-10);
    EXPECT_EQ(clifford_map_of_gate({GateKind::Fourier, 4}, d), CliffordMap::identity(d, 1));
    // R^2 is the parity map.
    auto r2 = clifford_map_of_gate({GateKind::Fourier, 2}, d);
    EXPECT_EQ(r2.x_image(0), PauliOperator::x_on(d, 1, 0, 4));
}

TEST(gates, generator_images_in_closed_form) {
    for (int dv : {3, 5, 7}) {
        Dimension d(dv);
        auto r = clifford_map_of_gate({GateKind::Fourier, 1}, d);
        EXPECT_EQ(r.x_image(0), parse_pauli(d, "Z"));
        EXPECT_EQ(r.z_image(0), PauliOperator::x_on(d, 1, 0, dv - 1));
        auto p = clifford_map_of_gate({GateKind::Phase, 1}, d);
        EXPECT_EQ(p.x_image(0), parse_pauli(d, "XZ"));
        EXPECT_EQ(p.z_image(0), parse_pauli(d, "Z"));
        auto s = clifford_map_of_gate({GateKind::Sum, 1}, d);
        EXPECT_EQ(s.x_image(0), parse_pauli(d, "X X"));
        EXPECT_EQ(s.x_image(1), parse_pauli(d, "I X"));
        EXPECT_EQ(s.z_image(0), parse_pauli(d, "Z I"));
        EXPECT_EQ(s.z_image(1), parse_pauli(d, "Z" + std::to_string(dv - 1) + " Z"));
        for (int a = 1; a < dv; ++a) {
            auto m = clifford_map_of_gate({GateKind::Scale, a}, d);
            EXPECT_EQ(m.x_image(0), PauliOperator::x_on(d, 1, 0, a));
            EXPECT_EQ(m.z_image(0), PauliOperator::z_on(d, 1, 0, d.inv(a)));
        }
    }
}

TEST(gates, clifford_map_of_unitary_round_trip) {
    Dimension d(3);
    for (const Gate &g : all_clifford_gates(d)) {
        auto map = clifford_map_of_gate(g, d);
        EXPECT_EQ(clifford_map_of_unitary(gate_matrix(g, d), d, arity(g.kind)), map);
        auto u = unitary_of_clifford_map(map);
        EXPECT_EQ(clifford_map_of_unitary(u, d, arity(g.kind)), map);
    }
}

TEST(gates, toffoli_is_rejected_symbolically) {
    Dimension d(3);
    EXPECT_THROW(clifford_map_of_gate({GateKind::Toffoli, 1}, d), std::invalid_argument);
    EXPECT_THROW(clifford_map_of_unitary(gate_matrix({GateKind::Toffoli, 1}, d), d, 3), std::invalid_argument);
}

TEST(gates, scale_factor_must_be_invertible) {
    Dimension d(3);
    try {
        clifford_map_of_gate({GateKind::Scale, 3}, d);
        FAIL();
    } catch (const std::invalid_argument &e) {
        EXPECT_STREQ(e.what(), "scale factor not invertible mod 3");
    }
}

TEST(gates, mnemonics_round_trip) {
    for (auto kind : {GateKind::Fourier, GateKind::Phase, GateKind::Sum, GateKind::InvSum, GateKind::Scale,
                      GateKind::X, GateKind::Z, GateKind::Phase2, GateKind::Toffoli, GateKind::M1, GateKind::M2,
                      GateKind::M3}) {
        EXPECT_EQ(gate_kind_from_mnemonic(mnemonic(kind)), kind);
    }
    EXPECT_FALSE(gate_kind_from_mnemonic("cnot").has_value());
}
