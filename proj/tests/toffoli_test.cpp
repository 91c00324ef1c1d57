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


#include "quditft/toffoli.hpp"

#include <gtest/gtest.h>

using namespace quditft;

namespace {

// Independent oracles built from basis-state definitions.
ComplexVector a_state_oracle(int d, int j = 0) {
    ComplexVector v = ComplexVector::Zero(d * d * d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            v((a * d + b) * d + (a * b + j) % d) = 1.0 / d;
        }
    }
    return v;
}

ComplexVector toffoli_oracle(const ComplexVector &in, int d) {
    ComplexVector out = ComplexVector::Zero(in.size());
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            for (int c = 0; c < d; ++c) {
                out((a * d + b) * d + (c + a * b) % d) = in((a * d + b) * d + c);
            }
        }
    }
    return out;
}

double overlap(const ComplexVector &a, const ComplexVector &b) {
    return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

const CorrectionTable &table3() {
    static const CorrectionTable table = derive_toffoli_corrections(Dimension(3));
    return table;
}

}  // namespace

TEST(toffoli, correction_table_covers_every_outcome) {
    const auto &table = table3();
    EXPECT_EQ(table.entries.size(), 27u);
    EXPECT_TRUE(table.at({0, 0, 0}).empty());
    for (const auto &[m, circuit] : table.entries) {
        EXPECT_LE(circuit.size(), 7u);
        if (m != OutcomeTriple{0, 0, 0}) {
            EXPECT_FALSE(circuit.empty());
        }
    }
    EXPECT_THROW(table.at({3, 0, 0}), std::out_of_range);
}

TEST(toffoli, basis_state_for_every_outcome) {
    Dimension d(3);
    Rng rng(1);
    auto ancilla = prepare_toffoli_ancilla(d, rng).state;
    std::size_t data[] = {0, 1, 2};
    int in[] = {1, 2, 0};
    int out[] = {1, 2, 2};
    for (const auto &[m, circuit] : table3().entries) {
        auto run = detail::run_toffoli_protocol(DenseState::basis(d, in), data, ancilla, &table3(), rng, m);
        EXPECT_EQ(run.outcomes, m);
        EXPECT_NEAR(fidelity(DenseState::basis(d, out), run.state), 1.0, 1e-9)
            << m[0] << m[1] << m[2] << ": " << str(circuit);
    }
}

TEST(toffoli, random_states_match_oracle) {
    Dimension d(3);
    Rng rng(5);
    std::size_t data[] = {0, 1, 2};
    for (int i = 0; i < 20; ++i) {
        auto psi = DenseState::random(d, 3, rng);
        auto run = gadget_toffoli(psi, data, table3(), rng);
        EXPECT_NEAR(overlap(toffoli_oracle(psi.amplitudes(), 3), run.state.amplitudes()), 1.0, 1e-9);
    }
}

TEST(toffoli, uncorrected_outcome_is_not_toffoli) {
    Dimension d(3);
    Rng rng(2);
    auto ancilla = toffoli_ancilla_exact(d);
    std::size_t data[] = {0, 1, 2};
    auto psi = DenseState::random(d, 3, rng);
    auto raw = detail::run_toffoli_protocol(psi, data, ancilla, nullptr, rng, OutcomeTriple{1, 1, 1});
    EXPECT_LT(overlap(toffoli_oracle(psi.amplitudes(), 3), raw.state.amplitudes()), 0.99);
}

TEST(toffoli, data_qudits_anywhere_in_register) {
    Dimension d(3);
    Rng rng(8);
    auto psi = DenseState::random(d, 4, rng);
    std::size_t data[] = {3, 0, 2};
    auto run = gadget_toffoli(psi, data, table3(), rng);
    auto want = apply(psi, {GateKind::Toffoli, 1}, data);
    EXPECT_NEAR(fidelity(want, run.state), 1.0, 1e-9);
    EXPECT_EQ(run.state.num_qudits(), 4u);
}

TEST(toffoli, ancilla_matches_oracle_for_every_post_selection) {
    Dimension d(3);
    Rng rng(0);
    for (int j = 0; j < 3; ++j) {
        auto prep = prepare_toffoli_ancilla(d, rng, 0, j);
        EXPECT_EQ(prep.m3_outcome, j);
        EXPECT_LT((prep.state.amplitudes() - a_state_oracle(3)).norm(), 1e-10);
    }
    EXPECT_LT((toffoli_ancilla_exact(d).amplitudes() - a_state_oracle(3)).norm(), 1e-12);
    for (std::size_t cat : {1, 2, 3}) {
        auto prep = prepare_toffoli_ancilla(d, rng, cat);
        EXPECT_NEAR(overlap(prep.state.amplitudes(), a_state_oracle(3)), 1.0, 1e-10);
    }
}

TEST(toffoli, ancilla_is_stabilized_by_m_gates) {
    Dimension d(3);
    auto a = toffoli_ancilla_exact(d);
    std::size_t qs[] = {0, 1, 2};
    for (GateKind k : {GateKind::M1, GateKind::M2, GateKind::M3}) {
        EXPECT_LT((apply(a, {k, 1}, qs).amplitudes() - a.amplitudes()).norm(), 1e-12) << mnemonic(k);
    }
    DenseState a1(d, 3, a_state_oracle(3, 1));
    EXPECT_LT((apply(a1, {GateKind::M3, 1}, qs).amplitudes() - d.omega(1) * a1.amplitudes()).norm(), 1e-12);
}

TEST(toffoli, cat_measurement_reads_eigenvalue_exponent) {
    Dimension d(3);
    Rng rng(4);
    std::size_t qs[] = {0, 1, 2};
    for (int j = 0; j < 3; ++j) {
        DenseState aj(d, 3, a_state_oracle(3, j));
        for (std::size_t r : {1, 2, 3, 4}) {
            for (int rep = 0; rep < 5; ++rep) {
                auto m = measure_via_cat({GateKind::M3, 1}, aj, qs, r, rng);
                EXPECT_EQ(m.outcome, j) << "r=" << r;
                EXPECT_NEAR(overlap(m.state.amplitudes(), aj.amplitudes()), 1.0, 1e-10);
            }
        }
    }
}

TEST(toffoli, cat_state_is_uniform_repetition) {
    Dimension d(5);
    auto cat = cat_state(d, 3);
    ComplexVector want = ComplexVector::Zero(125);
    for (int j = 0; j < 5; ++j) {
        want((j * 5 + j) * 5 + j) = 1 / std::sqrt(5.0);
    }
    EXPECT_LT((cat.amplitudes() - want).norm(), 1e-12);
}

TEST(toffoli, diagonal_factors_multiply_to_gate) {
    for (int dv : {3, 5}) {
        Dimension d(dv);
        Rng rng(3);
        DenseState s = DenseState::random(d, 3, rng);
        DenseState acc = s;
        std::size_t all[] = {0, 1, 2};
        for (const auto &f : diagonal_factors({GateKind::M3, 1}, d)) {
            if (f.positions.empty()) {
                acc = apply(acc, f.gate, all);
            } else {
                acc = apply(acc, f.gate, f.positions);
            }
        }
        auto want = apply(s, {GateKind::M3, 1}, all);
        EXPECT_LT((acc.amplitudes() - want.amplitudes()).norm(), 1e-10);
    }
}

TEST(toffoli, errors) {
    Dimension d(3);
    Rng rng(0);
    std::size_t qs[] = {0, 1, 2};
    auto a = toffoli_ancilla_exact(d);
    EXPECT_THROW(measure_via_cat({GateKind::M3, 1}, a, qs, 0, rng), std::invalid_argument);
    EXPECT_THROW(prepare_toffoli_ancilla(d, rng, 2, 0), std::invalid_argument);
    std::size_t two[] = {0, 1};
    EXPECT_THROW(gadget_toffoli(a, two, table3(), rng), std::invalid_argument);
}
