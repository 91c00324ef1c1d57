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

#include "quditft/pauli.hpp"

#include <gtest/gtest.h>

#include <random>

#include "quditft/linalg_zd.hpp"
#include "test_util.hpp"

using namespace quditft;
using quditft::testing::oracle_matrix;
using quditft::testing::max_abs_diff;

namespace {

PauliOperator random_pauli(const Dimension &dim, std::size_t n, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> u(0, dim.d() - 1);
    std::vector<int> x(n);
    std::vector<int> z(n);
    for (std::size_t q = 0; q < n; ++q) {
        x[q] = u(rng);
        z[q] = u(rng);
    }
    return PauliOperator(dim, u(rng), x, z);
}

}  // namespace

TEST(dimension, rejects_non_prime_and_even) {
    EXPECT_THROW(Dimension(2), std::invalid_argument);
    EXPECT_THROW(Dimension(9), std::invalid_argument);
    EXPECT_THROW(Dimension(37), std::invalid_argument);
    EXPECT_THROW(Dimension(1), std::invalid_argument);
    EXPECT_NO_THROW(Dimension(31));
}

TEST(dimension, modular_arithmetic) {
    Dimension d(7);
    EXPECT_EQ(d.mod(-1), 6);
    EXPECT_EQ(d.mul(3, 5), 1);
    EXPECT_EQ(d.inv(3), 5);
    EXPECT_THROW(d.inv(0), std::domain_error);
    EXPECT_EQ(d.pow(3, 6), 1);
}

TEST(pauli, parse_and_print_round_trip) {
    Dimension d(3);
    PauliOperator p = parse_pauli(d, "w2 XZ2 I X");
    EXPECT_EQ(p.phase(), 2);
    EXPECT_EQ(p.x(0), 1);
    EXPECT_EQ(p.z(0), 2);
    EXPECT_EQ(p.x(2), 1);
    EXPECT_EQ(parse_pauli(d, p.str()), p);
}

TEST(pauli, parse_errors_name_the_token) {
    Dimension d(3);
    try {
        parse_pauli(d, "X Z3");
        FAIL() << "exponent 3 accepted for d = 3";
    } catch (const PauliParseError &e) {
        EXPECT_EQ(e.column(), 3u);
        EXPECT_EQ(e.token(), "Z3");
    }
    EXPECT_THROW(parse_pauli(d, "Y"), PauliParseError);
    EXPECT_THROW(parse_pauli(d, "X I", 3), std::invalid_argument);
}

TEST(pauli, multiply_matches_matrix_oracle_exhaustively_d3) {
    Dimension d(3);
    // All phase-free two-qudit operators; phases only shift the product.
    std::vector<PauliOperator> all;
    for (int v = 0; v < 81; ++v) {
        all.push_back(PauliOperator(d, 0, {v % 3, (v / 3) % 3}, {(v / 9) % 3, (v / 27) % 3}));
    }
    for (const auto &p : all) {
        auto mp = oracle_matrix(p);
        for (const auto &q : all) {
            auto mq = oracle_matrix(q);
            EXPECT_LT(max_abs_diff(oracle_matrix(p * q), mp * mq), 1e-10);
            // pq = omega^c qp
            int c = commutation_exponent(p, q);
            EXPECT_LT(max_abs_diff(mp * mq, d.omega(c) * mq * mp), 1e-10);
        }
    }
}

TEST(pauli, power_and_inverse_match_matrix_oracle) {
    std::mt19937_64 rng(11);
    for (int dv : {3, 5, 7}) {
        Dimension d(dv);
        for (int trial = 0; trial < 50; ++trial) {
            PauliOperator p = random_pauli(d, 2, rng);
            auto mp = oracle_matrix(p);
            for (int m : {0, 1, 2, dv - 1, dv, dv + 2, -1, -dv - 3}) {
                int k = ((m % dv) + dv) % dv;
                EXPECT_LT(max_abs_diff(oracle_matrix(power(p, m)), quditft::testing::matrix_power(mp, k)), 1e-9);
            }
            EXPECT_LT(max_abs_diff(oracle_matrix(inverse(p)) * mp, Eigen::MatrixXcd::Identity(mp.rows(), mp.cols())),
                      1e-9);
        }
    }
}

TEST(pauli, to_matrix_agrees_with_independent_construction) {
    std::mt19937_64 rng(3);
    Dimension d(5);
    for (int trial = 0; trial < 30; ++trial) {
        PauliOperator p = random_pauli(d, 2, rng);
        EXPECT_LT(max_abs_diff(to_matrix(p), oracle_matrix(p)), 1e-10);
    }
}

TEST(pauli, size_cap_is_reported) {
    Dimension d(31);
    EXPECT_THROW(to_matrix(PauliOperator::identity(d, 6)), std::length_error);
}

TEST(pauli, restriction_and_embedding) {
    Dimension d(5);
    PauliOperator p = parse_pauli(d, "w1 X Z2 XZ");
    std::vector<std::size_t> qs{2, 0};
    PauliOperator r = p.restricted_to(qs);
    EXPECT_EQ(r, parse_pauli(d, "w1 XZ X"));
    EXPECT_EQ(PauliOperator::embedded(r, 3, qs), parse_pauli(d, "w1 X I XZ"));
    EXPECT_EQ(p.weight(), 3u);
}

TEST(linalg_zd, solve_combination_recovers_coefficients) {
    Dimension d(5);
    zd::Matrix rows{{1, 2, 0}, {0, 1, 3}};
    auto c = zd::solve_combination(d, rows, std::vector<int>{2, 2, 4});
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ((*c)[0], 2);
    EXPECT_EQ((*c)[1], 3);
    EXPECT_FALSE(zd::solve_combination(d, rows, std::vector<int>{0, 0, 1}).has_value());
    EXPECT_EQ(zd::rank(d, rows), 2u);
}
