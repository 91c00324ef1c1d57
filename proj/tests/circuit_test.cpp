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


#include "quditft/circuit.hpp"

#include <gtest/gtest.h>

using namespace quditft;

namespace {

CircuitProgram parse_ok(const std::string &text) {
    auto r = parse_program(text);
    if (!r.ok()) {
        std::string all;
        for (const auto &d : r.diagnostics) {
            all += d.str() + "\n";
        }
        throw std::runtime_error(all);
    }
    return *r.program;
}

Diagnostic single_diagnostic(const std::string &text) {
    auto r = parse_program(text);
    EXPECT_FALSE(r.program.has_value());
    EXPECT_EQ(r.diagnostics.size(), 1u) << text;
    return r.diagnostics.at(0);
}

}  // namespace

TEST(circuit, single_sum_statement) {
    auto p = parse_ok("qudits 2 dim 3\nsum 0 1\n");
    EXPECT_EQ(p.num_qudits, 2u);
    EXPECT_EQ(p.dim.d(), 3);
    EXPECT_EQ(p.init, InitialKind::Zero);
    ASSERT_EQ(p.statements.size(), 1u);
    auto g = std::get<GateStatement>(p.statements[0].body);
    EXPECT_EQ(g.gate.kind, GateKind::Sum);
    EXPECT_EQ(g.gate.param, 1);
    EXPECT_EQ(g.qudits, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(p.statements[0].line, 2u);
}

TEST(circuit, phased_measurement_binds_outcome) {
    auto p = parse_ok("qudits 2 dim 3\nmeasure w1 X Z @ 0 1 -> m0\n");
    auto m = std::get<MeasureStatement>(p.statements.at(0).body);
    Dimension d(3);
    EXPECT_EQ(m.local, PauliOperator(d, 1, {1, 0}, {0, 1}));
    EXPECT_EQ(m.qudits, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(m.name, "m0");
    EXPECT_FALSE(m.post_select.has_value());

    auto q = parse_ok("qudits 3 dim 5\nmeasure XZ2 @ 2 == 4\n");
    auto mq = std::get<MeasureStatement>(q.statements.at(0).body);
    EXPECT_EQ(mq.local, PauliOperator(Dimension(5), 0, {1}, {2}));
    EXPECT_EQ(mq.qudits, (std::vector<std::size_t>{2}));
    EXPECT_EQ(mq.post_select, 4);
}

TEST(circuit, full_grammar) {
    auto p = parse_ok(
        "# comment\n"
        "qudits 3 dim 5   # header\n"
        "init plus\n"
        "r^3 0\n"
        "scale 2 1\n"
        "measure X I Z @ 0 1 2 -> a == 2\n"
        "gadget s 3 1\n"
        "gadget sumgadget 0 2\n"
        "expect a == 2\n"
        "expect stabilized Z2 @ 1\n");
    EXPECT_EQ(p.init, InitialKind::XEigenstate);
    ASSERT_EQ(p.statements.size(), 7u);
    EXPECT_EQ(std::get<GateStatement>(p.statements[0].body).gate, (Gate{GateKind::Fourier, 3}));
    auto scale = std::get<GateStatement>(p.statements[1].body);
    EXPECT_EQ(scale.gate.kind, GateKind::Scale);
    EXPECT_EQ(scale.gate.param, 2);
    auto s = std::get<GadgetStatement>(p.statements[3].body);
    EXPECT_EQ(s.name, "s");
    EXPECT_EQ(s.param, 3);
    EXPECT_EQ(s.qudits, (std::vector<std::size_t>{1}));
    EXPECT_EQ(std::get<GadgetStatement>(p.statements[4].body).qudits, (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(std::get<ExpectOutcome>(p.statements[5].body), (ExpectOutcome{"a", 2}));
    auto st = std::get<ExpectStabilized>(p.statements[6].body);
    EXPECT_EQ(st.local, PauliOperator(Dimension(5), 0, {0}, {2}));
    EXPECT_EQ(p.statements[6].line, 10u);
}

TEST(circuit, scale_factor_not_invertible) {
    auto d = single_diagnostic("qudits 1 dim 3\nscale 3 0\n");
    EXPECT_EQ(d.message, "scale factor not invertible mod 3");
    EXPECT_EQ(d.line, 2u);
    EXPECT_EQ(d.column, 7u);
    EXPECT_EQ(d.token, "3");
    EXPECT_FALSE(d.hint.empty());
}

TEST(circuit, diagnostics_carry_position_token_and_hint) {
    auto unknown = single_diagnostic("qudits 2 dim 3\n  foo 1\n");
    EXPECT_EQ(unknown.line, 2u);
    EXPECT_EQ(unknown.column, 3u);
    EXPECT_EQ(unknown.token, "foo");
    EXPECT_NE(unknown.message.find("unknown mnemonic"), std::string::npos);
    EXPECT_NE(unknown.hint.find("sum"), std::string::npos);

    auto exponent = single_diagnostic("qudits 2 dim 3\nmeasure X3 @ 0\n");
    EXPECT_EQ(exponent.column, 9u);
    EXPECT_EQ(exponent.token, "X3");
    EXPECT_NE(exponent.message.find("must be < d = 3"), std::string::npos);

    auto range = single_diagnostic("qudits 2 dim 3\nsum 0 2\n");
    EXPECT_EQ(range.column, 7u);
    EXPECT_EQ(range.token, "2");
    EXPECT_NE(range.message.find("out of range"), std::string::npos);

    auto dup = single_diagnostic("qudits 2 dim 3\nmeasure Z @ 0 -> a\nmeasure Z @ 1 -> a\n");
    EXPECT_EQ(dup.line, 3u);
    EXPECT_NE(dup.message.find("duplicate outcome name"), std::string::npos);

    auto repeated = single_diagnostic("qudits 2 dim 3\nsum 1 1\n");
    EXPECT_NE(repeated.message.find("repeated qudit"), std::string::npos);

    auto before = single_diagnostic("sum 0 1\nqudits 2 dim 3\n");
    EXPECT_EQ(before.line, 1u);
    EXPECT_NE(before.message.find("before header"), std::string::npos);

    auto dim = single_diagnostic("qudits 2 dim 9\n");
    EXPECT_NE(dim.message.find("not an odd prime"), std::string::npos);

    auto unbound = single_diagnostic("qudits 1 dim 3\nexpect m == 0\n");
    EXPECT_NE(unbound.message.find("unknown outcome name"), std::string::npos);

    auto mismatch = single_diagnostic("qudits 2 dim 3\nmeasure X Z @ 0\n");
    EXPECT_NE(mismatch.message.find("2 Pauli factors but 1 qudits"), std::string::npos);

    auto value = single_diagnostic("qudits 1 dim 3\nmeasure Z @ 0 == 3\n");
    EXPECT_NE(value.message.find("outside Z_3"), std::string::npos);

    auto late_init = single_diagnostic("qudits 1 dim 3\nx 0\ninit open\n");
    EXPECT_NE(late_init.message.find("'init' must appear once"), std::string::npos);

    auto missing = parse_program("# nothing\n");
    ASSERT_EQ(missing.diagnostics.size(), 1u);
    EXPECT_EQ(missing.diagnostics[0].message, "missing header");

    EXPECT_EQ(unknown.str(), "line 2, column 3: unknown mnemonic 'foo' (at 'foo'); expected " + unknown.hint);
}

TEST(circuit, every_bad_line_is_reported) {
    auto r = parse_program("qudits 2 dim 3\nfoo\nsum 0 5\nx 0\nscale 0 1\n");
    EXPECT_FALSE(r.ok());
    ASSERT_EQ(r.diagnostics.size(), 3u);
    EXPECT_EQ(r.diagnostics[0].line, 2u);
    EXPECT_EQ(r.diagnostics[1].line, 3u);
    EXPECT_EQ(r.diagnostics[2].line, 5u);
}

TEST(circuit, parsing_is_total) {
    std::mt19937_64 rng(17);
    const std::string alphabet = "qudits dim 0123 xzsumr^@->==#\n wXZI";
    for (int i = 0; i < 2000; ++i) {
        std::string text = "qudits 2 dim 3\n";
        std::size_t len = rng() % 40;
        for (std::size_t j = 0; j < len; ++j) {
            text += alphabet[rng() % alphabet.size()];
        }
        ParseResult r;
        ASSERT_NO_THROW(r = parse_program(text)) << text;
        EXPECT_NE(r.program.has_value(), !r.diagnostics.empty());
    }
}

TEST(circuit, print_parse_round_trip) {
    std::string text =
        "qudits 4 dim 7\n"
        "init open\n"
        "sum^2 0 3\n"
        "  scale 6 2\n"
        "measure w3 X2Z I Z6 @ 3 0 1 -> out == 5\n"
        "measure Z @ 2\n"
        "gadget rinv 1\n"
        "gadget toffoli 0 1 2\n"
        "expect out == 5\n"
        "expect stabilized X X @ 0 1\n";
    auto p = parse_ok(text);
    auto printed = print_program(p);
    auto again = parse_ok(printed);
    EXPECT_EQ(again, p);
    EXPECT_EQ(print_program(again), printed);
}
