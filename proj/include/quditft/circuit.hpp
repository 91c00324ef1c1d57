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


#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "quditft/gates.hpp"
#include "quditft/pauli.hpp"
#include "quditft/tableau.hpp"

// A small line-oriented circuit language:
//
//   # comment
//   qudits 2 dim 3
//   init zero | plus | open
//   r 0                      gate mnemonics, optional power: sum^2 0 1
//   scale 2 0                scale <a> <qudit>
//   measure w1 X Z @ 0 1 -> m0 == 2
//   gadget pinv 0            gadget s <s> <qudit>; gadget toffoli a b c
//   expect m0 == 2
//   expect stabilized X Z2 @ 0 1

namespace quditft {

struct Diagnostic {
    std::size_t line;    // 1-based
    std::size_t column;  // 1-based
    std::string token;
    std::string message;
    std::string hint;

    std::string str() const {
        std::string out = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
        if (!token.empty()) {
            out += " (at '" + token + "')";
        }
        if (!hint.empty()) {
            out += "; expected " + hint;
        }
        return out;
    }
};

struct GateStatement {
    Gate gate;
    std::vector<std::size_t> qudits;
    friend bool operator==(const GateStatement &, const GateStatement &) = default;
};

struct MeasureStatement {
    PauliOperator local;  // one factor per listed qudit
    std::vector<std::size_t> qudits;
    std::optional<std::string> name;
    std::optional<int> post_select;
    friend bool operator==(const MeasureStatement &, const MeasureStatement &) = default;
};

struct GadgetStatement {
    std::string name;  // pinv, q, r, rinv, s, sumgadget, toffoli
    int param = 1;     // s only
    std::vector<std::size_t> qudits;
    friend bool operator==(const GadgetStatement &, const GadgetStatement &) = default;
};

struct ExpectOutcome {
    std::string name;
    int value;
    friend bool operator==(const ExpectOutcome &, const ExpectOutcome &) = default;
};

struct ExpectStabilized {
    PauliOperator local;
    std::vector<std::size_t> qudits;
    friend bool operator==(const ExpectStabilized &, const ExpectStabilized &) = default;
};

using StatementBody = std::variant<GateStatement, MeasureStatement, GadgetStatement, ExpectOutcome, ExpectStabilized>;

struct Statement {
    StatementBody body;
    std::size_t line = 0;  // source line, not part of equality
};

struct CircuitProgram {
    std::size_t num_qudits;
    Dimension dim;
    InitialKind init = InitialKind::Zero;
    std::vector<Statement> statements;

    friend bool operator==(const CircuitProgram &a, const CircuitProgram &b) {
        if (a.num_qudits != b.num_qudits || a.dim != b.dim || a.init != b.init ||
            a.statements.size() != b.statements.size()) {
            return false;
        }
        for (std::size_t i = 0; i < a.statements.size(); ++i) {
            if (!(a.statements[i].body == b.statements[i].body)) {
                return false;
            }
        }
        return true;
    }
};

struct ParseResult {
    std::optional<CircuitProgram> program;
    std::vector<Diagnostic> diagnostics;

    bool ok() const {
        return program.has_value() && diagnostics.empty();
    }
};

inline std::string_view init_name(InitialKind kind) {
    switch (kind) {
        case InitialKind::Zero:
            return "zero";
        case InitialKind::XEigenstate:
            return "plus";
        case InitialKind::OpenLogical:
            return "open";
    }
    return "?";
}

namespace detail {

struct LineError {
    Diagnostic diag;
};

class LineParser {
   public:
    LineParser(std::size_t line, std::vector<detail::Token> tokens) : line_(line), tokens_(std::move(tokens)) {
    }

    bool done() const {
        return pos_ >= tokens_.size();
    }
    const detail::Token &peek() const {
        return tokens_[pos_];
    }
    std::size_t end_column() const {
        return tokens_.empty() ? 1 : tokens_.back().column + tokens_.back().text.size();
    }

    [[noreturn]] void fail(const std::string &message, const std::string &hint, const Token *at = nullptr) const {
        if (!at && !done()) {
            at = &tokens_[pos_];
        }
        throw LineError{{line_, at ? at->column : end_column(), at ? at->text : "", message, hint}};
    }

    const detail::Token &next(const std::string &hint) {
        if (done()) {
            fail("unexpected end of line", hint);
        }
        return tokens_[pos_++];
    }

    long long integer(const std::string &what) {
        const detail::Token &t = next(what);
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(t.text, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != t.text.size() || t.text.empty()) {
            fail("expected " + what + ", got '" + t.text + "'", what, &t);
        }
        return v;
    }

    void keyword(std::string_view word) {
        const detail::Token &t = next(std::string(word));
        if (t.text != word) {
            fail("expected '" + std::string(word) + "', got '" + t.text + "'", std::string(word), &t);
        }
    }

    void expect_end() {
        if (!done()) {
            fail("unexpected trailing token", "end of line");
        }
    }

   private:
    std::size_t line_;
    std::vector<detail::Token> tokens_;
    std::size_t pos_ = 0;
};

inline bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
            return false;
        }
    }
    return true;
}

}  // namespace detail

/// Parses a whole program; never throws on malformed input, reporting every
/// bad line instead.
inline ParseResult parse_program(std::string_view source) {
    ParseResult result;
    std::optional<std::size_t> n;
    std::optional<Dimension> dim;
    InitialKind init = InitialKind::Zero;
    bool seen_statement = false;
    bool seen_init = false;
    std::set<std::string> names;
    std::vector<Statement> statements;

    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= source.size()) {
        std::size_t end = source.find('\n', start);
        if (end == std::string_view::npos) {
            end = source.size();
        }
        std::string_view line = source.substr(start, end - start);
        start = end + 1;
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        auto tokens = detail::split_tokens(line);
        if (tokens.empty()) {
            if (end == source.size()) {
                break;
            }
            continue;
        }
        detail::LineParser p(lineno, tokens);
        try {
            const detail::Token &head = p.next("statement");
            if (head.text == "qudits") {
                if (n) {
                    p.fail("duplicate header", "a single 'qudits N dim D' line", &head);
                }
                long long count = p.integer("qudit count");
                if (count <= 0 || count > 64) {
                    p.fail("qudit count must be in 1..64", "qudit count");
                }
                p.keyword("dim");
                const detail::Token &dt = p.peek();
                long long d = p.integer("dimension");
                if (d < 3 || d > kMaxDimension || !is_prime(static_cast<int>(d))) {
                    p.fail("dimension " + std::to_string(d) + " is not an odd prime <= " +
                               std::to_string(kMaxDimension),
                           "odd prime dimension", &dt);
                }
                p.expect_end();
                n = static_cast<std::size_t>(count);
                dim = Dimension(static_cast<int>(d));
                if (end == source.size()) {
                    break;
                }
                continue;
            }
            if (!n) {
                p.fail("statement before header", "'qudits N dim D'", &head);
            }
            auto qudit = [&]() {
                const detail::Token &t = p.peek();
                long long q = p.integer("qudit index");
                if (q < 0 || static_cast<std::size_t>(q) >= *n) {
                    p.fail("qudit index " + std::to_string(q) + " out of range (register has " + std::to_string(*n) +
                               " qudits)",
                           "qudit index < " + std::to_string(*n), &t);
                }
                return static_cast<std::size_t>(q);
            };
            auto distinct = [&](const std::vector<std::size_t> &qs, const detail::Token &at) {
                std::set<std::size_t> seen(qs.begin(), qs.end());
                if (seen.size() != qs.size()) {
                    p.fail("repeated qudit index", "distinct qudits", &at);
                }
            };
            auto outcome_value = [&]() {
                const detail::Token &t = p.peek();
                long long v = p.integer("outcome value");
                if (v < 0 || v >= dim->d()) {
                    p.fail("outcome " + std::to_string(v) + " outside Z_" + std::to_string(dim->d()),
                           "value in 0.." + std::to_string(dim->d() - 1), &t);
                }
                return static_cast<int>(v);
            };
            // Pauli factors up to '@', then qudit indices.
            auto pauli_and_qudits = [&](const detail::Token &at) {
                int phase = 0;
                std::vector<std::pair<int, int>> factors;
                while (!p.done() && p.peek().text != "@") {
                    const detail::Token &t = p.next("Pauli factor");
                    try {
                        if (factors.empty() && phase == 0 && is_phase_token(t.text)) {
                            phase = parse_phase_token(*dim, t.text, t.column);
                        } else {
                            factors.push_back(parse_factor(*dim, t.text, t.column));
                        }
                    } catch (const PauliParseError &e) {
                        p.fail(e.what(), "Pauli factor such as I, X, Z2 or XZ", &t);
                    }
                }
                if (factors.empty()) {
                    p.fail("missing Pauli factors", "Pauli factors then '@ qudits'");
                }
                p.keyword("@");
                std::vector<std::size_t> qs;
                while (!p.done() && p.peek().text != "->" && p.peek().text != "==") {
                    qs.push_back(qudit());
                }
                if (qs.size() != factors.size()) {
                    p.fail(std::to_string(factors.size()) + " Pauli factors but " + std::to_string(qs.size()) +
                               " qudits",
                           "one qudit per factor", &at);
                }
                distinct(qs, at);
                std::vector<int> x;
                std::vector<int> z;
                for (auto [a, b] : factors) {
                    x.push_back(a);
                    z.push_back(b);
                }
                return std::make_pair(PauliOperator(*dim, phase, x, z), qs);
            };

            StatementBody body = ExpectOutcome{"", 0};
            if (head.text == "init") {
                if (seen_statement || seen_init) {
                    p.fail("'init' must appear once, before any statement", "statement", &head);
                }
                const detail::Token &t = p.next("zero, plus or open");
                if (t.text == "zero") {
                    init = InitialKind::Zero;
                } else if (t.text == "plus") {
                    init = InitialKind::XEigenstate;
                } else if (t.text == "open") {
                    init = InitialKind::OpenLogical;
                } else {
                    p.fail("unknown initial state '" + t.text + "'", "zero, plus or open", &t);
                }
                p.expect_end();
                seen_init = true;
                if (end == source.size()) {
                    break;
                }
                continue;
            } else if (head.text == "measure") {
                auto [op, qs] = pauli_and_qudits(head);
                MeasureStatement m{op, qs, std::nullopt, std::nullopt};
                if (!p.done() && p.peek().text == "->") {
                    p.next("->");
                    const detail::Token &nt = p.next("outcome name");
                    if (!detail::is_identifier(nt.text)) {
                        p.fail("invalid outcome name '" + nt.text + "'", "identifier", &nt);
                    }
                    if (!names.insert(nt.text).second) {
                        p.fail("duplicate outcome name '" + nt.text + "'", "a fresh name", &nt);
                    }
                    m.name = nt.text;
                }
                if (!p.done() && p.peek().text == "==") {
                    p.next("==");
                    m.post_select = outcome_value();
                }
                p.expect_end();
                body = m;
            } else if (head.text == "gadget") {
                const detail::Token &gt = p.next("gadget name");
                GadgetStatement g{gt.text, 1, {}};
                std::size_t want = 1;
                if (gt.text == "pinv" || gt.text == "q" || gt.text == "r" || gt.text == "rinv") {
                    want = 1;
                } else if (gt.text == "s") {
                    const detail::Token &st = p.peek();
                    long long s = p.integer("S parameter");
                    if (dim->mod(s) == 0) {
                        p.fail("S gadget parameter must be nonzero mod " + std::to_string(dim->d()),
                               "s in 1.." + std::to_string(dim->d() - 1), &st);
                    }
                    g.param = dim->mod(s);
                } else if (gt.text == "sumgadget") {
                    want = 2;
                } else if (gt.text == "toffoli") {
                    want = 3;
                } else {
                    p.fail("unknown gadget '" + gt.text + "'", "pinv, q, r, rinv, s, sumgadget or toffoli", &gt);
                }
                for (std::size_t i = 0; i < want; ++i) {
                    g.qudits.push_back(qudit());
                }
                distinct(g.qudits, gt);
                p.expect_end();
                body = g;
            } else if (head.text == "expect") {
                if (!p.done() && p.peek().text == "stabilized") {
                    p.next("stabilized");
                    auto [op, qs] = pauli_and_qudits(head);
                    p.expect_end();
                    body = ExpectStabilized{op, qs};
                } else {
                    const detail::Token &nt = p.next("outcome name or 'stabilized'");
                    if (!names.count(nt.text)) {
                        p.fail("unknown outcome name '" + nt.text + "'", "a name bound by 'measure ... -> name'",
                               &nt);
                    }
                    p.keyword("==");
                    int v = outcome_value();
                    p.expect_end();
                    body = ExpectOutcome{nt.text, v};
                }
            } else {
                std::string mn = head.text;
                int power = 1;
                if (auto caret = mn.find('^'); caret != std::string::npos) {
                    std::string pw = mn.substr(caret + 1);
                    mn = mn.substr(0, caret);
                    std::size_t used = 0;
                    try {
                        power = std::stoi(pw, &used);
                    } catch (const std::exception &) {
                        used = 0;
                    }
                    if (pw.empty() || used != pw.size()) {
                        p.fail("malformed gate power '" + pw + "'", "<gate>^<integer>", &head);
                    }
                }
                auto kind = gate_kind_from_mnemonic(mn);
                if (!kind) {
                    p.fail("unknown mnemonic '" + mn + "'",
                           "a gate (r, p, sum, invsum, scale, x, z, phase2, toffoli, m1, m2, m3), measure, gadget "
                           "or expect",
                           &head);
                }
                Gate g{*kind, power};
                if (*kind == GateKind::Scale) {
                    if (head.text.find('^') != std::string::npos) {
                        p.fail("scale takes a factor argument, not a power", "scale <a> <qudit>", &head);
                    }
                    const detail::Token &at = p.peek();
                    long long a = p.integer("scale factor");
                    if (!dim->invertible(dim->mod(a))) {
                        p.fail("scale factor not invertible mod " + std::to_string(dim->d()),
                               "factor coprime to " + std::to_string(dim->d()), &at);
                    }
                    g.param = dim->mod(a);
                }
                GateStatement gs{g, {}};
                for (std::size_t i = 0; i < arity(*kind); ++i) {
                    gs.qudits.push_back(qudit());
                }
                distinct(gs.qudits, head);
                p.expect_end();
                body = gs;
            }
            seen_statement = true;
            statements.push_back({std::move(body), lineno});
        } catch (const detail::LineError &e) {
            result.diagnostics.push_back(e.diag);
        }
        if (end == source.size()) {
            break;
        }
    }
    if (!n && result.diagnostics.empty()) {
        result.diagnostics.push_back({lineno == 0 ? 1 : lineno, 1, "", "missing header", "'qudits N dim D'"});
    }
    if (n && result.diagnostics.empty()) {
        result.program = CircuitProgram{*n, *dim, init, std::move(statements)};
    }
    return result;
}

namespace detail {

inline std::string local_pauli_text(const PauliOperator &p) {
    std::string out;
    if (p.phase() != 0) {
        out = "w" + std::to_string(p.phase()) + " ";
    }
    for (std::size_t q = 0; q < p.num_qudits(); ++q) {
        if (q > 0) {
            out += " ";
        }
        out += factor_str(p.x(q), p.z(q));
    }
    return out;
}

inline std::string qudit_list(const std::vector<std::size_t> &qs) {
    std::string out;
    for (auto q : qs) {
        out += " " + std::to_string(q);
    }
    return out;
}

}  // namespace detail

/// Canonical text of a program; parse_program(print_program(p)) == p.
inline std::string print_program(const CircuitProgram &program) {
    std::ostringstream os;
    os << "qudits " << program.num_qudits << " dim " << program.dim.d() << "\n";
    if (program.init != InitialKind::Zero) {
        os << "init " << init_name(program.init) << "\n";
    }
    for (const auto &st : program.statements) {
        std::visit(
            [&](const auto &s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, GateStatement>) {
                    os << mnemonic(s.gate.kind);
                    if (s.gate.kind == GateKind::Scale) {
                        os << " " << s.gate.param;
                    } else if (s.gate.param != 1) {
                        os << "^" << s.gate.param;
                    }
                    os << detail::qudit_list(s.qudits);
                } else if constexpr (std::is_same_v<T, MeasureStatement>) {
                    os << "measure " << detail::local_pauli_text(s.local) << " @" << detail::qudit_list(s.qudits);
                    if (s.name) {
                        os << " -> " << *s.name;
                    }
                    if (s.post_select) {
                        os << " == " << *s.post_select;
                    }
                } else if constexpr (std::is_same_v<T, GadgetStatement>) {
                    os << "gadget " << s.name;
                    if (s.name == "s") {
                        os << " " << s.param;
                    }
                    os << detail::qudit_list(s.qudits);
                } else if constexpr (std::is_same_v<T, ExpectOutcome>) {
                    os << "expect " << s.name << " == " << s.value;
                } else {
                    os << "expect stabilized " << detail::local_pauli_text(s.local) << " @"
                       << detail::qudit_list(s.qudits);
                }
            },
            st.body);
        os << "\n";
    }
    return os.str();
}

}  // namespace quditft
