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

#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "quditft/dense.hpp"
#include "quditft/tableau.hpp"

// Qudit stabilizer codes: validation, syndromes, transversal syndrome
// extraction with sum-zero ancillas, and SUM between encoded qudits.

namespace quditft {

struct StabilizerCode {
    Dimension dim;
    std::size_t n;
    std::size_t k;
    std::vector<PauliOperator> generators;
    std::vector<PauliOperator> logical_x;
    std::vector<PauliOperator> logical_z;
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const {
        return violations.empty();
    }
};

inline ValidationReport validate_code(const StabilizerCode &c) {
    ValidationReport report;
    auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };
    if (c.generators.size() + c.k != c.n) {
        fail("expected n - k = " + std::to_string(c.n - c.k) + " generators, got " +
             std::to_string(c.generators.size()));
    }
    if (c.logical_x.size() != c.k || c.logical_z.size() != c.k) {
        fail("expected " + std::to_string(c.k) + " logical X and Z operators");
    }
    auto shape_ok = [&](const PauliOperator &p, const std::string &what) {
        if (p.num_qudits() != c.n || p.dim() != c.dim) {
            fail(what + " " + p.str() + " does not act on " + std::to_string(c.n) + " qudits");
            return false;
        }
        return true;
    };
    bool shapes = true;
    for (std::size_t i = 0; i < c.generators.size(); ++i) {
        shapes = shape_ok(c.generators[i], "generator " + std::to_string(i)) && shapes;
    }
    for (std::size_t i = 0; i < c.logical_x.size(); ++i) {
        shapes = shape_ok(c.logical_x[i], "logical X " + std::to_string(i)) && shapes;
    }
    for (std::size_t i = 0; i < c.logical_z.size(); ++i) {
        shapes = shape_ok(c.logical_z[i], "logical Z " + std::to_string(i)) && shapes;
    }
    if (!shapes) {
        return report;
    }
    for (std::size_t a = 0; a < c.generators.size(); ++a) {
        if (c.generators[a].is_identity_up_to_phase()) {
            fail("generator " + std::to_string(a) + " is trivial");
        }
        for (std::size_t b = a + 1; b < c.generators.size(); ++b) {
            if (!commutes(c.generators[a], c.generators[b])) {
                fail("non-commuting pair: generators " + std::to_string(a) + " (" + c.generators[a].str() + ") and " +
                     std::to_string(b) + " (" + c.generators[b].str() + ")");
            }
        }
    }
    zd::Matrix vecs;
    for (const auto &g : c.generators) {
        vecs.push_back(g.symplectic_vector());
    }
    if (zd::rank(c.dim, vecs) != c.generators.size()) {
        fail("dependence: generators are not independent over Z_" + std::to_string(c.dim.d()));
    }
    for (std::size_t i = 0; i < c.logical_x.size() && i < c.logical_z.size(); ++i) {
        for (std::size_t a = 0; a < c.generators.size(); ++a) {
            if (!commutes(c.logical_x[i], c.generators[a])) {
                fail("logical X " + std::to_string(i) + " does not commute with generator " + std::to_string(a));
            }
            if (!commutes(c.logical_z[i], c.generators[a])) {
                fail("logical Z " + std::to_string(i) + " does not commute with generator " + std::to_string(a));
            }
        }
        for (std::size_t j = 0; j < c.logical_z.size(); ++j) {
            int want = i == j ? c.dim.neg(1) : 0;
            if (commutation_exponent(c.logical_x[i], c.logical_z[j]) != want) {
                fail("logical X " + std::to_string(i) + " and logical Z " + std::to_string(j) +
                     " have commutation exponent " + std::to_string(commutation_exponent(c.logical_x[i], c.logical_z[j])) +
                     ", expected " + std::to_string(want));
            }
            if (i < j && (!commutes(c.logical_x[i], c.logical_x[j]) || !commutes(c.logical_z[i], c.logical_z[j]))) {
                fail("logical operators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
            }
        }
    }
    return report;
}

/// [[3,1]] over qutrits: S = <XXX, ZZZ>, Xbar = X X^-1 I, Zbar = Z^-1 Z I.
inline StabilizerCode example_code_331() {
    Dimension d(3);
    return StabilizerCode{d,
                          3,
                          1,
                          {parse_pauli(d, "X X X"), parse_pauli(d, "Z Z Z")},
                          {parse_pauli(d, "X X2 I")},
                          {parse_pauli(d, "Z2 Z I")}};
}

inline void require_valid(const StabilizerCode &c) {
    auto report = validate_code(c);
    if (!report.ok()) {
        throw std::invalid_argument("invalid code: " + report.violations.front());
    }
}

/// Pure tableau of the encoded |0...0>: generators plus each Zbar.
inline StabilizerTableau encoded_zero_tableau(const StabilizerCode &c) {
    require_valid(c);
    std::vector<PauliOperator> rows = c.generators;
    rows.insert(rows.end(), c.logical_z.begin(), c.logical_z.end());
    return StabilizerTableau(c.dim, c.n, std::move(rows), {});
}

/// Encoded basis state |values>: Zbar_i has eigenvalue omega^values[i].
inline StabilizerTableau encoded_basis_tableau(const StabilizerCode &c, const std::vector<int> &values) {
    require_valid(c);
    if (values.size() != c.k) {
        throw std::invalid_argument("need one value per logical qudit");
    }
    std::vector<PauliOperator> rows = c.generators;
    for (std::size_t i = 0; i < c.k; ++i) {
        rows.push_back(c.logical_z[i].with_phase_shift(-values[i]));
    }
    return StabilizerTableau(c.dim, c.n, std::move(rows), {});
}

/// The code space with its logical qudits left open.
inline StabilizerTableau encoded_open_tableau(const StabilizerCode &c) {
    require_valid(c);
    std::vector<LogicalPair> logicals;
    for (std::size_t i = 0; i < c.k; ++i) {
        logicals.push_back({c.logical_x[i], c.logical_z[i]});
    }
    return StabilizerTableau(c.dim, c.n, c.generators, std::move(logicals));
}

using Syndrome = std::vector<int>;

/// Entry i is the outcome of measuring generator i on e|psi> for a code
/// state |psi>: g e = omega^c e g, so the eigenvalue is omega^c.
inline Syndrome error_syndrome_of_pauli(const StabilizerCode &c, const PauliOperator &e) {
    if (e.num_qudits() != c.n || e.dim() != c.dim) {
        throw std::invalid_argument("error operator does not act on the code block");
    }
    Syndrome s;
    for (const auto &g : c.generators) {
        s.push_back(commutation_exponent(g, e));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Transversal Pauli measurement circuits.

/// Block membership of a qudit in an annotated circuit. Ancilla qudits are
/// dedicated to one measurement and may couple to any data qudit.
struct QuditLabel {
    int block;
    std::size_t position;
    bool ancilla = false;
};

struct CircuitOp {
    enum class Kind { PrepareSumZero, Gate, MeasureZ };
    Kind kind;
    Gate gate{GateKind::X, 1};
    std::vector<std::size_t> qudits;
};

struct AnnotatedCircuit {
    Dimension dim;
    std::vector<QuditLabel> labels;
    std::vector<CircuitOp> ops;
    /// Phase exponent of the conjugated operator, added to the digit sum.
    int phase_offset = 0;
    std::size_t num_data = 0;
};

/// Every two-qudit gate must couple equal positions of different blocks or
/// touch a dedicated ancilla. Returns the first violation.
inline std::optional<std::string> check_transversal_structure(const AnnotatedCircuit &circuit) {
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
        const auto &op = circuit.ops[i];
        if (op.kind != CircuitOp::Kind::Gate || op.qudits.size() < 2) {
            continue;
        }
        for (std::size_t a = 0; a < op.qudits.size(); ++a) {
            for (std::size_t b = a + 1; b < op.qudits.size(); ++b) {
                const auto &la = circuit.labels.at(op.qudits[a]);
                const auto &lb = circuit.labels.at(op.qudits[b]);
                if (la.ancilla || lb.ancilla) {
                    continue;
                }
                if (la.block == lb.block || la.position != lb.position) {
                    return "gate " + std::to_string(i) + " (" + std::string(mnemonic(op.gate.kind)) +
                           ") couples block " + std::to_string(la.block) + " position " +
                           std::to_string(la.position) + " with block " + std::to_string(lb.block) + " position " +
                           std::to_string(lb.position);
                }
            }
        }
    }
    return std::nullopt;
}

/// Circuit measuring `op` on data qudits labelled by `labels`: per qudit a
/// Clifford C_i = R P^k takes X^x Z^z to a power of Z, a sum-zero ancilla of
/// weight w collects SUM^e_i from each supported qudit, C_i is undone and
/// the ancilla digits are measured. Outcome = phase_offset + digit sum.
inline AnnotatedCircuit pauli_measurement_circuit(const PauliOperator &op, std::vector<QuditLabel> labels) {
    const Dimension &dim = op.dim();
    std::size_t n = op.num_qudits();
    if (labels.size() != n) {
        throw std::invalid_argument("need one label per data qudit");
    }
    auto support = op.support();
    if (support.empty()) {
        throw std::invalid_argument("cannot measure the identity");
    }
    AnnotatedCircuit circuit{dim, std::move(labels), {}, 0, n};
    std::vector<std::size_t> ancillas;
    for (std::size_t i = 0; i < support.size(); ++i) {
        ancillas.push_back(n + i);
        circuit.labels.push_back({-1, i, true});
    }
    circuit.ops.push_back({CircuitOp::Kind::PrepareSumZero, {GateKind::X, 1}, ancillas});

    std::vector<int> exps;  // e_i
    PauliOperator conjugated = op;
    for (auto q : support) {
        int x = op.x(q);
        int z = op.z(q);
        std::vector<Gate> gates;
        if (x != 0) {
            int k = dim.neg(dim.mul(z, dim.inv(x)));
            if (k != 0) {
                gates.push_back({GateKind::Phase, k});
            }
            gates.push_back({GateKind::Fourier, 1});
            exps.push_back(x);
        } else {
            exps.push_back(z);
        }
        for (const auto &g : gates) {
            std::size_t qs[] = {q};
            conjugated = clifford_map_of_gate(g, dim).apply_on(conjugated, qs);
            circuit.ops.push_back({CircuitOp::Kind::Gate, g, {q}});
        }
    }
    // The conjugated operator is omega^phi prod Z^e_i.
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (conjugated.x(support[i]) != 0 || conjugated.z(support[i]) != exps[i]) {
            throw std::logic_error("basis change failed for " + op.str());
        }
    }
    circuit.phase_offset = conjugated.phase();
    for (std::size_t i = 0; i < support.size(); ++i) {
        circuit.ops.push_back({CircuitOp::Kind::Gate, {GateKind::Sum, exps[i]}, {support[i], ancillas[i]}});
    }
    // Undo the basis change: inverse gates in reverse order.
    for (std::size_t i = support.size(); i-- > 0;) {
        auto q = support[i];
        int x = op.x(q);
        int z = op.z(q);
        std::vector<Gate> gates;
        if (x != 0) {
            gates.push_back({GateKind::Fourier, 3});
            int k = dim.neg(dim.mul(z, dim.inv(x)));
            if (k != 0) {
                gates.push_back({GateKind::Phase, dim.neg(k)});
            }
        }
        for (const auto &g : gates) {
            circuit.ops.push_back({CircuitOp::Kind::Gate, g, {q}});
        }
    }
    for (auto a : ancillas) {
        circuit.ops.push_back({CircuitOp::Kind::MeasureZ, {GateKind::X, 1}, {a}});
    }
    return circuit;
}

/// Uniform superposition of the w-digit strings summing to 0 mod d (the
/// Fourier transform of the CAT state).
inline DenseState sum_zero_state(const Dimension &dim, std::size_t w) {
    DenseState s = DenseState::zero(dim, w);
    s = apply(s, {GateKind::Fourier, 1}, {0});
    for (std::size_t q = 1; q < w; ++q) {
        s = apply(s, {GateKind::Sum, 1}, {0, q});
    }
    for (std::size_t q = 0; q < w; ++q) {
        s = apply(s, {GateKind::Fourier, 1}, {q});
    }
    return s;
}

struct ExtractionResult {
    int outcome;
    DenseState state;
};

/// Runs a pauli_measurement_circuit on `state` (the data register).
inline ExtractionResult run_measurement_circuit(const AnnotatedCircuit &circuit, const DenseState &state, Rng &rng) {
    if (state.num_qudits() != circuit.num_data) {
        throw std::invalid_argument("state does not match the circuit's data register");
    }
    std::size_t total = circuit.labels.size();
    checked_hilbert_dimension(state.dim(), total, dense_amplitude_cap());
    DenseState s = state;
    int digits = 0;
    std::vector<std::size_t> ancillas;
    for (const auto &op : circuit.ops) {
        switch (op.kind) {
            case CircuitOp::Kind::PrepareSumZero:
                s = tensor(s, sum_zero_state(state.dim(), op.qudits.size()));
                ancillas = op.qudits;
                break;
            case CircuitOp::Kind::Gate:
                s = apply(s, op.gate, op.qudits);
                break;
            case CircuitOp::Kind::MeasureZ: {
                auto m = measure_pauli_dense(s, PauliOperator::z_on(state.dim(), total, op.qudits[0]), rng);
                s = m.state;
                digits += m.outcome;
                break;
            }
        }
    }
    return {state.dim().add(circuit.phase_offset, digits), discard_qudits(s, ancillas)};
}

inline std::vector<QuditLabel> single_block_labels(std::size_t n) {
    std::vector<QuditLabel> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back({0, i, false});
    }
    return labels;
}

/// Measures generator `index` of the code on a dense block state with a
/// transversal circuit and a sum-zero ancilla.
inline ExtractionResult transversal_syndrome_extraction(const StabilizerCode &c, const DenseState &state,
                                                        std::size_t index, Rng &rng) {
    if (index >= c.generators.size()) {
        throw std::out_of_range("generator index out of range");
    }
    auto circuit = pauli_measurement_circuit(c.generators[index], single_block_labels(c.n));
    return run_measurement_circuit(circuit, state, rng);
}

// ---------------------------------------------------------------------------
// SUM between encoded qudits.

/// A register of equal-size blocks of one code; logical qudit j of block b
/// has flat index b * k + j.
struct BlockLayout {
    StabilizerCode code;
    std::size_t blocks;

    std::size_t block_of(std::size_t logical) const {
        return logical / code.k;
    }
    PauliOperator embed(const PauliOperator &local, std::size_t block) const {
        std::vector<std::size_t> qs;
        for (std::size_t i = 0; i < code.n; ++i) {
            qs.push_back(block * code.n + i);
        }
        return PauliOperator::embedded(local, code.n * blocks, qs);
    }
    PauliOperator logical_x(std::size_t logical) const {
        return embed(code.logical_x[logical % code.k], block_of(logical));
    }
    PauliOperator logical_z(std::size_t logical) const {
        return embed(code.logical_z[logical % code.k], block_of(logical));
    }
    std::vector<QuditLabel> labels() const {
        std::vector<QuditLabel> out;
        for (std::size_t b = 0; b < blocks; ++b) {
            for (std::size_t i = 0; i < code.n; ++i) {
                out.push_back({static_cast<int>(b), i, false});
            }
        }
        return out;
    }
};

/// The three encoded measurements (operator, correction) that move the SUM
/// from `source` to `target` through the encoded ancilla.
inline std::vector<std::pair<PauliOperator, PauliOperator>> logical_sum_measurements(const BlockLayout &layout,
                                                                                    std::size_t source,
                                                                                    std::size_t target,
                                                                                    std::size_t ancilla) {
    auto xs = layout.logical_x(source);
    auto xt = layout.logical_x(target);
    auto xa = layout.logical_x(ancilla);
    auto zs = layout.logical_z(source);
    auto za = layout.logical_z(ancilla);
    return {
        {xt * inverse(xa), za},
        {zs * za, xt * inverse(xa)},
        {xa, zs * za},
    };
}

inline void check_logical_sum_indices(const BlockLayout &layout, std::size_t source, std::size_t target,
                                      std::size_t ancilla) {
    std::size_t total = layout.blocks * layout.code.k;
    if (source >= total || target >= total || ancilla >= total) {
        throw std::out_of_range("logical index out of range");
    }
    if (source == target || source == ancilla || target == ancilla) {
        throw std::invalid_argument("source, target and ancilla logical qudits must be distinct");
    }
    if (layout.code.k != 1) {
        throw std::invalid_argument("the ancilla block is discarded, so each block must hold one logical qudit");
    }
}

/// Encoded SUM source -> target using measurements only, on a tableau of the
/// block register. The ancilla block must be in encoded |0>; it is removed.
inline StabilizerTableau logical_sum_between_blocks(const BlockLayout &layout, const StabilizerTableau &t,
                                                    std::size_t source, std::size_t target, std::size_t ancilla,
                                                    Rng &rng) {
    check_logical_sum_indices(layout, source, target, ancilla);
    if (deterministic_outcome(t, layout.logical_z(ancilla)) != 0) {
        throw std::invalid_argument("ancilla logical qudit is not in encoded |0>");
    }
    StabilizerTableau cur = t;
    for (const auto &[a, m] : logical_sum_measurements(layout, source, target, ancilla)) {
        cur = measure_pauli(cur, a, rng, {.post_select = std::nullopt, .correct = true, .correction_operator = m})
                  .tableau;
    }
    std::vector<std::size_t> qs;
    std::size_t b = layout.block_of(ancilla);
    for (std::size_t i = 0; i < layout.code.n; ++i) {
        qs.push_back(b * layout.code.n + i);
    }
    return discard_qudits(cur, qs);
}

/// The same protocol on a dense register, with optional forced outcomes.
inline DenseState logical_sum_between_blocks_dense(const BlockLayout &layout, const DenseState &state,
                                                   std::size_t source, std::size_t target, std::size_t ancilla,
                                                   Rng &rng, const std::vector<int> &post_select = {}) {
    check_logical_sum_indices(layout, source, target, ancilla);
    DenseState s = state;
    std::size_t i = 0;
    for (const auto &[a, m] : logical_sum_measurements(layout, source, target, ancilla)) {
        std::optional<int> forced;
        if (i < post_select.size()) {
            forced = post_select[i];
        }
        ++i;
        auto r = measure_pauli_dense(s, a, rng, forced);
        s = r.state;
        int k = s.dim().inv(commutation_exponent(m, a));
        if (r.outcome != 0) {
            s = apply_pauli(s, power(m, static_cast<std::int64_t>(k) * r.outcome));
        }
    }
    std::vector<std::size_t> qs;
    std::size_t b = layout.block_of(ancilla);
    for (std::size_t q = 0; q < layout.code.n; ++q) {
        qs.push_back(b * layout.code.n + q);
    }
    return discard_qudits(s, qs);
}

// ---------------------------------------------------------------------------
// Code files.

class CodeParseError : public std::invalid_argument {
   public:
    CodeParseError(std::size_t line, const std::string &message)
        : std::invalid_argument("line " + std::to_string(line) + ": " + message), line_(line) {
    }
    std::size_t line() const noexcept {
        return line_;
    }

   private:
    std::size_t line_;
};

/// Parses `code n=<n> k=<k> d=<d>` followed by `S:`, `LX<i>:` and `LZ<i>:`
/// lines. Blank lines and `#` comments are ignored.
inline StabilizerCode parse_code(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::optional<StabilizerCode> code;
    std::map<std::size_t, PauliOperator> lx;
    std::map<std::size_t, PauliOperator> lz;
    static const std::regex header(R"(^\s*code\s+n=(\d+)\s+k=(\d+)\s+d=(\d+)\s*$)");
    static const std::regex logical(R"(^L([XZ])(\d+)$)");
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        if (!code) {
            std::smatch m;
            if (!std::regex_match(line, m, header)) {
                throw CodeParseError(lineno, "expected header 'code n=<n> k=<k> d=<d>'");
            }
            int d = std::stoi(m[3]);
            if (d > kMaxDimension || !is_prime(d) || d == 2) {
                throw CodeParseError(lineno, "d=" + m[3].str() + " is not an odd prime <= " +
                                                 std::to_string(kMaxDimension));
            }
            std::size_t n = std::stoul(m[1]);
            std::size_t k = std::stoul(m[2]);
            if (n == 0 || k > n) {
                throw CodeParseError(lineno, "need n >= 1 and k <= n");
            }
            code = StabilizerCode{Dimension(d), n, k, {}, {}, {}};
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw CodeParseError(lineno, "expected 'S:', 'LX<i>:' or 'LZ<i>:'");
        }
        std::string tag = line.substr(0, colon);
        tag.erase(0, tag.find_first_not_of(" \t"));
        tag.erase(tag.find_last_not_of(" \t") + 1);
        PauliOperator op = PauliOperator::identity(code->dim, code->n);
        try {
            op = parse_pauli(code->dim, std::string_view(line).substr(colon + 1), code->n);
        } catch (const PauliParseError &e) {
            throw CodeParseError(lineno, std::string(e.what()) + " (column " + std::to_string(colon + 1 + e.column()) +
                                             ")");
        } catch (const std::invalid_argument &e) {
            throw CodeParseError(lineno, e.what());
        }
        std::smatch m;
        if (tag == "S") {
            code->generators.push_back(op);
        } else if (std::regex_match(tag, m, logical)) {
            std::size_t idx = std::stoul(m[2]);
            if (idx >= code->k) {
                throw CodeParseError(lineno, "logical index " + m[2].str() + " >= k");
            }
            auto &slot = m[1] == "X" ? lx : lz;
            if (!slot.emplace(idx, op).second) {
                throw CodeParseError(lineno, "duplicate " + tag);
            }
        } else {
            throw CodeParseError(lineno, "unknown line tag '" + tag + "'");
        }
    }
    if (!code) {
        throw CodeParseError(lineno, "missing header");
    }
    for (std::size_t i = 0; i < code->k; ++i) {
        if (!lx.count(i) || !lz.count(i)) {
            throw CodeParseError(lineno, "missing LX" + std::to_string(i) + " or LZ" + std::to_string(i));
        }
        code->logical_x.push_back(lx.at(i));
        code->logical_z.push_back(lz.at(i));
    }
    return *code;
}

inline StabilizerCode load_code(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error("cannot open " + path);
    }
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_code(buf.str());
}

inline std::string str(const StabilizerCode &c) {
    std::ostringstream os;
    os << "code n=" << c.n << " k=" << c.k << " d=" << c.dim.d() << "\n";
    for (const auto &g : c.generators) {
        os << "S: " << g.str() << "\n";
    }
    for (std::size_t i = 0; i < c.k; ++i) {
        os << "LX" << i << ": " << c.logical_x[i].str() << "\n";
        os << "LZ" << i << ": " << c.logical_z[i].str() << "\n";
    }
    return os.str();
}

}  // namespace quditft
