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

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quditft/dense.hpp"
#include "quditft/gadgets.hpp"

// The Toffoli gate by teleportation through the |A> = sum_ab |a,b,ab> / d
// ancilla, plus the CAT-state measurement used to prepare |A>.

namespace quditft {

/// Applies g^j to `targets` when `control` is in |j>, for a diagonal gate g
/// whose entries are d-th roots of unity.
inline DenseState apply_controlled_diagonal_power(const DenseState &state, const Gate &g, std::size_t control,
                                                  std::span<const std::size_t> targets) {
    std::vector<std::size_t> all(targets.begin(), targets.end());
    all.push_back(control);
    detail::check_qudits(state.num_qudits(), all);
    auto exps = diagonal_exponents(g, state.dim());
    const auto d = static_cast<std::size_t>(state.dim().d());
    ComplexVector out = state.amplitudes();
    for (std::size_t idx = 0; idx < state.size(); ++idx) {
        auto digits = state.digits(idx);
        std::size_t local = 0;
        for (auto q : targets) {
            local = local * d + static_cast<std::size_t>(digits[q]);
        }
        std::int64_t phase = static_cast<std::int64_t>(digits[control]) * exps[local];
        out(static_cast<Eigen::Index>(idx)) *= state.dim().omega(phase);
    }
    return DenseState(state.dim(), state.num_qudits(), std::move(out));
}

/// The r-qudit state sum_j |j j ... j> / sqrt(d).
inline DenseState cat_state(const Dimension &dim, std::size_t r) {
    std::size_t size = checked_hilbert_dimension(dim, r, dense_amplitude_cap());
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(size));
    std::size_t ones = 0;
    for (std::size_t k = 0; k < r; ++k) {
        ones = ones * static_cast<std::size_t>(dim.d()) + 1;
    }
    for (int j = 0; j < dim.d(); ++j) {
        v(static_cast<Eigen::Index>(ones * static_cast<std::size_t>(j))) = 1.0 / std::sqrt(static_cast<double>(dim.d()));
    }
    return DenseState(dim, r, std::move(v));
}

/// The transversal factors of a diagonal three-qudit Clifford: each factor
/// is a diagonal gate on a subset of the gate's qudits.
struct DiagonalFactor {
    Gate gate;
    std::vector<std::size_t> positions;  // indices into the gate's qudits
};

inline std::vector<DiagonalFactor> diagonal_factors(const Gate &g, const Dimension &dim) {
    switch (g.kind) {
        case GateKind::M3:
            // M3 = Z on the third qudit times PHASE2^-1 on the first two.
            return {{{GateKind::Z, g.param}, {2}}, {{GateKind::Phase2, dim.mod(-g.param)}, {0, 1}}};
        case GateKind::Z:
        case GateKind::Phase2:
        case GateKind::Phase:
            return {{g, {}}};
        default:
            break;
    }
    diagonal_exponents(g, dim);  // throws for non-diagonal gates
    return {{g, {}}};
}

struct CatMeasurement {
    int outcome;
    DenseState state;
};

/// Measures the eigenvalue exponent of a diagonal Clifford on `qudits`
/// through an r-qudit CAT state: factor i is controlled by CAT qudit i mod r,
/// the CAT register is measured in the X basis and s = -sum of the digits.
inline CatMeasurement measure_via_cat(const Gate &g, const DenseState &state, std::span<const std::size_t> qudits,
                                      std::size_t r, Rng &rng) {
    if (r == 0) {
        throw std::invalid_argument("CAT block size must be positive");
    }
    if (qudits.size() != arity(g.kind)) {
        throw std::invalid_argument("wrong number of qudits for " + std::string(mnemonic(g.kind)));
    }
    const Dimension &dim = state.dim();
    std::size_t n = state.num_qudits();
    DenseState s = tensor(state, cat_state(dim, r));
    auto factors = diagonal_factors(g, dim);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        std::vector<std::size_t> targets;
        if (factors[i].positions.empty()) {
            targets.assign(qudits.begin(), qudits.end());
        } else {
            for (auto p : factors[i].positions) {
                targets.push_back(qudits[p]);
            }
        }
        s = apply_controlled_diagonal_power(s, factors[i].gate, n + i % r, targets);
    }
    int total = 0;
    for (std::size_t k = 0; k < r; ++k) {
        auto m = measure_pauli_dense(s, PauliOperator::x_on(dim, n + r, n + k), rng);
        s = m.state;
        total += m.outcome;
    }
    std::vector<std::size_t> cat(r);
    for (std::size_t k = 0; k < r; ++k) {
        cat[k] = n + k;
    }
    return {dim.neg(total), discard_qudits(s, cat)};
}

/// |A> as an explicit vector.
inline DenseState toffoli_ancilla_exact(const Dimension &dim) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim.d() * dim.d() * dim.d()));
    for (int a = 0; a < dim.d(); ++a) {
        for (int b = 0; b < dim.d(); ++b) {
            v((a * dim.d() + b) * dim.d() + dim.mul(a, b)) = 1.0 / dim.d();
        }
    }
    return DenseState(dim, 3, std::move(v));
}

struct AncillaPreparation {
    DenseState state;
    int m3_outcome;
};

/// Fourier transform of |000>, M3 measurement (directly or through a CAT
/// block of size cat_size), then X^-j on the third qudit.
inline AncillaPreparation prepare_toffoli_ancilla(const Dimension &dim, Rng &rng, std::size_t cat_size = 0,
                                                  std::optional<int> post_select = std::nullopt) {
    DenseState s = DenseState::zero(dim, 3);
    for (std::size_t q = 0; q < 3; ++q) {
        s = apply(s, {GateKind::Fourier, 1}, {q});
    }
    std::size_t qs[] = {0, 1, 2};
    int j = 0;
    if (cat_size == 0) {
        auto m = measure_diagonal_unitary(s, {GateKind::M3, 1}, qs, rng, post_select);
        s = m.state;
        j = m.outcome;
    } else {
        if (post_select) {
            throw std::invalid_argument("post-selection is only supported for the direct M3 measurement");
        }
        auto m = measure_via_cat({GateKind::M3, 1}, s, qs, cat_size, rng);
        s = m.state;
        j = m.outcome;
    }
    if (j != 0) {
        s = apply(s, {GateKind::X, -j}, {2});
    }
    return {s, j};
}

// ---------------------------------------------------------------------------
// Corrections.

/// A gate of a correction circuit on the three output qudits.
struct CorrectionGate {
    Gate gate;
    std::vector<std::size_t> qudits;
};

using OutcomeTriple = std::array<int, 3>;

struct CorrectionTable {
    Dimension dim;
    std::map<OutcomeTriple, std::vector<CorrectionGate>> entries;

    const std::vector<CorrectionGate> &at(const OutcomeTriple &m) const {
        auto it = entries.find(m);
        if (it == entries.end()) {
            throw std::out_of_range("no correction for outcome triple");
        }
        return it->second;
    }
};

inline std::string str(const std::vector<CorrectionGate> &circuit) {
    if (circuit.empty()) {
        return "(none)";
    }
    std::string out;
    for (const auto &c : circuit) {
        if (!out.empty()) {
            out += "; ";
        }
        out += std::string(mnemonic(c.gate.kind));
        if (c.gate.param != 1) {
            out += "^" + std::to_string(c.gate.param);
        }
        for (auto q : c.qudits) {
            out += " " + std::to_string(q);
        }
    }
    return out;
}

struct ToffoliRun {
    OutcomeTriple outcomes;
    DenseState state;
};

namespace detail {

inline DenseState apply_correction(DenseState s, const std::vector<CorrectionGate> &circuit,
                                   std::span<const std::size_t> outputs) {
    for (const auto &c : circuit) {
        std::vector<std::size_t> qs;
        for (auto q : c.qudits) {
            qs.push_back(outputs[q]);
        }
        s = apply(s, c.gate, qs);
    }
    return s;
}

// Runs the teleportation protocol on `data` of `state`; the outputs replace
// the data qudits. `table` may be null (no correction).
inline ToffoliRun run_toffoli_protocol(const DenseState &state, std::span<const std::size_t> data,
                                       const DenseState &ancilla, const CorrectionTable *table, Rng &rng,
                                       std::optional<OutcomeTriple> post_select) {
    if (data.size() != 3) {
        throw std::invalid_argument("Toffoli acts on 3 qudits");
    }
    check_qudits(state.num_qudits(), data);
    const Dimension &dim = state.dim();
    std::size_t n = state.num_qudits();
    DenseState s = tensor(state, ancilla);
    std::size_t a0 = n;
    std::size_t a1 = n + 1;
    std::size_t a2 = n + 2;
    s = apply(s, {GateKind::InvSum, 1}, {a0, data[0]});
    s = apply(s, {GateKind::InvSum, 1}, {a1, data[1]});
    s = apply(s, {GateKind::Sum, 1}, {data[2], a2});
    OutcomeTriple m{};
    const PauliOperator observables[] = {PauliOperator::z_on(dim, n + 3, data[0]),
                                         PauliOperator::z_on(dim, n + 3, data[1]),
                                         PauliOperator::x_on(dim, n + 3, data[2])};
    for (std::size_t i = 0; i < 3; ++i) {
        std::optional<int> forced;
        if (post_select) {
            forced = (*post_select)[i];
        }
        auto r = measure_pauli_dense(s, observables[i], rng, forced);
        s = r.state;
        m[i] = r.outcome;
    }
    std::size_t outputs[] = {a0, a1, a2};
    if (table) {
        s = apply_correction(std::move(s), table->at(m), outputs);
    }
    s = discard_qudits(s, data);
    // After the discard the outputs sit at the end; move them into the data
    // slots, keeping every other qudit in order.
    std::vector<bool> is_data(n, false);
    for (auto q : data) {
        is_data[q] = true;
    }
    std::vector<std::size_t> perm(n);
    std::size_t next = 0;
    for (std::size_t pos = 0; pos < n; ++pos) {
        if (!is_data[pos]) {
            perm[pos] = next++;
        }
    }
    for (std::size_t i = 0; i < 3; ++i) {
        perm[data[i]] = n - 3 + i;
    }
    return {m, permute_qudits(s, perm)};
}

// Kraus operator of one outcome triple (uncorrected), normalized so that
// K^dag K = I, via the maximally entangled data/reference input.
inline ComplexMatrix toffoli_kraus(const Dimension &dim, const OutcomeTriple &m, const DenseState &ancilla) {
    std::size_t size = static_cast<std::size_t>(dim.d() * dim.d() * dim.d());
    ComplexVector choi = ComplexVector::Zero(static_cast<Eigen::Index>(size * size));
    for (std::size_t j = 0; j < size; ++j) {
        choi(static_cast<Eigen::Index>(j * size + j)) = 1.0;
    }
    choi.normalize();
    Rng rng(0);
    std::size_t data[] = {0, 1, 2};
    auto run = run_toffoli_protocol(DenseState(dim, 6, std::move(choi)), data, ancilla, nullptr, rng, m);
    ComplexMatrix k(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                run.state.amplitudes()(static_cast<Eigen::Index>(i * size + j));
        }
    }
    return k * std::sqrt(static_cast<double>(size));
}

inline CliffordMap embed3(const CliffordMap &local, std::vector<std::size_t> qudits) {
    std::vector<PauliOperator> xs;
    std::vector<PauliOperator> zs;
    for (std::size_t q = 0; q < 3; ++q) {
        xs.push_back(local.apply_on(PauliOperator::x_on(local.dim(), 3, q), qudits));
        zs.push_back(local.apply_on(PauliOperator::z_on(local.dim(), 3, q), qudits));
    }
    return CliffordMap(std::move(xs), std::move(zs));
}

}  // namespace detail

/// Search template for the corrections, in time order:
/// X^p0 on 0, X^p1 on 1, SUM(0 -> 2)^q0, SUM(1 -> 2)^q1, X^p2 on 2, Z^r2 on 2,
/// PHASE2(0, 1)^r01. Each power ranges over Z_d.
inline std::vector<CorrectionGate> correction_template(const std::array<int, 7> &powers) {
    const CorrectionGate slots[] = {
        {{GateKind::X, 1}, {0}},      {{GateKind::X, 1}, {1}}, {{GateKind::Sum, 1}, {0, 2}},
        {{GateKind::Sum, 1}, {1, 2}}, {{GateKind::X, 1}, {2}}, {{GateKind::Z, 1}, {2}},
        {{GateKind::Phase2, 1}, {0, 1}},
    };
    std::vector<CorrectionGate> out;
    for (std::size_t i = 0; i < 7; ++i) {
        if (powers[i] != 0) {
            CorrectionGate c = slots[i];
            c.gate.param = powers[i];
            out.push_back(c);
        }
    }
    return out;
}

/// Derives the correction for every outcome triple: the Clifford C_m with
/// C_m K_m = Toffoli up to phase is read off from the Kraus operator K_m and
/// matched against the template. Throws if some entry has no match.
inline CorrectionTable derive_toffoli_corrections(const Dimension &dim) {
    const int d = dim.d();
    DenseState ancilla = toffoli_ancilla_exact(dim);
    ComplexMatrix toffoli = gate_matrix({GateKind::Toffoli, 1}, dim);

    // Target map per outcome triple.
    std::map<OutcomeTriple, CliffordMap> targets;
    for (int v = 0; v < d * d * d; ++v) {
        OutcomeTriple m{v / (d * d), (v / d) % d, v % d};
        ComplexMatrix k = detail::toffoli_kraus(dim, m, ancilla);
        targets.emplace(m, clifford_map_of_unitary(toffoli * k.adjoint(), dim, 3));
    }

    // Per-slot maps for every power.
    const std::array<std::pair<Gate, std::vector<std::size_t>>, 7> slots{{
        {{GateKind::X, 1}, {0}},
        {{GateKind::X, 1}, {1}},
        {{GateKind::Sum, 1}, {0, 2}},
        {{GateKind::Sum, 1}, {1, 2}},
        {{GateKind::X, 1}, {2}},
        {{GateKind::Z, 1}, {2}},
        {{GateKind::Phase2, 1}, {0, 1}},
    }};
    std::vector<std::vector<CliffordMap>> slot_maps(7);
    for (std::size_t i = 0; i < 7; ++i) {
        for (int p = 0; p < d; ++p) {
            Gate g = slots[i].first;
            g.param = p;
            slot_maps[i].push_back(detail::embed3(clifford_map_of_gate(g, dim), slots[i].second));
        }
    }

    CorrectionTable table{dim, {}};
    // Enumerate in order of increasing number of nontrivial factors so the
    // all-zero outcome gets the empty circuit.
    std::vector<std::array<int, 7>> candidates;
    std::array<int, 7> powers{};
    std::size_t total = 1;
    for (int i = 0; i < 7; ++i) {
        total *= static_cast<std::size_t>(d);
    }
    for (std::size_t c = 0; c < total; ++c) {
        std::size_t rest = c;
        for (int i = 0; i < 7; ++i) {
            powers[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(d));
            rest /= static_cast<std::size_t>(d);
        }
        candidates.push_back(powers);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const auto &a, const auto &b) {
        return std::count(a.begin(), a.end(), 0) > std::count(b.begin(), b.end(), 0);
    });
    for (const auto &cand : candidates) {
        if (table.entries.size() == targets.size()) {
            break;
        }
        CliffordMap map = CliffordMap::identity(dim, 3);
        for (std::size_t i = 0; i < 7; ++i) {
            if (cand[i] != 0) {
                map = map.then(slot_maps[i][static_cast<std::size_t>(cand[i])]);
            }
        }
        for (const auto &[m, target] : targets) {
            if (!table.entries.count(m) && map == target) {
                table.entries.emplace(m, correction_template(cand));
            }
        }
    }
    for (const auto &[m, target] : targets) {
        if (!table.entries.count(m)) {
            throw std::runtime_error("no Toffoli correction found for outcomes (" + std::to_string(m[0]) + "," +
                                     std::to_string(m[1]) + "," + std::to_string(m[2]) + ")");
        }
    }
    return table;
}

/// Applies Toffoli to `data` (control, control, target) by teleportation
/// through |A>, using `table` for the corrections.
inline ToffoliRun gadget_toffoli(const DenseState &state, std::span<const std::size_t> data,
                                 const CorrectionTable &table, Rng &rng,
                                 std::optional<OutcomeTriple> post_select = std::nullopt) {
    auto ancilla = prepare_toffoli_ancilla(state.dim(), rng);
    return detail::run_toffoli_protocol(state, data, ancilla.state, &table, rng, post_select);
}

}  // namespace quditft
