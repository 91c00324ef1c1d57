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

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "quditft/clifford_map.hpp"

namespace quditft {

enum class GateKind {
    Fourier,  // R: |j> -> sum_s omega^(j s) |s> / sqrt(d)
    Phase,    // P: |j> -> omega^(j (j-1) / 2) |j>
    Sum,      // |i>|j> -> |i>|i + j>
    InvSum,   // |i>|j> -> |i>|j - i>
    Scale,    // S_a: |j> -> |a j>
    X,
    Z,
    Phase2,   // |a>|b> -> omega^(a b) |a>|b>
    Toffoli,  // |a>|b>|c> -> |a>|b>|c + a b>
    M1,       // (X (x) I (x) I) SUM(2 -> 3)
    M2,       // (I (x) X (x) I) SUM(1 -> 3)
    M3,       // (I (x) I (x) Z) PHASE(1, 2)^-1
};

/// A gate kind with an integer parameter. For Scale the parameter is the
/// multiplier a (gcd(a, d) = 1); for every other kind it is the power the
/// base gate is raised to.
struct Gate {
    GateKind kind;
    int param = 1;

    friend bool operator==(const Gate &, const Gate &) = default;
};

inline std::size_t arity(GateKind kind) {
    switch (kind) {
        case GateKind::Sum:
        case GateKind::InvSum:
        case GateKind::Phase2:
            return 2;
        case GateKind::Toffoli:
        case GateKind::M1:
        case GateKind::M2:
        case GateKind::M3:
            return 3;
        default:
            return 1;
    }
}

inline bool is_clifford(GateKind kind) {
    return kind != GateKind::Toffoli;
}

/// Multiplicative order of the base gate (Fourier squares to parity).
inline int base_order(GateKind kind, const Dimension &dim) {
    return kind == GateKind::Fourier ? 4 : dim.d();
}

inline std::string_view mnemonic(GateKind kind) {
    switch (kind) {
        case GateKind::Fourier:
            return "r";
        case GateKind::Phase:
            return "p";
        case GateKind::Sum:
            return "sum";
        case GateKind::InvSum:
            return "invsum";
        case GateKind::Scale:
            return "scale";
        case GateKind::X:
            return "x";
        case GateKind::Z:
            return "z";
        case GateKind::Phase2:
            return "phase2";
        case GateKind::Toffoli:
            return "toffoli";
        case GateKind::M1:
            return "m1";
        case GateKind::M2:
            return "m2";
        case GateKind::M3:
            return "m3";
    }
    return "?";
}

inline std::optional<GateKind> gate_kind_from_mnemonic(std::string_view name) {
    static constexpr std::array<std::pair<std::string_view, GateKind>, 14> table{{
        {"r", GateKind::Fourier},
        {"fourier", GateKind::Fourier},
        {"p", GateKind::Phase},
        {"phase", GateKind::Phase},
        {"sum", GateKind::Sum},
        {"invsum", GateKind::InvSum},
        {"scale", GateKind::Scale},
        {"x", GateKind::X},
        {"z", GateKind::Z},
        {"phase2", GateKind::Phase2},
        {"toffoli", GateKind::Toffoli},
        {"m1", GateKind::M1},
        {"m2", GateKind::M2},
        {"m3", GateKind::M3},
    }};
    for (const auto &[k, v] : table) {
        if (k == name) {
            return v;
        }
    }
    return std::nullopt;
}

/// Throws unless the gate is well formed for this dimension.
inline void validate_gate(const Gate &g, const Dimension &dim) {
    if (g.kind == GateKind::Scale && !dim.invertible(g.param)) {
        throw std::invalid_argument("scale factor not invertible mod " + std::to_string(dim.d()));
    }
}

/// The power in [0, order) that `g` raises its base gate to.
inline int normalized_power(const Gate &g, const Dimension &dim) {
    if (g.kind == GateKind::Scale) {
        return 1;
    }
    int order = base_order(g.kind, dim);
    int k = g.param % order;
    return k < 0 ? k + order : k;
}

namespace detail {

inline PauliOperator local_pauli(const Dimension &dim, std::initializer_list<std::pair<int, int>> factors, int phase = 0) {
    std::vector<int> x;
    std::vector<int> z;
    for (auto [a, b] : factors) {
        x.push_back(a);
        z.push_back(b);
    }
    return PauliOperator(dim, phase, std::move(x), std::move(z));
}

// Embeds a local map on `qudits` of an n-qudit register.
inline CliffordMap embed_map(const CliffordMap &local, std::size_t n, std::initializer_list<std::size_t> qudits) {
    std::vector<std::size_t> qs(qudits);
    std::vector<PauliOperator> xs;
    std::vector<PauliOperator> zs;
    for (std::size_t q = 0; q < n; ++q) {
        xs.push_back(local.apply_on(PauliOperator::x_on(local.dim(), n, q), qs));
        zs.push_back(local.apply_on(PauliOperator::z_on(local.dim(), n, q), qs));
    }
    return CliffordMap(std::move(xs), std::move(zs));
}

inline CliffordMap base_clifford_map(GateKind kind, int scale, const Dimension &dim) {
    const int m1 = dim.neg(1);
    switch (kind) {
        case GateKind::Fourier:
            return CliffordMap({local_pauli(dim, {{0, 1}})}, {local_pauli(dim, {{m1, 0}})});
        case GateKind::Phase:
            return CliffordMap({local_pauli(dim, {{1, 1}})}, {local_pauli(dim, {{0, 1}})});
        case GateKind::Sum:
            return CliffordMap({local_pauli(dim, {{1, 0}, {1, 0}}), local_pauli(dim, {{0, 0}, {1, 0}})},
                               {local_pauli(dim, {{0, 1}, {0, 0}}), local_pauli(dim, {{0, m1}, {0, 1}})});
        case GateKind::InvSum:
            return base_clifford_map(GateKind::Sum, 1, dim).power(dim.d() - 1);
        case GateKind::Scale:
            return CliffordMap({local_pauli(dim, {{scale, 0}})}, {local_pauli(dim, {{0, dim.inv(scale)}})});
        case GateKind::X:
            return CliffordMap({local_pauli(dim, {{1, 0}})}, {local_pauli(dim, {{0, 1}}, m1)});
        case GateKind::Z:
            return CliffordMap({local_pauli(dim, {{1, 0}}, 1)}, {local_pauli(dim, {{0, 1}})});
        case GateKind::Phase2:
            return CliffordMap({local_pauli(dim, {{1, 0}, {0, 1}}), local_pauli(dim, {{0, 1}, {1, 0}})},
                               {local_pauli(dim, {{0, 1}, {0, 0}}), local_pauli(dim, {{0, 0}, {0, 1}})});
        case GateKind::M1:
            return embed_map(base_clifford_map(GateKind::Sum, 1, dim), 3, {1, 2})
                .then(embed_map(base_clifford_map(GateKind::X, 1, dim), 3, {0}));
        case GateKind::M2:
            return embed_map(base_clifford_map(GateKind::Sum, 1, dim), 3, {0, 2})
                .then(embed_map(base_clifford_map(GateKind::X, 1, dim), 3, {1}));
        case GateKind::M3:
            return embed_map(base_clifford_map(GateKind::Phase2, 1, dim).power(dim.d() - 1), 3, {0, 1})
                .then(embed_map(base_clifford_map(GateKind::Z, 1, dim), 3, {2}));
        case GateKind::Toffoli:
            break;
    }
    throw std::invalid_argument("Toffoli is not a Clifford gate");
}

}  // namespace detail

/// Conjugation action U P U^dag of the gate on its arity() qudits.
inline CliffordMap clifford_map_of_gate(const Gate &g, const Dimension &dim) {
    validate_gate(g, dim);
    if (!is_clifford(g.kind)) {
        throw std::invalid_argument("Toffoli is not a Clifford gate and has no tableau action");
    }
    CliffordMap base = detail::base_clifford_map(g.kind, dim.mod(g.param), dim);
    if (g.kind == GateKind::Scale) {
        return base;
    }
    return base.power(normalized_power(g, dim));
}

}  // namespace quditft
