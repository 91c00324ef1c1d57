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
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "quditft/gates.hpp"
#include "quditft/linalg_zd.hpp"

namespace quditft {

using Rng = std::mt19937_64;

struct LogicalPair {
    PauliOperator x;
    PauliOperator z;

    friend bool operator==(const LogicalPair &, const LogicalPair &) = default;
};

/// Stabilizer generators plus logical X/Z pairs on n qudits, m + k = n.
///
/// Invariants: rows commute pairwise and are independent over Z_d;
/// commutation_exponent(X_i, Z_i) = -1 and every other logical/logical or
/// logical/row pair commutes. k = 0 describes a pure stabilizer state.
class StabilizerTableau {
   public:
    StabilizerTableau(Dimension dim, std::size_t n, std::vector<PauliOperator> rows, std::vector<LogicalPair> logicals)
        : dim_(dim), n_(n), rows_(std::move(rows)), logicals_(std::move(logicals)) {
        auto check = [&](const PauliOperator &p) {
            if (p.num_qudits() != n_ || p.dim() != dim_) {
                throw std::invalid_argument("tableau operator '" + p.str() + "' does not act on " +
                                            std::to_string(n_) + " qudits of dimension " + std::to_string(dim_.d()));
            }
        };
        for (const auto &r : rows_) {
            check(r);
        }
        for (const auto &l : logicals_) {
            check(l.x);
            check(l.z);
        }
#ifndef NDEBUG
        validate();
#endif
    }

    const Dimension &dim() const noexcept {
        return dim_;
    }
    std::size_t num_qudits() const noexcept {
        return n_;
    }
    const std::vector<PauliOperator> &rows() const noexcept {
        return rows_;
    }
    const std::vector<LogicalPair> &logicals() const noexcept {
        return logicals_;
    }
    std::size_t num_logicals() const noexcept {
        return logicals_.size();
    }
    bool is_pure() const noexcept {
        return logicals_.empty();
    }

    /// Description of the first violated invariant, if any.
    std::optional<std::string> invariant_violation() const {
        if (rows_.size() + logicals_.size() != n_) {
            return "row count " + std::to_string(rows_.size()) + " plus logical count " +
                   std::to_string(logicals_.size()) + " differs from qudit count " + std::to_string(n_);
        }
        for (std::size_t a = 0; a < rows_.size(); ++a) {
            for (std::size_t b = a + 1; b < rows_.size(); ++b) {
                if (!commutes(rows_[a], rows_[b])) {
                    return "stabilizer rows " + std::to_string(a) + " and " + std::to_string(b) + " do not commute";
                }
            }
        }
        zd::Matrix vecs;
        for (const auto &r : rows_) {
            vecs.push_back(r.symplectic_vector());
        }
        if (zd::rank(dim_, vecs) != rows_.size()) {
            return "stabilizer rows are not independent";
        }
        int minus_one = dim_.neg(1);
        for (std::size_t i = 0; i < logicals_.size(); ++i) {
            for (const auto &r : rows_) {
                if (!commutes(logicals_[i].x, r) || !commutes(logicals_[i].z, r)) {
                    return "logical pair " + std::to_string(i) + " does not commute with row " + r.str();
                }
            }
            if (commutation_exponent(logicals_[i].x, logicals_[i].z) != minus_one) {
                return "logical pair " + std::to_string(i) + " violates X Z = omega^-1 Z X";
            }
            for (std::size_t j = 0; j < logicals_.size(); ++j) {
                if (i == j) {
                    continue;
                }
                if (!commutes(logicals_[i].x, logicals_[j].x) || !commutes(logicals_[i].x, logicals_[j].z) ||
                    !commutes(logicals_[i].z, logicals_[j].z)) {
                    return "logical pairs " + std::to_string(i) + " and " + std::to_string(j) + " do not commute";
                }
            }
        }
        return std::nullopt;
    }

    void validate() const {
        if (auto err = invariant_violation()) {
            throw std::logic_error("invalid stabilizer tableau: " + *err);
        }
    }

    /// Stabilizer rows one per line, then `LX<i>: ...` / `LZ<i>: ...` lines.
    std::string str() const {
        std::ostringstream os;
        for (const auto &r : rows_) {
            os << r.str() << "\n";
        }
        for (std::size_t i = 0; i < logicals_.size(); ++i) {
            os << "LX" << i << ": " << logicals_[i].x.str() << "\n";
            os << "LZ" << i << ": " << logicals_[i].z.str() << "\n";
        }
        return os.str();
    }

    friend bool operator==(const StabilizerTableau &, const StabilizerTableau &) = default;

   private:
    Dimension dim_;
    std::size_t n_;
    std::vector<PauliOperator> rows_;
    std::vector<LogicalPair> logicals_;
};

inline std::ostream &operator<<(std::ostream &os, const StabilizerTableau &t) {
    return os << t.str();
}

enum class InitialKind {
    Zero,          // every qudit in |0>, rows Z_i
    XEigenstate,   // every qudit in the +1 eigenstate of X, rows X_i
    OpenLogical,   // no rows, logical pairs (X_i, Z_i)
};

inline StabilizerTableau initial_tableau(std::size_t n, Dimension dim, InitialKind kind) {
    if (n == 0) {
        throw std::invalid_argument("a tableau needs at least one qudit");
    }
    std::vector<PauliOperator> rows;
    std::vector<LogicalPair> logicals;
    for (std::size_t q = 0; q < n; ++q) {
        switch (kind) {
            case InitialKind::Zero:
                rows.push_back(PauliOperator::z_on(dim, n, q));
                break;
            case InitialKind::XEigenstate:
                rows.push_back(PauliOperator::x_on(dim, n, q));
                break;
            case InitialKind::OpenLogical:
                logicals.push_back({PauliOperator::x_on(dim, n, q), PauliOperator::z_on(dim, n, q)});
                break;
        }
    }
    return StabilizerTableau(dim, n, std::move(rows), std::move(logicals));
}

/// a (x) b, rows of a first then rows of b; logical pairs likewise.
inline StabilizerTableau tensor(const StabilizerTableau &a, const StabilizerTableau &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("tableaux over different dimensions");
    }
    PauliOperator id_a = PauliOperator::identity(a.dim(), a.num_qudits());
    PauliOperator id_b = PauliOperator::identity(b.dim(), b.num_qudits());
    std::vector<PauliOperator> rows;
    std::vector<LogicalPair> logicals;
    for (const auto &r : a.rows()) {
        rows.push_back(tensor(r, id_b));
    }
    for (const auto &r : b.rows()) {
        rows.push_back(tensor(id_a, r));
    }
    for (const auto &l : a.logicals()) {
        logicals.push_back({tensor(l.x, id_b), tensor(l.z, id_b)});
    }
    for (const auto &l : b.logicals()) {
        logicals.push_back({tensor(id_a, l.x), tensor(id_a, l.z)});
    }
    return StabilizerTableau(a.dim(), a.num_qudits() + b.num_qudits(), std::move(rows), std::move(logicals));
}

namespace detail {

template <typename F>
StabilizerTableau map_operators(const StabilizerTableau &t, F &&f) {
    std::vector<PauliOperator> rows;
    std::vector<LogicalPair> logicals;
    rows.reserve(t.rows().size());
    for (const auto &r : t.rows()) {
        rows.push_back(f(r));
    }
    for (const auto &l : t.logicals()) {
        logicals.push_back({f(l.x), f(l.z)});
    }
    return StabilizerTableau(t.dim(), t.num_qudits(), std::move(rows), std::move(logicals));
}

inline void check_qudits(std::size_t n, std::span<const std::size_t> qudits) {
    for (std::size_t i = 0; i < qudits.size(); ++i) {
        if (qudits[i] >= n) {
            throw std::out_of_range("qudit index " + std::to_string(qudits[i]) + " out of range for " +
                                    std::to_string(n) + " qudits");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (qudits[i] == qudits[j]) {
                throw std::invalid_argument("qudit " + std::to_string(qudits[i]) + " listed twice");
            }
        }
    }
}

// Symplectic coordinate `col` of p: x_col for col < n, z_(col-n) otherwise.
inline int coordinate(const PauliOperator &p, std::size_t col) {
    std::size_t n = p.num_qudits();
    return col < n ? p.x(col) : p.z(col - n);
}

// Unit-pivot reduced echelon form of commuting Pauli rows, with phases
// carried by the group multiplication. Columns are visited in `order`.
struct PauliEchelon {
    std::vector<PauliOperator> rows;
    std::vector<std::size_t> pivots;  // symplectic column of each row's pivot
    bool rank_deficient = false;
};

inline PauliEchelon pauli_echelon(std::vector<PauliOperator> rows, std::span<const std::size_t> order) {
    PauliEchelon out;
    std::size_t next = 0;
    for (std::size_t col : order) {
        if (next == rows.size()) {
            break;
        }
        std::size_t p = next;
        while (p < rows.size() && coordinate(rows[p], col) == 0) {
            ++p;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[p], rows[next]);
        const Dimension &dim = rows[next].dim();
        rows[next] = power(rows[next], dim.inv(coordinate(rows[next], col)));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            int f = r == next ? 0 : coordinate(rows[r], col);
            if (f != 0) {
                rows[r] = multiply(rows[r], power(rows[next], -f));
            }
        }
        out.pivots.push_back(col);
        ++next;
    }
    out.rank_deficient = next != rows.size();
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(next), rows.end());
    out.rows = std::move(rows);
    return out;
}

inline std::vector<std::size_t> natural_column_order(std::size_t n) {
    std::vector<std::size_t> order(2 * n);
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    return order;
}

// Clears the pivot coordinates of `p` using echelon rows.
inline PauliOperator reduce_by(PauliOperator p, const PauliEchelon &e) {
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
        int f = coordinate(p, e.pivots[i]);
        if (f != 0) {
            p = multiply(p, power(e.rows[i], -f));
        }
    }
    return p;
}

}  // namespace detail

/// Group-membership test: if omega^c p is a product of powers of `rows`,
/// returns the offset o with p = omega^o * prod rows^c_r.
inline std::optional<int> phase_offset_in_group(std::span<const PauliOperator> rows, const PauliOperator &p) {
    zd::Matrix vecs;
    for (const auto &r : rows) {
        vecs.push_back(r.symplectic_vector());
    }
    auto target = p.symplectic_vector();
    auto coeffs = zd::solve_combination(p.dim(), vecs, target);
    if (!coeffs) {
        return std::nullopt;
    }
    PauliOperator product = PauliOperator::identity(p.dim(), p.num_qudits());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if ((*coeffs)[r] != 0) {
            product = multiply(product, power(rows[r], (*coeffs)[r]));
        }
    }
    return p.dim().sub(p.phase(), product.phase());
}

/// Conjugates every row and logical operator by the gate acting on `qudits`.
inline StabilizerTableau conjugate_by_gate(const StabilizerTableau &t, const Gate &gate,
                                           std::span<const std::size_t> qudits) {
    if (qudits.size() != arity(gate.kind)) {
        throw std::invalid_argument(std::string(mnemonic(gate.kind)) + " acts on " +
                                    std::to_string(arity(gate.kind)) + " qudits, got " +
                                    std::to_string(qudits.size()));
    }
    detail::check_qudits(t.num_qudits(), qudits);
    CliffordMap map = clifford_map_of_gate(gate, t.dim());
    return detail::map_operators(t, [&](const PauliOperator &p) { return map.apply_on(p, qudits); });
}

inline StabilizerTableau conjugate_by_gate(const StabilizerTableau &t, const Gate &gate,
                                           std::initializer_list<std::size_t> qudits) {
    std::vector<std::size_t> qs(qudits);
    return conjugate_by_gate(t, gate, std::span<const std::size_t>(qs));
}

/// Conjugation by a Pauli unitary: N -> omega^c(P, N) N.
inline StabilizerTableau apply_pauli(const StabilizerTableau &t, const PauliOperator &p) {
    return detail::map_operators(t, [&](const PauliOperator &op) {
        return op.with_phase_shift(commutation_exponent(p, op));
    });
}

/// new qudit i = old qudit perm[i].
inline StabilizerTableau permute_qudits(const StabilizerTableau &t, std::span<const std::size_t> perm) {
    if (perm.size() != t.num_qudits()) {
        throw std::invalid_argument("permutation size mismatch");
    }
    detail::check_qudits(t.num_qudits(), perm);
    return detail::map_operators(t, [&](const PauliOperator &p) { return p.restricted_to(perm); });
}

struct MeasureOptions {
    /// Forces the outcome; must have nonzero probability.
    std::optional<int> post_select = std::nullopt;
    /// Apply M^outcome afterwards so the post-state is the +1 eigenstate of
    /// the measured operator. Without it the new row is omega^-a A.
    bool correct = true;
    /// Stabilizer element to use as M (any phase; a suitable power is taken).
    std::optional<PauliOperator> correction_operator = std::nullopt;
};

struct MeasurementResult {
    int outcome;
    StabilizerTableau tableau;
    /// Pauli applied as the correction (identity when none was needed).
    PauliOperator correction;
    bool deterministic;
};

/// Projective measurement of `a_op` with outcome a meaning eigenvalue omega^a.
///
/// If some stabilizer row fails to commute with a_op, that row (or the
/// supplied correction operator) is raised to the power M with M A = omega A M,
/// every other non-commuting row and logical is multiplied by the power of M
/// that restores commutation, the outcome is uniform, M^a is applied and M is
/// replaced by A. If only a logical operator fails to commute, the same is
/// done with M taken from that logical pair, which is consumed. Otherwise the
/// outcome is deterministic and read off by expressing A in the stabilizer.
inline MeasurementResult measure_pauli(const StabilizerTableau &t, const PauliOperator &a_op, Rng &rng,
                                       const MeasureOptions &options = {}) {
    const Dimension &dim = t.dim();
    if (a_op.num_qudits() != t.num_qudits() || a_op.dim() != dim) {
        throw std::invalid_argument("measured operator does not match the tableau");
    }
    if (options.post_select && (*options.post_select < 0 || *options.post_select >= dim.d())) {
        throw std::invalid_argument("post-selected outcome " + std::to_string(*options.post_select) +
                                    " outside Z_" + std::to_string(dim.d()));
    }
    std::vector<PauliOperator> rows = t.rows();
    std::vector<LogicalPair> logicals = t.logicals();
    auto draw = [&]() {
        if (options.post_select) {
            return *options.post_select;
        }
        std::uniform_int_distribution<int> dist(0, dim.d() - 1);
        return dist(rng);
    };
    auto fix_commutation = [&](PauliOperator &op, const PauliOperator &m) {
        int e = commutation_exponent(op, a_op);
        if (e != 0) {
            op = multiply(op, power(m, -e));
        }
    };
    auto finish = [&](std::size_t row_slot, bool append, const PauliOperator &m) {
        int outcome = draw();
        PauliOperator correction = PauliOperator::identity(dim, t.num_qudits());
        PauliOperator new_row = a_op;
        if (options.correct) {
            correction = power(m, outcome);
        } else {
            new_row = a_op.with_phase_shift(-outcome);
        }
        if (append) {
            rows.push_back(new_row);
        } else {
            rows[row_slot] = new_row;
        }
        return MeasurementResult{outcome, StabilizerTableau(dim, t.num_qudits(), std::move(rows), std::move(logicals)),
                                 std::move(correction), false};
    };

    auto pivot_on = [&](std::size_t p) {
        PauliOperator m = power(rows[p], dim.inv(commutation_exponent(rows[p], a_op)));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != p) {
                fix_commutation(rows[r], m);
            }
        }
        for (auto &l : logicals) {
            fix_commutation(l.x, m);
            fix_commutation(l.z, m);
        }
        return finish(p, false, m);
    };

    if (options.correction_operator) {
        const PauliOperator &named = *options.correction_operator;
        zd::Matrix vecs;
        for (const auto &r : rows) {
            vecs.push_back(r.symplectic_vector());
        }
        auto target = named.symplectic_vector();
        auto coeffs = zd::solve_combination(dim, vecs, target);
        if (!coeffs) {
            throw std::invalid_argument("correction operator " + named.str() + " is not in the stabilizer");
        }
        if (commutes(named, a_op)) {
            throw std::invalid_argument("correction operator " + named.str() + " commutes with measured operator " +
                                        a_op.str());
        }
        // Swap the group element equal to the named operator into the row set
        // in place of the first row it depends on.
        PauliOperator element = PauliOperator::identity(dim, t.num_qudits());
        std::size_t slot = rows.size();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if ((*coeffs)[r] != 0) {
                element = multiply(element, power(rows[r], (*coeffs)[r]));
                slot = std::min(slot, r);
            }
        }
        rows[slot] = element;
        return pivot_on(slot);
    }

    for (std::size_t p = 0; p < rows.size(); ++p) {
        if (!commutes(rows[p], a_op)) {
            return pivot_on(p);
        }
    }

    for (std::size_t j = 0; j < logicals.size(); ++j) {
        int alpha = commutation_exponent(logicals[j].x, a_op);
        int beta = commutation_exponent(logicals[j].z, a_op);
        if (alpha == 0 && beta == 0) {
            continue;
        }
        PauliOperator m = alpha != 0 ? power(logicals[j].x, dim.inv(alpha)) : power(logicals[j].z, dim.inv(beta));
        logicals.erase(logicals.begin() + static_cast<std::ptrdiff_t>(j));
        for (auto &l : logicals) {
            fix_commutation(l.x, m);
            fix_commutation(l.z, m);
        }
        return finish(0, true, m);
    }

    auto offset = phase_offset_in_group(rows, a_op);
    if (!offset) {
        throw std::logic_error("operator " + a_op.str() +
                               " commutes with the whole tableau but is not in the stabilizer; tableau is malformed");
    }
    if (options.post_select && *options.post_select != *offset) {
        throw std::invalid_argument("post-selected outcome " + std::to_string(*options.post_select) +
                                    " has zero probability (deterministic outcome is " + std::to_string(*offset) +
                                    ")");
    }
    return MeasurementResult{*offset, t, PauliOperator::identity(dim, t.num_qudits()), true};
}

/// Outcome of measuring `a_op` if it is deterministic, without touching rng.
inline std::optional<int> deterministic_outcome(const StabilizerTableau &t, const PauliOperator &a_op) {
    for (const auto &r : t.rows()) {
        if (!commutes(r, a_op)) {
            return std::nullopt;
        }
    }
    for (const auto &l : t.logicals()) {
        if (!commutes(l.x, a_op) || !commutes(l.z, a_op)) {
            return std::nullopt;
        }
    }
    return phase_offset_in_group(t.rows(), a_op);
}

/// Unique reduced row-echelon generators (unit pivots, columns x_0..x_n-1
/// then z_0..z_n-1); logical operators are reduced modulo the stabilizer.
inline StabilizerTableau canonicalize(const StabilizerTableau &t) {
    auto order = detail::natural_column_order(t.num_qudits());
    auto e = detail::pauli_echelon(t.rows(), order);
    if (e.rank_deficient) {
        throw std::logic_error("stabilizer rows are dependent; tableau is corrupted");
    }
    std::vector<LogicalPair> logicals;
    for (const auto &l : t.logicals()) {
        logicals.push_back({detail::reduce_by(l.x, e), detail::reduce_by(l.z, e)});
    }
    return StabilizerTableau(t.dim(), t.num_qudits(), std::move(e.rows), std::move(logicals));
}

/// Thrown when a discarded qudit is not in a product state with the rest.
class EntangledQuditError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Removes `qudits`, which must jointly be in a pure state unentangled from
/// the rest and untouched by any logical operator (after reduction).
inline StabilizerTableau discard_qudits(const StabilizerTableau &t, std::span<const std::size_t> qudits) {
    std::size_t n = t.num_qudits();
    detail::check_qudits(n, qudits);
    if (qudits.size() >= n) {
        throw std::invalid_argument("cannot discard every qudit");
    }
    std::vector<bool> dropped(n, false);
    for (auto q : qudits) {
        dropped[q] = true;
    }
    std::vector<std::size_t> order;
    for (auto q : qudits) {
        order.push_back(q);
        order.push_back(n + q);
    }
    std::vector<std::size_t> kept;
    for (std::size_t q = 0; q < n; ++q) {
        if (!dropped[q]) {
            kept.push_back(q);
            order.push_back(q);
            order.push_back(n + q);
        }
    }
    auto e = detail::pauli_echelon(t.rows(), order);
    if (e.rank_deficient) {
        throw std::logic_error("stabilizer rows are dependent; tableau is corrupted");
    }
    auto in_dropped = [&](std::size_t col) { return dropped[col < n ? col : col - n]; };
    std::size_t local_rows = 0;
    std::vector<PauliOperator> rows;
    detail::PauliEchelon local;
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
        if (in_dropped(e.pivots[i])) {
            for (auto q : kept) {
                if (e.rows[i].x(q) != 0 || e.rows[i].z(q) != 0) {
                    throw EntangledQuditError("qudit still entangled: stabilizer row " + e.rows[i].str() +
                                              " couples discarded and kept qudits");
                }
            }
            ++local_rows;
            local.rows.push_back(e.rows[i]);
            local.pivots.push_back(e.pivots[i]);
        } else {
            rows.push_back(e.rows[i].restricted_to(kept));
        }
    }
    if (local_rows != qudits.size()) {
        throw EntangledQuditError("qudit still entangled: discarded qudits are not in a pure state");
    }
    auto strip = [&](const PauliOperator &p) {
        PauliOperator r = detail::reduce_by(p, local);
        for (auto q : qudits) {
            if (r.x(q) != 0 || r.z(q) != 0) {
                throw EntangledQuditError("qudit still entangled: logical operator " + p.str() +
                                          " acts on discarded qudit " + std::to_string(q));
            }
        }
        return r.restricted_to(kept);
    };
    std::vector<LogicalPair> logicals;
    for (const auto &l : t.logicals()) {
        logicals.push_back({strip(l.x), strip(l.z)});
    }
    return StabilizerTableau(t.dim(), kept.size(), std::move(rows), std::move(logicals));
}

inline StabilizerTableau discard_qudit(const StabilizerTableau &t, std::size_t q) {
    std::size_t qs[] = {q};
    return discard_qudits(t, qs);
}

/// Logical map realized between two tableaux on the same qudits with the same
/// stabilizer group (phases included): each logical operator of `after` is
/// written as omega^c prod_j Xbar_j^a_j Zbar_j^b_j over the logical basis of
/// `before`, giving the image of the corresponding logical generator.
inline CliffordMap extract_clifford_map(const StabilizerTableau &before, const StabilizerTableau &after) {
    const Dimension &dim = before.dim();
    if (after.dim() != dim || after.num_qudits() != before.num_qudits()) {
        throw std::invalid_argument("tableaux act on different registers");
    }
    std::size_t k = before.num_logicals();
    if (k == 0 || after.num_logicals() != k) {
        throw std::invalid_argument("tableaux must carry the same nonzero number of logical qudits");
    }
    auto same_group = [](const StabilizerTableau &group, const StabilizerTableau &other) {
        for (const auto &r : other.rows()) {
            auto off = phase_offset_in_group(group.rows(), r);
            if (!off || *off != 0) {
                throw std::invalid_argument("tableaux have different stabilizer groups: " + r.str());
            }
        }
    };
    same_group(before, after);
    same_group(after, before);
    auto express = [&](const PauliOperator &op) {
        std::vector<int> a(k);
        std::vector<int> b(k);
        PauliOperator logical_part = PauliOperator::identity(dim, before.num_qudits());
        for (std::size_t j = 0; j < k; ++j) {
            a[j] = dim.neg(commutation_exponent(op, before.logicals()[j].z));
            b[j] = commutation_exponent(op, before.logicals()[j].x);
            logical_part = multiply(logical_part, power(before.logicals()[j].x, a[j]));
            logical_part = multiply(logical_part, power(before.logicals()[j].z, b[j]));
        }
        auto off = phase_offset_in_group(before.rows(), multiply(op, inverse(logical_part)));
        if (!off) {
            throw std::invalid_argument("logical operator " + op.str() + " is outside the normalizer of the code");
        }
        return PauliOperator(dim, *off, std::move(a), std::move(b));
    };
    std::vector<PauliOperator> xs;
    std::vector<PauliOperator> zs;
    for (const auto &l : after.logicals()) {
        xs.push_back(express(l.x));
        zs.push_back(express(l.z));
    }
    CliffordMap map(std::move(xs), std::move(zs));
    if (!map.is_symplectic()) {
        throw std::logic_error("extracted logical map is not symplectic");
    }
    return map;
}

}  // namespace quditft
