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

#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quditft/tableau.hpp"

// Brute-force state-vector simulation used as the ground truth for the
// tableau engine and the gadgets. Basis index digits are base d with qudit 0
// most significant.

namespace quditft {

using ComplexVector = Eigen::VectorXcd;

/// Structural checks (unitarity, eigen-relations).
inline constexpr double kStructuralTolerance = 1e-10;
/// Probability sums and comparisons of sampled statistics.
inline constexpr double kProbabilityTolerance = 1e-9;
/// State equality up to global phase.
inline constexpr double kStateTolerance = 1e-8;

/// Amplitude cap for dense states: 2^21 unless QUDITFT_DENSE_CAP is set.
inline std::size_t dense_amplitude_cap() {
    if (const char *env = std::getenv("QUDITFT_DENSE_CAP")) {
        char *end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return std::size_t{1} << 21;
}

class DenseState {
   public:
    DenseState(Dimension dim, std::size_t n, ComplexVector amplitudes)
        : dim_(dim), n_(n), amps_(std::move(amplitudes)) {
        std::size_t size = checked_hilbert_dimension(dim, n, dense_amplitude_cap());
        if (static_cast<std::size_t>(amps_.size()) != size) {
            throw std::invalid_argument("amplitude vector has length " + std::to_string(amps_.size()) +
                                        ", expected " + std::to_string(size));
        }
    }

    static DenseState basis(Dimension dim, std::span<const int> digits) {
        std::size_t size = checked_hilbert_dimension(dim, digits.size(), dense_amplitude_cap());
        ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(size));
        std::size_t idx = 0;
        for (int dgt : digits) {
            idx = idx * static_cast<std::size_t>(dim.d()) + static_cast<std::size_t>(dim.mod(dgt));
        }
        v(static_cast<Eigen::Index>(idx)) = 1.0;
        return DenseState(dim, digits.size(), std::move(v));
    }
    static DenseState basis(Dimension dim, std::initializer_list<int> digits) {
        std::vector<int> ds(digits);
        return basis(dim, std::span<const int>(ds));
    }
    static DenseState zero(Dimension dim, std::size_t n) {
        std::vector<int> ds(n, 0);
        return basis(dim, std::span<const int>(ds));
    }
    /// Normalized complex Gaussian vector.
    static DenseState random(Dimension dim, std::size_t n, Rng &rng) {
        std::size_t size = checked_hilbert_dimension(dim, n, dense_amplitude_cap());
        std::normal_distribution<double> g(0.0, 1.0);
        ComplexVector v(static_cast<Eigen::Index>(size));
        for (auto &a : v) {
            double re = g(rng);
            double im = g(rng);
            a = Complex(re, im);
        }
        v.normalize();
        return DenseState(dim, n, std::move(v));
    }

    const Dimension &dim() const noexcept {
        return dim_;
    }
    std::size_t num_qudits() const noexcept {
        return n_;
    }
    std::size_t size() const noexcept {
        return static_cast<std::size_t>(amps_.size());
    }
    const ComplexVector &amplitudes() const noexcept {
        return amps_;
    }
    ComplexVector &amplitudes() noexcept {
        return amps_;
    }
    double norm() const {
        return amps_.norm();
    }

    /// Base-d digits of a basis index.
    std::vector<int> digits(std::size_t index) const {
        std::vector<int> out(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            out[n_ - 1 - k] = static_cast<int>(index % static_cast<std::size_t>(dim_.d()));
            index /= static_cast<std::size_t>(dim_.d());
        }
        return out;
    }
    std::size_t stride(std::size_t qudit) const {
        std::size_t s = 1;
        for (std::size_t k = qudit + 1; k < n_; ++k) {
            s *= static_cast<std::size_t>(dim_.d());
        }
        return s;
    }

   private:
    Dimension dim_;
    std::size_t n_;
    ComplexVector amps_;
};

inline double fidelity(const DenseState &a, const DenseState &b) {
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

/// Whether b = phase * a within `tol` (2-norm), and that phase.
inline std::pair<bool, Complex> equal_up_to_global_phase(const DenseState &a, const DenseState &b,
                                                         double tol = kStateTolerance) {
    if (a.dim() != b.dim() || a.num_qudits() != b.num_qudits()) {
        return {false, Complex(0.0)};
    }
    Complex overlap = a.amplitudes().dot(b.amplitudes());
    Complex phase = std::abs(overlap) > 1e-300 ? overlap / std::abs(overlap) : Complex(1.0);
    double err = (b.amplitudes() - phase * a.amplitudes()).norm();
    return {err < tol, phase};
}

inline DenseState tensor(const DenseState &a, const DenseState &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("states over different dimensions");
    }
    ComplexVector v(static_cast<Eigen::Index>(a.size() * b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            v(static_cast<Eigen::Index>(i * b.size() + j)) =
                a.amplitudes()(static_cast<Eigen::Index>(i)) * b.amplitudes()(static_cast<Eigen::Index>(j));
        }
    }
    return DenseState(a.dim(), a.num_qudits() + b.num_qudits(), std::move(v));
}

// ---------------------------------------------------------------------------
// Gate unitaries.

namespace detail {

// Matrix of a k-qudit map |digits> -> omega^phase |image digits>.
inline ComplexMatrix monomial_matrix(const Dimension &dim, std::size_t k,
                                     const std::function<std::pair<std::vector<int>, std::int64_t>(const std::vector<int> &)> &f) {
    const auto d = static_cast<std::size_t>(dim.d());
    std::size_t size = 1;
    for (std::size_t i = 0; i < k; ++i) {
        size *= d;
    }
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    std::vector<int> digits(k);
    for (std::size_t col = 0; col < size; ++col) {
        std::size_t rest = col;
        for (std::size_t i = 0; i < k; ++i) {
            digits[k - 1 - i] = static_cast<int>(rest % d);
            rest /= d;
        }
        auto [out, phase] = f(digits);
        std::size_t row = 0;
        for (int v : out) {
            row = row * d + static_cast<std::size_t>(dim.mod(v));
        }
        m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = dim.omega(phase);
    }
    return m;
}

using Digits = std::vector<int>;
using Monomial = std::pair<Digits, std::int64_t>;

inline ComplexMatrix base_gate_matrix(GateKind kind, int scale, const Dimension &dim) {
    const int d = dim.d();
    switch (kind) {
        case GateKind::Fourier: {
            ComplexMatrix m(d, d);
            double norm = 1.0 / std::sqrt(static_cast<double>(d));
            for (int s = 0; s < d; ++s) {
                for (int j = 0; j < d; ++j) {
                    m(s, j) = norm * dim.omega(static_cast<std::int64_t>(s) * j);
                }
            }
            return m;
        }
        case GateKind::Phase:
            return monomial_matrix(dim, 1, [](const Digits &v) {
                std::int64_t j = v[0];
                return Monomial{v, j * (j - 1) / 2};
            });
        case GateKind::Sum:
            return monomial_matrix(dim, 2, [](const Digits &v) { return Monomial{{v[0], v[0] + v[1]}, 0}; });
        case GateKind::InvSum:
            return monomial_matrix(dim, 2, [](const Digits &v) { return Monomial{{v[0], v[1] - v[0]}, 0}; });
        case GateKind::Scale:
            return monomial_matrix(dim, 1, [scale](const Digits &v) { return Monomial{{scale * v[0]}, 0}; });
        case GateKind::X:
            return monomial_matrix(dim, 1, [](const Digits &v) { return Monomial{{v[0] + 1}, 0}; });
        case GateKind::Z:
            return monomial_matrix(dim, 1, [](const Digits &v) { return Monomial{v, v[0]}; });
        case GateKind::Phase2:
            return monomial_matrix(dim, 2, [](const Digits &v) {
                return Monomial{v, static_cast<std::int64_t>(v[0]) * v[1]};
            });
        case GateKind::Toffoli:
            return monomial_matrix(dim, 3, [](const Digits &v) { return Monomial{{v[0], v[1], v[2] + v[0] * v[1]}, 0}; });
        case GateKind::M1:
            // SUM(2 -> 3) first, then X on qudit 1.
            return monomial_matrix(dim, 3, [](const Digits &v) { return Monomial{{v[0] + 1, v[1], v[2] + v[1]}, 0}; });
        case GateKind::M2:
            return monomial_matrix(dim, 3, [](const Digits &v) { return Monomial{{v[0], v[1] + 1, v[2] + v[0]}, 0}; });
        case GateKind::M3:
            return monomial_matrix(dim, 3, [](const Digits &v) {
                return Monomial{v, static_cast<std::int64_t>(v[2]) - static_cast<std::int64_t>(v[0]) * v[1]};
            });
    }
    throw std::invalid_argument("unknown gate kind");
}

}  // namespace detail

/// Exact unitary of the gate on its arity() qudits. The Fourier transform is
/// normalized by 1/sqrt(d) and sums s = 0 .. d-1.
inline ComplexMatrix gate_matrix(const Gate &g, const Dimension &dim) {
    validate_gate(g, dim);
    ComplexMatrix base = detail::base_gate_matrix(g.kind, dim.mod(g.param), dim);
    if (g.kind == GateKind::Scale) {
        return base;
    }
    int k = normalized_power(g, dim);
    if (g.kind == GateKind::Fourier) {
        ComplexMatrix out = ComplexMatrix::Identity(base.rows(), base.cols());
        for (int i = 0; i < k; ++i) {
            out = base * out;
        }
        return out;
    }
    // Every other base gate is monomial: follow each column's image k times.
    const Eigen::Index size = base.rows();
    std::vector<Eigen::Index> image(static_cast<std::size_t>(size));
    std::vector<Complex> value(static_cast<std::size_t>(size));
    for (Eigen::Index col = 0; col < size; ++col) {
        Eigen::Index row = 0;
        base.col(col).cwiseAbs().maxCoeff(&row);
        image[static_cast<std::size_t>(col)] = row;
        value[static_cast<std::size_t>(col)] = base(row, col);
    }
    ComplexMatrix out = ComplexMatrix::Zero(size, size);
    for (Eigen::Index col = 0; col < size; ++col) {
        Eigen::Index r = col;
        Complex v = 1;
        for (int i = 0; i < k; ++i) {
            v *= value[static_cast<std::size_t>(r)];
            r = image[static_cast<std::size_t>(r)];
        }
        out(r, col) = v;
    }
    return out;
}

/// Applies a d^k x d^k matrix to the listed qudits (first listed = most
/// significant local digit). The result is not renormalized.
inline DenseState apply_matrix(const DenseState &state, const ComplexMatrix &u, std::span<const std::size_t> qudits) {
    detail::check_qudits(state.num_qudits(), qudits);
    const auto d = static_cast<std::size_t>(state.dim().d());
    std::size_t local = 1;
    for (std::size_t i = 0; i < qudits.size(); ++i) {
        local *= d;
    }
    if (static_cast<std::size_t>(u.rows()) != local || static_cast<std::size_t>(u.cols()) != local) {
        throw std::invalid_argument("matrix size does not match the number of target qudits");
    }
    std::vector<std::size_t> offsets(local, 0);
    for (std::size_t l = 0; l < local; ++l) {
        std::size_t rest = l;
        std::size_t off = 0;
        for (std::size_t i = 0; i < qudits.size(); ++i) {
            std::size_t q = qudits[qudits.size() - 1 - i];
            off += (rest % d) * state.stride(q);
            rest /= d;
        }
        offsets[l] = off;
    }
    std::vector<bool> targeted(state.num_qudits(), false);
    for (auto q : qudits) {
        targeted[q] = true;
    }
    ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(state.size()));
    ComplexVector in_local(static_cast<Eigen::Index>(local));
    const ComplexVector &amps = state.amplitudes();
    for (std::size_t base = 0; base < state.size(); ++base) {
        std::size_t rest = base;
        bool is_base = true;
        for (std::size_t k = 0; k < state.num_qudits() && is_base; ++k) {
            std::size_t q = state.num_qudits() - 1 - k;
            if (targeted[q] && rest % d != 0) {
                is_base = false;
            }
            rest /= d;
        }
        if (!is_base) {
            continue;
        }
        for (std::size_t l = 0; l < local; ++l) {
            in_local(static_cast<Eigen::Index>(l)) = amps(static_cast<Eigen::Index>(base + offsets[l]));
        }
        ComplexVector res = u * in_local;
        for (std::size_t l = 0; l < local; ++l) {
            out(static_cast<Eigen::Index>(base + offsets[l])) = res(static_cast<Eigen::Index>(l));
        }
    }
    return DenseState(state.dim(), state.num_qudits(), std::move(out));
}

inline DenseState apply(const DenseState &state, const Gate &g, std::span<const std::size_t> qudits) {
    if (qudits.size() != arity(g.kind)) {
        throw std::invalid_argument(std::string(mnemonic(g.kind)) + " acts on " + std::to_string(arity(g.kind)) +
                                    " qudits, got " + std::to_string(qudits.size()));
    }
    return apply_matrix(state, gate_matrix(g, state.dim()), qudits);
}

inline DenseState apply(const DenseState &state, const Gate &g, std::initializer_list<std::size_t> qudits) {
    std::vector<std::size_t> qs(qudits);
    return apply(state, g, std::span<const std::size_t>(qs));
}

/// p |state> for a Pauli operator on the whole register.
inline DenseState apply_pauli(const DenseState &state, const PauliOperator &p) {
    if (p.num_qudits() != state.num_qudits() || p.dim() != state.dim()) {
        throw std::invalid_argument("Pauli operator does not match the state");
    }
    const Dimension &dim = state.dim();
    const auto d = static_cast<std::size_t>(dim.d());
    std::size_t n = state.num_qudits();
    ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(state.size()));
    const ComplexVector &amps = state.amplitudes();
    std::vector<Complex> roots(d);
    for (std::size_t k = 0; k < d; ++k) {
        roots[k] = dim.omega(static_cast<std::int64_t>(k));
    }
    for (std::size_t idx = 0; idx < state.size(); ++idx) {
        std::size_t rest = idx;
        std::size_t target = 0;
        std::size_t stride = 1;
        std::int64_t phase = p.phase();
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t q = n - 1 - k;
            auto j = static_cast<int>(rest % d);
            rest /= d;
            phase += static_cast<std::int64_t>(p.z(q)) * j;
            target += static_cast<std::size_t>(dim.add(j, p.x(q))) * stride;
            stride *= d;
        }
        out(static_cast<Eigen::Index>(target)) = roots[static_cast<std::size_t>(dim.mod(phase))] * amps(static_cast<Eigen::Index>(idx));
    }
    return DenseState(dim, n, std::move(out));
}

/// P_a |state> = (1/d) sum_j omega^(-j a) A^j |state>, unnormalized, for
/// every a in Z_d.
inline std::vector<ComplexVector> pauli_eigenspace_projections(const DenseState &state, const PauliOperator &a_op) {
    const Dimension &dim = state.dim();
    const int d = dim.d();
    std::vector<ComplexVector> powers;
    powers.push_back(state.amplitudes());
    DenseState cur = state;
    for (int j = 1; j < d; ++j) {
        cur = apply_pauli(cur, a_op);
        powers.push_back(cur.amplitudes());
    }
    std::vector<ComplexVector> out;
    for (int a = 0; a < d; ++a) {
        ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(state.size()));
        for (int j = 0; j < d; ++j) {
            v += dim.omega(-static_cast<std::int64_t>(j) * a) * powers[static_cast<std::size_t>(j)];
        }
        out.push_back(v / static_cast<double>(d));
    }
    return out;
}

struct DenseMeasurement {
    int outcome;
    DenseState state;
    std::vector<double> probabilities;
};

namespace detail {

inline DenseMeasurement select_outcome(const DenseState &state, std::vector<ComplexVector> branches, Rng &rng,
                                       std::optional<int> post_select) {
    const Dimension &dim = state.dim();
    std::vector<double> probs;
    double total = 0.0;
    for (const auto &b : branches) {
        probs.push_back(b.squaredNorm());
        total += probs.back();
    }
    if (std::abs(total - state.amplitudes().squaredNorm()) > kProbabilityTolerance * std::max(1.0, total)) {
        throw std::logic_error("measurement branches do not sum to the state norm");
    }
    for (auto &p : probs) {
        p /= total;
    }
    int outcome = 0;
    if (post_select) {
        if (*post_select < 0 || *post_select >= dim.d()) {
            throw std::invalid_argument("post-selected outcome outside Z_" + std::to_string(dim.d()));
        }
        outcome = *post_select;
        if (probs[static_cast<std::size_t>(outcome)] < 1e-12) {
            throw std::invalid_argument("post-selected outcome " + std::to_string(outcome) +
                                        " has zero probability");
        }
    } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double r = u(rng);
        double acc = 0.0;
        outcome = -1;
        for (int a = 0; a < dim.d(); ++a) {
            acc += probs[static_cast<std::size_t>(a)];
            if (r < acc && probs[static_cast<std::size_t>(a)] > 1e-12) {
                outcome = a;
                break;
            }
        }
        if (outcome < 0) {
            for (int a = dim.d() - 1; a >= 0; --a) {
                if (probs[static_cast<std::size_t>(a)] > 1e-12) {
                    outcome = a;
                    break;
                }
            }
        }
    }
    ComplexVector v = std::move(branches[static_cast<std::size_t>(outcome)]);
    v.normalize();
    return DenseMeasurement{outcome, DenseState(dim, state.num_qudits(), std::move(v)), std::move(probs)};
}

}  // namespace detail

/// Projective measurement of a Pauli operator; outcome a <-> eigenvalue omega^a.
inline DenseMeasurement measure_pauli_dense(const DenseState &state, const PauliOperator &a_op, Rng &rng,
                                            std::optional<int> post_select = std::nullopt) {
    return detail::select_outcome(state, pauli_eigenspace_projections(state, a_op), rng, post_select);
}

/// Eigenvalue exponents of a diagonal gate whose entries are d-th roots of
/// unity; throws otherwise.
inline std::vector<int> diagonal_exponents(const Gate &g, const Dimension &dim) {
    ComplexMatrix u = gate_matrix(g, dim);
    std::vector<int> out;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            if (i != j && std::abs(u(i, j)) > kStructuralTolerance) {
                throw std::invalid_argument(std::string(mnemonic(g.kind)) + " is not diagonal");
            }
        }
        int found = -1;
        for (int k = 0; k < dim.d(); ++k) {
            if (std::abs(u(i, i) - dim.omega(k)) < kStructuralTolerance) {
                found = k;
            }
        }
        if (found < 0) {
            throw std::invalid_argument(std::string(mnemonic(g.kind)) + " has an eigenvalue that is not a d-th root of unity");
        }
        out.push_back(found);
    }
    return out;
}

/// Measures the eigenvalue omega^a of a diagonal Clifford such as M3.
inline DenseMeasurement measure_diagonal_unitary(const DenseState &state, const Gate &g,
                                                 std::span<const std::size_t> qudits, Rng &rng,
                                                 std::optional<int> post_select = std::nullopt) {
    if (qudits.size() != arity(g.kind)) {
        throw std::invalid_argument("wrong number of qudits for " + std::string(mnemonic(g.kind)));
    }
    detail::check_qudits(state.num_qudits(), qudits);
    auto exps = diagonal_exponents(g, state.dim());
    const auto d = static_cast<std::size_t>(state.dim().d());
    std::vector<ComplexVector> branches(d, ComplexVector::Zero(static_cast<Eigen::Index>(state.size())));
    for (std::size_t idx = 0; idx < state.size(); ++idx) {
        auto digits = state.digits(idx);
        std::size_t local = 0;
        for (auto q : qudits) {
            local = local * d + static_cast<std::size_t>(digits[q]);
        }
        branches[static_cast<std::size_t>(exps[local])](static_cast<Eigen::Index>(idx)) =
            state.amplitudes()(static_cast<Eigen::Index>(idx));
    }
    return detail::select_outcome(state, std::move(branches), rng, post_select);
}

/// new qudit i = old qudit perm[i].
inline DenseState permute_qudits(const DenseState &state, std::span<const std::size_t> perm) {
    if (perm.size() != state.num_qudits()) {
        throw std::invalid_argument("permutation size mismatch");
    }
    detail::check_qudits(state.num_qudits(), perm);
    ComplexVector out(static_cast<Eigen::Index>(state.size()));
    const auto d = static_cast<std::size_t>(state.dim().d());
    for (std::size_t idx = 0; idx < state.size(); ++idx) {
        auto digits = state.digits(idx);
        std::size_t target = 0;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            target = target * d + static_cast<std::size_t>(digits[perm[i]]);
        }
        out(static_cast<Eigen::Index>(target)) = state.amplitudes()(static_cast<Eigen::Index>(idx));
    }
    return DenseState(state.dim(), state.num_qudits(), std::move(out));
}

/// Traces out `qudits`, which must be in a product state with the rest
/// (within `tol`). The kept qudits stay in their original order.
inline DenseState discard_qudits(const DenseState &state, std::span<const std::size_t> qudits,
                                 double tol = kStateTolerance) {
    detail::check_qudits(state.num_qudits(), qudits);
    std::size_t n = state.num_qudits();
    std::vector<bool> dropped(n, false);
    for (auto q : qudits) {
        dropped[q] = true;
    }
    std::vector<std::size_t> perm;
    for (std::size_t q = 0; q < n; ++q) {
        if (!dropped[q]) {
            perm.push_back(q);
        }
    }
    std::size_t kept = perm.size();
    if (kept == 0) {
        throw std::invalid_argument("cannot discard every qudit");
    }
    perm.insert(perm.end(), qudits.begin(), qudits.end());
    DenseState arranged = permute_qudits(state, perm);
    std::size_t drop_size = 1;
    for (std::size_t i = 0; i < qudits.size(); ++i) {
        drop_size *= static_cast<std::size_t>(state.dim().d());
    }
    std::size_t keep_size = state.size() / drop_size;
    // Row-major (kept, dropped) view of the amplitudes.
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        arranged.amplitudes().data(), static_cast<Eigen::Index>(keep_size), static_cast<Eigen::Index>(drop_size));
    Eigen::Index best = 0;
    m.colwise().squaredNorm().maxCoeff(&best);
    ComplexVector v = m.col(best);
    v.normalize();
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> residual = m - v * (v.adjoint() * m);
    if (residual.norm() > tol) {
        throw std::invalid_argument("discarded qudits are entangled with the rest of the register");
    }
    return DenseState(state.dim(), kept, std::move(v));
}

/// A simultaneous +1 eigenvector of every row of a pure tableau.
inline DenseState tableau_to_state(const StabilizerTableau &t) {
    if (!t.is_pure()) {
        throw std::invalid_argument("tableau_to_state needs a pure tableau (no logical qudits)");
    }
    const Dimension &dim = t.dim();
    std::size_t n = t.num_qudits();
    std::size_t size = checked_hilbert_dimension(dim, n, dense_amplitude_cap());

    auto project = [&](DenseState s) {
        for (const auto &row : t.rows()) {
            s = DenseState(dim, n, pauli_eigenspace_projections(s, row)[0]);
        }
        return s;
    };
    auto accept = [&](DenseState s) -> std::optional<DenseState> {
        double nrm = s.norm();
        if (nrm < 1e-6) {
            return std::nullopt;
        }
        s.amplitudes() /= nrm;
        for (const auto &row : t.rows()) {
            if ((apply_pauli(s, row).amplitudes() - s.amplitudes()).norm() > kStructuralTolerance * 100) {
                throw std::logic_error("projected state is not stabilized by " + row.str());
            }
        }
        return s;
    };

    // The support of a stabilizer state is cut out by its Z-type elements
    // omega^c Z^z, which demand z . j = -c mod d on basis labels j.
    std::vector<std::size_t> order;
    for (std::size_t c = 0; c < 2 * n; ++c) {
        order.push_back(c);
    }
    auto e = detail::pauli_echelon(t.rows(), order);
    zd::Matrix columns(n);
    std::vector<int> rhs;
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
        if (e.pivots[i] < n) {
            continue;
        }
        for (std::size_t q = 0; q < n; ++q) {
            columns[q].push_back(e.rows[i].z(q));
        }
        rhs.push_back(dim.neg(e.rows[i].phase()));
    }
    std::vector<int> label(n, 0);
    if (!rhs.empty()) {
        if (auto sol = zd::solve_combination(dim, columns, rhs)) {
            label = *sol;
        }
    }
    if (auto s = accept(project(DenseState::basis(dim, std::span<const int>(label))))) {
        return *s;
    }
    for (std::size_t idx = 0; idx < size; ++idx) {
        ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(size));
        v(static_cast<Eigen::Index>(idx)) = 1.0;
        if (auto s = accept(project(DenseState(dim, n, std::move(v))))) {
            return *s;
        }
    }
    throw std::logic_error("every reference vector was annihilated; tableau is corrupted");
}

/// Reads off U X_i U^dag and U Z_i U^dag as Pauli operators; throws if U is
/// not unitary or not Clifford.
inline CliffordMap clifford_map_of_unitary(const ComplexMatrix &u, const Dimension &dim, std::size_t n) {
    std::size_t size = checked_hilbert_dimension(dim, n, kMaxMatrixAxis);
    if (static_cast<std::size_t>(u.rows()) != size || static_cast<std::size_t>(u.cols()) != size) {
        throw std::invalid_argument("matrix size does not match d^n");
    }
    ComplexMatrix id = ComplexMatrix::Identity(u.rows(), u.cols());
    if ((u.adjoint() * u - id).norm() > 1e-8) {
        throw std::invalid_argument("matrix is not unitary");
    }
    const auto d = static_cast<std::size_t>(dim.d());
    auto identify = [&](const ComplexMatrix &c) {
        Eigen::Index r0 = 0;
        c.col(0).cwiseAbs().maxCoeff(&r0);
        std::size_t row0 = static_cast<std::size_t>(r0);
        std::vector<int> x(n);
        std::vector<int> z(n);
        std::size_t rest = row0;
        for (std::size_t k = 0; k < n; ++k) {
            x[n - 1 - k] = static_cast<int>(rest % d);
            rest /= d;
        }
        auto exponent_of = [&](Complex v) {
            double ang = std::arg(v) / (2.0 * std::numbers::pi) * static_cast<double>(d);
            return dim.mod(static_cast<std::int64_t>(std::llround(ang)));
        };
        int phase = exponent_of(c(r0, 0));
        std::size_t stride = 1;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t q = n - 1 - k;
            // Column |e_q> maps to omega^(phase + z_q) |x + e_q>.
            std::size_t col = stride;
            std::size_t row = 0;
            std::size_t s2 = 1;
            for (std::size_t kk = 0; kk < n; ++kk) {
                std::size_t qq = n - 1 - kk;
                int digit = x[qq] + (qq == q ? 1 : 0);
                row += static_cast<std::size_t>(dim.mod(digit)) * s2;
                s2 *= d;
            }
            z[q] = dim.sub(exponent_of(c(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col))), phase);
            stride *= d;
        }
        PauliOperator p(dim, phase, std::move(x), std::move(z));
        if ((to_matrix(p) - c).cwiseAbs().maxCoeff() > 1e-9) {
            throw std::invalid_argument("conjugated generator is not a Pauli operator; matrix is not Clifford");
        }
        return p;
    };
    std::vector<PauliOperator> xs;
    std::vector<PauliOperator> zs;
    for (std::size_t q = 0; q < n; ++q) {
        xs.push_back(identify(u * to_matrix(PauliOperator::x_on(dim, n, q)) * u.adjoint()));
        zs.push_back(identify(u * to_matrix(PauliOperator::z_on(dim, n, q)) * u.adjoint()));
    }
    return CliffordMap(std::move(xs), std::move(zs));
}

/// A unitary (up to global phase) realizing the Clifford map: U|0...0> is
/// the +1 eigenvector of the Z images, and U|j> = prod_q img(X_q)^j_q U|0>.
inline ComplexMatrix unitary_of_clifford_map(const CliffordMap &map) {
    const Dimension &dim = map.dim();
    std::size_t n = map.num_qudits();
    std::vector<PauliOperator> rows;
    for (std::size_t q = 0; q < n; ++q) {
        rows.push_back(map.z_image(q));
    }
    DenseState ref = tableau_to_state(StabilizerTableau(dim, n, std::move(rows), {}));
    std::size_t size = ref.size();
    ComplexMatrix u(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    for (std::size_t col = 0; col < size; ++col) {
        auto digits = ref.digits(col);
        DenseState s = ref;
        for (std::size_t q = 0; q < n; ++q) {
            s = apply_pauli(s, power(map.x_image(q), digits[q]));
        }
        u.col(static_cast<Eigen::Index>(col)) = s.amplitudes();
    }
    return u;
}

}  // namespace quditft
