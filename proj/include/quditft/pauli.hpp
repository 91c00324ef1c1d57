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

#include <Eigen/Dense>
#include <cctype>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "quditft/dimension.hpp"

namespace quditft {

using ComplexMatrix = Eigen::MatrixXcd;

/// Largest matrix axis `to_matrix` will build (d^n entries per axis).
inline constexpr std::size_t kMaxMatrixAxis = std::size_t{1} << 20;

/// An element of the n-qudit Pauli group in normal form
///
///     omega^phase * (X^x_0 Z^z_0) (x) (X^x_1 Z^z_1) (x) ... (x) (X^x_{n-1} Z^z_{n-1})
///
/// with X written left of Z on every qudit and all exponents in [0, d).
/// X|j> = |j+1>, Z|j> = omega^j |j>, hence XZ = omega^-1 ZX.
class PauliOperator {
   public:
    PauliOperator(Dimension dim, std::size_t n) : dim_(dim), x_(n, 0), z_(n, 0) {
    }

    PauliOperator(Dimension dim, int phase, std::vector<int> x, std::vector<int> z)
        : dim_(dim), phase_(dim.mod(phase)), x_(std::move(x)), z_(std::move(z)) {
        if (x_.size() != z_.size()) {
            throw std::invalid_argument("x and z exponent vectors differ in length");
        }
        for (auto &v : x_) {
            v = dim_.mod(v);
        }
        for (auto &v : z_) {
            v = dim_.mod(v);
        }
    }

    static PauliOperator identity(Dimension dim, std::size_t n) {
        return PauliOperator(dim, n);
    }
    /// X^power on qudit q of an n-qudit register.
    static PauliOperator x_on(Dimension dim, std::size_t n, std::size_t q, int power = 1) {
        PauliOperator p(dim, n);
        p.x_.at(q) = dim.mod(power);
        return p;
    }
    static PauliOperator z_on(Dimension dim, std::size_t n, std::size_t q, int power = 1) {
        PauliOperator p(dim, n);
        p.z_.at(q) = dim.mod(power);
        return p;
    }

    const Dimension &dim() const noexcept {
        return dim_;
    }
    std::size_t num_qudits() const noexcept {
        return x_.size();
    }
    int phase() const noexcept {
        return phase_;
    }
    int x(std::size_t q) const {
        return x_.at(q);
    }
    int z(std::size_t q) const {
        return z_.at(q);
    }
    const std::vector<int> &x_exponents() const noexcept {
        return x_;
    }
    const std::vector<int> &z_exponents() const noexcept {
        return z_;
    }

    void set_phase(int phase) noexcept {
        phase_ = dim_.mod(phase);
    }
    void set_x(std::size_t q, int v) {
        x_.at(q) = dim_.mod(v);
    }
    void set_z(std::size_t q, int v) {
        z_.at(q) = dim_.mod(v);
    }

    /// The same operator with phase 0.
    PauliOperator without_phase() const {
        PauliOperator r = *this;
        r.phase_ = 0;
        return r;
    }
    PauliOperator with_phase_shift(int delta) const {
        PauliOperator r = *this;
        r.phase_ = dim_.add(r.phase_, dim_.mod(delta));
        return r;
    }

    bool is_identity_up_to_phase() const noexcept {
        for (std::size_t q = 0; q < x_.size(); ++q) {
            if (x_[q] != 0 || z_[q] != 0) {
                return false;
            }
        }
        return true;
    }

    /// Number of qudits with (x, z) != (0, 0).
    std::size_t weight() const noexcept {
        std::size_t w = 0;
        for (std::size_t q = 0; q < x_.size(); ++q) {
            w += (x_[q] != 0 || z_[q] != 0) ? 1 : 0;
        }
        return w;
    }

    /// Support qudits in increasing order.
    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (std::size_t q = 0; q < x_.size(); ++q) {
            if (x_[q] != 0 || z_[q] != 0) {
                s.push_back(q);
            }
        }
        return s;
    }

    /// Concatenated (x | z) exponent vector, length 2n.
    std::vector<int> symplectic_vector() const {
        std::vector<int> v(x_);
        v.insert(v.end(), z_.begin(), z_.end());
        return v;
    }

    /// Restriction to the listed qudits, keeping the phase.
    PauliOperator restricted_to(std::span<const std::size_t> qudits) const {
        PauliOperator r(dim_, qudits.size());
        r.phase_ = phase_;
        for (std::size_t i = 0; i < qudits.size(); ++i) {
            r.x_[i] = x_.at(qudits[i]);
            r.z_[i] = z_.at(qudits[i]);
        }
        return r;
    }

    /// Places `local` (on qudits.size() qudits) on the given qudits of an
    /// n-qudit register, identity elsewhere.
    static PauliOperator embedded(const PauliOperator &local, std::size_t n, std::span<const std::size_t> qudits) {
        if (local.num_qudits() != qudits.size()) {
            throw std::invalid_argument("embedding size mismatch");
        }
        PauliOperator r(local.dim_, n);
        r.phase_ = local.phase_;
        for (std::size_t i = 0; i < qudits.size(); ++i) {
            r.x_.at(qudits[i]) = local.x_[i];
            r.z_.at(qudits[i]) = local.z_[i];
        }
        return r;
    }

    friend bool operator==(const PauliOperator &, const PauliOperator &) = default;

    std::string str() const;

   private:
    Dimension dim_;
    int phase_ = 0;
    std::vector<int> x_;
    std::vector<int> z_;
};

namespace detail {
inline void require_compatible(const PauliOperator &p, const PauliOperator &q) {
    if (p.dim() != q.dim()) {
        throw std::invalid_argument("Pauli operators over different dimensions");
    }
    if (p.num_qudits() != q.num_qudits()) {
        throw std::invalid_argument(
            "Pauli operators on " + std::to_string(p.num_qudits()) + " and " + std::to_string(q.num_qudits()) +
            " qudits");
    }
}
}  // namespace detail

/// Matrix product p * q in normal form. Moving Z^s past X^t costs omega^(s t).
inline PauliOperator multiply(const PauliOperator &p, const PauliOperator &q) {
    detail::require_compatible(p, q);
    const Dimension &dim = p.dim();
    std::int64_t phase = static_cast<std::int64_t>(p.phase()) + q.phase();
    std::vector<int> x(p.num_qudits());
    std::vector<int> z(p.num_qudits());
    for (std::size_t i = 0; i < p.num_qudits(); ++i) {
        phase += static_cast<std::int64_t>(p.z(i)) * q.x(i);
        x[i] = p.x(i) + q.x(i);
        z[i] = p.z(i) + q.z(i);
    }
    return PauliOperator(dim, dim.mod(phase), std::move(x), std::move(z));
}

inline PauliOperator operator*(const PauliOperator &p, const PauliOperator &q) {
    return multiply(p, q);
}

/// c such that p q = omega^c q p.
inline int commutation_exponent(const PauliOperator &p, const PauliOperator &q) {
    detail::require_compatible(p, q);
    const Dimension &dim = p.dim();
    std::int64_t c = 0;
    for (std::size_t i = 0; i < p.num_qudits(); ++i) {
        c += static_cast<std::int64_t>(p.z(i)) * q.x(i) - static_cast<std::int64_t>(p.x(i)) * q.z(i);
    }
    return dim.mod(c);
}

inline bool commutes(const PauliOperator &p, const PauliOperator &q) {
    return commutation_exponent(p, q) == 0;
}

/// p^m for any integer m (negative powers included). Every operator has order
/// dividing d, so m is reduced mod d first.
inline PauliOperator power(const PauliOperator &p, std::int64_t m) {
    const Dimension &dim = p.dim();
    int e = dim.mod(m);
    PauliOperator result = PauliOperator::identity(dim, p.num_qudits());
    PauliOperator base = p;
    while (e > 0) {
        if (e & 1) {
            result = multiply(result, base);
        }
        base = multiply(base, base);
        e >>= 1;
    }
    return result;
}

inline PauliOperator inverse(const PauliOperator &p) {
    return power(p, p.dim().d() - 1);
}

/// p (x) q.
inline PauliOperator tensor(const PauliOperator &p, const PauliOperator &q) {
    if (p.dim() != q.dim()) {
        throw std::invalid_argument("Pauli operators over different dimensions");
    }
    std::vector<int> x = p.x_exponents();
    std::vector<int> z = p.z_exponents();
    x.insert(x.end(), q.x_exponents().begin(), q.x_exponents().end());
    z.insert(z.end(), q.z_exponents().begin(), q.z_exponents().end());
    return PauliOperator(p.dim(), p.phase() + q.phase(), std::move(x), std::move(z));
}

/// d^n, throwing if it exceeds `cap`.
inline std::size_t checked_hilbert_dimension(const Dimension &dim, std::size_t n, std::size_t cap) {
    std::size_t size = 1;
    for (std::size_t i = 0; i < n; ++i) {
        size *= static_cast<std::size_t>(dim.d());
        if (size > cap) {
            throw std::length_error(
                std::to_string(dim.d()) + "^" + std::to_string(n) + " exceeds the size cap of " + std::to_string(cap));
        }
    }
    return size;
}

/// Matrix realization; basis index digits are base d with qudit 0 most significant.
inline ComplexMatrix to_matrix(const PauliOperator &p) {
    const Dimension &dim = p.dim();
    std::size_t n = p.num_qudits();
    std::size_t size = checked_hilbert_dimension(dim, n, kMaxMatrixAxis);
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    for (std::size_t col = 0; col < size; ++col) {
        std::size_t rest = col;
        std::size_t row = 0;
        std::size_t stride = 1;
        std::int64_t phase = p.phase();
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t q = n - 1 - k;
            int j = static_cast<int>(rest % static_cast<std::size_t>(dim.d()));
            rest /= static_cast<std::size_t>(dim.d());
            phase += static_cast<std::int64_t>(p.z(q)) * j;
            row += static_cast<std::size_t>(dim.add(j, p.x(q))) * stride;
            stride *= static_cast<std::size_t>(dim.d());
        }
        m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = dim.omega(phase);
    }
    return m;
}

// Text form: optional leading phase token `w<c>`, then one token per qudit,
// `I` or `X<a>Z<b>` with either factor optional and a missing exponent
// meaning 1. Example: "w2 XZ2 I X".

namespace detail {
inline std::string exponent_token(char letter, int e) {
    if (e == 0) {
        return {};
    }
    return e == 1 ? std::string(1, letter) : letter + std::to_string(e);
}
}  // namespace detail

/// Text form of a single-qudit factor X^x Z^z.
inline std::string factor_str(int x, int z) {
    if (x == 0 && z == 0) {
        return "I";
    }
    return detail::exponent_token('X', x) + detail::exponent_token('Z', z);
}

inline std::string PauliOperator::str() const {
    std::string out;
    if (phase_ != 0) {
        out += "w" + std::to_string(phase_);
    }
    for (std::size_t q = 0; q < x_.size(); ++q) {
        if (!out.empty()) {
            out += ' ';
        }
        out += factor_str(x_[q], z_[q]);
    }
    return out;
}

inline std::ostream &operator<<(std::ostream &os, const PauliOperator &p) {
    return os << p.str();
}

/// Thrown by the text parsers; `column` is 1-based within the parsed text.
class PauliParseError : public std::invalid_argument {
   public:
    PauliParseError(std::size_t column, std::string token, const std::string &message)
        : std::invalid_argument(message), column_(column), token_(std::move(token)) {
    }
    std::size_t column() const noexcept {
        return column_;
    }
    const std::string &token() const noexcept {
        return token_;
    }

   private:
    std::size_t column_;
    std::string token_;
};

namespace detail {

// Parses digits starting at pos; returns -1 when none are present.
inline long long parse_exponent(std::string_view tok, std::size_t &pos) {
    if (pos >= tok.size() || !std::isdigit(static_cast<unsigned char>(tok[pos]))) {
        return -1;
    }
    long long v = 0;
    while (pos < tok.size() && std::isdigit(static_cast<unsigned char>(tok[pos]))) {
        v = v * 10 + (tok[pos] - '0');
        if (v > 1'000'000) {
            return v;
        }
        ++pos;
    }
    return v;
}

struct Token {
    std::string text;
    std::size_t column;  // 1-based
};

inline std::vector<Token> split_tokens(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        if (i >= text.size()) {
            break;
        }
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        out.push_back({std::string(text.substr(start, i - start)), start + 1});
    }
    return out;
}

}  // namespace detail

/// True for tokens of the form `w<c>`.
inline bool is_phase_token(std::string_view tok) {
    return tok.size() >= 2 && tok[0] == 'w' && std::isdigit(static_cast<unsigned char>(tok[1]));
}

/// Parses a single-qudit factor token (`I`, `X2`, `XZ`, `Z3`, ...). Exponents
/// must lie in [0, d).
inline std::pair<int, int> parse_factor(const Dimension &dim, std::string_view tok, std::size_t column) {
    if (tok == "I") {
        return {0, 0};
    }
    std::size_t pos = 0;
    int x = 0;
    int z = 0;
    bool any = false;
    auto read = [&](char letter, int &slot) {
        if (pos < tok.size() && tok[pos] == letter) {
            ++pos;
            long long e = detail::parse_exponent(tok, pos);
            if (e < 0) {
                e = 1;
            }
            if (e >= dim.d()) {
                throw PauliParseError(
                    column, std::string(tok),
                    "exponent " + std::to_string(e) + " in '" + std::string(tok) + "' must be < d = " +
                        std::to_string(dim.d()));
            }
            slot = static_cast<int>(e);
            any = true;
        }
    };
    read('X', x);
    read('Z', z);
    if (!any || pos != tok.size()) {
        throw PauliParseError(column, std::string(tok), "expected a Pauli factor like I, X, Z2 or XZ2, got '" +
                                                            std::string(tok) + "'");
    }
    return {x, z};
}

/// Parses a phase token `w<c>` with 0 <= c < d.
inline int parse_phase_token(const Dimension &dim, std::string_view tok, std::size_t column) {
    std::size_t pos = 1;
    long long c = detail::parse_exponent(tok, pos);
    if (c < 0 || pos != tok.size()) {
        throw PauliParseError(column, std::string(tok), "malformed phase token '" + std::string(tok) + "'");
    }
    if (c >= dim.d()) {
        throw PauliParseError(column, std::string(tok),
                              "phase exponent " + std::to_string(c) + " must be < d = " + std::to_string(dim.d()));
    }
    return static_cast<int>(c);
}

/// Parses the whitespace-separated text form. When `expected_qudits` is
/// nonzero the number of factors must match it.
inline PauliOperator parse_pauli(const Dimension &dim, std::string_view text, std::size_t expected_qudits = 0) {
    auto tokens = detail::split_tokens(text);
    int phase = 0;
    std::size_t first = 0;
    if (!tokens.empty() && is_phase_token(tokens[0].text)) {
        phase = parse_phase_token(dim, tokens[0].text, tokens[0].column);
        first = 1;
    }
    std::vector<int> x;
    std::vector<int> z;
    for (std::size_t i = first; i < tokens.size(); ++i) {
        auto [xe, ze] = parse_factor(dim, tokens[i].text, tokens[i].column);
        x.push_back(xe);
        z.push_back(ze);
    }
    if (x.empty()) {
        throw PauliParseError(text.size() + 1, "", "expected at least one Pauli factor");
    }
    if (expected_qudits != 0 && x.size() != expected_qudits) {
        throw PauliParseError(tokens.back().column, tokens.back().text,
                              "expected " + std::to_string(expected_qudits) + " Pauli factors, got " +
                                  std::to_string(x.size()));
    }
    return PauliOperator(dim, phase, std::move(x), std::move(z));
}

}  // namespace quditft
