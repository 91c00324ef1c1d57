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
#include <span>
#include <utility>
#include <vector>

#include "quditft/dimension.hpp"

// Dense linear algebra over the prime field Z_d.

namespace quditft::zd {

using Vector = std::vector<int>;
using Matrix = std::vector<Vector>;

struct Echelon {
    Matrix rows;                      // reduced rows, zero rows dropped
    std::vector<std::size_t> pivots;  // pivot column of each surviving row
};

/// Reduced row echelon form with unit pivots.
inline Echelon reduced_echelon(const Dimension &dim, Matrix m) {
    Echelon out;
    if (m.empty()) {
        return out;
    }
    std::size_t cols = m.front().size();
    std::size_t next = 0;
    for (std::size_t c = 0; c < cols && next < m.size(); ++c) {
        std::size_t p = next;
        while (p < m.size() && m[p][c] == 0) {
            ++p;
        }
        if (p == m.size()) {
            continue;
        }
        std::swap(m[p], m[next]);
        int scale = dim.inv(m[next][c]);
        for (auto &v : m[next]) {
            v = dim.mul(v, scale);
        }
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == next || m[r][c] == 0) {
                continue;
            }
            int f = m[r][c];
            for (std::size_t k = 0; k < cols; ++k) {
                m[r][k] = dim.sub(m[r][k], dim.mul(f, m[next][k]));
            }
        }
        out.pivots.push_back(c);
        ++next;
    }
    m.resize(next);
    out.rows = std::move(m);
    return out;
}

inline std::size_t rank(const Dimension &dim, const Matrix &m) {
    return reduced_echelon(dim, m).rows.size();
}

/// Coefficients c with sum_r c[r] * rows[r] == target, if any exist.
inline std::optional<Vector> solve_combination(const Dimension &dim, const Matrix &rows, std::span<const int> target) {
    std::size_t m = rows.size();
    std::size_t cols = target.size();
    // Unknowns are the m coefficients; one equation per column.
    Matrix aug(cols, Vector(m + 1, 0));
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < m; ++r) {
            aug[c][r] = dim.mod(rows[r][c]);
        }
        aug[c][m] = dim.mod(target[c]);
    }
    Echelon e = reduced_echelon(dim, std::move(aug));
    Vector coeffs(m, 0);
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
        if (e.pivots[i] == m) {
            return std::nullopt;
        }
        coeffs[e.pivots[i]] = e.rows[i][m];
    }
    return coeffs;
}

}  // namespace quditft::zd
