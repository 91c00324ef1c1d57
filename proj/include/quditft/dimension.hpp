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

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace quditft {

using Complex = std::complex<double>;

/// Largest qudit dimension accepted by `Dimension`.
inline constexpr int kMaxDimension = 31;

inline constexpr bool is_prime(int v) {
    if (v < 2) {
        return false;
    }
    for (int f = 2; f * f <= v; ++f) {
        if (v % f == 0) {
            return false;
        }
    }
    return true;
}

/// The qudit dimension d together with the arithmetic of Z_d.
///
/// Only odd primes 3 <= d <= kMaxDimension are representable. All exponents
/// handed out by the helpers are canonical residues in [0, d). Phases are
/// powers of omega = exp(2 pi i / d).
class Dimension {
   public:
    explicit Dimension(int d) : d_(d) {
        if (d < 3 || d > kMaxDimension || !is_prime(d)) {
            throw std::invalid_argument(
                "qudit dimension must be an odd prime in [3, " + std::to_string(kMaxDimension) +
                "], got " + std::to_string(d));
        }
    }

    int d() const noexcept {
        return d_;
    }

    int mod(std::int64_t v) const noexcept {
        auto r = static_cast<int>(v % d_);
        return r < 0 ? r + d_ : r;
    }
    int add(int a, int b) const noexcept {
        return mod(static_cast<std::int64_t>(a) + b);
    }
    int sub(int a, int b) const noexcept {
        return mod(static_cast<std::int64_t>(a) - b);
    }
    int mul(int a, int b) const noexcept {
        return mod(static_cast<std::int64_t>(a) * b);
    }
    int neg(int a) const noexcept {
        return mod(-static_cast<std::int64_t>(a));
    }
    int pow(int base, std::int64_t e) const noexcept {
        if (mod(base) == 0) {
            return e == 0 ? 1 : 0;
        }
        e %= d_ - 1;
        if (e < 0) {
            e += d_ - 1;
        }
        int result = 1;
        int b = mod(base);
        while (e > 0) {
            if (e & 1) {
                result = mul(result, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        return result;
    }
    /// Multiplicative inverse; throws for a = 0 mod d.
    int inv(int a) const {
        if (mod(a) == 0) {
            throw std::domain_error("0 has no inverse mod " + std::to_string(d_));
        }
        return pow(a, d_ - 2);
    }
    bool invertible(std::int64_t a) const noexcept {
        return mod(a) != 0;
    }

    /// omega^k.
    Complex omega(std::int64_t k = 1) const noexcept {
        return std::polar(1.0, 2.0 * std::numbers::pi * mod(k) / d_);
    }

    friend bool operator==(const Dimension &, const Dimension &) = default;

   private:
    int d_;
};

}  // namespace quditft
