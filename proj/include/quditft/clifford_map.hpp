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

#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "quditft/pauli.hpp"

namespace quditft {

/// A Clifford unitary U described by the images U X_i U^dag and U Z_i U^dag
/// of the single-qudit generators, phases included. This fixes U up to a
/// global phase.
class CliffordMap {
   public:
    CliffordMap(std::vector<PauliOperator> x_images, std::vector<PauliOperator> z_images)
        : x_images_(std::move(x_images)), z_images_(std::move(z_images)) {
        if (x_images_.empty() || x_images_.size() != z_images_.size()) {
            throw std::invalid_argument("CliffordMap needs one X and one Z image per qudit");
        }
        for (const auto *images : {&x_images_, &z_images_}) {
            for (const auto &img : *images) {
                if (img.num_qudits() != x_images_.size() || img.dim() != x_images_[0].dim()) {
                    throw std::invalid_argument("CliffordMap image has the wrong shape");
                }
            }
        }
    }

    static CliffordMap identity(Dimension dim, std::size_t n) {
        std::vector<PauliOperator> xs;
        std::vector<PauliOperator> zs;
        for (std::size_t q = 0; q < n; ++q) {
            xs.push_back(PauliOperator::x_on(dim, n, q));
            zs.push_back(PauliOperator::z_on(dim, n, q));
        }
        return CliffordMap(std::move(xs), std::move(zs));
    }

    const Dimension &dim() const noexcept {
        return x_images_[0].dim();
    }
    std::size_t num_qudits() const noexcept {
        return x_images_.size();
    }
    const PauliOperator &x_image(std::size_t q) const {
        return x_images_.at(q);
    }
    const PauliOperator &z_image(std::size_t q) const {
        return z_images_.at(q);
    }

    /// U p U^dag. Conjugation is a homomorphism, so the image of the normal
    /// form omega^a prod_i X_i^x_i Z_i^z_i is the same ordered product of the
    /// generator images.
    PauliOperator apply(const PauliOperator &p) const {
        if (p.num_qudits() != num_qudits() || p.dim() != dim()) {
            throw std::invalid_argument("CliffordMap applied to an operator of the wrong shape");
        }
        PauliOperator out = PauliOperator::identity(dim(), num_qudits());
        out.set_phase(p.phase());
        for (std::size_t q = 0; q < num_qudits(); ++q) {
            if (p.x(q) != 0) {
                out = multiply(out, quditft::power(x_images_[q], p.x(q)));
            }
            if (p.z(q) != 0) {
                out = multiply(out, quditft::power(z_images_[q], p.z(q)));
            }
        }
        return out;
    }

    /// Applies this map (acting on qudits.size() qudits) to the listed qudits
    /// of a larger operator.
    PauliOperator apply_on(const PauliOperator &p, std::span<const std::size_t> qudits) const {
        if (qudits.size() != num_qudits()) {
            throw std::invalid_argument("CliffordMap arity does not match the qudit list");
        }
        PauliOperator local = p.restricted_to(qudits).without_phase();
        if (local.is_identity_up_to_phase()) {
            return p;
        }
        PauliOperator mapped = apply(local);
        PauliOperator out = p;
        out.set_phase(p.phase() + mapped.phase());
        for (std::size_t i = 0; i < qudits.size(); ++i) {
            out.set_x(qudits[i], mapped.x(i));
            out.set_z(qudits[i], mapped.z(i));
        }
        return out;
    }

    /// The map of U_then * U_this (this one applied first).
    CliffordMap then(const CliffordMap &next) const {
        std::vector<PauliOperator> xs;
        std::vector<PauliOperator> zs;
        for (std::size_t q = 0; q < num_qudits(); ++q) {
            xs.push_back(next.apply(x_images_[q]));
            zs.push_back(next.apply(z_images_[q]));
        }
        return CliffordMap(std::move(xs), std::move(zs));
    }

    CliffordMap power(int k) const {
        if (k < 0) {
            throw std::invalid_argument("CliffordMap::power needs k >= 0");
        }
        CliffordMap out = identity(dim(), num_qudits());
        for (int i = 0; i < k; ++i) {
            out = out.then(*this);
        }
        return out;
    }

    /// Images preserve every pairwise commutation exponent of the generators.
    bool is_symplectic() const {
        std::size_t n = num_qudits();
        std::vector<PauliOperator> gens;
        std::vector<const PauliOperator *> imgs;
        for (std::size_t q = 0; q < n; ++q) {
            gens.push_back(PauliOperator::x_on(dim(), n, q));
            imgs.push_back(&x_images_[q]);
            gens.push_back(PauliOperator::z_on(dim(), n, q));
            imgs.push_back(&z_images_[q]);
        }
        for (std::size_t a = 0; a < gens.size(); ++a) {
            for (std::size_t b = a + 1; b < gens.size(); ++b) {
                if (commutation_exponent(gens[a], gens[b]) != commutation_exponent(*imgs[a], *imgs[b])) {
                    return false;
                }
            }
        }
        return true;
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t q = 0; q < num_qudits(); ++q) {
            os << "X" << q << " -> " << x_images_[q].str() << "\n";
            os << "Z" << q << " -> " << z_images_[q].str() << "\n";
        }
        return os.str();
    }

    friend bool operator==(const CliffordMap &, const CliffordMap &) = default;

   private:
    std::vector<PauliOperator> x_images_;
    std::vector<PauliOperator> z_images_;
};

inline std::ostream &operator<<(std::ostream &os, const CliffordMap &m) {
    return os << m.str();
}

}  // namespace quditft
