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

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "quditft/dense.hpp"
#include "quditft/tableau.hpp"

// Measurement-based gate constructions. A gadget is a list of steps in a
// local frame: data qudits 0..arity-1, ancillas appended in preparation
// order. The executor maps the frame onto any backend register and, once
// the ancillas are discarded, permutes the outputs back into the slots the
// inputs came from, so gadgets compose like gates.

namespace quditft {

struct GadgetRecord;

struct PrepareStep {
    InitialKind kind;  // Zero or XEigenstate
};

struct GateStep {
    Gate gate;
    std::vector<std::size_t> qudits;
};

/// Measure `observable`; `correction` is the stabilizer element M (up to a
/// power) that restores the +1 eigenstate afterwards.
struct MeasureStep {
    PauliOperator observable;
    PauliOperator correction;
};

struct DiscardStep {
    std::vector<std::size_t> qudits;
};

struct InvokeStep {
    std::shared_ptr<const GadgetRecord> gadget;
    std::vector<std::size_t> qudits;
};

using GadgetStep = std::variant<PrepareStep, GateStep, MeasureStep, DiscardStep, InvokeStep>;

struct GadgetRecord {
    GadgetRecord(std::string name, std::size_t arity, std::size_t frame, CliffordMap expected_map,
                 ComplexMatrix target_unitary)
        : name(std::move(name)),
          arity(arity),
          frame(frame),
          expected_map(std::move(expected_map)),
          target_unitary(std::move(target_unitary)) {
    }

    std::string name;
    std::size_t arity;
    /// Local frame size: arity plus every ancilla prepared.
    std::size_t frame;
    std::vector<GadgetStep> steps;
    /// Output slot holding data input i once the gadget finishes.
    std::vector<std::size_t> data_relocation;
    /// Induced map on the data qudits (phases included).
    CliffordMap expected_map;
    /// Unitary the gadget equals up to global phase.
    ComplexMatrix target_unitary;

    std::size_t measurement_count() const;
};

inline std::size_t GadgetRecord::measurement_count() const {
    std::size_t count = 0;
    for (const auto &step : steps) {
        if (std::holds_alternative<MeasureStep>(step)) {
            ++count;
        } else if (const auto *inv = std::get_if<InvokeStep>(&step)) {
            count += inv->gadget->measurement_count();
        }
    }
    return count;
}

/// Where outcomes come from: forced values (post-selection) first, then the
/// backend's sampler. Every outcome is appended to `observed`.
struct Trajectory {
    std::vector<int> forced;
    std::size_t cursor = 0;
    std::vector<int> observed;

    std::optional<int> next_forced() {
        if (cursor < forced.size()) {
            return forced[cursor++];
        }
        return std::nullopt;
    }
};

// ---------------------------------------------------------------------------
// Backends.

class TableauBackend {
   public:
    TableauBackend(StabilizerTableau t, Rng rng) : t_(std::move(t)), rng_(rng) {
    }

    std::size_t num_qudits() const {
        return t_.num_qudits();
    }
    const Dimension &dim() const {
        return t_.dim();
    }
    const StabilizerTableau &tableau() const {
        return t_;
    }

    void prepare(InitialKind kind) {
        t_ = tensor(t_, initial_tableau(1, t_.dim(), kind));
    }
    void apply_gate(const Gate &g, std::span<const std::size_t> qudits) {
        t_ = conjugate_by_gate(t_, g, qudits);
    }
    int measure(const PauliOperator &a, const PauliOperator &m, std::optional<int> post_select) {
        auto r = measure_pauli(t_, a, rng_, {.post_select = post_select, .correct = true, .correction_operator = m});
        t_ = r.tableau;
        return r.outcome;
    }
    /// Raw projective measurement: no correction is applied.
    int measure_projective(const PauliOperator &a, std::optional<int> post_select) {
        auto r = measure_pauli(t_, a, rng_, {.post_select = post_select, .correct = false});
        t_ = r.tableau;
        return r.outcome;
    }
    /// True when the state is a +1 eigenstate of p.
    bool stabilized_by(const PauliOperator &p) const {
        auto out = deterministic_outcome(t_, p);
        return out && *out == 0;
    }
    void discard(std::span<const std::size_t> qudits) {
        t_ = discard_qudits(t_, qudits);
    }
    void permute(std::span<const std::size_t> perm) {
        t_ = permute_qudits(t_, perm);
    }

   private:
    StabilizerTableau t_;
    Rng rng_;
};

class DenseBackend {
   public:
    DenseBackend(DenseState s, Rng rng) : s_(std::move(s)), rng_(rng) {
    }

    std::size_t num_qudits() const {
        return s_.num_qudits();
    }
    const Dimension &dim() const {
        return s_.dim();
    }
    const DenseState &state() const {
        return s_;
    }

    void prepare(InitialKind kind) {
        DenseState q = DenseState::zero(s_.dim(), 1);
        if (kind == InitialKind::XEigenstate) {
            q = apply(q, {GateKind::Fourier, 1}, {0});
        } else if (kind != InitialKind::Zero) {
            throw std::invalid_argument("dense backend can only prepare |0> or the X eigenstate");
        }
        s_ = tensor(s_, q);
    }
    void apply_gate(const Gate &g, std::span<const std::size_t> qudits) {
        s_ = apply(s_, g, qudits);
    }
    /// Projects, then applies M^(k a) with k chosen so M^k A = omega A M^k.
    int measure(const PauliOperator &a, const PauliOperator &m, std::optional<int> post_select) {
        int c = commutation_exponent(m, a);
        if (c == 0) {
            throw std::invalid_argument("correction operator " + m.str() + " commutes with " + a.str());
        }
        auto r = measure_pauli_dense(s_, a, rng_, post_select);
        s_ = r.state;
        if (r.outcome != 0) {
            s_ = apply_pauli(s_, power(m, static_cast<std::int64_t>(s_.dim().inv(c)) * r.outcome));
        }
        return r.outcome;
    }
    int measure_projective(const PauliOperator &a, std::optional<int> post_select) {
        auto r = measure_pauli_dense(s_, a, rng_, post_select);
        s_ = r.state;
        return r.outcome;
    }
    bool stabilized_by(const PauliOperator &p) const {
        return (apply_pauli(s_, p).amplitudes() - s_.amplitudes()).norm() < kStateTolerance;
    }
    void discard(std::span<const std::size_t> qudits) {
        s_ = discard_qudits(s_, qudits);
    }
    void set_state(DenseState s) {
        s_ = std::move(s);
    }
    Rng &rng() {
        return rng_;
    }
    void permute(std::span<const std::size_t> perm) {
        s_ = permute_qudits(s_, perm);
    }

   private:
    DenseState s_;
    Rng rng_;
};

// ---------------------------------------------------------------------------
// Execution.

/// Called after every primitive step with the backend and a step label.
template <class Backend>
using StepObserver = std::function<void(const Backend &, const std::string &)>;

template <class Backend>
void run_gadget(Backend &backend, const GadgetRecord &g, std::span<const std::size_t> data, Trajectory &trajectory,
                const StepObserver<Backend> &observe = nullptr) {
    if (data.size() != g.arity) {
        throw std::invalid_argument("gadget " + g.name + " acts on " + std::to_string(g.arity) + " qudits, got " +
                                    std::to_string(data.size()));
    }
    detail::check_qudits(backend.num_qudits(), data);
    const std::size_t original_size = backend.num_qudits();
    // local slot -> current global index (nullopt once discarded).
    std::vector<std::optional<std::size_t>> where(g.frame);
    for (std::size_t i = 0; i < g.arity; ++i) {
        where[i] = data[i];
    }
    std::size_t next_ancilla = g.arity;
    auto globals = [&](const std::vector<std::size_t> &local) {
        std::vector<std::size_t> out;
        for (auto l : local) {
            if (l >= g.frame || !where[l]) {
                throw std::logic_error("gadget " + g.name + " references unavailable slot " + std::to_string(l));
            }
            out.push_back(*where[l]);
        }
        return out;
    };
    auto embed = [&](const PauliOperator &local) {
        PauliOperator out = PauliOperator::identity(backend.dim(), backend.num_qudits());
        out.set_phase(local.phase());
        for (std::size_t l = 0; l < g.frame; ++l) {
            if (local.x(l) == 0 && local.z(l) == 0) {
                continue;
            }
            if (!where[l]) {
                throw std::logic_error("gadget " + g.name + " measures discarded slot " + std::to_string(l));
            }
            out.set_x(*where[l], local.x(l));
            out.set_z(*where[l], local.z(l));
        }
        return out;
    };
    auto notify = [&](const std::string &label) {
        if (observe) {
            observe(backend, label);
        }
    };

    for (const auto &step : g.steps) {
        if (const auto *p = std::get_if<PrepareStep>(&step)) {
            where.at(next_ancilla++) = backend.num_qudits();
            backend.prepare(p->kind);
            notify("prepare");
        } else if (const auto *s = std::get_if<GateStep>(&step)) {
            auto qs = globals(s->qudits);
            backend.apply_gate(s->gate, qs);
            notify(std::string(mnemonic(s->gate.kind)));
        } else if (const auto *m = std::get_if<MeasureStep>(&step)) {
            int outcome = backend.measure(embed(m->observable), embed(m->correction), trajectory.next_forced());
            trajectory.observed.push_back(outcome);
            notify("measure " + m->observable.str());
        } else if (const auto *dsc = std::get_if<DiscardStep>(&step)) {
            auto qs = globals(dsc->qudits);
            backend.discard(qs);
            for (auto l : dsc->qudits) {
                where[l].reset();
            }
            for (auto &w : where) {
                if (w) {
                    std::size_t shift = 0;
                    for (auto q : qs) {
                        shift += q < *w ? 1 : 0;
                    }
                    *w -= shift;
                }
            }
            notify("discard");
        } else if (const auto *inv = std::get_if<InvokeStep>(&step)) {
            auto qs = globals(inv->qudits);
            run_gadget(backend, *inv->gadget, qs, trajectory, observe);
        }
    }

    if (backend.num_qudits() != original_size) {
        throw std::logic_error("gadget " + g.name + " leaves ancillas behind");
    }
    // Put output i back into data[i]; bystanders keep their relative order.
    std::vector<std::size_t> outputs;
    for (std::size_t i = 0; i < g.arity; ++i) {
        auto w = where.at(g.data_relocation.at(i));
        if (!w) {
            throw std::logic_error("gadget " + g.name + " discarded an output slot");
        }
        outputs.push_back(*w);
    }
    std::vector<bool> is_output(original_size, false);
    for (auto o : outputs) {
        is_output[o] = true;
    }
    std::vector<bool> is_data(original_size, false);
    for (auto q : data) {
        is_data[q] = true;
    }
    std::vector<std::size_t> perm(original_size);
    std::size_t bystander = 0;
    for (std::size_t pos = 0; pos < original_size; ++pos) {
        if (is_data[pos]) {
            continue;
        }
        while (is_output[bystander]) {
            ++bystander;
        }
        perm[pos] = bystander++;
    }
    for (std::size_t i = 0; i < g.arity; ++i) {
        perm[data[i]] = outputs[i];
    }
    bool trivial = true;
    for (std::size_t pos = 0; pos < original_size; ++pos) {
        trivial = trivial && perm[pos] == pos;
    }
    if (!trivial) {
        backend.permute(perm);
    }
}

template <class Backend>
void run_gadget(Backend &backend, const GadgetRecord &g, std::initializer_list<std::size_t> data,
                Trajectory &trajectory) {
    std::vector<std::size_t> qs(data);
    run_gadget(backend, g, std::span<const std::size_t>(qs), trajectory);
}

// ---------------------------------------------------------------------------
// The gadgets.

namespace detail {

inline std::string exp_token(char letter, int e, const Dimension &dim) {
    e = dim.mod(e);
    if (e == 0) {
        return "";
    }
    return e == 1 ? std::string(1, letter) : std::string(1, letter) + std::to_string(e);
}

// Single-qudit factor X^x Z^z as text.
inline std::string factor(const Dimension &dim, int x, int z) {
    std::string s = exp_token('X', x, dim) + exp_token('Z', z, dim);
    return s.empty() ? "I" : s;
}

}  // namespace detail

/// P^-1 by measurement: |0> ancilla, SUM data -> ancilla, measure I (x) XZ.
inline GadgetRecord gadget_p_inverse(const Dimension &dim) {
    GadgetRecord g("pinv", 1, 2, CliffordMap({parse_pauli(dim, detail::factor(dim, 1, -1))}, {parse_pauli(dim, "Z")}),
                   gate_matrix({GateKind::Phase, dim.d() - 1}, dim));
    g.steps = {
        PrepareStep{InitialKind::Zero},
        GateStep{{GateKind::Sum, 1}, {0, 1}},
        MeasureStep{parse_pauli(dim, "I XZ"), parse_pauli(dim, detail::factor(dim, 0, -1) + " Z")},
        DiscardStep{{1}},
    };
    g.data_relocation = {0};
    return g;
}

/// Q by measurement: X-eigenstate ancilla, SUM ancilla -> data, measure
/// I (x) XZ^-1. Q = R^-1 P^-1 R.
inline GadgetRecord gadget_q(const Dimension &dim) {
    GadgetRecord g("q", 1, 2, CliffordMap({parse_pauli(dim, "X")}, {parse_pauli(dim, "XZ")}),
                   gate_matrix({GateKind::Fourier, 3}, dim) * gate_matrix({GateKind::Phase, dim.d() - 1}, dim) *
                       gate_matrix({GateKind::Fourier, 1}, dim));
    g.steps = {
        PrepareStep{InitialKind::XEigenstate},
        GateStep{{GateKind::Sum, 1}, {1, 0}},
        MeasureStep{parse_pauli(dim, "I " + detail::factor(dim, 1, -1)), parse_pauli(dim, "X X")},
        DiscardStep{{1}},
    };
    g.data_relocation = {0};
    return g;
}

/// S gate by measurement: the data ends up in the former ancilla, which
/// then carries SCALE(-s^-1).
inline GadgetRecord gadget_s(const Dimension &dim, int s) {
    if (dim.mod(s) == 0) {
        throw std::invalid_argument("S gadget needs s != 0 mod " + std::to_string(dim.d()));
    }
    s = dim.mod(s);
    int a = dim.neg(dim.inv(s));
    GadgetRecord g("s(" + std::to_string(s) + ")", 1, 2,
                   CliffordMap({PauliOperator::x_on(dim, 1, 0, a)}, {PauliOperator::z_on(dim, 1, 0, dim.neg(s))}),
                   gate_matrix({GateKind::Scale, a}, dim));
    g.steps = {
        PrepareStep{InitialKind::XEigenstate},
        GateStep{{GateKind::Sum, s}, {1, 0}},
        MeasureStep{parse_pauli(dim, "Z I"), parse_pauli(dim, detail::factor(dim, s, 0) + " X")},
        DiscardStep{{0}},
    };
    g.data_relocation = {1};
    return g;
}

/// R^-1 as Q, P^-1, Q, then the Pauli X^-1 that fixes the frame phase.
inline GadgetRecord gadget_r_inverse(const Dimension &dim) {
    auto q = std::make_shared<const GadgetRecord>(gadget_q(dim));
    auto pinv = std::make_shared<const GadgetRecord>(gadget_p_inverse(dim));
    GadgetRecord g("rinv", 1, 1, CliffordMap({PauliOperator::z_on(dim, 1, 0, dim.d() - 1)}, {parse_pauli(dim, "X")}),
                   gate_matrix({GateKind::Fourier, 3}, dim));
    g.steps = {
        InvokeStep{q, {0}},
        InvokeStep{pinv, {0}},
        InvokeStep{q, {0}},
        GateStep{{GateKind::X, -1}, {0}},
    };
    g.data_relocation = {0};
    return g;
}

/// R = (R^-1)^3.
inline GadgetRecord gadget_r(const Dimension &dim) {
    auto rinv = std::make_shared<const GadgetRecord>(gadget_r_inverse(dim));
    GadgetRecord g("r", 1, 1, clifford_map_of_gate({GateKind::Fourier, 1}, dim),
                   gate_matrix({GateKind::Fourier, 1}, dim));
    g.steps = {InvokeStep{rinv, {0}}, InvokeStep{rinv, {0}}, InvokeStep{rinv, {0}}};
    g.data_relocation = {0};
    return g;
}

/// SUM from qudit 0 to qudit 1 using only Pauli measurements and a |0>
/// ancilla in slot 2.
inline GadgetRecord gadget_sum(const Dimension &dim) {
    std::string xinv = detail::factor(dim, -1, 0);
    GadgetRecord g("sumgadget", 2, 3, clifford_map_of_gate({GateKind::Sum, 1}, dim),
                   gate_matrix({GateKind::Sum, 1}, dim));
    g.steps = {
        PrepareStep{InitialKind::Zero},
        MeasureStep{parse_pauli(dim, "I X " + xinv), parse_pauli(dim, "I I Z")},
        MeasureStep{parse_pauli(dim, "Z I Z"), parse_pauli(dim, "I X " + xinv)},
        MeasureStep{parse_pauli(dim, "I I X"), parse_pauli(dim, "Z I Z")},
        DiscardStep{{2}},
    };
    g.data_relocation = {0, 1};
    return g;
}

/// Looks a gadget up by its CLI name (`s` takes the parameter).
inline GadgetRecord gadget_by_name(const std::string &name, const Dimension &dim, int param = 1) {
    if (name == "pinv") {
        return gadget_p_inverse(dim);
    }
    if (name == "q") {
        return gadget_q(dim);
    }
    if (name == "r") {
        return gadget_r(dim);
    }
    if (name == "rinv") {
        return gadget_r_inverse(dim);
    }
    if (name == "s") {
        return gadget_s(dim, param);
    }
    if (name == "sumgadget") {
        return gadget_sum(dim);
    }
    throw std::invalid_argument("unknown gadget '" + name + "' (expected pinv, q, r, rinv, s, sumgadget, toffoli)");
}

// ---------------------------------------------------------------------------
// Analysis helpers.

/// Logical map realized on a tableau run with open logical inputs.
inline CliffordMap tableau_effect(const GadgetRecord &g, Trajectory &trajectory, Rng rng) {
    auto before = initial_tableau(g.arity, g.expected_map.dim(), InitialKind::OpenLogical);
    TableauBackend backend(before, rng);
    std::vector<std::size_t> data(g.arity);
    for (std::size_t i = 0; i < g.arity; ++i) {
        data[i] = i;
    }
    run_gadget(backend, g, std::span<const std::size_t>(data), trajectory);
    return extract_clifford_map(before, backend.tableau());
}

/// Kraus operator K (data in -> data out) of one outcome trajectory, up to
/// global phase, normalized so K^dag K = I. The gadget runs once on the
/// maximally entangled state of the data with a reference register.
inline ComplexMatrix kraus_operator(const GadgetRecord &g, const std::vector<int> &outcomes, Rng rng) {
    const Dimension &dim = g.expected_map.dim();
    std::size_t a = g.arity;
    std::size_t size = checked_hilbert_dimension(dim, a, kMaxMatrixAxis);
    ComplexVector choi = ComplexVector::Zero(static_cast<Eigen::Index>(size * size));
    for (std::size_t j = 0; j < size; ++j) {
        choi(static_cast<Eigen::Index>(j * size + j)) = 1.0 / std::sqrt(static_cast<double>(size));
    }
    DenseBackend backend(DenseState(dim, 2 * a, std::move(choi)), rng);
    std::vector<std::size_t> data(a);
    for (std::size_t i = 0; i < a; ++i) {
        data[i] = i;
    }
    Trajectory t{outcomes, 0, {}};
    run_gadget(backend, g, std::span<const std::size_t>(data), t);
    const ComplexVector &out = backend.state().amplitudes();
    ComplexMatrix k(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                out(static_cast<Eigen::Index>(i * size + j)) * std::sqrt(static_cast<double>(size));
        }
    }
    return k;
}

/// Whether a == phase * b for some unit phase, entrywise within tol.
inline bool matrices_equal_up_to_phase(const ComplexMatrix &a, const ComplexMatrix &b, double tol = kStateTolerance) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    Complex overlap = (b.adjoint() * a).trace();
    if (std::abs(overlap) < 1e-12) {
        return false;
    }
    Complex phase = overlap / std::abs(overlap);
    return (a - phase * b).cwiseAbs().maxCoeff() < tol;
}

}  // namespace quditft
