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
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "quditft/codes.hpp"
#include "quditft/dense.hpp"
#include "quditft/gadgets.hpp"
#include "quditft/gates.hpp"
#include "quditft/pauli.hpp"
#include "quditft/tableau.hpp"
#include "quditft/toffoli.hpp"

// Built-in acceptance suite shared by the acceptance test binary and the
// `verify` command. Every check compares against the dense oracle or a
// closed-form expectation.

namespace quditft {

struct CheckResult {
    int criterion;
    std::string name;
    int dim;
    bool passed;
    std::string detail;
    double seconds = 0;
};

namespace verify_detail {

inline std::string fmt_error(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

// Tracks the worst deviation and the first failure message.
struct Tally {
    double worst = 0;
    std::size_t cases = 0;
    std::string failure;

    void record(double error, double tolerance, const std::string &what) {
        ++cases;
        worst = std::max(worst, error);
        if (!(error <= tolerance) && failure.empty()) {
            failure = what + " (error " + fmt_error(error) + ")";
        }
    }
    void require(bool ok, const std::string &what) {
        ++cases;
        if (!ok && failure.empty()) {
            failure = what;
        }
    }
    bool ok() const {
        return failure.empty();
    }
    std::string detail(const std::string &summary) const {
        std::string out = summary + ", " + std::to_string(cases) + " cases, max error " + fmt_error(worst);
        if (!failure.empty()) {
            out += "; first failure: " + failure;
        }
        return out;
    }
};

inline double matrix_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline PauliOperator random_pauli(const Dimension &dim, std::size_t n, Rng &rng, bool allow_identity = true) {
    std::uniform_int_distribution<int> digit(0, dim.d() - 1);
    while (true) {
        std::vector<int> x(n);
        std::vector<int> z(n);
        for (std::size_t q = 0; q < n; ++q) {
            x[q] = digit(rng);
            z[q] = digit(rng);
        }
        PauliOperator p(dim, digit(rng), x, z);
        if (allow_identity || !p.is_identity_up_to_phase()) {
            return p;
        }
    }
}

// 1 - |<expected|actual>|^2 for normalized states.
inline double infidelity(const DenseState &expected, const DenseState &actual) {
    return std::max(0.0, 1.0 - fidelity(expected, actual));
}

inline DenseState apply_operator(const ComplexMatrix &k, const DenseState &s) {
    ComplexVector v = k * s.amplitudes();
    double norm = v.norm();
    if (norm > 0) {
        v /= norm;
    }
    return DenseState(s.dim(), s.num_qudits(), std::move(v));
}

/// u acting on `qudits` of an n-qudit register, as a full matrix.
inline ComplexMatrix embed_operator(const ComplexMatrix &u, std::span<const std::size_t> qudits, std::size_t n,
                                    const Dimension &dim) {
    std::size_t size = checked_hilbert_dimension(dim, n, kMaxMatrixAxis);
    ComplexMatrix out(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    for (std::size_t j = 0; j < size; ++j) {
        ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(size));
        e(static_cast<Eigen::Index>(j)) = 1;
        out.col(static_cast<Eigen::Index>(j)) = apply_matrix(DenseState(dim, n, e), u, qudits).amplitudes();
    }
    return out;
}

struct KrausBranch {
    std::vector<int> outcomes;
    ComplexMatrix k;
};

/// Kraus operator of every outcome trajectory. Gadgets that only invoke
/// other gadgets and apply gates are expanded depth first; measuring
/// gadgets are enumerated outcome by outcome.
inline std::vector<KrausBranch> trajectory_kraus(const GadgetRecord &g, Rng &rng) {
    const Dimension &dim = g.expected_map.dim();
    bool composite = std::any_of(g.steps.begin(), g.steps.end(),
                                 [](const GadgetStep &s) { return std::holds_alternative<InvokeStep>(s); });
    std::vector<KrausBranch> out;
    if (!composite) {
        std::size_t m = g.measurement_count();
        std::vector<int> outs(m, 0);
        while (true) {
            out.push_back({outs, kraus_operator(g, outs, rng)});
            std::size_t i = 0;
            while (i < m && ++outs[i] == dim.d()) {
                outs[i++] = 0;
            }
            if (i == m) {
                break;
            }
        }
        return out;
    }
    std::size_t size = checked_hilbert_dimension(dim, g.arity, kMaxMatrixAxis);
    out.push_back({{}, ComplexMatrix::Identity(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size))});
    for (const auto &step : g.steps) {
        if (const auto *gs = std::get_if<GateStep>(&step)) {
            ComplexMatrix u = embed_operator(gate_matrix(gs->gate, dim), gs->qudits, g.arity, dim);
            for (auto &b : out) {
                b.k = u * b.k;
            }
        } else if (const auto *inv = std::get_if<InvokeStep>(&step)) {
            auto child = trajectory_kraus(*inv->gadget, rng);
            std::vector<KrausBranch> next;
            for (const auto &c : child) {
                ComplexMatrix u = embed_operator(c.k, inv->qudits, g.arity, dim);
                for (const auto &b : out) {
                    auto outcomes = b.outcomes;
                    outcomes.insert(outcomes.end(), c.outcomes.begin(), c.outcomes.end());
                    next.push_back({std::move(outcomes), u * b.k});
                }
            }
            out = std::move(next);
        } else {
            throw std::logic_error("composite gadget " + g.name + " may only invoke gadgets and apply gates");
        }
    }
    return out;
}

template <class F>
CheckResult timed(int criterion, std::string name, int dim, F &&body) {
    auto start = std::chrono::steady_clock::now();
    CheckResult r{criterion, std::move(name), dim, false, "", 0};
    try {
        body(r);
    } catch (const std::exception &e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace verify_detail

// ---------------------------------------------------------------------------
// Criterion 1: Pauli algebra against the matrix oracle.

inline CheckResult check_pauli_algebra(const Dimension &dim, Rng &rng) {
    using namespace verify_detail;
    return timed(1, "pauli algebra vs matrix oracle", dim.d(), [&](CheckResult &r) {
        Tally t;
        const Complex omega = std::polar(1.0, 2 * M_PI / dim.d());
        auto check_pair = [&](const PauliOperator &p, const PauliOperator &q) {
            ComplexMatrix mp = to_matrix(p);
            ComplexMatrix mq = to_matrix(q);
            ComplexMatrix prod = mp * mq;
            t.record(matrix_diff(to_matrix(multiply(p, q)), prod), kStructuralTolerance,
                     "multiply " + p.str() + " * " + q.str());
            int c = commutation_exponent(p, q);
            t.record(matrix_diff(prod, std::pow(omega, c) * (mq * mp)), kStructuralTolerance,
                     "commutation " + p.str() + ", " + q.str());
        };
        auto check_power = [&](const PauliOperator &p) {
            ComplexMatrix mp = to_matrix(p);
            ComplexMatrix acc = ComplexMatrix::Identity(mp.rows(), mp.cols());
            for (int m = 0; m <= 2 * dim.d() + 1; ++m) {
                t.record(matrix_diff(to_matrix(power(p, m)), acc), kStructuralTolerance,
                         "power " + p.str() + "^" + std::to_string(m));
                acc = acc * mp;
            }
            t.record(matrix_diff(to_matrix(power(p, -1)) * mp, ComplexMatrix::Identity(mp.rows(), mp.cols())),
                     kStructuralTolerance, "inverse of " + p.str());
        };
        std::string summary;
        if (dim.d() <= 3) {
            // Every phase-free operator on n = 1, 2 with random phases.
            std::uniform_int_distribution<int> digit(0, dim.d() - 1);
            for (std::size_t n = 1; n <= 2; ++n) {
                std::size_t count = 1;
                for (std::size_t i = 0; i < 2 * n; ++i) {
                    count *= static_cast<std::size_t>(dim.d());
                }
                std::vector<PauliOperator> all;
                for (std::size_t code = 0; code < count; ++code) {
                    std::vector<int> x(n);
                    std::vector<int> z(n);
                    std::size_t c = code;
                    for (std::size_t q = 0; q < n; ++q) {
                        x[q] = static_cast<int>(c % dim.d());
                        c /= dim.d();
                        z[q] = static_cast<int>(c % dim.d());
                        c /= dim.d();
                    }
                    all.emplace_back(dim, digit(rng), x, z);
                }
                for (const auto &p : all) {
                    check_power(p);
                    for (const auto &q : all) {
                        check_pair(p, q);
                    }
                }
            }
            summary = "exhaustive n <= 2";
        } else {
            std::uniform_int_distribution<std::size_t> size(1, 2);
            for (int i = 0; i < 10000; ++i) {
                std::size_t n = size(rng);
                auto p = random_pauli(dim, n, rng);
                auto q = random_pauli(dim, n, rng);
                check_pair(p, q);
                if (i % 10 == 0) {
                    check_power(p);
                }
            }
            summary = "10^4 random pairs, n <= 2";
        }
        r.passed = t.ok();
        r.detail = t.detail(summary);
    });
}

// ---------------------------------------------------------------------------
// Criterion 2: conjugation maps extracted from unitaries.

inline CheckResult check_conjugation_maps(const Dimension &dim) {
    using namespace verify_detail;
    return timed(2, "gate conjugation maps from unitaries", dim.d(), [&](CheckResult &r) {
        Tally t;
        auto expect = [&](const Gate &g, const std::vector<std::string> &x_images,
                          const std::vector<std::string> &z_images) {
            std::size_t n = x_images.size();
            std::vector<PauliOperator> xs;
            std::vector<PauliOperator> zs;
            for (std::size_t q = 0; q < n; ++q) {
                xs.push_back(parse_pauli(dim, x_images[q], n));
                zs.push_back(parse_pauli(dim, z_images[q], n));
            }
            CliffordMap want(xs, zs);
            CliffordMap got = clifford_map_of_unitary(gate_matrix(g, dim), dim, n);
            std::string label = std::string(mnemonic(g.kind)) + "(" + std::to_string(g.param) + ")";
            t.require(got == want, label + " gave\n" + got.str());
        };
        auto zpow = [&](int e) { return detail::exponent_token('Z', dim.mod(e)); };
        auto xpow = [&](int e) { return detail::exponent_token('X', dim.mod(e)); };
        expect({GateKind::Fourier, 1}, {"Z"}, {xpow(-1)});
        expect({GateKind::Phase, 1}, {"XZ"}, {"Z"});
        expect({GateKind::Sum, 1}, {"X X", "I X"}, {"Z I", zpow(-1) + " Z"});
        for (int a = 1; a < dim.d(); ++a) {
            expect({GateKind::Scale, a}, {xpow(a)}, {zpow(dim.inv(a))});
        }
        r.passed = t.ok();
        r.detail = t.detail("R, P, SUM and SCALE(a) for every a");
    });
}

// ---------------------------------------------------------------------------
// Criterion 3: tableau measurement rule against the dense oracle.

inline CheckResult check_measurement_rule(const Dimension &dim, Rng &rng, std::size_t circuits = 500) {
    using namespace verify_detail;
    return timed(3, "random circuits: tableau vs dense", dim.d(), [&](CheckResult &r) {
        Tally t;
        static constexpr GateKind kinds[] = {GateKind::Fourier, GateKind::Phase, GateKind::Sum,  GateKind::InvSum,
                                             GateKind::Scale,   GateKind::X,     GateKind::Z,    GateKind::Phase2,
                                             GateKind::M1,      GateKind::M2,    GateKind::M3};
        std::uniform_int_distribution<std::size_t> pick_n(1, 4);
        std::uniform_int_distribution<int> pick_kind(0, static_cast<int>(std::size(kinds)) - 1);
        std::uniform_int_distribution<int> pick_power(1, dim.d() - 1);
        std::uniform_int_distribution<int> coin(0, 1);
        for (std::size_t c = 0; c < circuits; ++c) {
            std::size_t n = pick_n(rng);
            StabilizerTableau tab = initial_tableau(n, dim, coin(rng) ? InitialKind::Zero : InitialKind::XEigenstate);
            DenseState state = tableau_to_state(tab);
            std::size_t gates = std::uniform_int_distribution<std::size_t>(0, 30)(rng);
            std::size_t measurements = std::uniform_int_distribution<std::size_t>(0, 6)(rng);
            std::vector<bool> is_measure(gates + measurements, false);
            for (std::size_t i = 0; i < measurements; ++i) {
                is_measure[i] = true;
            }
            std::shuffle(is_measure.begin(), is_measure.end(), rng);
            for (bool measure : is_measure) {
                if (measure) {
                    auto a = random_pauli(dim, n, rng, false);
                    bool correct = coin(rng) == 1;
                    auto m = measure_pauli(tab, a, rng, {.post_select = std::nullopt, .correct = correct});
                    tab = m.tableau;
                    auto dm = measure_pauli_dense(state, a, rng, m.outcome);
                    state = apply_pauli(dm.state, m.correction);
                    continue;
                }
                GateKind kind = kinds[pick_kind(rng)];
                while (arity(kind) > n) {
                    kind = kinds[pick_kind(rng)];
                }
                Gate g{kind, pick_power(rng)};
                std::vector<std::size_t> qs(n);
                for (std::size_t q = 0; q < n; ++q) {
                    qs[q] = q;
                }
                std::shuffle(qs.begin(), qs.end(), rng);
                qs.resize(arity(kind));
                tab = conjugate_by_gate(tab, g, qs);
                state = apply(state, g, qs);
            }
            auto err = infidelity(state, tableau_to_state(tab));
            t.record(err, kStateTolerance, "circuit " + std::to_string(c));
        }
        r.passed = t.ok();
        r.detail = t.detail("n <= 4, <= 30 gates, <= 6 shared-outcome measurements; error = 1 - fidelity");
    });
}

// ---------------------------------------------------------------------------
// Criterion 4: single-qudit gadgets.

inline CheckResult check_single_qudit_gadgets(const Dimension &dim, Rng &rng) {
    using namespace verify_detail;
    return timed(4, "P^-1, Q, S(s), R gadgets", dim.d(), [&](CheckResult &r) {
        Tally t;
        std::vector<GadgetRecord> gadgets{gadget_p_inverse(dim), gadget_q(dim), gadget_r_inverse(dim), gadget_r(dim)};
        for (int s = 1; s < dim.d(); ++s) {
            gadgets.push_back(gadget_s(dim, s));
        }
        const bool exhaustive = dim.d() == 3;
        std::size_t trajectories = 0;
        for (const auto &g : gadgets) {
            std::string label = g.name;
            t.require(clifford_map_of_unitary(g.target_unitary, dim, 1) == g.expected_map,
                      label + ": target unitary does not realize the expected map");
            if (exhaustive) {
                for (const auto &branch : trajectory_kraus(g, rng)) {
                    ++trajectories;
                    for (int i = 0; i < 50; ++i) {
                        auto psi = DenseState::random(dim, 1, rng);
                        t.record(infidelity(apply_operator(g.target_unitary, psi), apply_operator(branch.k, psi)),
                                 kStateTolerance, label + " Kraus branch");
                    }
                }
            }
            // End-to-end runs with sampled trajectories on both backends.
            for (int i = 0; i < 50; ++i) {
                auto psi = DenseState::random(dim, 1, rng);
                DenseBackend backend(psi, rng);
                Trajectory traj;
                run_gadget(backend, g, {std::size_t{0}}, traj);
                t.record(infidelity(apply_operator(g.target_unitary, psi), backend.state()), kStateTolerance,
                         label + " dense run");
                if (i < 10) {
                    Trajectory replay{traj.observed, 0, {}};
                    t.require(tableau_effect(g, replay, rng) == g.expected_map, label + ": tableau map differs");
                }
            }
        }
        auto repeated = [&](const GadgetRecord &g, int times) {
            auto before = initial_tableau(1, dim, InitialKind::OpenLogical);
            TableauBackend backend(before, rng);
            for (int i = 0; i < times; ++i) {
                Trajectory traj;
                run_gadget(backend, g, {std::size_t{0}}, traj);
            }
            return extract_clifford_map(before, backend.tableau());
        };
        t.require(repeated(gadget_p_inverse(dim), dim.d() - 1) == clifford_map_of_gate({GateKind::Phase, 1}, dim),
                  "(P^-1)^(d-1) != P");
        t.require(repeated(gadget_r(dim), 4) == CliffordMap::identity(dim, 1), "R^4 != identity");
        r.passed = t.ok();
        std::string summary = exhaustive ? "all " + std::to_string(trajectories) + " trajectories x 50 states"
                                         : "sampled trajectories";
        r.detail = t.detail(summary + ", (P^-1)^(d-1) = P, R^4 = I");
    });
}

// ---------------------------------------------------------------------------
// Criterion 5: SUM from three measurements.

inline CheckResult check_sum_gadget(const Dimension &dim, Rng &rng) {
    using namespace verify_detail;
    return timed(5, "SUM gadget", dim.d(), [&](CheckResult &r) {
        Tally t;
        auto g = gadget_sum(dim);
        CliffordMap want({parse_pauli(dim, "X X"), parse_pauli(dim, "I X")},
                         {parse_pauli(dim, "Z I"), parse_pauli(dim, detail::exponent_token('Z', dim.d() - 1) + " Z")});
        t.require(g.expected_map == want, "recorded map is not SUM");
        const bool exhaustive = dim.d() <= 5;
        std::vector<std::vector<int>> triples;
        if (exhaustive) {
            for (int a = 0; a < dim.d(); ++a) {
                for (int b = 0; b < dim.d(); ++b) {
                    for (int c = 0; c < dim.d(); ++c) {
                        triples.push_back({a, b, c});
                    }
                }
            }
        } else {
            std::uniform_int_distribution<int> digit(0, dim.d() - 1);
            for (int i = 0; i < 50; ++i) {
                triples.push_back({digit(rng), digit(rng), digit(rng)});
            }
        }
        for (const auto &m : triples) {
            std::string label = "outcomes (" + std::to_string(m[0]) + "," + std::to_string(m[1]) + "," +
                                std::to_string(m[2]) + ")";
            Trajectory traj{m, 0, {}};
            t.require(tableau_effect(g, traj, rng) == want, label + ": tableau map is not SUM");
            ComplexMatrix k = kraus_operator(g, m, rng);
            for (int i = 0; i < 5; ++i) {
                auto psi = DenseState::random(dim, 2, rng);
                t.record(infidelity(apply_operator(g.target_unitary, psi), apply_operator(k, psi)), kStateTolerance,
                         label);
            }
        }
        r.passed = t.ok();
        r.detail = t.detail(exhaustive ? "all " + std::to_string(triples.size()) + " outcome triples"
                                       : "50 sampled outcome triples");
    });
}

// ---------------------------------------------------------------------------
// Criterion 6: Toffoli by teleportation (d = 3).

inline CheckResult check_toffoli(const Dimension &dim, Rng &rng) {
    using namespace verify_detail;
    return timed(6, "Toffoli gadget", dim.d(), [&](CheckResult &r) {
        Tally t;
        auto table = derive_toffoli_corrections(dim);
        std::size_t want_entries = static_cast<std::size_t>(dim.d() * dim.d() * dim.d());
        t.require(table.entries.size() == want_entries,
                  "table has " + std::to_string(table.entries.size()) + " entries");
        t.require(table.at({0, 0, 0}).empty(), "trivial outcome needs a correction");
        std::size_t data[] = {0, 1, 2};
        ComplexMatrix toffoli = gate_matrix({GateKind::Toffoli, 1}, dim);
        for (const auto &[m, circuit] : table.entries) {
            std::string label = "outcomes (" + std::to_string(m[0]) + "," + std::to_string(m[1]) + "," +
                                std::to_string(m[2]) + ")";
            auto ancilla = prepare_toffoli_ancilla(dim, rng).state;
            for (int a = 0; a < dim.d(); ++a) {
                for (int b = 0; b < dim.d(); ++b) {
                    for (int c = 0; c < dim.d(); ++c) {
                        int in[] = {a, b, c};
                        int out[] = {a, b, dim.add(c, dim.mul(a, b))};
                        auto run = detail::run_toffoli_protocol(DenseState::basis(dim, in), data, ancilla, &table,
                                                                rng, m);
                        t.record(infidelity(DenseState::basis(dim, out), run.state), kStateTolerance,
                                 label + " on basis state");
                    }
                }
            }
            for (int i = 0; i < 50; ++i) {
                auto psi = DenseState::random(dim, 3, rng);
                auto run = detail::run_toffoli_protocol(psi, data, ancilla, &table, rng, m);
                t.record(infidelity(apply_operator(toffoli, psi), run.state), kStateTolerance, label + " random");
            }
        }
        r.passed = t.ok();
        r.detail = t.detail("every outcome triple: all basis states and 50 random states; error = 1 - fidelity");
    });
}

// ---------------------------------------------------------------------------
// Criterion 7: |A> preparation and CAT-assisted eigenvalue measurement.

inline CheckResult check_toffoli_ancilla(const Dimension &dim, Rng &rng) {
    using namespace verify_detail;
    return timed(7, "|A> preparation and CAT measurement", dim.d(), [&](CheckResult &r) {
        Tally t;
        const auto exact = toffoli_ancilla_exact(dim);
        std::size_t qs[] = {0, 1, 2};
        auto check = [&](const DenseState &s, const std::string &label) {
            for (GateKind k : {GateKind::M1, GateKind::M2, GateKind::M3}) {
                double err = (apply(s, {k, 1}, qs).amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff();
                t.record(err, kStructuralTolerance, label + ": not a +1 eigenstate of " + std::string(mnemonic(k)));
            }
            // Distance after aligning the global phase.
            Complex overlap = exact.amplitudes().dot(s.amplitudes());
            Complex align = std::abs(overlap) > 0 ? std::conj(overlap) / std::abs(overlap) : Complex(1);
            t.record((align * s.amplitudes() - exact.amplitudes()).norm(), kStateTolerance,
                     label + ": differs from |A>");
        };
        for (int j = 0; j < dim.d(); ++j) {
            check(prepare_toffoli_ancilla(dim, rng, 0, j).state, "direct M3, j=" + std::to_string(j));
        }
        for (std::size_t cat : {1, 2, 3}) {
            for (int i = 0; i < 5; ++i) {
                check(prepare_toffoli_ancilla(dim, rng, cat).state, "CAT size " + std::to_string(cat));
            }
        }
        for (int j = 0; j < dim.d(); ++j) {
            DenseState aj = apply(exact, {GateKind::X, j}, {2});
            for (std::size_t cat : {1, 2, 3}) {
                for (int i = 0; i < 10; ++i) {
                    auto m = measure_via_cat({GateKind::M3, 1}, aj, qs, cat, rng);
                    t.require(m.outcome == j, "|A_" + std::to_string(j) + "> measured " + std::to_string(m.outcome));
                    t.record(infidelity(aj, m.state), kStateTolerance, "CAT measurement disturbed |A_j>");
                }
            }
        }
        r.passed = t.ok();
        r.detail = t.detail("direct and CAT preparations, M1/M2/M3 eigenvalues, |A_j> read-out");
    });
}

// ---------------------------------------------------------------------------
// Criterion 8: the [[3,1]] code.

inline CheckResult check_codes(const Dimension &dim, Rng &rng) {
    using namespace verify_detail;
    return timed(8, "[[3,1]] code: syndromes and logical SUM", dim.d(), [&](CheckResult &r) {
        Tally t;
        auto c = example_code_331();
        auto report = validate_code(c);
        t.require(report.ok(), report.ok() ? "" : report.violations.front());
        auto zero = tableau_to_state(encoded_zero_tableau(c));
        for (std::size_t g = 0; g < c.generators.size(); ++g) {
            auto res = transversal_syndrome_extraction(c, zero, g, rng);
            t.require(res.outcome == 0, "encoded zero gave syndrome " + std::to_string(res.outcome));
            t.record(infidelity(zero, res.state), kStateTolerance, "extraction disturbed encoded zero");
        }
        for (std::size_t q = 0; q < c.n; ++q) {
            for (int kind = 0; kind < 2; ++kind) {
                for (int p = 1; p < c.dim.d(); ++p) {
                    auto e = kind == 0 ? PauliOperator::x_on(c.dim, c.n, q, p) : PauliOperator::z_on(c.dim, c.n, q, p);
                    auto syndrome = error_syndrome_of_pauli(c, e);
                    auto damaged = apply_pauli(zero, e);
                    for (std::size_t g = 0; g < c.generators.size(); ++g) {
                        auto res = transversal_syndrome_extraction(c, damaged, g, rng);
                        auto direct = measure_pauli_dense(damaged, c.generators[g], rng);
                        t.require(res.outcome == syndrome[g] && direct.outcome == syndrome[g],
                                  "error " + e.str() + " on generator " + std::to_string(g));
                    }
                }
            }
        }
        BlockLayout layout{c, 3};
        for (const auto &[a, m] : logical_sum_measurements(layout, 0, 1, 2)) {
            auto problem = check_transversal_structure(pauli_measurement_circuit(a, layout.labels()));
            t.require(!problem, "measurement of " + a.str() + " is not transversal: " + problem.value_or(""));
        }
        auto before = tensor(tensor(encoded_open_tableau(c), encoded_open_tableau(c)), encoded_zero_tableau(c));
        auto data_before = tensor(encoded_open_tableau(c), encoded_open_tableau(c));
        for (int i = 0; i < 10; ++i) {
            auto after = logical_sum_between_blocks(layout, before, 0, 1, 2, rng);
            t.require(extract_clifford_map(data_before, after) == clifford_map_of_gate({GateKind::Sum, 1}, c.dim),
                      "tableau logical map is not SUM");
        }
        for (int a = 0; a < c.dim.d(); ++a) {
            for (int b = 0; b < c.dim.d(); ++b) {
                auto in = tensor(tensor(tableau_to_state(encoded_basis_tableau(c, {a})),
                                        tableau_to_state(encoded_basis_tableau(c, {b}))),
                                 zero);
                auto out = logical_sum_between_blocks_dense(layout, in, 0, 1, 2, rng);
                auto want = tensor(tableau_to_state(encoded_basis_tableau(c, {a})),
                                   tableau_to_state(encoded_basis_tableau(c, {c.dim.add(a, b)})));
                t.record(infidelity(want, out), kStateTolerance,
                         "encoded |" + std::to_string(a) + "," + std::to_string(b) + ">");
            }
        }
        r.passed = t.ok();
        r.detail = t.detail("validation, syndromes of all single X/Z errors, logical SUM on 3^9 amplitudes");
    });
}

/// Criteria that apply at dimension d: Toffoli, |A> and code checks only
/// run at d = 3 (dense size policy).
inline std::vector<int> criteria_for_dimension(int d) {
    if (d == 3) {
        return {1, 2, 3, 4, 5, 6, 7, 8};
    }
    return {1, 2, 3, 4, 5};
}

/// Runs the suite at each dimension; `on_result` sees results as they finish.
inline std::vector<CheckResult> run_verification(const std::vector<int> &dims, std::uint64_t seed = 2026,
                                                 const std::function<void(const CheckResult &)> &on_result = nullptr) {
    std::vector<CheckResult> out;
    for (int d : dims) {
        Dimension dim(d);
        for (int criterion : criteria_for_dimension(d)) {
            Rng rng(seed * 1000003u + static_cast<std::uint64_t>(d) * 101u + static_cast<std::uint64_t>(criterion));
            CheckResult r = [&]() {
                switch (criterion) {
                    case 1:
                        return check_pauli_algebra(dim, rng);
                    case 2:
                        return check_conjugation_maps(dim);
                    case 3:
                        return check_measurement_rule(dim, rng);
                    case 4:
                        return check_single_qudit_gadgets(dim, rng);
                    case 5:
                        return check_sum_gadget(dim, rng);
                    case 6:
                        return check_toffoli(dim, rng);
                    case 7:
                        return check_toffoli_ancilla(dim, rng);
                    default:
                        return check_codes(dim, rng);
                }
            }();
            if (on_result) {
                on_result(r);
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace quditft
