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
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "quditft/circuit.hpp"
#include "quditft/dense.hpp"
#include "quditft/gadgets.hpp"
#include "quditft/tableau.hpp"
#include "quditft/toffoli.hpp"

namespace quditft {

enum class BackendChoice { Tableau, Dense, Both };

inline std::string_view backend_name(BackendChoice b) {
    switch (b) {
        case BackendChoice::Tableau:
            return "tableau";
        case BackendChoice::Dense:
            return "dense";
        case BackendChoice::Both:
            return "both";
    }
    return "?";
}

inline std::optional<BackendChoice> backend_from_name(std::string_view name) {
    if (name == "tableau") {
        return BackendChoice::Tableau;
    }
    if (name == "dense") {
        return BackendChoice::Dense;
    }
    if (name == "both") {
        return BackendChoice::Both;
    }
    return std::nullopt;
}

/// A program that cannot run on the chosen backend (exit code 2 in the CLI).
class UsageError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

struct RunOptions {
    BackendChoice backend = BackendChoice::Tableau;
    std::uint64_t seed = 0;
    std::size_t shots = 1;
};

struct ShotResult {
    std::vector<std::pair<std::string, int>> outcomes;  // program order
    std::vector<int> trajectory;                        // every outcome, gadget internals included
    std::vector<std::string> failures;                  // failed expectations
    std::optional<bool> agreement;                      // both mode only
    std::string agreement_detail;
    std::optional<StabilizerTableau> tableau;
    std::optional<DenseState> state;
    std::optional<CliffordMap> logical_map;
};

struct RunReport {
    CircuitProgram program;
    RunOptions options;
    std::vector<ShotResult> shots;

    bool expectations_passed() const {
        for (const auto &s : shots) {
            if (!s.failures.empty()) {
                return false;
            }
        }
        return true;
    }
    std::optional<bool> agreement() const {
        if (options.backend != BackendChoice::Both) {
            return std::nullopt;
        }
        for (const auto &s : shots) {
            if (!s.agreement.value_or(false)) {
                return false;
            }
        }
        return true;
    }
    bool passed() const {
        return expectations_passed() && agreement().value_or(true);
    }
};

/// Per-shot generator derived from (seed, shot) only.
inline Rng shot_rng(std::uint64_t seed, std::uint64_t shot) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(shot), static_cast<std::uint32_t>(shot >> 32)};
    return Rng(seq);
}

namespace detail {

inline bool uses_toffoli(const CircuitProgram &program) {
    for (const auto &st : program.statements) {
        if (const auto *g = std::get_if<GateStatement>(&st.body); g && g->gate.kind == GateKind::Toffoli) {
            return true;
        }
        if (const auto *g = std::get_if<GadgetStatement>(&st.body); g && g->name == "toffoli") {
            return true;
        }
    }
    return false;
}

// Qudits the dense backend needs at its peak: data, references for an open
// start, and the largest gadget's ancillas.
inline std::size_t peak_dense_qudits(const CircuitProgram &program) {
    std::size_t base = program.num_qudits * (program.init == InitialKind::OpenLogical ? 2 : 1);
    std::size_t extra = 0;
    for (const auto &st : program.statements) {
        if (const auto *g = std::get_if<GadgetStatement>(&st.body)) {
            std::size_t e = 3;
            if (g->name != "toffoli") {
                auto rec = gadget_by_name(g->name, program.dim, g->param);
                e = rec.frame - rec.arity;
            }
            extra = std::max(extra, e);
        }
    }
    return base + extra;
}

/// Rows X_i X_{n+i} and Z_i Z_{n+i}^-1: the data register maximally
/// entangled with a reference copy.
inline StabilizerTableau purified_open_tableau(const Dimension &dim, std::size_t n) {
    std::vector<PauliOperator> rows;
    for (std::size_t i = 0; i < n; ++i) {
        PauliOperator x = PauliOperator::x_on(dim, 2 * n, i);
        x.set_x(n + i, 1);
        PauliOperator z = PauliOperator::z_on(dim, 2 * n, i);
        z.set_z(n + i, dim.neg(1));
        rows.push_back(x);
        rows.push_back(z);
    }
    return StabilizerTableau(dim, 2 * n, std::move(rows), {});
}

inline PauliOperator embed_local(const PauliOperator &local, const std::vector<std::size_t> &qudits,
                                 std::size_t n) {
    PauliOperator out = PauliOperator::identity(local.dim(), n);
    out.set_phase(local.phase());
    for (std::size_t i = 0; i < qudits.size(); ++i) {
        out.set_x(qudits[i], local.x(i));
        out.set_z(qudits[i], local.z(i));
    }
    return out;
}

inline std::string outcome_key(const MeasureStatement &m, std::size_t line) {
    return m.name ? *m.name : "line" + std::to_string(line);
}

/// Runs every statement on one backend. Forced outcomes in `trajectory`
/// override sampling, in order.
template <class Backend>
void execute_program(Backend &backend, const CircuitProgram &program, Trajectory &trajectory, ShotResult &shot,
                     const CorrectionTable *toffoli_table) {
    std::map<std::string, int> bound;
    const std::size_t n = backend.num_qudits();
    for (const auto &st : program.statements) {
        if (const auto *g = std::get_if<GateStatement>(&st.body)) {
            if constexpr (std::is_same_v<Backend, TableauBackend>) {
                if (g->gate.kind == GateKind::Toffoli) {
                    throw UsageError("toffoli is not a Clifford gate; use the dense backend");
                }
            }
            backend.apply_gate(g->gate, g->qudits);
        } else if (const auto *m = std::get_if<MeasureStatement>(&st.body)) {
            auto forced = trajectory.next_forced();
            auto post = m->post_select ? m->post_select : forced;
            int outcome = backend.measure_projective(embed_local(m->local, m->qudits, n), post);
            trajectory.observed.push_back(outcome);
            std::string key = outcome_key(*m, st.line);
            bound[key] = outcome;
            shot.outcomes.emplace_back(key, outcome);
        } else if (const auto *gs = std::get_if<GadgetStatement>(&st.body)) {
            if (gs->name == "toffoli") {
                if constexpr (std::is_same_v<Backend, DenseBackend>) {
                    std::optional<OutcomeTriple> post;
                    if (trajectory.cursor + 3 <= trajectory.forced.size()) {
                        post = OutcomeTriple{trajectory.forced[trajectory.cursor], trajectory.forced[trajectory.cursor + 1],
                                             trajectory.forced[trajectory.cursor + 2]};
                        trajectory.cursor += 3;
                    }
                    auto run = gadget_toffoli(backend.state(), gs->qudits, *toffoli_table, backend.rng(), post);
                    backend.set_state(run.state);
                    for (int o : run.outcomes) {
                        trajectory.observed.push_back(o);
                    }
                } else {
                    throw UsageError("the toffoli gadget is not Clifford; use the dense backend");
                }
            } else {
                auto rec = gadget_by_name(gs->name, program.dim, gs->param);
                run_gadget(backend, rec, gs->qudits, trajectory);
            }
        } else if (const auto *e = std::get_if<ExpectOutcome>(&st.body)) {
            auto it = bound.find(e->name);
            if (it == bound.end()) {
                shot.failures.push_back("line " + std::to_string(st.line) + ": outcome '" + e->name +
                                        "' was never measured");
            } else if (it->second != e->value) {
                shot.failures.push_back("line " + std::to_string(st.line) + ": expected " + e->name + " == " +
                                        std::to_string(e->value) + ", got " + std::to_string(it->second));
            }
        } else if (const auto *s = std::get_if<ExpectStabilized>(&st.body)) {
            auto p = embed_local(s->local, s->qudits, n);
            if (!backend.stabilized_by(p)) {
                shot.failures.push_back("line " + std::to_string(st.line) + ": state is not stabilized by " +
                                        detail::local_pauli_text(s->local));
            }
        }
    }
}

inline std::optional<CliffordMap> open_logical_map(const StabilizerTableau &before, const StabilizerTableau &after) {
    try {
        return extract_clifford_map(before, after);
    } catch (const std::invalid_argument &) {
        return std::nullopt;
    }
}

}  // namespace detail

/// Rejects programs the chosen backend cannot execute.
inline void check_runnable(const CircuitProgram &program, BackendChoice backend) {
    if (backend != BackendChoice::Dense && detail::uses_toffoli(program)) {
        throw UsageError("toffoli is not a Clifford operation and cannot run on the tableau backend; use --backend "
                         "dense");
    }
    for (const auto &st : program.statements) {
        if (const auto *g = std::get_if<GadgetStatement>(&st.body); g && g->name == "toffoli" && program.dim.d() != 3) {
            throw UsageError("the toffoli gadget is limited to d = 3 by the dense size policy");
        }
    }
    if (backend != BackendChoice::Tableau) {
        std::size_t q = detail::peak_dense_qudits(program);
        try {
            checked_hilbert_dimension(program.dim, q, dense_amplitude_cap());
        } catch (const std::length_error &e) {
            throw UsageError(std::string("dense backend: ") + e.what());
        }
    }
}

/// Runs `options.shots` independent shots; each shot depends only on
/// (seed, shot index).
inline RunReport run_program(const CircuitProgram &program, const RunOptions &options) {
    check_runnable(program, options.backend);
    RunReport report{program, options, {}};
    const Dimension &dim = program.dim;
    const std::size_t n = program.num_qudits;
    const bool open = program.init == InitialKind::OpenLogical;

    std::optional<CorrectionTable> toffoli_table;
    if (detail::uses_toffoli(program) && dim.d() == 3) {
        toffoli_table = derive_toffoli_corrections(dim);
    }
    const CorrectionTable *table = toffoli_table ? &*toffoli_table : nullptr;

    auto dense_start = [&]() {
        if (open) {
            return tableau_to_state(detail::purified_open_tableau(dim, n));
        }
        return tableau_to_state(initial_tableau(n, dim, program.init));
    };

    for (std::size_t shot = 0; shot < options.shots; ++shot) {
        Rng rng = shot_rng(options.seed, shot);
        ShotResult result;
        if (options.backend == BackendChoice::Dense) {
            DenseBackend dense(dense_start(), rng);
            Trajectory traj;
            detail::execute_program(dense, program, traj, result, table);
            result.trajectory = traj.observed;
            result.state = dense.state();
        } else {
            StabilizerTableau start = initial_tableau(n, dim, program.init);
            TableauBackend tab(start, rng);
            Trajectory traj;
            detail::execute_program(tab, program, traj, result, table);
            result.trajectory = traj.observed;
            result.tableau = tab.tableau();
            if (open) {
                result.logical_map = detail::open_logical_map(start, tab.tableau());
            }
            if (options.backend == BackendChoice::Both) {
                // Replay the tableau trajectory on the dense backend; an open
                // start is compared through its purification.
                ShotResult replay;
                Trajectory forced{result.trajectory, 0, {}};
                try {
                    DenseBackend dense(dense_start(), rng);
                    detail::execute_program(dense, program, forced, replay, table);
                    StabilizerTableau reference = tab.tableau();
                    if (open) {
                        TableauBackend pure(detail::purified_open_tableau(dim, n), rng);
                        Trajectory again{result.trajectory, 0, {}};
                        ShotResult ignored;
                        detail::execute_program(pure, program, again, ignored, table);
                        reference = pure.tableau();
                    }
                    auto [same, phase] = equal_up_to_global_phase(tableau_to_state(reference), dense.state());
                    (void)phase;
                    bool same_path = forced.observed == result.trajectory;
                    result.agreement = same && same_path;
                    if (!same_path) {
                        result.agreement_detail = "dense trajectory differs from tableau trajectory";
                    } else if (!same) {
                        result.agreement_detail = "final states differ beyond tolerance";
                    }
                    for (const auto &f : replay.failures) {
                        result.failures.push_back("dense: " + f);
                    }
                    result.state = dense.state();
                } catch (const UsageError &) {
                    throw;
                } catch (const std::invalid_argument &e) {
                    result.agreement = false;
                    result.agreement_detail = e.what();
                }
            }
        }
        report.shots.push_back(std::move(result));
    }
    return report;
}

namespace detail {

// Amplitudes are rounded to 12 decimals so reports are stable across runs.
inline double rounded(double v) {
    double r = std::round(v * 1e12) / 1e12;
    return r == 0.0 ? 0.0 : r;
}

inline nlohmann::ordered_json state_json(const DenseState &s) {
    nlohmann::ordered_json amps = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) {
        amps.push_back({rounded(s.amplitudes()[i].real()), rounded(s.amplitudes()[i].imag())});
    }
    return amps;
}

}  // namespace detail

/// Largest state written into a report; bigger states are summarized.
inline constexpr std::size_t kReportAmplitudeLimit = 4096;

/// JSON report. Shot records list outcomes by name; `final` describes shot 0.
inline nlohmann::ordered_json report_json(const RunReport &report) {
    using json = nlohmann::ordered_json;
    json out;
    out["header"] = {{"qudits", report.program.num_qudits},
                     {"dim", report.program.dim.d()},
                     {"init", std::string(init_name(report.program.init))},
                     {"backend", std::string(backend_name(report.options.backend))},
                     {"seed", report.options.seed},
                     {"shots", report.options.shots}};
    json shots = json::array();
    for (const auto &s : report.shots) {
        json rec;
        json outcomes = json::object();
        for (const auto &[k, v] : s.outcomes) {
            outcomes[k] = v;
        }
        rec["outcomes"] = outcomes;
        rec["trajectory"] = s.trajectory;
        if (!s.failures.empty()) {
            rec["failures"] = s.failures;
        }
        if (s.agreement) {
            rec["agreement"] = *s.agreement;
            if (!s.agreement_detail.empty()) {
                rec["agreement_detail"] = s.agreement_detail;
            }
        }
        shots.push_back(rec);
    }
    out["shots"] = shots;
    json fin = json::object();
    if (!report.shots.empty()) {
        const auto &s = report.shots.front();
        if (s.tableau) {
            auto c = canonicalize(*s.tableau);
            json rows = json::array();
            for (const auto &r : c.rows()) {
                rows.push_back(r.str());
            }
            json logicals = json::array();
            for (const auto &l : c.logicals()) {
                logicals.push_back(l.x.str());
                logicals.push_back(l.z.str());
            }
            fin["stabilizer_rows"] = rows;
            fin["logical_rows"] = logicals;
        }
        if (s.logical_map) {
            json m = json::object();
            for (std::size_t q = 0; q < s.logical_map->num_qudits(); ++q) {
                m["X" + std::to_string(q)] = s.logical_map->x_image(q).str();
                m["Z" + std::to_string(q)] = s.logical_map->z_image(q).str();
            }
            fin["logical_map"] = m;
        } else {
            fin["logical_map"] = nullptr;
        }
        if (s.state) {
            fin["state_qudits"] = s.state->num_qudits();
            if (static_cast<std::size_t>(s.state->amplitudes().size()) <= kReportAmplitudeLimit) {
                fin["state"] = detail::state_json(*s.state);
            } else {
                fin["state_norm"] = detail::rounded(s.state->amplitudes().norm());
            }
        }
    }
    out["final"] = fin;
    out["expectations_passed"] = report.expectations_passed();
    if (auto a = report.agreement()) {
        out["agreement"] = *a;
    }
    return out;
}

}  // namespace quditft
