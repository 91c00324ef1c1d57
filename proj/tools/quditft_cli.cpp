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


#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quditft/quditft.hpp"

namespace {

using namespace quditft;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw UsageError("cannot open " + path);
    }
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

int cmd_run(const std::string &path, const std::string &backend_text, std::uint64_t seed, std::size_t shots,
            bool as_json) {
    auto backend = backend_from_name(backend_text);
    if (!backend) {
        std::cerr << "error: unknown backend '" << backend_text << "' (expected tableau, dense or both)\n";
        return kExitUsage;
    }
    auto parsed = parse_program(read_file(path));
    if (!parsed.ok()) {
        for (const auto &d : parsed.diagnostics) {
            std::cerr << path << ":" << d.str() << "\n";
        }
        return kExitUsage;
    }
    RunReport report = run_program(*parsed.program, {*backend, seed, shots});
    if (as_json) {
        std::cout << report_json(report).dump(2) << "\n";
    } else {
        std::map<std::string, std::map<int, std::size_t>> counts;
        for (const auto &s : report.shots) {
            for (const auto &[k, v] : s.outcomes) {
                ++counts[k][v];
            }
        }
        std::cout << "shots: " << report.shots.size() << "\n";
        for (const auto &[name, hist] : counts) {
            std::cout << "  " << name << ":";
            for (const auto &[v, c] : hist) {
                std::cout << " " << v << "x" << c;
            }
            std::cout << "\n";
        }
        if (!report.shots.empty()) {
            const auto &s = report.shots.front();
            if (s.tableau) {
                std::cout << "final tableau (shot 0):\n" << canonicalize(*s.tableau).str();
            }
            if (s.logical_map) {
                std::cout << "logical map (shot 0):\n" << s.logical_map->str();
            }
        }
        for (std::size_t i = 0; i < report.shots.size(); ++i) {
            for (const auto &f : report.shots[i].failures) {
                std::cout << "shot " << i << ": " << f << "\n";
            }
            if (report.shots[i].agreement == false) {
                std::cout << "shot " << i << ": backends disagree: " << report.shots[i].agreement_detail << "\n";
            }
        }
        if (auto a = report.agreement()) {
            std::cout << "agreement: " << (*a ? "true" : "false") << "\n";
        }
    }
    return report.passed() ? kExitOk : kExitCheckFailed;
}

std::vector<int> parse_dims(const std::string &text) {
    std::vector<int> dims;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        int d = 0;
        try {
            d = std::stoi(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw UsageError("'" + item + "' is not an integer dimension");
        }
        if (d < 3 || d > kMaxDimension || !is_prime(d)) {
            throw UsageError(std::to_string(d) + " is not an odd prime <= " + std::to_string(kMaxDimension));
        }
        dims.push_back(d);
    }
    if (dims.empty()) {
        throw UsageError("no dimensions given");
    }
    return dims;
}

int cmd_verify(const std::string &dims_text, std::uint64_t seed, bool as_json) {
    auto dims = parse_dims(dims_text);
    auto print = [&](const CheckResult &r) {
        if (!as_json) {
            std::cout << (r.passed ? "PASS" : "FAIL") << "  d=" << r.dim << "  [" << r.criterion << "] " << r.name
                      << "  (" << std::fixed << std::setprecision(2) << r.seconds << " s)\n      " << r.detail
                      << std::endl;
        }
    };
    auto results = run_verification(dims, seed, print);
    bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult &r) { return r.passed; });
    if (as_json) {
        json out = json::array();
        for (const auto &r : results) {
            out.push_back({{"criterion", r.criterion},
                           {"name", r.name},
                           {"dim", r.dim},
                           {"passed", r.passed},
                           {"detail", r.detail},
                           {"seconds", r.seconds}});
        }
        std::cout << json{{"dims", dims}, {"passed", ok}, {"checks", out}}.dump(2) << "\n";
    } else {
        std::cout << (ok ? "all checks passed" : "some checks FAILED") << "\n";
    }
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_gadget(const std::string &name, const std::vector<int> &args, int d, std::uint64_t seed) {
    if (d < 3 || d > kMaxDimension || !is_prime(d)) {
        throw UsageError(std::to_string(d) + " is not an odd prime <= " + std::to_string(kMaxDimension));
    }
    Dimension dim(d);
    Rng rng(seed);
    if (name == "toffoli") {
        if (d != 3) {
            throw UsageError("the toffoli gadget is limited to d = 3 by the dense size policy");
        }
        auto table = derive_toffoli_corrections(dim);
        std::cout << "toffoli correction table (" << table.entries.size() << " outcome triples):\n";
        for (const auto &[m, circuit] : table.entries) {
            std::cout << "  (" << m[0] << "," << m[1] << "," << m[2] << "): " << str(circuit) << "\n";
        }
        auto psi = DenseState::random(dim, 3, rng);
        std::size_t data[] = {0, 1, 2};
        auto run = gadget_toffoli(psi, data, table, rng);
        DenseState want = apply(psi, {GateKind::Toffoli, 1}, data);
        double f = fidelity(want, run.state);
        std::cout << "random-state run: outcomes (" << run.outcomes[0] << "," << run.outcomes[1] << ","
                  << run.outcomes[2] << "), fidelity " << std::setprecision(12) << f << "\n";
        return f >= 1 - kStateTolerance ? kExitOk : kExitCheckFailed;
    }
    int param = 1;
    if (name == "s") {
        if (args.size() != 1) {
            throw UsageError("gadget s takes one argument: the scale parameter s");
        }
        param = args[0];
        if (dim.mod(param) == 0) {
            throw UsageError("S gadget parameter must be nonzero mod " + std::to_string(d));
        }
        param = dim.mod(param);
    } else if (!args.empty()) {
        throw UsageError("gadget " + name + " takes no arguments");
    }
    GadgetRecord g = gadget_by_name(name, dim, param);
    Trajectory traj;
    CliffordMap got = tableau_effect(g, traj, rng);
    ComplexMatrix k = kraus_operator(g, traj.observed, rng);
    bool map_ok = got == g.expected_map;
    bool dense_ok = matrices_equal_up_to_phase(k, g.target_unitary);
    std::cout << "gadget " << g.name << " on " << g.arity << " qudit(s), d=" << d << ", " << g.measurement_count()
              << " measurement(s)\n";
    std::cout << "outcomes:";
    for (int o : traj.observed) {
        std::cout << " " << o;
    }
    std::cout << "\nexpected map:\n" << g.expected_map.str() << "tableau map:\n" << got.str();
    std::cout << "tableau map matches: " << (map_ok ? "yes" : "no") << "\n";
    std::cout << "dense Kraus operator equals target up to phase: " << (dense_ok ? "yes" : "no") << "\n";
    return map_ok && dense_ok ? kExitOk : kExitCheckFailed;
}

int cmd_code(const std::string &path) {
    StabilizerCode c = [&]() {
        try {
            return parse_code(read_file(path));
        } catch (const CodeParseError &e) {
            throw UsageError(path + ":" + e.what());
        }
    }();
    std::cout << str(c);
    auto report = validate_code(c);
    if (!report.ok()) {
        for (const auto &v : report.violations) {
            std::cout << "violation: " << v << "\n";
        }
        return kExitCheckFailed;
    }
    std::cout << "valid [[" << c.n << "," << c.k << "]]_" << c.dim.d() << " code\n";
    std::cout << "single-qudit error syndromes:\n";
    for (std::size_t q = 0; q < c.n; ++q) {
        for (int kind = 0; kind < 2; ++kind) {
            auto e = kind == 0 ? PauliOperator::x_on(c.dim, c.n, q) : PauliOperator::z_on(c.dim, c.n, q);
            std::cout << "  " << std::left << std::setw(static_cast<int>(3 * c.n)) << e.str() << " ->";
            for (int s : error_syndrome_of_pauli(c, e)) {
                std::cout << " " << s;
            }
            std::cout << "\n";
        }
    }
    return kExitOk;
}

int cmd_format(const std::string &path) {
    auto parsed = parse_program(read_file(path));
    if (!parsed.ok()) {
        for (const auto &d : parsed.diagnostics) {
            std::cerr << path << ":" << d.str() << "\n";
        }
        return kExitUsage;
    }
    std::cout << print_program(*parsed.program);
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"quditft: fault-tolerant qudit gadgets on stabilizer tableaux and dense state vectors"};
    app.require_subcommand(1);

    std::string file;
    std::string backend = "tableau";
    std::uint64_t seed = 0;
    std::size_t shots = 1;
    bool as_json = false;
    auto *run = app.add_subcommand("run", "Run a circuit file");
    run->add_option("file", file, "Circuit file")->required();
    run->add_option("--backend", backend, "tableau, dense or both")->capture_default_str();
    run->add_option("--seed", seed, "Seed (u64)")->capture_default_str();
    run->add_option("--shots", shots, "Number of shots")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_flag("--json", as_json, "Print the JSON report");

    std::string dims = "3";
    std::uint64_t verify_seed = 2026;
    bool verify_json = false;
    auto *verify = app.add_subcommand("verify", "Run the verification suite");
    verify->add_option("--dims", dims, "Comma-separated odd primes")->capture_default_str();
    verify->add_option("--seed", verify_seed, "Seed")->capture_default_str();
    verify->add_flag("--json", verify_json, "Print JSON");

    std::string gadget_name;
    std::vector<int> gadget_args;
    int gadget_dim = 3;
    std::uint64_t gadget_seed = 0;
    auto *gadget = app.add_subcommand("gadget", "Run one gadget on both backends");
    gadget->add_option("name", gadget_name, "pinv, q, r, rinv, s, sumgadget or toffoli")->required();
    gadget->add_option("args", gadget_args, "Gadget arguments (s takes the scale parameter)");
    gadget->add_option("--dim", gadget_dim, "Qudit dimension")->capture_default_str();
    gadget->add_option("--seed", gadget_seed, "Seed")->capture_default_str();

    std::string code_file;
    auto *code = app.add_subcommand("code", "Validate a stabilizer code file");
    code->add_option("file", code_file, "Code file")->required();

    std::string format_file;
    auto *format = app.add_subcommand("format", "Print a circuit file in canonical form");
    format->add_option("file", format_file, "Circuit file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*run) {
            return cmd_run(file, backend, seed, shots, as_json);
        }
        if (*verify) {
            return cmd_verify(dims, verify_seed, verify_json);
        }
        if (*gadget) {
            return cmd_gadget(gadget_name, gadget_args, gadget_dim, gadget_seed);
        }
        if (*code) {
            return cmd_code(code_file);
        }
        if (*format) {
            return cmd_format(format_file);
        }
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
