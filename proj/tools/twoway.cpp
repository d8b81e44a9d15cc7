// twoway: build, run and sweep two-way automata.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "twoway/bench.hpp"
#include "twoway/comm.hpp"
#include "twoway/compile.hpp"
#include "twoway/serialize.hpp"

using namespace twoway;

namespace {

struct MachineOptions {
    std::string name;
    std::string file;
    std::size_t n = 4;
    std::string prime_range = "le-n2";
    std::string shape = "pair";
};

void add_machine_options(CLI::App* app, MachineOptions& o) {
    app->add_option("--machine", o.name,
                    "builder: eq-fingerprint, form-checker, parity2, grover, grover-and");
    app->add_option("--machine-file", o.file, "machine document (JSON)");
    app->add_option("--n", o.n, "input length");
    app->add_option("--prime-range", o.prime_range, "le-n2 or open-interval")
        ->check(CLI::IsMember({"le-n2", "open-interval"}));
    app->add_option("--shape", o.shape, "form-checker tape shape: pair or plain")
        ->check(CLI::IsMember({"pair", "plain"}));
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

// Returns the machine plus, for built-in builders, the compiled record.
std::pair<MachineSpec, std::optional<CompiledMachine>> load_machine(const MachineOptions& o) {
    if (!o.file.empty()) return {machine_from_json(read_json(o.file)), std::nullopt};
    const PrimeRange range = parse_prime_range(o.prime_range);
    CompiledMachine c;
    if (o.name == "eq-fingerprint") c = build_eq_fingerprint_2pfa(o.n, range);
    else if (o.name == "parity2") c = compile_query_program(parity2_program());
    else if (o.name == "grover") c = compile_query_program(grover_program(o.n));
    else if (o.name == "grover-and") c = compile_and_oracle_program(grover_program(o.n));
    else if (o.name == "form-checker") return {build_form_checker(o.n, parse_shape(o.shape)), std::nullopt};
    else throw std::invalid_argument("unknown machine '" + o.name + "' (or pass --machine-file)");
    MachineSpec m = c.machine;
    return {std::move(m), std::move(c)};
}

std::vector<std::size_t> parse_ns(const std::string& text) {
    std::vector<std::size_t> ns;
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) ns.push_back(std::stoull(item));
    return ns;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-way finite automata laboratory"};
    app.require_subcommand(1);

    MachineOptions build_opts;
    auto* build = app.add_subcommand("build", "emit a machine document");
    add_machine_options(build, build_opts);
    bool with_info = false;
    build->add_flag("--info", with_info, "wrap the document with declared counts and the step bound");

    MachineOptions run_opts;
    std::string tape_text, x_text, y_text, run_mode = "exact";
    std::uint64_t seed = 1, trials = 100'000;
    std::optional<std::uint64_t> step_cap;
    auto* run = app.add_subcommand("run", "run a machine on a tape");
    add_machine_options(run, run_opts);
    run->add_option("--tape", tape_text, "tape text, e.g. '<01##01>' or '¢01##01$'");
    run->add_option("--x", x_text, "x bits (with --y builds ¢x#^n y$; alone builds ¢x$)");
    run->add_option("--y", y_text, "y bits");
    run->add_option("--mode", run_mode, "exact or monte-carlo")->check(CLI::IsMember({"exact", "monte-carlo"}));
    run->add_option("--seed", seed);
    run->add_option("--trials", trials);
    run->add_option("--step-cap", step_cap);

    MachineOptions comm_opts;
    std::string comm_mode = "exact";
    auto* comm = app.add_subcommand("comm", "two-party transcript for x#^n y");
    add_machine_options(comm, comm_opts);
    comm->add_option("--x", x_text)->required();
    comm->add_option("--y", y_text)->required();
    comm->add_option("--mode", comm_mode, "exact or sample")->check(CLI::IsMember({"exact", "sample"}));
    comm->add_option("--seed", seed);
    comm->add_option("--step-cap", step_cap);

    std::string experiment, ns_text = "4,8,16", format = "csv", sweep_mode = "exact", sweep_range = "le-n2", out_path;
    bool timing = false;
    std::optional<std::size_t> exhaustive_limit;
    auto* sweep = app.add_subcommand("sweep", "run an experiment over several n");
    sweep->add_option("--experiment", experiment)
        ->required()
        ->check(CLI::IsMember(
            {"eq-tradeoff", "int-tradeoff", "comm-eq", "comm-int", "compiler-check", "gadget-check"}));
    sweep->add_option("--n", ns_text, "comma-separated n values");
    sweep->add_option("--seed", seed);
    sweep->add_option("--trials", trials);
    sweep->add_option("--mode", sweep_mode)->check(CLI::IsMember({"exact", "monte-carlo"}));
    sweep->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--step-cap", step_cap);
    sweep->add_option("--prime-range", sweep_range)->check(CLI::IsMember({"le-n2", "open-interval"}));
    sweep->add_option("--exhaustive-limit", exhaustive_limit, "largest n enumerated exhaustively (default 8, 4 for INT)");
    sweep->add_flag("--timing", timing, "fill the wall_time column");
    sweep->add_option("--out", out_path, "write to a file instead of stdout");

    auto* check = app.add_subcommand("check", "run the property suites");
    check->add_option("--seed", seed);
    check->add_option("--trials", trials);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) {
            auto [m, compiled] = load_machine(build_opts);
            nlohmann::json doc = machine_to_json(m);
            if (with_info) {
                nlohmann::json info = {{"space_bits", space_bits(m)}};
                if (compiled) {
                    info["declared_classical_states"] = compiled->declared_classical_states;
                    info["declared_quantum_dim"] = compiled->declared_quantum_dim;
                    info["query_count"] = compiled->query_count;
                    info["well_formed_step_bound"] = compiled->well_formed_step_bound;
                    if (compiled->nominal_classical_states) {
                        info["nominal_classical_states"] = *compiled->nominal_classical_states;
                    }
                }
                doc = {{"machine", doc}, {"info", info}};
            }
            std::cout << doc.dump(2) << '\n';
        } else if (*run) {
            auto [m, compiled] = load_machine(run_opts);
            Tape tape;
            if (!tape_text.empty()) tape = parse_tape(tape_text);
            else if (!y_text.empty()) tape = encode_pair(parse_bits(x_text), parse_bits(y_text));
            else tape = encode_plain(parse_bits(x_text));
            const std::uint64_t cap =
                step_cap.value_or(compiled ? default_step_cap(*compiled, tape.size()) : kDefaultStepCap);
            const RunResult r = run_mode == "exact" ? run_exact(m, tape, cap)
                                                    : run_monte_carlo(m, tape, cap, trials, seed);
            std::cout << run_result_to_json(r).dump(2) << '\n';
        } else if (*comm) {
            auto [m, compiled] = load_machine(comm_opts);
            const Bits x = parse_bits(x_text), y = parse_bits(y_text);
            const std::uint64_t cap = step_cap.value_or(
                compiled ? default_step_cap(*compiled, encode_pair(x, y).size()) : kDefaultStepCap);
            const CommTranscript t = simulate_crossing_protocol(m, x, y, parse_comm_mode(comm_mode), seed, cap);
            nlohmann::json doc = transcript_to_json(t);
            const CommCostReport r = comm_cost_report(t, m);
            doc["report"] = {{"bits_per_message", r.bits_per_message},
                             {"crossing_bound_ok", r.crossing_bound_ok},
                             {"bits_bound_ok", r.bits_bound_ok},
                             {"separation_ok", r.separation_ok}};
            std::cout << doc.dump(2) << '\n';
        } else if (*sweep) {
            ExperimentSpec spec;
            spec.id = parse_experiment(experiment);
            spec.ns = parse_ns(ns_text);
            spec.seed = seed;
            spec.trials = trials;
            spec.mode = parse_engine_mode(sweep_mode);
            spec.prime_range = parse_prime_range(sweep_range);
            spec.step_cap = step_cap;
            spec.exhaustive_limit = exhaustive_limit;
            spec.timing = timing;
            const std::string doc = emit(run_experiment(spec), parse_format(format));
            if (out_path.empty()) {
                std::cout << doc;
            } else {
                std::ofstream out(out_path);
                out << doc;
                if (!out) throw std::runtime_error("failed writing " + out_path);
            }
        } else if (*check) {
            bool ok = true;
            for (const CheckResult& r : run_property_checks(seed, trials)) {
                std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
                if (!r.detail.empty()) std::cout << "  (" << r.detail << ')';
                std::cout << '\n';
                ok &= r.passed;
            }
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "twoway: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
