#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "twoway/bench.hpp"
#include "twoway/comm.hpp"
#include "twoway/kernels.hpp"

namespace twoway {

namespace {

struct NamedExperiment {
    ExperimentId id;
    std::string_view name;
};

constexpr NamedExperiment kExperiments[] = {
    {ExperimentId::EqTradeoff, "eq-tradeoff"},       {ExperimentId::IntTradeoff, "int-tradeoff"},
    {ExperimentId::CommEq, "comm-eq"},               {ExperimentId::CommInt, "comm-int"},
    {ExperimentId::CompilerCheck, "compiler-check"}, {ExperimentId::GadgetCheck, "gadget-check"},
};

// One evaluated input.
struct Sample {
    std::uint64_t steps_max = 0;
    double steps_expected = 0.0;
    double space_bits = 0.0;
    double error = 0.0;
    std::uint64_t comm_bits = 0;
    std::uint64_t comm_qubits = 0;
};

SweepRow reduce(std::size_t n, const std::vector<Sample>& samples) {
    SweepRow row;
    row.n = n;
    for (const Sample& s : samples) {
        row.T_max = std::max(row.T_max, s.steps_max);
        row.T_expected = std::max(row.T_expected, s.steps_expected);
        row.S_bits = std::max(row.S_bits, s.space_bits);
        row.worst_error = std::max(row.worst_error, s.error);
        row.comm_bits = std::max(row.comm_bits, s.comm_bits);
        row.comm_qubits = std::max(row.comm_qubits, s.comm_qubits);
    }
    row.T_expected = to_emitted_precision(row.T_expected);
    row.S_bits = to_emitted_precision(row.S_bits);
    row.TS = to_emitted_precision(static_cast<double>(row.T_max) * row.S_bits);
    row.worst_error = to_emitted_precision(std::clamp(row.worst_error, 0.0, 1.0));
    return row;
}

// Machine over x#^n y tapes judged against a membership predicate.
SweepRow pair_language_row(const ExperimentSpec& spec, std::size_t n, const CompiledMachine& c,
                           int (*predicate)(const Bits&, const Bits&), bool with_comm) {
    const auto pairs = input_pairs(n, spec.effective_exhaustive_limit(), spec.random_pairs, spec.seed + n);
    const std::size_t tape_len = well_formed_length(n, TapeShape::Pair);
    const std::uint64_t cap = spec.step_cap.value_or(default_step_cap(c, tape_len));
    std::vector<Sample> samples(pairs.size());
    kernels::parallel_for(pairs.size(), [&](std::size_t k) {
        const auto& [x, y] = pairs[k];
        RunResult r;
        Sample& s = samples[k];
        if (with_comm) {
            const CommTranscript t = simulate_crossing_protocol(c.machine, x, y, CommMode::Exact, spec.seed, cap);
            r = t.output;
            s.comm_bits = t.total_bits;
            s.comm_qubits = t.total_qubits;
        } else if (spec.mode == EngineMode::MonteCarlo) {
            r = run_monte_carlo(c.machine, encode_pair(x, y), cap, spec.trials, spec.seed + k);
        } else {
            r = run_exact(c.machine, encode_pair(x, y), cap);
        }
        s.steps_max = r.steps_max;
        s.steps_expected = r.steps_expected;
        s.space_bits = r.space_bits;
        s.error = predicate(x, y) ? 1.0 - r.accept_prob : r.accept_prob;
    });
    return reduce(n, samples);
}

SweepRow compiler_row(const ExperimentSpec& spec, std::size_t n) {
    std::vector<Sample> samples;
    const auto inputs = all_bit_strings(n);
    for (std::size_t k = 0; k < spec.programs_per_n; ++k) {
        std::mt19937_64 rng(spec.seed * 1'000'003 + n * 101 + k);
        const QueryProgram p = random_straight_line_program(n, 1 + k % 3, k % 5, rng);
        const CompiledMachine c = compile_query_program(p);
        const std::size_t tape_len = well_formed_length(n, TapeShape::Plain);
        const std::uint64_t cap = spec.step_cap.value_or(default_step_cap(c, tape_len));
        std::vector<Sample> part(inputs.size());
        kernels::parallel_for(inputs.size(), [&](std::size_t i) {
            const RunResult r = run_qcfa_exact(c.machine, encode_plain(inputs[i]), cap);
            const QueryResult q = run_query_program(p, inputs[i]);
            part[i] = {r.steps_max, r.steps_expected, r.space_bits, std::abs(r.accept_prob - q.accept_prob), 0, 0};
        });
        samples.insert(samples.end(), part.begin(), part.end());
    }
    return reduce(n, samples);
}

SweepRow gadget_row(const ExperimentSpec& spec, std::size_t n) {
    QueryProgram p;
    p.n = n;
    p.m = 1;
    p.start = StateVector::basis(n + 1, 0);
    p.instructions = {OracleCall{}};
    p.final_measurement = std::make_shared<const ProjectiveMeasurement>(
        ProjectiveMeasurement::basis_partition(std::vector<std::size_t>(n + 1, 0), {0, 1}));
    const CompiledMachine c = compile_and_oracle_program(p);
    const auto pairs = input_pairs(n, spec.effective_exhaustive_limit(), spec.random_pairs, spec.seed + n);
    std::vector<Sample> samples(pairs.size());
    kernels::parallel_for(pairs.size(), [&](std::size_t k) {
        const auto& [x, y] = pairs[k];
        const Tape tape = encode_pair(x, y);
        const UnitaryOp direct = oracle_matrix(bitwise_and(x, y), 1);
        std::mt19937_64 rng(spec.seed * 7919 + k);
        Sample& s = samples[k];
        s.space_bits = space_bits(c.machine);
        for (int trial = 0; trial < 10; ++trial) {
            const StateVector psi = random_state(n + 1, rng);
            const SegmentTrace t =
                trace_unitary_segment(c.machine, tape, c.block_starts[0], 1, embed_with_aux(psi), c.block_starts[1]);
            const StateVector expect = embed_with_aux(apply_unitary(direct, psi));
            s.error = std::max(s.error, t.state.max_deviation(expect));
            s.steps_max = std::max(s.steps_max, t.steps);
            s.steps_expected = static_cast<double>(s.steps_max);
        }
    });
    return reduce(n, samples);
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<std::string> row_fields(const SweepRow& r) {
    return {std::to_string(r.n),          std::to_string(r.T_max),         format_number(r.T_expected),
            format_number(r.S_bits),      format_number(r.TS),             format_number(r.worst_error),
            std::to_string(r.comm_bits),  std::to_string(r.comm_qubits),   format_number(r.wall_time)};
}

SweepRow row_from_fields(const std::vector<std::string>& f) {
    if (f.size() != 9) throw std::invalid_argument("sweep rows have 9 fields");
    SweepRow r;
    r.n = std::stoull(f[0]);
    r.T_max = std::stoull(f[1]);
    r.T_expected = std::stod(f[2]);
    r.S_bits = std::stod(f[3]);
    r.TS = std::stod(f[4]);
    r.worst_error = std::stod(f[5]);
    r.comm_bits = std::stoull(f[6]);
    r.comm_qubits = std::stoull(f[7]);
    r.wall_time = std::stod(f[8]);
    return r;
}

}  // namespace

const char* const kSweepColumns[9] = {"n",           "T_max",     "T_expected",  "S_bits",   "TS",
                                      "worst_error", "comm_bits", "comm_qubits", "wall_time"};

std::string_view experiment_name(ExperimentId id) {
    for (const auto& e : kExperiments) {
        if (e.id == id) return e.name;
    }
    return "?";
}

ExperimentId parse_experiment(std::string_view name) {
    for (const auto& e : kExperiments) {
        if (e.name == name) return e.id;
    }
    throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

std::string_view engine_mode_name(EngineMode m) { return m == EngineMode::Exact ? "exact" : "monte-carlo"; }

EngineMode parse_engine_mode(std::string_view name) {
    if (name == "exact") return EngineMode::Exact;
    if (name == "monte-carlo") return EngineMode::MonteCarlo;
    throw std::invalid_argument("unknown engine mode '" + std::string(name) + "'");
}

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw std::invalid_argument("unknown format '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
    if (ns.empty()) throw std::invalid_argument("experiment needs at least one n");
    for (std::size_t n : ns) {
        if (n < 2) throw std::invalid_argument("experiment n values must be >= 2");
    }
    if (trials == 0) throw std::invalid_argument("trials must be positive");
}

std::size_t ExperimentSpec::effective_exhaustive_limit() const {
    if (exhaustive_limit) return *exhaustive_limit;
    return id == ExperimentId::IntTradeoff || id == ExperimentId::CommInt ? 4 : 8;
}

double to_emitted_precision(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

std::vector<std::pair<Bits, Bits>> input_pairs(std::size_t n, std::size_t exhaustive_limit, std::size_t random_pairs,
                                               std::uint64_t seed) {
    std::vector<std::pair<Bits, Bits>> pairs;
    if (n <= exhaustive_limit) {
        const auto all = all_bit_strings(n);
        pairs.reserve(all.size() * all.size());
        for (const Bits& x : all) {
            for (const Bits& y : all) pairs.emplace_back(x, y);
        }
        return pairs;
    }
    for (std::size_t i = 0; i < n; ++i) {
        Bits e(n, 0);
        e[i] = 1;
        pairs.emplace_back(e, e);
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t k = 0; k < random_pairs; ++k) {
        Bits x(n), y(n);
        for (auto& b : x) b = coin(rng);
        for (auto& b : y) b = coin(rng);
        pairs.emplace_back(std::move(x), std::move(y));
    }
    return pairs;
}

std::vector<SweepRow> run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<std::size_t> ns = spec.ns;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    std::vector<SweepRow> rows;
    for (std::size_t n : ns) {
        const auto start = std::chrono::steady_clock::now();
        SweepRow row;
        switch (spec.id) {
        case ExperimentId::EqTradeoff:
        case ExperimentId::CommEq:
            row = pair_language_row(spec, n, build_eq_fingerprint_2pfa(n, spec.prime_range), eq_predicate,
                                    spec.id == ExperimentId::CommEq);
            break;
        case ExperimentId::IntTradeoff:
        case ExperimentId::CommInt:
            row = pair_language_row(spec, n, compile_and_oracle_program(grover_program(n)), int_predicate,
                                    spec.id == ExperimentId::CommInt);
            break;
        case ExperimentId::CompilerCheck: row = compiler_row(spec, n); break;
        case ExperimentId::GadgetCheck: row = gadget_row(spec, n); break;
        }
        if (spec.timing) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            row.wall_time = to_emitted_precision(elapsed.count());
        }
        rows.push_back(row);
    }
    return rows;
}

std::string emit(const std::vector<SweepRow>& rows, OutputFormat format) {
    if (rows.empty()) throw std::invalid_argument("nothing to emit");
    std::ostringstream out;
    if (format == OutputFormat::Csv) {
        for (int c = 0; c < 9; ++c) out << (c ? "," : "") << kSweepColumns[c];
        out << '\n';
        for (const SweepRow& r : rows) {
            const auto f = row_fields(r);
            for (int c = 0; c < 9; ++c) out << (c ? "," : "") << f[c];
            out << '\n';
        }
        return out.str();
    }
    out << "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto f = row_fields(rows[i]);
        out << "  {";
        for (int c = 0; c < 9; ++c) out << (c ? ", " : "") << '"' << kSweepColumns[c] << "\": " << f[c];
        out << '}' << (i + 1 < rows.size() ? "," : "") << '\n';
    }
    out << "]\n";
    return out.str();
}

std::vector<SweepRow> parse_rows(std::string_view text, OutputFormat format) {
    std::vector<SweepRow> rows;
    if (format == OutputFormat::Json) {
        const auto doc = nlohmann::json::parse(text);
        for (const auto& rec : doc) {
            std::vector<std::string> f;
            for (const char* col : kSweepColumns) f.push_back(rec.at(col).dump());
            rows.push_back(row_from_fields(f));
        }
        return rows;
    }
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        rows.push_back(row_from_fields(f));
    }
    return rows;
}

double fingerprint_accept_formula(const Bits& x, const Bits& y, PrimeRange range) {
    const std::uint64_t a = num_value(x), b = num_value(y);
    const std::uint64_t diff = a > b ? a - b : b - a;
    const auto primes = fingerprint_primes(x.size(), range);
    std::size_t bad = 0;
    for (std::uint64_t p : primes) bad += diff % p == 0;
    return static_cast<double>(bad) / static_cast<double>(primes.size());
}

}  // namespace twoway
