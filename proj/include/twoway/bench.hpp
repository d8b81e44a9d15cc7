// Parameter sweeps producing the T, S, T*S, error and communication tables,
// plus the property suites behind `twoway check`.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twoway/compile.hpp"
#include "twoway/langs.hpp"

namespace twoway {

enum class ExperimentId { EqTradeoff, IntTradeoff, CommEq, CommInt, CompilerCheck, GadgetCheck };
enum class EngineMode { Exact, MonteCarlo };
enum class OutputFormat { Csv, Json };

std::string_view experiment_name(ExperimentId id);
ExperimentId parse_experiment(std::string_view name);
std::string_view engine_mode_name(EngineMode m);
EngineMode parse_engine_mode(std::string_view name);
OutputFormat parse_format(std::string_view name);

struct ExperimentSpec {
    ExperimentId id = ExperimentId::EqTradeoff;
    std::vector<std::size_t> ns;
    std::uint64_t seed = 1;
    std::uint64_t trials = 100'000;
    EngineMode mode = EngineMode::Exact;
    PrimeRange prime_range = PrimeRange::LeN2;
    std::optional<std::uint64_t> step_cap;
    // all 4^n pairs up to this n, sampled pairs above it; unset means 8, or 4
    // for the AND-compiled machines whose exact runs are slow
    std::optional<std::size_t> exhaustive_limit;
    std::size_t random_pairs = 64;
    // compiler-check only
    std::size_t programs_per_n = 12;
    // measure wall time; otherwise the column is 0 so output is reproducible
    bool timing = false;

    // Throws std::invalid_argument on n < 2 or empty ns.
    void validate() const;
    std::size_t effective_exhaustive_limit() const;
};

struct SweepRow {
    std::size_t n = 0;
    std::uint64_t T_max = 0;
    double T_expected = 0.0;
    double S_bits = 0.0;
    double TS = 0.0;
    double worst_error = 0.0;
    std::uint64_t comm_bits = 0;
    std::uint64_t comm_qubits = 0;
    double wall_time = 0.0;
    bool operator==(const SweepRow&) const = default;
};

// Rounds to 12 significant digits, the precision emitted.
double to_emitted_precision(double v);

// Exhaustive up to exhaustive_limit; above it every x = y = e_i plus
// random_pairs seeded uniform pairs.
std::vector<std::pair<Bits, Bits>> input_pairs(std::size_t n, std::size_t exhaustive_limit, std::size_t random_pairs,
                                               std::uint64_t seed);

std::vector<SweepRow> run_experiment(const ExperimentSpec& spec);

extern const char* const kSweepColumns[9];
std::string emit(const std::vector<SweepRow>& rows, OutputFormat format);
// Parses either emitted format back into rows.
std::vector<SweepRow> parse_rows(std::string_view text, OutputFormat format);

// Closed-form acceptance probability of the fingerprint machine: primes in
// range dividing |Num(x) - Num(y)| over all primes in range.
double fingerprint_accept_formula(const Bits& x, const Bits& y, PrimeRange range);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<CheckResult> run_property_checks(std::uint64_t seed, std::uint64_t trials = 100'000);

}  // namespace twoway
