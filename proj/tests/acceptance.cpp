// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "twoway/bench.hpp"
#include "twoway/comm.hpp"
#include "twoway/compile.hpp"
#include "twoway/langs.hpp"

using namespace twoway;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail, Clock::time_point t0) {
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("%s [%d] %s: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, title, detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// --- independent oracles

std::vector<std::uint64_t> trial_division_primes(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p <= limit; ++p) {
        bool prime = true;
        for (std::uint64_t d = 2; d * d <= p && prime; ++d) prime = p % d != 0;
        if (prime) out.push_back(p);
    }
    return out;
}

std::uint64_t value_of(const Bits& b) {
    std::uint64_t v = 0;
    for (auto bit : b) v = 2 * v + bit;
    return v;
}

double bad_prime_ratio(const Bits& x, const Bits& y, const std::vector<std::uint64_t>& primes) {
    const std::uint64_t a = value_of(x), b = value_of(y), diff = a > b ? a - b : b - a;
    std::size_t bad = 0;
    for (std::uint64_t p : primes) bad += diff % p == 0;
    return static_cast<double>(bad) / static_cast<double>(primes.size());
}

bool intersects(const Bits& x, const Bits& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 1 && y[i] == 1) return true;
    }
    return false;
}

std::uint64_t grover_pass_budget(std::size_t n) {
    std::uint64_t sum = 0;
    for (std::size_t j = 0; std::ldexp(1.0, static_cast<int>(j)) < 2.0 * n; ++j) {
        sum += static_cast<std::uint64_t>(std::ceil(std::numbers::pi / 4 * std::sqrt(n / std::ldexp(1.0, static_cast<int>(j)))));
    }
    return 3 * sum;
}

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double k = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

Bits random_bits(std::size_t n, std::mt19937_64& rng) {
    Bits b(n);
    for (auto& bit : b) bit = rng() & 1;
    return b;
}

std::vector<Bits> all_strings(std::size_t n) {
    std::vector<Bits> out;
    for (std::uint64_t v = 0; v < (1ULL << n); ++v) {
        Bits b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = (v >> (n - 1 - i)) & 1;
        out.push_back(b);
    }
    return out;
}

// --- criteria

void compiler_faithfulness() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::size_t programs = 0, runs = 0;
    for (std::size_t k = 0; k < 60; ++k) {
        const std::size_t n = 1 + k % 6, m = 1 + (k / 6) % 3, t = k % 5;
        std::mt19937_64 rng(1000 + k);
        const QueryProgram p = random_straight_line_program(n, m, t, rng);
        const CompiledMachine c = compile_query_program(p);
        for (const Bits& x : all_strings(n)) {
            const double compiled = run_qcfa_exact(c.machine, encode_plain(x)).accept_prob;
            worst = std::max(worst, std::abs(compiled - run_query_program(p, x).accept_prob));
            ++runs;
        }
        ++programs;
    }
    report(1, "compiler faithfulness", worst <= 1e-9,
           fmt("%zu programs (n<=6, m<=3, t<=4), %zu runs, max |compiled - query| = %.3g", programs, runs, worst), t0);
}

void gadget_correctness() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    bool aux_clean = true;
    std::size_t pairs = 0;
    for (std::size_t m = 1; m <= 2; ++m) {
        for (std::size_t n = 1; n <= 4; ++n) {
            QueryProgram p;
            p.n = n;
            p.m = m;
            p.start = StateVector::basis(p.dim(), 0);
            p.instructions.push_back(OracleCall{});
            p.final_measurement = std::make_shared<const ProjectiveMeasurement>(
                ProjectiveMeasurement::basis_partition(std::vector<std::size_t>(p.dim(), 1), {0, 1}));
            const CompiledMachine c = compile_and_oracle_program(p);
            std::mt19937_64 rng(31 * n + m);
            for (const Bits& x : all_strings(n)) {
                for (const Bits& y : all_strings(n)) {
                    const Tape tape = encode_pair(x, y);
                    for (int trial = 0; trial < 10; ++trial) {
                        const StateVector psi = random_state(p.dim(), rng);
                        const SegmentTrace t = trace_unitary_segment(c.machine, tape, c.block_starts[0], 1,
                                                                     embed_with_aux(psi), c.block_starts[1]);
                        for (std::size_t i = 0; i <= n; ++i) {
                            const bool flip = i > 0 && x[i - 1] == 1 && y[i - 1] == 1;
                            for (std::size_t j = 0; j < m; ++j) {
                                const std::size_t b = i * m + j;
                                const Complex want = flip ? -psi[b] : psi[b];
                                worst = std::max(worst, std::abs(t.state[2 * b] - want));
                                aux_clean = aux_clean && t.state[2 * b + 1] == Complex(0.0, 0.0);
                            }
                        }
                        const std::size_t extra = 2 * (n + 1) * m;
                        worst = std::max(worst, std::abs(t.state[extra]));
                        aux_clean = aux_clean && t.state[extra + 1] == Complex(0.0, 0.0);
                    }
                    ++pairs;
                }
            }
        }
    }
    report(2, "AND-oracle gadget", worst <= 1e-9 && aux_clean,
           fmt("%zu (x,y) pairs over n<=4, m<=2, 10 states each, max deviation = %.3g, auxiliary %s", pairs, worst,
               aux_clean ? "exactly |0>" : "NOT clean"),
           t0);
}

void eq_machine() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t n : {4u, 8u, 16u}) {
        const CompiledMachine c = build_eq_fingerprint_2pfa(n);
        const auto primes = trial_division_primes(n * n);
        std::mt19937_64 rng(424242 + n);
        std::vector<std::pair<Bits, Bits>> members, others;
        if (n <= 8) {
            for (const Bits& x : all_strings(n)) members.push_back({x, x});
        } else {
            for (int k = 0; k < 1000; ++k) {
                const Bits x = random_bits(n, rng);
                members.push_back({x, x});
            }
        }
        if (n == 4) {
            for (const Bits& x : all_strings(n)) {
                for (const Bits& y : all_strings(n)) {
                    if (x != y) others.push_back({x, y});
                }
            }
        } else {
            while (others.size() < 10'000) {
                Bits x = random_bits(n, rng), y = random_bits(n, rng);
                if (others.size() % 4 == 0) {
                    // close pairs: a few flipped bits
                    y = x;
                    y[rng() % n] ^= 1;
                }
                if (x != y) others.push_back({x, y});
            }
        }
        double min_member = 1.0, worst_accept = 0.0, worst_gap = 0.0;
        std::uint64_t t_max = 0;
        for (const auto& [x, y] : members) {
            const RunResult r = run_probabilistic_exact(c.machine, encode_pair(x, y));
            min_member = std::min(min_member, r.accept_prob);
            t_max = std::max(t_max, r.steps_max);
        }
        for (const auto& [x, y] : others) {
            const RunResult r = run_probabilistic_exact(c.machine, encode_pair(x, y));
            worst_accept = std::max(worst_accept, r.accept_prob);
            worst_gap = std::max(worst_gap, std::abs(r.accept_prob - bad_prime_ratio(x, y, primes)));
            t_max = std::max(t_max, r.steps_max);
        }
        // one left-to-right sweep: 3n+2 moves, so c = 4 for n >= 2
        const bool n_ok = min_member == 1.0 && worst_gap <= 1e-12 &&
                          (n < 8 || worst_accept <= 2.0 * std::log(double(n)) / n) && t_max <= 4 * n;
        ok = ok && n_ok;
        detail << fmt("n=%zu: %zu members min %.17g, %zu non-members worst %.4g (2ln n/n %.4g), |acc - ratio| <= %.2g, "
                      "T_max %llu <= 4n; ",
                      n, members.size(), min_member, others.size(), worst_accept, 2.0 * std::log(double(n)) / n,
                      worst_gap, static_cast<unsigned long long>(t_max));
    }
    report(3, "EQ fingerprint machine", ok, detail.str(), t0);
}

void int_machine() {
    const auto t0 = Clock::now();
    std::vector<double> log_n, log_t, s_over_log;
    bool zero_ok = true, member_ok = true, passes_ok = true;
    std::ostringstream detail;
    for (std::size_t n : {4u, 8u, 16u}) {
        const CompiledMachine c = compile_and_oracle_program(grover_program(n));
        const std::size_t len = 3 * n + 2;
        const std::uint64_t cap = default_step_cap(c, len);
        const std::uint64_t budget = grover_pass_budget(n);
        std::mt19937_64 rng(777 + n);
        std::vector<std::pair<Bits, Bits>> zero, members;
        if (n <= 8) {
            // every pair with x AND y = 0
            for (const Bits& x : all_strings(n)) {
                for (const Bits& y : all_strings(n)) {
                    if (!intersects(x, y)) zero.push_back({x, y});
                }
            }
        } else {
            zero.push_back({Bits(n, 1), Bits(n, 0)});
            zero.push_back({Bits(n, 0), Bits(n, 0)});
            while (zero.size() < 24) {
                const Bits x = random_bits(n, rng);
                Bits y = random_bits(n, rng);
                for (std::size_t i = 0; i < n; ++i) y[i] &= !x[i];
                zero.push_back({x, y});
            }
        }
        if (n == 4) {
            for (const Bits& x : all_strings(n)) {
                for (const Bits& y : all_strings(n)) {
                    if (intersects(x, y)) members.push_back({x, y});
                }
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                Bits e(n, 0);
                e[i] = 1;
                members.push_back({e, e});
                // single common position, everything else disjoint
                Bits x = random_bits(n, rng), y = random_bits(n, rng);
                for (std::size_t k = 0; k < n; ++k) y[k] &= !x[k];
                x[i] = y[i] = 1;
                members.push_back({x, y});
            }
            while (members.size() < 3 * n) {
                const Bits x = random_bits(n, rng), y = random_bits(n, rng);
                if (intersects(x, y)) members.push_back({x, y});
            }
        }
        double worst_zero = 0.0, min_member = 1.0, s_bits = 0.0;
        std::uint64_t t_max = 0, passes = 0;
        for (const auto* set : {&zero, &members}) {
            for (const auto& [x, y] : *set) {
                const RunResult r = run_qcfa_exact(c.machine, encode_pair(x, y), cap);
                t_max = std::max(t_max, r.steps_max);
                passes = std::max(passes, r.queries_used.value_or(~0ULL));
                s_bits = std::max(s_bits, r.space_bits);
                if (set == &zero) worst_zero = std::max(worst_zero, r.accept_prob);
                else min_member = std::min(min_member, r.accept_prob);
            }
        }
        zero_ok = zero_ok && worst_zero == 0.0;
        member_ok = member_ok && min_member >= 2.0 / 3.0;
        passes_ok = passes_ok && passes <= budget;
        log_n.push_back(std::log(double(n)));
        log_t.push_back(std::log(double(t_max)));
        s_over_log.push_back(s_bits / std::log2(double(n)));
        detail << fmt("n=%zu: %zu zero-intersection max %.3g, %zu members min %.6f, passes %llu <= %llu, T_max %llu, "
                      "S_bits %.4g (S/log2 n %.3g); ",
                      n, zero.size(), worst_zero, members.size(), min_member, static_cast<unsigned long long>(passes),
                      static_cast<unsigned long long>(budget), static_cast<unsigned long long>(t_max), s_bits,
                      s_over_log.back());
    }
    const double slope = ls_slope(log_n, log_t);
    bool ratio_ok = true;
    for (double r : s_over_log) ratio_ok = ratio_ok && r >= 0.5 && r <= 4.0;
    std::vector<double> log2n, s;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        log2n.push_back(log_n[i] / std::log(2.0));
        s.push_back(s_over_log[i] * log2n.back());
    }
    detail << fmt("T slope %.3f in [1.3,1.7] %s; S_bits/log2 n in [0.5,4] %s (dS/dlog2 n = %.3f)", slope,
                  slope >= 1.3 && slope <= 1.7 ? "yes" : "NO", ratio_ok ? "yes" : "NO", ls_slope(log2n, s));
    report(4, "INT Grover machine", zero_ok && member_ok && passes_ok && slope >= 1.3 && slope <= 1.7 && ratio_ok,
           detail.str(), t0);
}

void exact_pipeline() {
    const auto t0 = Clock::now();
    const CompiledMachine c = compile_and_oracle_program(parity2_program());
    double worst = 0.0;
    for (const Bits& x : all_strings(2)) {
        const RunResult r = run_qcfa_exact(c.machine, encode_pair(x, Bits{1, 1}));
        worst = std::max(worst, std::abs(r.accept_prob - double(x[0] != x[1])));
    }
    report(5, "exact AND-compiled parity", worst <= 1e-9,
           fmt("4 inputs (x, 11), max |accept - x1 xor x2| = %.3g", worst), t0);
}

void communication() {
    const auto t0 = Clock::now();
    bool single = true, ratio_ok = true, bound_ok = true, same = true;
    double ratio_lo = 1e9, ratio_hi = 0.0;
    std::size_t transcripts = 0;
    auto check_run = [&](const MachineSpec& m, const Bits& x, const Bits& y, std::uint64_t cap) {
        const CommTranscript t = simulate_crossing_protocol(m, x, y, CommMode::Exact, 0, cap);
        const RunResult plain = run_exact(m, encode_pair(x, y), cap);
        same = same && plain.accept_prob == t.output.accept_prob && plain.reject_prob == t.output.reject_prob &&
               plain.nonhalt_prob == t.output.nonhalt_prob && plain.steps_max == t.output.steps_max &&
               plain.steps_expected == t.output.steps_expected && plain.queries_used == t.output.queries_used;
        const auto bits = static_cast<std::uint64_t>(std::ceil(std::log2(double(m.classical_state_count))));
        bound_ok = bound_ok && t.total_bits <= bits * (t.output.steps_max / x.size() + 1);
        ++transcripts;
        return t;
    };
    for (std::size_t n = 4; n <= 64; ++n) {
        const CompiledMachine c = build_eq_fingerprint_2pfa(n);
        std::mt19937_64 rng(99 + n);
        const Bits x = random_bits(n, rng);
        Bits near = x;
        near[n - 1] ^= 1;
        for (const Bits& y : {x, near, random_bits(n, rng)}) {
            const CommTranscript t = check_run(c.machine, x, y, kDefaultStepCap);
            single = single && t.messages.size() == 1;
            const double r = double(t.total_bits) / std::log2(double(n));
            ratio_lo = std::min(ratio_lo, r);
            ratio_hi = std::max(ratio_hi, r);
        }
    }
    ratio_ok = ratio_lo >= 1.0 && ratio_hi <= 8.0;
    for (std::size_t n : {2u, 4u}) {
        const CompiledMachine g = compile_and_oracle_program(grover_program(n));
        const std::uint64_t cap = default_step_cap(g, 3 * n + 2);
        for (const Bits& x : all_strings(n)) {
            for (const Bits& y : all_strings(n)) check_run(g.machine, x, y, cap);
        }
    }
    const CompiledMachine par = compile_and_oracle_program(parity2_program());
    for (const Bits& x : all_strings(2)) {
        for (const Bits& y : all_strings(2)) check_run(par.machine, x, y, default_step_cap(par, 8));
    }
    for (std::size_t n : {3u, 5u}) {
        const MachineSpec checker = build_form_checker(n, TapeShape::Pair);
        for (const Bits& x : all_strings(n)) check_run(checker, x, Bits(n, 1), kDefaultStepCap);
    }
    report(6, "communication accounting", single && ratio_ok && bound_ok && same,
           fmt("fingerprint n=4..64: one crossing %s, total_bits/log2 n in [%.3g, %.3g]; %zu transcripts within "
               "ceil(log2|S|)(T/n+1) %s; protocol output bitwise equal %s",
               single ? "yes" : "NO", ratio_lo, ratio_hi, transcripts, bound_ok ? "yes" : "NO", same ? "yes" : "NO"),
           t0);
}

void property_suites() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string names;
    for (const CheckResult& r : run_property_checks(1, 100'000)) {
        ok = ok && r.passed;
        names += (r.passed ? "" : "FAILED ") + r.name + ", ";
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    names.resize(names.size() - 2);
    report(7, "property suites", ok && secs < 300.0, fmt("%s; %.1f s of 300", names.c_str(), secs), t0);
}

}  // namespace

int main() {
    compiler_faithfulness();
    gadget_correctness();
    eq_machine();
    exact_pipeline();
    communication();
    property_suites();
    int_machine();
    std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
