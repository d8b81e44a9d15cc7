#include <stdexcept>
#include <string>

#include "twoway/compile.hpp"

namespace twoway {

std::string_view prime_range_name(PrimeRange r) {
    return r == PrimeRange::LeN2 ? "le-n2" : "open-interval";
}

PrimeRange parse_prime_range(std::string_view name) {
    if (name == "le-n2") return PrimeRange::LeN2;
    if (name == "open-interval") return PrimeRange::OpenInterval;
    throw std::invalid_argument("unknown prime range '" + std::string(name) + "'");
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        primes.push_back(p);
        for (std::uint64_t q = p * p; q <= limit; q += p) composite[q] = true;
    }
    return primes;
}

std::vector<std::uint64_t> fingerprint_primes(std::size_t n, PrimeRange range) {
    const std::uint64_t n2 = static_cast<std::uint64_t>(n) * n;
    std::vector<std::uint64_t> primes = primes_up_to(n2);
    if (range == PrimeRange::OpenInterval) {
        std::erase_if(primes, [n2](std::uint64_t p) { return p <= 2 || p >= n2; });
    }
    if (primes.empty()) throw std::invalid_argument("no primes in range for this n");
    return primes;
}

}  // namespace twoway
