#pragma once
// Plain sieve of Eratosthenes used as ground truth by every verification path.
//
// Layout: one bit per integer in [0, limit], packed into 64-bit words, plus the
// number of primes strictly below each word. pi(k) is then a table lookup plus
// one popcount, which keeps a 10^8 table around 19 MB instead of 400 MB for a
// flat prefix array.

#include <cstdint>
#include <vector>

#include "pcf/arithmetic.hpp"

namespace pcf {

inline constexpr Natural kDefaultSieveLimitGuard = 100'000'000;

class SieveTable {
public:
    Natural limit() const noexcept { return limit_; }
    bool is_prime(Natural k) const;
    /// Number of primes <= k.
    Natural pi_prefix(Natural k) const;

private:
    friend SieveTable build_sieve(Natural limit, Natural guard);
    explicit SieveTable(Natural limit);

    void require_in_range(Natural k) const;

    Natural limit_;
    std::vector<std::uint64_t> words_;
    std::vector<std::uint32_t> primes_before_word_;
};

/// Sieve over [0, limit]; refuses limits above `guard`.
SieveTable build_sieve(Natural limit, Natural guard = kDefaultSieveLimitGuard);

/// pi(n) from the table; n must not exceed table.limit().
Natural pi_sieve(const SieveTable& table, Natural n);

/// Every k in [2, n] the sieve marks composite, ascending.
std::vector<Natural> composites_upto(const SieveTable& table, Natural n);

} // namespace pcf
