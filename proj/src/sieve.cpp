#include "pcf/sieve.hpp"

#include <bit>
#include <string>

namespace pcf {

SieveTable::SieveTable(Natural limit)
    : limit_(limit), words_(limit / 64 + 1, ~std::uint64_t{0}), primes_before_word_(words_.size() + 1, 0) {}

void SieveTable::require_in_range(Natural k) const {
    if (k > limit_) {
        throw InvalidArgument("sieve query " + std::to_string(k) + " above table limit " + std::to_string(limit_));
    }
}

bool SieveTable::is_prime(Natural k) const {
    require_in_range(k);
    return (words_[k / 64] >> (k % 64)) & 1U;
}

Natural SieveTable::pi_prefix(Natural k) const {
    require_in_range(k);
    const Natural word = k / 64;
    const unsigned bit = static_cast<unsigned>(k % 64);
    const std::uint64_t mask = bit == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (bit + 1)) - 1);
    return primes_before_word_[word] + static_cast<Natural>(std::popcount(words_[word] & mask));
}

SieveTable build_sieve(Natural limit, Natural guard) {
    if (limit > guard) {
        throw LimitExceeded("sieve limit guard", guard, limit, "--sieve-limit");
    }
    SieveTable table(limit);
    auto clear = [&](Natural k) { table.words_[k / 64] &= ~(std::uint64_t{1} << (k % 64)); };

    clear(0);
    if (limit >= 1) clear(1);
    for (Natural p = 2; p * p <= limit; ++p) {
        if (!table.is_prime(p)) continue;
        for (Natural m = p * p; m <= limit; m += p) {
            clear(m);
        }
    }
    // Bits above `limit` in the last word are not integers in range.
    const unsigned tail = static_cast<unsigned>(limit % 64);
    if (tail != 63) {
        table.words_.back() &= (std::uint64_t{1} << (tail + 1)) - 1;
    }
    for (std::size_t w = 0; w < table.words_.size(); ++w) {
        table.primes_before_word_[w + 1] =
            table.primes_before_word_[w] + static_cast<std::uint32_t>(std::popcount(table.words_[w]));
    }
    return table;
}

Natural pi_sieve(const SieveTable& table, Natural n) { return table.pi_prefix(n); }

std::vector<Natural> composites_upto(const SieveTable& table, Natural n) {
    if (n > table.limit()) {
        throw InvalidArgument("composites_upto(" + std::to_string(n) + ") above table limit " +
                              std::to_string(table.limit()));
    }
    std::vector<Natural> out;
    if (n < 4) {
        return out;
    }
    out.reserve(static_cast<std::size_t>(n - 1 - pi_sieve(table, n)));
    for (Natural k = 2; k <= n; ++k) {
        if (!table.is_prime(k)) out.push_back(k);
    }
    return out;
}

} // namespace pcf
