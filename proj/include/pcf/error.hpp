#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pcf {

/// Precondition violated by the caller (bad tuple, zero divisor, index out of range).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A checked operation would have wrapped. Never a formula condition; it means
/// an input escaped the configured range.
class ArithmeticOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// A resource guard refused the request (naive cap, set-model cap, sieve limit,
/// grid size, global n guard). Carries the guard's name and the flag that lifts it.
class LimitExceeded : public std::runtime_error {
public:
    LimitExceeded(std::string limit_name, std::uint64_t limit, std::uint64_t requested,
                  std::string override_hint);

    const std::string& limit_name() const noexcept { return limit_name_; }
    std::uint64_t limit() const noexcept { return limit_; }
    std::uint64_t requested() const noexcept { return requested_; }
    const std::string& override_hint() const noexcept { return override_hint_; }

private:
    std::string limit_name_;
    std::uint64_t limit_;
    std::uint64_t requested_;
    std::string override_hint_;
};

} // namespace pcf
