#include "pcf/arithmetic.hpp"

#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace pcf {

LimitExceeded::LimitExceeded(std::string limit_name, std::uint64_t limit, std::uint64_t requested,
                             std::string override_hint)
    : std::runtime_error(limit_name + " is " + std::to_string(limit) + ", requested " +
                         std::to_string(requested) +
                         (override_hint.empty() ? std::string{} : " (override with " + override_hint + ")")),
      limit_name_(std::move(limit_name)),
      limit_(limit),
      requested_(requested),
      override_hint_(std::move(override_hint)) {}

Natural CappedLcm::value() const {
    if (is_exceeded()) {
        throw InvalidArgument("CappedLcm::value called on an exceeded LCM");
    }
    return value_;
}

Natural gcd(Natural a, Natural b) {
    if (a == 0 || b == 0) {
        throw InvalidArgument("gcd requires positive arguments");
    }
    return std::gcd(a, b);
}

CappedLcm lcm_capped(Natural a, Natural b, Natural cap) {
    if (a == 0 || b == 0) {
        throw InvalidArgument("lcm_capped requires positive arguments");
    }
    if (cap == 0) {
        throw InvalidArgument("lcm_capped requires cap >= 1");
    }
    const Natural reduced = a / std::gcd(a, b);
    WideNatural product = 0;
    if (__builtin_mul_overflow(static_cast<WideNatural>(reduced), static_cast<WideNatural>(b), &product)) {
        throw ArithmeticOverflow("lcm_capped: 128-bit intermediate overflowed");
    }
    if (product > cap) {
        return CappedLcm::exceeded();
    }
    return CappedLcm{static_cast<Natural>(product)};
}

CappedLcm lcm_extend(CappedLcm running, Natural index, Natural cap) {
    if (running.is_exceeded()) {
        return running;
    }
    return lcm_capped(running.value(), index, cap);
}

Natural floor_div(Natural a, Natural b) {
    if (b == 0) {
        throw InvalidArgument("floor_div: division by zero");
    }
    return a / b;
}

Natural isqrt(Natural n) {
    // Classic digit-by-digit square root, two bits per step.
    Natural remainder = n;
    Natural root = 0;
    Natural bit = Natural{1} << 62;
    while (bit > remainder) {
        bit >>= 2;
    }
    while (bit != 0) {
        if (remainder >= root + bit) {
            remainder -= root + bit;
            root = (root >> 1) + bit;
        } else {
            root >>= 1;
        }
        bit >>= 2;
    }
    return root;
}

Natural checked_add(Natural a, Natural b) {
    Natural out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw ArithmeticOverflow("checked_add: " + std::to_string(a) + " + " + std::to_string(b));
    }
    return out;
}

Natural checked_sub(Natural a, Natural b) {
    if (b > a) {
        throw ArithmeticOverflow("checked_sub: " + std::to_string(a) + " - " + std::to_string(b) +
                                 " is negative");
    }
    return a - b;
}

Natural checked_mul(Natural a, Natural b) {
    Natural out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw ArithmeticOverflow("checked_mul: " + std::to_string(a) + " * " + std::to_string(b));
    }
    return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw ArithmeticOverflow("checked_add: signed accumulator overflow");
    }
    return out;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_sub_overflow(a, b, &out)) {
        throw ArithmeticOverflow("checked_sub: signed accumulator overflow");
    }
    return out;
}

WideNatural saturating_add(WideNatural a, WideNatural b) noexcept {
    WideNatural out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        return ~WideNatural{0};
    }
    return out;
}

std::int64_t to_signed(Natural v) {
    if (v > static_cast<Natural>(std::numeric_limits<std::int64_t>::max())) {
        throw ArithmeticOverflow("to_signed: " + std::to_string(v) + " exceeds int64");
    }
    return static_cast<std::int64_t>(v);
}

void require_accepted_n(Natural n) {
    if (n > kMaxAcceptedN) {
        throw LimitExceeded("maximum accepted n", kMaxAcceptedN, n, "");
    }
}

} // namespace pcf
