#pragma once
// Exact integer primitives shared by every evaluator.
//
// Everything here is checked: a result that does not fit is reported as
// ArithmeticOverflow, never wrapped. LCM accumulation goes through a 128-bit
// intermediate and is clipped against a cap (normally n), so an LCM that
// outgrows n is represented as CappedLcm::exceeded() instead of a number.

#include <cstdint>

#include "pcf/error.hpp"

namespace pcf {

using Natural = std::uint64_t;
__extension__ typedef unsigned __int128 WideNatural;

/// Largest n any evaluator accepts. Keeps every signed accumulator well inside int64.
inline constexpr Natural kMaxAcceptedN = Natural{1} << 62;

/// LCM of a running tuple, or the sticky marker that it already exceeds the cap.
class CappedLcm {
public:
    /// LCM of the empty tuple.
    static constexpr CappedLcm one() noexcept { return CappedLcm{1}; }
    static constexpr CappedLcm exceeded() noexcept { return CappedLcm{0}; }

    constexpr bool is_exceeded() const noexcept { return value_ == 0; }
    /// Throws InvalidArgument when called on the exceeded marker.
    Natural value() const;

    friend constexpr bool operator==(CappedLcm, CappedLcm) noexcept = default;

private:
    friend CappedLcm lcm_capped(Natural a, Natural b, Natural cap);
    constexpr explicit CappedLcm(Natural v) noexcept : value_(v) {}
    Natural value_; // 0 encodes "exceeded"
};

/// Greatest common divisor of two positive integers.
Natural gcd(Natural a, Natural b);

/// LCM(a, b) if it is at most `cap`, else CappedLcm::exceeded().
/// Divides by the gcd before multiplying, in 128-bit width.
CappedLcm lcm_capped(Natural a, Natural b, Natural cap);

/// Extends a running LCM by one more index. Exceeded stays exceeded.
CappedLcm lcm_extend(CappedLcm running, Natural index, Natural cap);

/// floor(a / b); b == 0 is an InvalidArgument.
Natural floor_div(Natural a, Natural b);

/// The unique r with r*r <= n < (r+1)*(r+1). Integer-only (bit-by-bit).
Natural isqrt(Natural n);

Natural checked_add(Natural a, Natural b);
Natural checked_sub(Natural a, Natural b);
Natural checked_mul(Natural a, Natural b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);
/// Clamps at the maximum instead of wrapping; used for instrumentation counters
/// where reaching the maximum is reported rather than fatal.
WideNatural saturating_add(WideNatural a, WideNatural b) noexcept;

/// Narrowing that refuses values outside the signed 64-bit range.
std::int64_t to_signed(Natural v);

/// Throws LimitExceeded when n is above kMaxAcceptedN.
void require_accepted_n(Natural n);

} // namespace pcf
