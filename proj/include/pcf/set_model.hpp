#pragma once
// Explicit-set model of the column construction behind the formula.
//
// Column i of the multiplication grid holds i*j for j = 1, 2, ... The sets are:
//   X_i        = { i*j : j >= i, i*j <= n }        (entries on or above the diagonal)
//   Y_i(bound) = { i*j : j >= 1, i*j <= bound }    (the whole column)
// The composites in [2, n] are exactly the union of X_2 .. X_isqrt(n).
//
// Everything here is materialized as sorted vectors and intersected by merging.
// Nothing in this file uses the LCM counting result except to report the
// right-hand side of an identity check; the module exists to be an oracle.

#include <cstdint>
#include <string>
#include <vector>

#include "pcf/arithmetic.hpp"
#include "pcf/formula.hpp"

namespace pcf {

enum class ColumnKind { X, Y };

struct ColumnSet {
    ColumnKind kind = ColumnKind::X;
    Natural index = 0;
    Natural bound = 0;
    std::vector<Natural> elements; // ascending
};

/// Explicit sets are refused above this bound.
inline constexpr Natural kMaxExplicitBound = 100'000'000;

ColumnSet build_x(Natural n, Natural i);
ColumnSet build_y(Natural bound, Natural i);

/// X_2 U X_3 U ... U X_isqrt(n), ascending.
std::vector<Natural> union_x(Natural n);

/// |X_{i_1} n ... n X_{i_s}| from the literal sets.
Natural intersect_x_explicit(Natural n, const IndexTuple& tuple);

enum class IdentityKind {
    Statement,  // |n X| == floor(n/L) - floor((i_s^2-1)/L)
    Difference, // |n X| == |n Y(n)| - |n Y(i_s^2-1)|
    YLcm,       // |n Y(bound)| == floor(bound/L)
};

std::string_view identity_name(IdentityKind kind) noexcept;

struct IdentityReport {
    IdentityKind kind = IdentityKind::Statement;
    Natural n = 0; // the bound, for YLcm
    IndexTuple tuple;
    std::int64_t lhs = 0;
    std::int64_t rhs = 0;

    bool pass() const noexcept { return lhs == rhs; }
};

IdentityReport verify_statement(Natural n, const IndexTuple& tuple);
IdentityReport verify_difference_identity(Natural n, const IndexTuple& tuple);
/// Only needs an increasing tuple starting at 2; Y-sets exist for any bound.
IdentityReport verify_y_lcm_identity(Natural bound, const IndexTuple& tuple);

inline constexpr Natural kDefaultSetModelCap = 100'000;

struct SetModelOptions {
    Natural cap = kDefaultSetModelCap;
    WalkMode mode = WalkMode::SharedSubtrees;
};

/// pi(n) = n - 1 - |X|, with |X| taken both as the size of the explicit union
/// and by inclusion-exclusion over explicit intersections. The two must agree.
/// The inclusion-exclusion walk covers the same tuples as pi_formula_pruned.
PiResult pi_set_model(Natural n, const SetModelOptions& options = {});

inline constexpr Natural kGridMaxN = 200;

/// Text rendering of the multiplication grid up to n. Cell (i, j) holds i*j when
/// i*j <= n; members of X_i (i >= 2, j >= i) carry a trailing '*'.
std::string render_grid(Natural n);

} // namespace pcf
