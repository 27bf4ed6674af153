#pragma once
// Verification sweeps and timing runs over the evaluators, with JSON/CSV output.
//
// JSON objects are nlohmann::json with sorted keys, so two reports built from the
// same inputs serialize byte-identically apart from the elapsed fields. Tuple
// counters are 128-bit and are always written as decimal strings.

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "pcf/formula.hpp"
#include "pcf/set_model.hpp"
#include "pcf/sieve.hpp"

namespace pcf {

inline constexpr int kReportVersion = 1;

/// Resource guards applied when dispatching to an evaluator.
struct Limits {
    Natural naive_cap = kDefaultNaiveCap;
    Natural set_model_cap = kDefaultSetModelCap;
    Natural sieve_limit = kDefaultSieveLimitGuard;
};

/// Why `method` would refuse n under `limits`, or nullopt when it is feasible.
std::optional<std::string> infeasibility(Method method, Natural n, const Limits& limits);

/// Runs one evaluator. Sieve builds a table up to n and reads pi(n) from it.
PiResult compute_pi(Method method, Natural n, const Limits& limits = {});

struct Mismatch {
    Natural n;
    Method method;
    Natural got;
    Natural expected;
};

/// A contiguous run of n a method was not asked to evaluate.
struct SkipNote {
    Method method;
    Natural from_n;
    Natural to_n;
    std::string reason;
};

struct IdentityTally {
    std::uint64_t run = 0;
    std::uint64_t failed = 0;
};

struct VerifyReport {
    Natural lo = 0;
    Natural hi = 0;
    std::vector<Method> methods;
    std::uint64_t seed = 0;
    std::uint64_t evaluations = 0;
    std::vector<Mismatch> mismatches;
    std::vector<SkipNote> skipped;
    IdentityTally statement;
    IdentityTally difference;
    IdentityTally y_lcm;
    std::vector<IdentityReport> identity_failures; // first kMaxRecordedFailures only
    std::chrono::nanoseconds elapsed{0};

    static constexpr std::size_t kMaxRecordedFailures = 64;

    bool passed() const noexcept {
        return mismatches.empty() && statement.failed == 0 && difference.failed == 0 && y_lcm.failed == 0;
    }
};

/// Largest n drawn for randomized identity cases.
inline constexpr Natural kIdentityCaseMaxN = 500;

/// Compares every method against the sieve for each n in [lo, hi], then runs
/// `random_identity_cases` seeded random tuples through the three set identities.
VerifyReport verify_sweep(Natural lo, Natural hi, std::span<const Method> methods, std::uint64_t seed,
                          std::uint64_t random_identity_cases, const Limits& limits = {});

struct BenchEntry {
    Natural n = 0;
    Method method = Method::FormulaPruned;
    std::optional<Natural> pi;           // empty when skipped
    std::chrono::nanoseconds best{0};
    EvaluationStats stats;
    std::optional<std::string> skipped;  // reason, when the method refused n
};

struct BenchReport {
    std::uint64_t repetitions = 1;
    std::vector<BenchEntry> entries; // sorted by n, then method
    std::vector<Natural> disagreements; // n where methods returned different pi
    std::string environment;

    bool consistent() const noexcept { return disagreements.empty(); }
};

/// Best-of-`repetitions` wall time per (n, method), monotonic clock.
BenchReport bench_run(std::span<const Natural> n_values, std::span<const Method> methods,
                      std::uint64_t repetitions, const Limits& limits = {});

nlohmann::json to_json(const EvaluationStats& stats);
nlohmann::json to_json(const PiResult& result);
nlohmann::json to_json(const TermRecord& record);
nlohmann::json to_json(const IdentityReport& report);
nlohmann::json to_json(const VerifyReport& report);
nlohmann::json to_json(const BenchReport& report);

/// Columns: n,method,pi,elapsed_ns,terms_visited,nonzero_terms,subtrees_pruned
std::string to_csv(const BenchReport& report);

/// Deterministic uniform draw from [lo, hi] independent of the standard
/// library's distribution implementation.
std::uint64_t draw_uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi);

/// Random valid tuple for n (n >= 4): uniform length, then distinct indices.
IndexTuple draw_tuple(std::mt19937_64& rng, Natural n);

} // namespace pcf
