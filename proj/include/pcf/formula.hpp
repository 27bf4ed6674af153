#pragma once
// Explicit inclusion-exclusion formula for pi(n):
//
//   pi(n) = (n - 1) + sum over nonempty tuples 1 < i_1 < ... < i_s <= isqrt(n) of
//           (-1)^s * ( floor(n / L) - floor((i_s^2 - 1) / L) ),   L = LCM(i_1..i_s)
//
// The s = 1 layer is folded into the same signed sum; first_sum_term() keeps the
// simplified single-index form ( floor(n/i) - i + 1 ) around as a cross-check.

#include <chrono>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcf/arithmetic.hpp"

namespace pcf {

/// Strictly increasing index tuple i_1 < ... < i_s with i_1 >= 2 and s >= 1.
class IndexTuple {
public:
    explicit IndexTuple(std::vector<Natural> indices);
    IndexTuple(std::initializer_list<Natural> indices);

    std::span<const Natural> indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    Natural front() const noexcept { return indices_.front(); }
    Natural back() const noexcept { return indices_.back(); }

    /// i_s <= isqrt(n).
    bool valid_for(Natural n) const noexcept;
    void require_valid_for(Natural n) const;

    /// A copy with `index` appended; index must exceed back().
    IndexTuple extended(Natural index) const;

    /// "(2,3,5)"
    std::string to_string() const;

    friend bool operator==(const IndexTuple&, const IndexTuple&) = default;
    friend auto operator<=>(const IndexTuple&, const IndexTuple&) = default;

private:
    std::vector<Natural> indices_;
};

enum class Method { FormulaNaive, FormulaPruned, SetModel, Sieve };

/// "naive", "pruned", "set-model", "sieve"
std::string_view method_name(Method m) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;

/// Tuple counts reach past 2^64 well before n = 10^5, hence 128 bits. Past
/// 2^128 - 1 (around n = 10^6) they saturate instead of aborting the evaluation.
using TermCount = WideNatural;
inline constexpr TermCount kSaturatedCount = ~TermCount{0};
/// Decimal digits, or "saturated" for kSaturatedCount.
std::string to_decimal(TermCount v);

struct EvaluationStats {
    TermCount terms_visited = 0;
    TermCount nonzero_terms = 0;
    TermCount subtrees_pruned = 0;
    Natural max_lcm_retained = 0;
    /// Walk nodes whose children were actually iterated. Equals terms_visited + 1
    /// for a literal walk; far smaller when identical subtrees are shared.
    std::uint64_t states_expanded = 0;
    std::chrono::nanoseconds elapsed{0};

    /// Equality on the counters only (elapsed and states_expanded excluded).
    bool same_counts(const EvaluationStats& other) const noexcept;
};

struct PiResult {
    Natural n = 0;
    Natural pi = 0;
    Method method = Method::FormulaPruned;
    EvaluationStats stats;
};

struct TermRecord {
    IndexTuple tuple;
    Natural lcm = 0;
    int sign = 0;  // (-1)^s
    Natural value = 0;
};

/// floor(n/L) - floor((i_s^2 - 1)/L) for a tuple valid for n. Zero once L > n.
Natural term_value(Natural n, const IndexTuple& tuple);

/// floor(n/i) - i + 1, the single-index term in closed form. Requires 2 <= i <= isqrt(n).
Natural first_sum_term(Natural n, Natural i);

inline constexpr Natural kDefaultNaiveCap = 25;

struct NaiveOptions {
    /// Largest isqrt(n) the exhaustive evaluator will take on (2^(cap-1) - 1 tuples).
    Natural cap = kDefaultNaiveCap;
};

/// Every one of the 2^(isqrt(n)-1) - 1 tuples, LCM recomputed per tuple, no pruning.
PiResult pi_formula_naive(Natural n, const NaiveOptions& options = {});

enum class WalkMode {
    /// Each distinct (running LCM, last index) subtree is walked once and its
    /// totals reused wherever the same subtree recurs.
    SharedSubtrees,
    /// Every retained tuple is visited individually.
    Literal,
};

struct PrunedOptions {
    WalkMode mode = WalkMode::SharedSubtrees;
};

/// Depth-first walk over increasing tuples with a per-path LCM; a tuple whose
/// LCM exceeds n is dropped together with all its extensions.
PiResult pi_formula_pruned(Natural n, const PrunedOptions& options = {});

/// Lazily produces TermRecords from the literal pruned walk in depth-first
/// lexicographic order: (2), (2,3), (2,3,4), ..., (3), ...
class TermStream {
public:
    TermStream(Natural n, bool nonzero_only);

    std::optional<TermRecord> next();

    /// Counters for everything walked so far.
    const EvaluationStats& stats() const noexcept { return stats_; }
    Natural n() const noexcept { return n_; }

    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = TermRecord;
        using difference_type = std::ptrdiff_t;
        using pointer = const TermRecord*;
        using reference = const TermRecord&;

        iterator() = default;
        explicit iterator(TermStream* stream) : stream_(stream) { advance(); }

        reference operator*() const { return *current_; }
        pointer operator->() const { return &*current_; }
        iterator& operator++() {
            advance();
            return *this;
        }
        void operator++(int) { advance(); }
        friend bool operator==(const iterator& it, std::default_sentinel_t) noexcept {
            return !it.current_.has_value();
        }

    private:
        void advance() { current_ = stream_->next(); }
        TermStream* stream_ = nullptr;
        std::optional<TermRecord> current_;
    };

    iterator begin() { return iterator{this}; }
    std::default_sentinel_t end() const noexcept { return {}; }

private:
    struct Frame {
        Natural index;
        Natural lcm;
    };

    Natural n_;
    Natural root_;
    bool nonzero_only_;
    std::vector<Frame> path_;
    Natural next_index_ = 2;
    EvaluationStats stats_;
};

TermStream enumerate_terms(Natural n, bool nonzero_only);

} // namespace pcf
