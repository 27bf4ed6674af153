#include "pcf/formula.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace pcf {

namespace {

using Clock = std::chrono::steady_clock;

// floor(n/L) - floor((last^2 - 1)/L); last^2 <= n so neither side can overflow.
Natural term_from_lcm(Natural n, Natural lcm, Natural last) {
    return floor_div(n, lcm) - floor_div(last * last - 1, lcm);
}

// pi = (n - 1) + signed sum; anything outside [0, n] is an evaluator bug.
Natural finish_pi(Natural n, std::int64_t signed_sum) {
    const std::int64_t pi = checked_add(to_signed(n - 1), signed_sum);
    if (pi < 0 || static_cast<Natural>(pi) > n) {
        throw std::logic_error("formula produced pi(" + std::to_string(n) + ") = " + std::to_string(pi) +
                               ", outside [0, n]");
    }
    return static_cast<Natural>(pi);
}

struct SubtreeTotals {
    std::int64_t signed_sum = 0;
    TermCount tuples = 0;
    TermCount nonzero = 0;
    TermCount pruned = 0;
};

struct StateKey {
    Natural lcm;
    Natural last;
    friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const noexcept {
        std::uint64_t h = k.lcm * 0x9E3779B97F4A7C15ULL;
        h ^= k.last + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

// The subtree hanging below a tuple depends only on its running LCM and its last
// index, so its totals are computed once per (lcm, last) and reused.
class SharedWalk {
public:
    SharedWalk(Natural n, Natural root) : n_(n), root_(root) {}

    SubtreeTotals below(Natural lcm, Natural last) {
        const StateKey key{lcm, last};
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        ++states_expanded_;
        SubtreeTotals totals;
        for (Natural next = last + 1; next <= root_; ++next) {
            const CappedLcm extended = lcm_capped(lcm, next, n_);
            if (extended.is_exceeded()) {
                totals.pruned = saturating_add(totals.pruned, TermCount{1});
                continue;
            }
            const Natural child_lcm = extended.value();
            max_lcm_ = std::max(max_lcm_, child_lcm);
            const Natural value = term_from_lcm(n_, child_lcm, next);
            const SubtreeTotals child = below(child_lcm, next);
            // One more index flips the sign of the child tuple and of everything under it.
            totals.signed_sum = checked_sub(totals.signed_sum, checked_add(to_signed(value), child.signed_sum));
            totals.tuples = saturating_add(totals.tuples, saturating_add(child.tuples, TermCount{1}));
            totals.nonzero = saturating_add(totals.nonzero, saturating_add(child.nonzero, TermCount{value != 0}));
            totals.pruned = saturating_add(totals.pruned, child.pruned);
        }
        memo_.emplace(key, totals);
        return totals;
    }

    Natural max_lcm() const noexcept { return max_lcm_; }
    std::uint64_t states_expanded() const noexcept { return states_expanded_; }

private:
    Natural n_;
    Natural root_;
    Natural max_lcm_ = 0;
    std::uint64_t states_expanded_ = 0;
    std::unordered_map<StateKey, SubtreeTotals, StateKeyHash> memo_;
};

} // namespace

// ---------------------------------------------------------------------------
// IndexTuple

IndexTuple::IndexTuple(std::vector<Natural> indices) : indices_(std::move(indices)) {
    if (indices_.empty()) {
        throw InvalidArgument("index tuple must be nonempty");
    }
    if (indices_.front() < 2) {
        throw InvalidArgument("index tuple must start at 2 or above, got " + to_string());
    }
    if (std::adjacent_find(indices_.begin(), indices_.end(), std::greater_equal<>{}) != indices_.end()) {
        throw InvalidArgument("index tuple must be strictly increasing, got " + to_string());
    }
}

IndexTuple::IndexTuple(std::initializer_list<Natural> indices) : IndexTuple(std::vector<Natural>(indices)) {}

bool IndexTuple::valid_for(Natural n) const noexcept { return back() <= isqrt(n); }

void IndexTuple::require_valid_for(Natural n) const {
    if (!valid_for(n)) {
        throw InvalidArgument("tuple " + to_string() + " exceeds isqrt(" + std::to_string(n) +
                              ") = " + std::to_string(isqrt(n)));
    }
}

IndexTuple IndexTuple::extended(Natural index) const {
    std::vector<Natural> next = indices_;
    next.push_back(index);
    return IndexTuple{std::move(next)};
}

std::string IndexTuple::to_string() const {
    std::string out = "(";
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (k != 0) out += ',';
        out += std::to_string(indices_[k]);
    }
    out += ')';
    return out;
}

// ---------------------------------------------------------------------------
// Method / stats helpers

std::string_view method_name(Method m) noexcept {
    switch (m) {
    case Method::FormulaNaive: return "naive";
    case Method::FormulaPruned: return "pruned";
    case Method::SetModel: return "set-model";
    case Method::Sieve: return "sieve";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
    for (Method m : {Method::FormulaNaive, Method::FormulaPruned, Method::SetModel, Method::Sieve}) {
        if (method_name(m) == name) return m;
    }
    return std::nullopt;
}

std::string to_decimal(TermCount v) {
    if (v == kSaturatedCount) return "saturated";
    if (v == 0) return "0";
    std::string digits;
    while (v != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

bool EvaluationStats::same_counts(const EvaluationStats& other) const noexcept {
    return terms_visited == other.terms_visited && nonzero_terms == other.nonzero_terms &&
           subtrees_pruned == other.subtrees_pruned && max_lcm_retained == other.max_lcm_retained;
}

// ---------------------------------------------------------------------------
// Terms

Natural term_value(Natural n, const IndexTuple& tuple) {
    require_accepted_n(n);
    tuple.require_valid_for(n);
    CappedLcm lcm = CappedLcm::one();
    for (Natural index : tuple.indices()) {
        lcm = lcm_extend(lcm, index, n);
        if (lcm.is_exceeded()) {
            return 0;
        }
    }
    return term_from_lcm(n, lcm.value(), tuple.back());
}

Natural first_sum_term(Natural n, Natural i) {
    require_accepted_n(n);
    if (i < 2 || i > isqrt(n)) {
        throw InvalidArgument("first_sum_term: index " + std::to_string(i) + " outside [2, isqrt(" +
                              std::to_string(n) + ")]");
    }
    return floor_div(n, i) - i + 1;
}

// ---------------------------------------------------------------------------
// Naive

PiResult pi_formula_naive(Natural n, const NaiveOptions& options) {
    const auto start = Clock::now();
    require_accepted_n(n);
    PiResult result{n, 0, Method::FormulaNaive, {}};
    if (n == 0) {
        return result;
    }
    const Natural root = isqrt(n);
    if (root > options.cap) {
        throw LimitExceeded("naive cap on isqrt(n)", options.cap, root, "--naive-cap");
    }
    if (root > 64) {
        throw LimitExceeded("naive enumeration width on isqrt(n)", 64, root, "");
    }

    std::int64_t signed_sum = 0;
    EvaluationStats& stats = result.stats;
    if (root >= 2) {
        // Bit k of the mask selects index k + 2.
        const unsigned width = static_cast<unsigned>(root - 1);
        const std::uint64_t end = width == 64 ? 0 : (std::uint64_t{1} << width);
        std::uint64_t mask = 1;
        do {
            CappedLcm lcm = CappedLcm::one();
            for (std::uint64_t bits = mask; bits != 0 && !lcm.is_exceeded(); bits &= bits - 1) {
                lcm = lcm_extend(lcm, static_cast<Natural>(std::countr_zero(bits)) + 2, n);
            }
            const Natural last = static_cast<Natural>(63 - std::countl_zero(mask)) + 2;
            Natural value = 0;
            if (!lcm.is_exceeded()) {
                value = term_from_lcm(n, lcm.value(), last);
                stats.max_lcm_retained = std::max(stats.max_lcm_retained, lcm.value());
            }
            const std::int64_t v = to_signed(value);
            signed_sum = (std::popcount(mask) % 2 == 0) ? checked_add(signed_sum, v) : checked_sub(signed_sum, v);
            stats.terms_visited += 1;
            stats.nonzero_terms += value != 0;
            ++mask;
        } while (mask != end);
    }
    stats.states_expanded = static_cast<std::uint64_t>(stats.terms_visited) + 1;
    result.pi = finish_pi(n, signed_sum);
    stats.elapsed = Clock::now() - start;
    return result;
}

// ---------------------------------------------------------------------------
// Pruned

PiResult pi_formula_pruned(Natural n, const PrunedOptions& options) {
    const auto start = Clock::now();
    require_accepted_n(n);
    PiResult result{n, 0, Method::FormulaPruned, {}};
    if (n == 0) {
        return result;
    }

    std::int64_t signed_sum = 0;
    if (options.mode == WalkMode::Literal) {
        TermStream stream(n, false);
        while (auto record = stream.next()) {
            const std::int64_t v = to_signed(record->value);
            signed_sum = record->sign > 0 ? checked_add(signed_sum, v) : checked_sub(signed_sum, v);
        }
        result.stats = stream.stats();
    } else {
        SharedWalk walk(n, isqrt(n));
        const SubtreeTotals totals = walk.below(1, 1);
        signed_sum = totals.signed_sum;
        result.stats.terms_visited = totals.tuples;
        result.stats.nonzero_terms = totals.nonzero;
        result.stats.subtrees_pruned = totals.pruned;
        result.stats.max_lcm_retained = walk.max_lcm();
        result.stats.states_expanded = walk.states_expanded();
    }
    result.pi = finish_pi(n, signed_sum);
    result.stats.elapsed = Clock::now() - start;
    return result;
}

// ---------------------------------------------------------------------------
// TermStream

TermStream::TermStream(Natural n, bool nonzero_only)
    : n_(n), root_(0), nonzero_only_(nonzero_only) {
    require_accepted_n(n);
    root_ = n == 0 ? 0 : isqrt(n);
    stats_.states_expanded = 1;
}

std::optional<TermRecord> TermStream::next() {
    for (;;) {
        if (next_index_ > root_) {
            if (path_.empty()) {
                return std::nullopt;
            }
            next_index_ = path_.back().index + 1;
            path_.pop_back();
            continue;
        }
        const Natural index = next_index_++;
        const Natural parent_lcm = path_.empty() ? 1 : path_.back().lcm;
        const CappedLcm extended = lcm_capped(parent_lcm, index, n_);
        if (extended.is_exceeded()) {
            stats_.subtrees_pruned += 1;
            continue;
        }
        const Natural lcm = extended.value();
        path_.push_back({index, lcm});
        next_index_ = index + 1;
        ++stats_.states_expanded;

        const Natural value = term_from_lcm(n_, lcm, index);
        stats_.terms_visited += 1;
        stats_.nonzero_terms += value != 0;
        stats_.max_lcm_retained = std::max(stats_.max_lcm_retained, lcm);
        if (nonzero_only_ && value == 0) {
            continue;
        }
        std::vector<Natural> indices;
        indices.reserve(path_.size());
        for (const Frame& f : path_) indices.push_back(f.index);
        return TermRecord{IndexTuple{std::move(indices)}, lcm, path_.size() % 2 == 0 ? 1 : -1, value};
    }
}

TermStream enumerate_terms(Natural n, bool nonzero_only) { return TermStream(n, nonzero_only); }

} // namespace pcf
