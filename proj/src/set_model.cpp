#include "pcf/set_model.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace pcf {

namespace {

using Clock = std::chrono::steady_clock;
using Elements = std::vector<Natural>;

void require_column_index(Natural i) {
    if (i < 2) {
        throw InvalidArgument("column index must be >= 2, got " + std::to_string(i));
    }
}

void require_explicit_bound(Natural bound) {
    if (bound > kMaxExplicitBound) {
        throw LimitExceeded("explicit set bound", kMaxExplicitBound, bound, "");
    }
}

// Multiples i*j <= bound for j >= first_factor.
Elements column(Natural bound, Natural i, Natural first_factor) {
    Elements out;
    const Natural last_factor = bound / i;
    if (last_factor < first_factor) {
        return out;
    }
    out.reserve(static_cast<std::size_t>(last_factor - first_factor + 1));
    for (Natural j = first_factor; j <= last_factor; ++j) {
        out.push_back(i * j);
    }
    return out;
}

// Sorted intersection. A plain merge when the sizes are comparable, otherwise each
// element of the small side is located in the big side by binary search.
Elements intersect(const Elements& a, const Elements& b) {
    const Elements& small = a.size() <= b.size() ? a : b;
    const Elements& big = a.size() <= b.size() ? b : a;
    Elements out;
    if (small.empty()) {
        return out;
    }
    if (small.size() * 16 < big.size()) {
        auto from = big.begin();
        for (Natural x : small) {
            from = std::lower_bound(from, big.end(), x);
            if (from == big.end()) break;
            if (*from == x) out.push_back(x);
        }
        return out;
    }
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Elements intersect_columns(const IndexTuple& tuple, auto&& build) {
    Elements acc = build(tuple.front()).elements;
    for (std::size_t k = 1; k < tuple.size() && !acc.empty(); ++k) {
        acc = intersect(acc, build(tuple.indices()[k]).elements);
    }
    return acc;
}

std::uint64_t hash_elements(const Elements& e) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ e.size();
    for (Natural x : e) {
        h = (h ^ x) * 0x100000001b3ULL;
    }
    return h;
}

struct SubtreeTotals {
    std::int64_t signed_sum = 0; // sum of (-1)^s |intersection|
    TermCount tuples = 0;
    TermCount nonzero = 0;
    TermCount pruned = 0;
};

// Walks the same tuples as the pruned formula evaluator (LCM > n drops a subtree),
// but each term is the size of an explicitly intersected set. In shared mode a
// subtree is reused only when the running LCM, last index and the intersected
// set itself all coincide, which is sound without any counting theorem.
class InclusionExclusionWalk {
public:
    InclusionExclusionWalk(Natural n, WalkMode mode) : n_(n), root_(isqrt(n)), mode_(mode) {
        columns_.resize(static_cast<std::size_t>(root_ + 1));
        for (Natural i = 2; i <= root_; ++i) {
            columns_[i] = build_x(n, i).elements;
        }
    }

    SubtreeTotals run() { return below(1, 1, nullptr); }

    Natural max_lcm() const noexcept { return max_lcm_; }
    std::uint64_t states_expanded() const noexcept { return states_expanded_; }

private:
    struct Key {
        Natural lcm;
        Natural last;
        std::uint64_t set_hash;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            return static_cast<std::size_t>(k.set_hash ^ (k.lcm * 0x9E3779B97F4A7C15ULL) ^ (k.last << 32));
        }
    };
    struct Entry {
        Elements set;
        SubtreeTotals totals;
    };

    // `current` is the running intersection; nullptr stands for the empty tuple.
    SubtreeTotals below(Natural lcm, Natural last, const Elements* current) {
        const bool shared = mode_ == WalkMode::SharedSubtrees && current != nullptr;
        Key key{lcm, last, shared ? hash_elements(*current) : 0};
        if (shared) {
            if (auto it = memo_.find(key); it != memo_.end()) {
                for (const Entry& e : it->second) {
                    if (e.set == *current) return e.totals;
                }
            }
        }

        ++states_expanded_;
        SubtreeTotals totals;
        for (Natural next = last + 1; next <= root_; ++next) {
            const CappedLcm extended = lcm_capped(lcm, next, n_);
            if (extended.is_exceeded()) {
                totals.pruned = saturating_add(totals.pruned, TermCount{1});
                continue;
            }
            max_lcm_ = std::max(max_lcm_, extended.value());
            const Elements child_set = current == nullptr ? columns_[next] : intersect(*current, columns_[next]);
            const Natural size = child_set.size();
            const SubtreeTotals child = below(extended.value(), next, &child_set);
            totals.signed_sum = checked_sub(totals.signed_sum, checked_add(to_signed(size), child.signed_sum));
            totals.tuples = saturating_add(totals.tuples, saturating_add(child.tuples, TermCount{1}));
            totals.nonzero = saturating_add(totals.nonzero, saturating_add(child.nonzero, TermCount{size != 0}));
            totals.pruned = saturating_add(totals.pruned, child.pruned);
        }

        if (shared) {
            memo_[key].push_back(Entry{*current, totals});
        }
        return totals;
    }

    Natural n_;
    Natural root_;
    WalkMode mode_;
    std::vector<Elements> columns_;
    Natural max_lcm_ = 0;
    std::uint64_t states_expanded_ = 0;
    std::unordered_map<Key, std::vector<Entry>, KeyHash> memo_;
};

} // namespace

ColumnSet build_x(Natural n, Natural i) {
    require_column_index(i);
    require_explicit_bound(n);
    return ColumnSet{ColumnKind::X, i, n, column(n, i, i)};
}

ColumnSet build_y(Natural bound, Natural i) {
    require_column_index(i);
    require_explicit_bound(bound);
    return ColumnSet{ColumnKind::Y, i, bound, column(bound, i, 1)};
}

std::vector<Natural> union_x(Natural n) {
    require_explicit_bound(n);
    Elements acc;
    for (Natural i = 2; i <= isqrt(n); ++i) {
        const Elements col = build_x(n, i).elements;
        Elements merged;
        merged.reserve(acc.size() + col.size());
        std::set_union(acc.begin(), acc.end(), col.begin(), col.end(), std::back_inserter(merged));
        acc = std::move(merged);
    }
    return acc;
}

Natural intersect_x_explicit(Natural n, const IndexTuple& tuple) {
    tuple.require_valid_for(n);
    return intersect_columns(tuple, [n](Natural i) { return build_x(n, i); }).size();
}

std::string_view identity_name(IdentityKind kind) noexcept {
    switch (kind) {
    case IdentityKind::Statement: return "statement";
    case IdentityKind::Difference: return "difference";
    case IdentityKind::YLcm: return "y_lcm";
    }
    return "unknown";
}

IdentityReport verify_statement(Natural n, const IndexTuple& tuple) {
    const Natural lhs = intersect_x_explicit(n, tuple);
    const Natural rhs = term_value(n, tuple);
    return IdentityReport{IdentityKind::Statement, n, tuple, to_signed(lhs), to_signed(rhs)};
}

IdentityReport verify_difference_identity(Natural n, const IndexTuple& tuple) {
    const Natural lhs = intersect_x_explicit(n, tuple);
    const Natural below_diagonal = tuple.back() * tuple.back() - 1;
    const Natural whole = intersect_columns(tuple, [n](Natural i) { return build_y(n, i); }).size();
    const Natural lower =
        intersect_columns(tuple, [below_diagonal](Natural i) { return build_y(below_diagonal, i); }).size();
    return IdentityReport{IdentityKind::Difference, n, tuple, to_signed(lhs),
                          checked_sub(to_signed(whole), to_signed(lower))};
}

IdentityReport verify_y_lcm_identity(Natural bound, const IndexTuple& tuple) {
    const Natural lhs = intersect_columns(tuple, [bound](Natural i) { return build_y(bound, i); }).size();
    Natural rhs = 0;
    if (bound != 0) {
        CappedLcm lcm = CappedLcm::one();
        for (Natural i : tuple.indices()) lcm = lcm_extend(lcm, i, bound);
        rhs = lcm.is_exceeded() ? 0 : floor_div(bound, lcm.value());
    }
    return IdentityReport{IdentityKind::YLcm, bound, tuple, to_signed(lhs), to_signed(rhs)};
}

PiResult pi_set_model(Natural n, const SetModelOptions& options) {
    const auto start = Clock::now();
    if (n > options.cap) {
        throw LimitExceeded("set-model cap on n", options.cap, n, "--set-model-cap");
    }
    PiResult result{n, 0, Method::SetModel, {}};
    if (n == 0) {
        return result;
    }

    const Natural union_size = union_x(n).size();

    InclusionExclusionWalk walk(n, options.mode);
    const SubtreeTotals totals = walk.run();
    // |X| = sum over tuples of (-1)^(s+1) |intersection| = -signed_sum
    const std::int64_t ie_size = -totals.signed_sum;
    if (ie_size != to_signed(union_size)) {
        throw std::logic_error("set model disagrees with itself at n = " + std::to_string(n) + ": |union| = " +
                               std::to_string(union_size) + ", inclusion-exclusion = " + std::to_string(ie_size));
    }

    result.pi = checked_sub(n - 1, union_size);
    result.stats.terms_visited = totals.tuples;
    result.stats.nonzero_terms = totals.nonzero;
    result.stats.subtrees_pruned = totals.pruned;
    result.stats.max_lcm_retained = walk.max_lcm();
    result.stats.states_expanded = walk.states_expanded();
    result.stats.elapsed = Clock::now() - start;
    return result;
}

std::string render_grid(Natural n) {
    if (n < 1 || n > kGridMaxN) {
        throw LimitExceeded("grid size guard", kGridMaxN, n, "");
    }
    const std::size_t width = std::to_string(n).size();
    auto pad = [width](const std::string& s) { return std::string(width - s.size(), ' ') + s; };

    std::vector<std::string> lines;
    lines.push_back(pad("j"));
    for (Natural j = n; j >= 1; --j) {
        std::string line = pad(std::to_string(j)) + " |";
        for (Natural i = 1; i * j <= n; ++i) {
            const bool marked = i >= 2 && j >= i;
            line += ' ' + pad(std::to_string(i * j)) + (marked ? '*' : ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        lines.push_back(std::move(line));
    }
    std::string axis = std::string(width, ' ') + " +";
    std::string labels = std::string(width, ' ') + "  ";
    for (Natural i = 1; i <= n; ++i) {
        axis += std::string(width + 2, '-');
        labels += ' ' + pad(std::to_string(i)) + ' ';
    }
    lines.push_back(std::move(axis));
    lines.push_back(labels + " i");
    lines.push_back("(* marks i*j with j >= i, the members of X_i)");

    std::string out;
    for (const std::string& line : lines) {
        out += line;
        out += '\n';
    }
    return out;
}

} // namespace pcf
