#include "pcf/harness.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

namespace pcf {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

json methods_json(std::span<const Method> methods) {
    json out = json::array();
    for (Method m : methods) out.push_back(std::string(method_name(m)));
    return out;
}

json tally_json(const IdentityTally& t) { return json{{"run", t.run}, {"failed", t.failed}}; }

std::string environment_note() {
    std::ostringstream out;
#if defined(__clang__)
    out << "clang " << __clang_major__ << '.' << __clang_minor__;
#elif defined(__GNUC__)
    out << "gcc " << __GNUC__ << '.' << __GNUC_MINOR__;
#else
    out << "unknown compiler";
#endif
#ifdef NDEBUG
    out << ", optimized";
#else
    out << ", debug";
#endif
    out << ", " << std::thread::hardware_concurrency() << " hardware threads";
    return out.str();
}

void record_identity(VerifyReport& report, IdentityTally& tally, IdentityReport result) {
    ++tally.run;
    if (!result.pass()) {
        ++tally.failed;
        if (report.identity_failures.size() < VerifyReport::kMaxRecordedFailures) {
            report.identity_failures.push_back(std::move(result));
        }
    }
}

} // namespace

std::optional<std::string> infeasibility(Method method, Natural n, const Limits& limits) {
    if (n > kMaxAcceptedN) {
        return "n above the maximum accepted n " + std::to_string(kMaxAcceptedN);
    }
    switch (method) {
    case Method::FormulaNaive:
        if (n != 0 && isqrt(n) > limits.naive_cap) {
            return "isqrt(n) above naive cap " + std::to_string(limits.naive_cap) + " (raise with --naive-cap)";
        }
        break;
    case Method::SetModel:
        if (n > limits.set_model_cap) {
            return "n above set-model cap " + std::to_string(limits.set_model_cap) + " (raise with --set-model-cap)";
        }
        break;
    case Method::Sieve:
        if (n > limits.sieve_limit) {
            return "n above sieve limit " + std::to_string(limits.sieve_limit) + " (raise with --sieve-limit)";
        }
        break;
    case Method::FormulaPruned:
        break;
    }
    return std::nullopt;
}

PiResult compute_pi(Method method, Natural n, const Limits& limits) {
    switch (method) {
    case Method::FormulaNaive:
        return pi_formula_naive(n, NaiveOptions{limits.naive_cap});
    case Method::FormulaPruned:
        return pi_formula_pruned(n);
    case Method::SetModel:
        return pi_set_model(n, SetModelOptions{limits.set_model_cap, WalkMode::SharedSubtrees});
    case Method::Sieve: {
        const auto start = Clock::now();
        const SieveTable table = build_sieve(n, limits.sieve_limit);
        PiResult result{n, pi_sieve(table, n), Method::Sieve, {}};
        result.stats.elapsed = Clock::now() - start;
        return result;
    }
    }
    throw InvalidArgument("unknown method");
}

std::uint64_t draw_uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi) {
        throw InvalidArgument("draw_uniform: empty range");
    }
    const std::uint64_t span = hi - lo;
    if (span == ~std::uint64_t{0}) {
        return rng();
    }
    const std::uint64_t range = span + 1;
    // Reject the tail so every residue is equally likely.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return lo + x % range;
}

IndexTuple draw_tuple(std::mt19937_64& rng, Natural n) {
    const Natural root = isqrt(n);
    if (root < 2) {
        throw InvalidArgument("draw_tuple: no valid tuples for n = " + std::to_string(n));
    }
    std::vector<Natural> pool(static_cast<std::size_t>(root - 1));
    for (std::size_t k = 0; k < pool.size(); ++k) pool[k] = static_cast<Natural>(k) + 2;
    const std::size_t length = draw_uniform(rng, 1, pool.size());
    for (std::size_t k = 0; k < length; ++k) {
        std::swap(pool[k], pool[draw_uniform(rng, k, pool.size() - 1)]);
    }
    pool.resize(length);
    std::sort(pool.begin(), pool.end());
    return IndexTuple{std::move(pool)};
}

VerifyReport verify_sweep(Natural lo, Natural hi, std::span<const Method> methods, std::uint64_t seed,
                          std::uint64_t random_identity_cases, const Limits& limits) {
    if (lo > hi) {
        throw InvalidArgument("verify_sweep: lo " + std::to_string(lo) + " > hi " + std::to_string(hi));
    }
    if (methods.empty()) {
        throw InvalidArgument("verify_sweep: no methods selected");
    }
    const auto start = Clock::now();
    VerifyReport report;
    report.lo = lo;
    report.hi = hi;
    report.methods.assign(methods.begin(), methods.end());
    report.seed = seed;

    const SieveTable sieve = build_sieve(hi, limits.sieve_limit);
    for (Method method : methods) {
        std::optional<SkipNote> open_skip;
        auto close_skip = [&] {
            if (open_skip) report.skipped.push_back(std::move(*open_skip));
            open_skip.reset();
        };
        for (Natural n = lo;; ++n) {
            if (auto reason = infeasibility(method, n, limits)) {
                if (open_skip && open_skip->reason == *reason) {
                    open_skip->to_n = n;
                } else {
                    close_skip();
                    open_skip = SkipNote{method, n, n, *reason};
                }
            } else {
                close_skip();
                const Natural expected = pi_sieve(sieve, n);
                const Natural got = compute_pi(method, n, limits).pi;
                ++report.evaluations;
                if (got != expected) {
                    report.mismatches.push_back({n, method, got, expected});
                }
            }
            if (n == hi) break;
        }
        close_skip();
    }

    std::mt19937_64 rng(seed);
    for (std::uint64_t c = 0; c < random_identity_cases; ++c) {
        const Natural n = draw_uniform(rng, 4, kIdentityCaseMaxN);
        const IndexTuple tuple = draw_tuple(rng, n);
        record_identity(report, report.statement, verify_statement(n, tuple));
        record_identity(report, report.difference, verify_difference_identity(n, tuple));
        record_identity(report, report.y_lcm, verify_y_lcm_identity(n, tuple));
    }

    report.elapsed = Clock::now() - start;
    return report;
}

BenchReport bench_run(std::span<const Natural> n_values, std::span<const Method> methods,
                      std::uint64_t repetitions, const Limits& limits) {
    if (repetitions < 1) {
        throw InvalidArgument("bench_run: repetitions must be >= 1");
    }
    BenchReport report;
    report.repetitions = repetitions;
    report.environment = environment_note();

    for (Natural n : n_values) {
        for (Method method : methods) {
            BenchEntry entry;
            entry.n = n;
            entry.method = method;
            if (auto reason = infeasibility(method, n, limits)) {
                entry.skipped = std::move(reason);
                report.entries.push_back(std::move(entry));
                continue;
            }
            for (std::uint64_t rep = 0; rep < repetitions; ++rep) {
                const auto start = Clock::now();
                PiResult result = compute_pi(method, n, limits);
                const auto elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
                if (rep == 0 || elapsed < entry.best) {
                    entry.best = elapsed;
                    entry.stats = result.stats;
                }
                if (entry.pi && *entry.pi != result.pi) {
                    throw std::logic_error("bench_run: " + std::string(method_name(method)) +
                                           " is not deterministic at n = " + std::to_string(n));
                }
                entry.pi = result.pi;
            }
            report.entries.push_back(std::move(entry));
        }
    }

    std::sort(report.entries.begin(), report.entries.end(), [](const BenchEntry& a, const BenchEntry& b) {
        return std::pair(a.n, a.method) < std::pair(b.n, b.method);
    });

    std::map<Natural, std::set<Natural>> seen;
    for (const BenchEntry& e : report.entries) {
        if (e.pi) seen[e.n].insert(*e.pi);
    }
    for (const auto& [n, values] : seen) {
        if (values.size() > 1) report.disagreements.push_back(n);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Serialization

json to_json(const EvaluationStats& stats) {
    return json{
        {"terms_visited", to_decimal(stats.terms_visited)},
        {"nonzero_terms", to_decimal(stats.nonzero_terms)},
        {"subtrees_pruned", to_decimal(stats.subtrees_pruned)},
        {"max_lcm_retained", stats.max_lcm_retained},
        {"states_expanded", stats.states_expanded},
        {"elapsed_ns", stats.elapsed.count()},
    };
}

json to_json(const PiResult& result) {
    return json{
        {"n", result.n},
        {"pi", result.pi},
        {"method", std::string(method_name(result.method))},
        {"stats", to_json(result.stats)},
    };
}

json to_json(const TermRecord& record) {
    json indices = json::array();
    for (Natural i : record.tuple.indices()) indices.push_back(i);
    return json{
        {"tuple", std::move(indices)},
        {"s", record.tuple.size()},
        {"sign", record.sign},
        {"lcm", record.lcm},
        {"value", record.value},
    };
}

json to_json(const IdentityReport& report) {
    json indices = json::array();
    for (Natural i : report.tuple.indices()) indices.push_back(i);
    return json{
        {"identity", std::string(identity_name(report.kind))},
        {"n", report.n},
        {"tuple", std::move(indices)},
        {"lhs", report.lhs},
        {"rhs", report.rhs},
        {"pass", report.pass()},
    };
}

json to_json(const VerifyReport& report) {
    json mismatches = json::array();
    for (const Mismatch& m : report.mismatches) {
        mismatches.push_back(json{{"n", m.n},
                                  {"method", std::string(method_name(m.method))},
                                  {"got", m.got},
                                  {"expected", m.expected}});
    }
    json skipped = json::array();
    for (const SkipNote& s : report.skipped) {
        skipped.push_back(json{{"method", std::string(method_name(s.method))},
                               {"from_n", s.from_n},
                               {"to_n", s.to_n},
                               {"reason", s.reason}});
    }
    json failures = json::array();
    for (const IdentityReport& f : report.identity_failures) failures.push_back(to_json(f));

    return json{
        {"kind", "verify"},
        {"version", kReportVersion},
        {"range", json::array({report.lo, report.hi})},
        {"methods", methods_json(report.methods)},
        {"seed", report.seed},
        {"evaluations", report.evaluations},
        {"mismatches", std::move(mismatches)},
        {"skipped", std::move(skipped)},
        {"identity_checks",
         json{{"statement", tally_json(report.statement)},
              {"difference", tally_json(report.difference)},
              {"y_lcm", tally_json(report.y_lcm)}}},
        {"identity_failures", std::move(failures)},
        {"pass", report.passed()},
        {"elapsed_ns", report.elapsed.count()},
    };
}

json to_json(const BenchReport& report) {
    json entries = json::array();
    for (const BenchEntry& e : report.entries) {
        json entry{
            {"n", e.n},
            {"method", std::string(method_name(e.method))},
        };
        if (e.skipped) {
            entry["skipped"] = *e.skipped;
        } else {
            entry["pi"] = *e.pi;
            entry["elapsed_ns"] = e.best.count();
            entry["stats"] = to_json(e.stats);
        }
        entries.push_back(std::move(entry));
    }
    return json{
        {"kind", "bench"},
        {"version", kReportVersion},
        {"repetitions", report.repetitions},
        {"entries", std::move(entries)},
        {"consistent", report.consistent()},
        {"disagreements", report.disagreements},
        {"environment", report.environment},
    };
}

std::string to_csv(const BenchReport& report) {
    std::string out = "n,method,pi,elapsed_ns,terms_visited,nonzero_terms,subtrees_pruned\n";
    for (const BenchEntry& e : report.entries) {
        out += std::to_string(e.n) + ',' + std::string(method_name(e.method)) + ',';
        if (e.skipped) {
            out += "skipped,,,,\n";
            continue;
        }
        out += std::to_string(*e.pi) + ',' + std::to_string(e.best.count()) + ',' +
               to_decimal(e.stats.terms_visited) + ',' + to_decimal(e.stats.nonzero_terms) + ',' +
               to_decimal(e.stats.subtrees_pruned) + '\n';
    }
    return out;
}

} // namespace pcf
