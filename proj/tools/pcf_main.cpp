// pcf: command-line front end for the explicit prime-counting formula.
//
// Exit status: 0 success / verification passed, 1 verification mismatch,
// 2 usage error or a method refusing n (cap, guard).

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"

#include "pcf/formula.hpp"
#include "pcf/harness.hpp"
#include "pcf/set_model.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

constexpr const char* kGuardEnv = "PCF_MAX_N";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

pcf::Natural parse_natural(std::string_view text, std::string_view what) {
    pcf::Natural value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (text.empty() || text.front() < '0' || text.front() > '9') {
        throw UsageError(std::string(what) + ": expected a decimal natural number, got '" + std::string(text) + "'");
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range) {
        throw UsageError(std::string(what) + ": '" + std::string(text) + "' is out of range");
    }
    if (ec != std::errc{} || ptr != last) {
        throw UsageError(std::string(what) + ": expected a decimal natural number, got '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) throw UsageError("empty item in list '" + text + "'");
        out.push_back(item);
    }
    if (out.empty()) throw UsageError("list must not be empty");
    return out;
}

std::vector<pcf::Method> parse_methods(const std::string& text) {
    std::vector<pcf::Method> out;
    for (const std::string& name : split_list(text)) {
        auto m = pcf::parse_method(name);
        if (!m) throw UsageError("unknown method '" + name + "' (expected naive, pruned, set-model, sieve)");
        out.push_back(*m);
    }
    return out;
}

struct Globals {
    std::string n_guard;
    std::string naive_cap;
    std::string set_model_cap;
    std::string sieve_limit;
    std::string seed = "1";
    std::string format;
    bool quiet = false;

    pcf::Natural guard = pcf::kMaxAcceptedN;
    pcf::Limits limits;

    void resolve() {
        std::string guard_text = n_guard;
        if (guard_text.empty()) {
            if (const char* env = std::getenv(kGuardEnv)) guard_text = env;
        }
        if (!guard_text.empty()) {
            guard = parse_natural(guard_text, "--n-guard");
            if (guard > pcf::kMaxAcceptedN) {
                throw UsageError("--n-guard cannot exceed " + std::to_string(pcf::kMaxAcceptedN));
            }
        }
        if (!naive_cap.empty()) limits.naive_cap = parse_natural(naive_cap, "--naive-cap");
        if (!set_model_cap.empty()) limits.set_model_cap = parse_natural(set_model_cap, "--set-model-cap");
        if (!sieve_limit.empty()) limits.sieve_limit = parse_natural(sieve_limit, "--sieve-limit");
    }

    pcf::Natural parse_n(std::string_view text, std::string_view what) const {
        const pcf::Natural n = parse_natural(text, what);
        if (n > guard) {
            throw UsageError(std::string(what) + " = " + std::to_string(n) + " is above the n guard " +
                             std::to_string(guard) + " (set --n-guard or " + kGuardEnv + ")");
        }
        return n;
    }

    std::string format_or(std::string_view fallback, std::initializer_list<std::string_view> allowed) const {
        const std::string chosen = format.empty() ? std::string(fallback) : format;
        for (std::string_view a : allowed) {
            if (a == chosen) return chosen;
        }
        throw UsageError("--format " + chosen + " is not supported by this command");
    }

    std::ostream& note() const {
        static std::ostream null_stream(nullptr);
        return quiet ? null_stream : std::cerr;
    }
};

void write_output(const std::string& path, const std::string& payload) {
    if (path.empty() || path == "-") {
        std::cout << payload;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot open output file '" + path + "'");
    out << payload;
}

// ---------------------------------------------------------------------------

int run_pi(const Globals& g, const std::string& n_text, const std::string& method_text, bool with_stats) {
    const pcf::Natural n = g.parse_n(n_text, "n");
    const auto method = pcf::parse_method(method_text);
    if (!method) throw UsageError("unknown method '" + method_text + "'");
    const std::string format = g.format_or("text", {"text", "json"});

    const pcf::PiResult result = pcf::compute_pi(*method, n, g.limits);
    if (format == "json") {
        std::cout << pcf::to_json(result).dump() << '\n';
    } else {
        std::cout << result.pi << '\n';
        if (with_stats) std::cout << pcf::to_json(result.stats).dump() << '\n';
    }
    return kExitOk;
}

std::string csv_tuple(const pcf::IndexTuple& t) { return '"' + t.to_string() + '"'; }

int run_terms(const Globals& g, const std::string& n_text, bool nonzero_only, const std::string& limit_text) {
    const pcf::Natural n = g.parse_n(n_text, "n");
    const std::string format = g.format_or("text", {"text", "csv", "json"});
    const pcf::Natural limit =
        limit_text.empty() ? std::numeric_limits<pcf::Natural>::max() : parse_natural(limit_text, "--limit");

    pcf::TermStream stream = pcf::enumerate_terms(n, nonzero_only);
    if (format == "csv") std::cout << "tuple,s,sign,lcm,value\n";
    if (format == "json") std::cout << '[';

    pcf::Natural emitted = 0;
    bool truncated = false;
    for (const pcf::TermRecord& r : stream) {
        if (emitted == limit) {
            truncated = true;
            break;
        }
        const char sign = r.sign > 0 ? '+' : '-';
        if (format == "csv") {
            std::cout << csv_tuple(r.tuple) << ',' << r.tuple.size() << ',' << sign << ',' << r.lcm << ','
                      << r.value << '\n';
        } else if (format == "json") {
            std::cout << (emitted == 0 ? "" : ",") << pcf::to_json(r).dump();
        } else {
            std::cout << r.tuple.to_string() << '\t' << "s=" << r.tuple.size() << '\t' << sign << '\t'
                      << "lcm=" << r.lcm << '\t' << r.value << '\n';
        }
        ++emitted;
    }
    if (format == "json") std::cout << "]\n";
    if (truncated) g.note() << "stopped after " << emitted << " terms (--limit)\n";
    return kExitOk;
}

int run_grid(const Globals& g, const std::string& n_text) {
    const pcf::Natural n = g.parse_n(n_text, "n");
    g.format_or("text", {"text"});
    std::cout << pcf::render_grid(n);
    return kExitOk;
}

int run_verify(const Globals& g, const std::string& min_text, const std::string& max_text,
               const std::string& methods_text, const std::string& cases_text, const std::string& output) {
    const pcf::Natural lo = g.parse_n(min_text, "--min-n");
    const pcf::Natural hi = g.parse_n(max_text, "--max-n");
    if (hi < 1) throw UsageError("--max-n must be at least 1");
    if (lo > hi) throw UsageError("--min-n must not exceed --max-n");
    const std::vector<pcf::Method> methods = parse_methods(methods_text);
    const pcf::Natural cases = parse_natural(cases_text, "--identity-cases");
    const std::uint64_t seed = parse_natural(g.seed, "--seed");
    g.format_or("json", {"json"});

    const pcf::VerifyReport report = pcf::verify_sweep(lo, hi, methods, seed, cases, g.limits);
    write_output(output, pcf::to_json(report).dump(2) + '\n');

    g.note() << (report.passed() ? "PASS" : "FAIL") << ": n in [" << lo << ", " << hi << "], "
             << report.evaluations << " evaluations, " << report.mismatches.size() << " mismatches, "
             << report.statement.run << " identity cases ("
             << report.statement.failed + report.difference.failed + report.y_lcm.failed << " failed)\n";
    for (const pcf::SkipNote& s : report.skipped) {
        g.note() << "skipped " << pcf::method_name(s.method) << " for n in [" << s.from_n << ", " << s.to_n
                 << "]: " << s.reason << '\n';
    }
    return report.passed() ? kExitOk : kExitMismatch;
}

int run_bench(const Globals& g, const std::string& n_list, const std::string& methods_text,
              const std::string& reps_text, const std::string& output) {
    std::vector<pcf::Natural> n_values;
    for (const std::string& item : split_list(n_list)) n_values.push_back(g.parse_n(item, "--n-list"));
    const std::vector<pcf::Method> methods = parse_methods(methods_text);
    const pcf::Natural reps = parse_natural(reps_text, "--reps");
    if (reps < 1) throw UsageError("--reps must be at least 1");
    const std::string format = g.format_or("json", {"json", "csv"});

    const pcf::BenchReport report = pcf::bench_run(n_values, methods, reps, g.limits);
    write_output(output, format == "csv" ? pcf::to_csv(report) : pcf::to_json(report).dump(2) + '\n');

    for (const pcf::BenchEntry& e : report.entries) {
        if (e.skipped) g.note() << "skipped " << pcf::method_name(e.method) << " at n = " << e.n << ": " << *e.skipped << '\n';
    }
    if (!report.consistent()) {
        std::cerr << "methods disagree on pi for " << report.disagreements.size() << " value(s) of n\n";
        return kExitMismatch;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prime counting via the explicit inclusion-exclusion formula over index tuples."};
    app.require_subcommand(1);
    app.fallthrough();
    app.footer(std::string("Environment:\n  ") + kGuardEnv +
               "  default for --n-guard (largest n accepted; at most 2^62)\n\n"
               "Exit status: 0 ok, 1 verification mismatch, 2 usage error or refused n.");

    Globals g;
    app.add_option("--n-guard", g.n_guard, "Largest n accepted by any command (lower than 2^62 only)");
    app.add_option("--naive-cap", g.naive_cap, "Largest isqrt(n) the naive evaluator accepts (default 25)");
    app.add_option("--set-model-cap", g.set_model_cap, "Largest n the set model accepts (default 100000)");
    app.add_option("--sieve-limit", g.sieve_limit, "Largest sieve the oracle builds (default 100000000)");
    app.add_option("--seed", g.seed, "Seed for randomized identity cases (default 1)");
    app.add_option("--format", g.format, "Output format: text, csv or json (support varies by command)");
    app.add_flag("--quiet,-q", g.quiet, "Suppress diagnostic chatter on stderr");

    std::string pi_n, pi_method = "pruned";
    bool pi_stats = false;
    auto* pi = app.add_subcommand("pi", "Print pi(n)");
    pi->add_option("n", pi_n, "Upper bound n")->required();
    pi->add_option("--method", pi_method, "pruned | naive | set-model | sieve");
    pi->add_flag("--stats", pi_stats, "Also print evaluation counters as JSON");

    std::string terms_n, terms_limit;
    bool terms_nonzero = false;
    auto* terms = app.add_subcommand("terms", "List formula terms in depth-first tuple order");
    terms->add_option("n", terms_n, "Upper bound n")->required();
    terms->add_flag("--nonzero-only", terms_nonzero, "Omit terms whose value is 0");
    terms->add_option("--limit", terms_limit, "Stop after this many terms");

    std::string grid_n;
    auto* grid = app.add_subcommand("grid", "Draw the multiplication grid with X_i members marked");
    grid->add_option("n", grid_n, "Upper bound n (at most 200)")->required();

    std::string verify_min = "1", verify_max, verify_methods = "pruned,set-model", verify_cases = "1000",
                verify_output;
    auto* verify = app.add_subcommand("verify", "Sweep n against the sieve and check the set identities");
    verify->add_option("--min-n", verify_min, "Sweep start (default 1)");
    verify->add_option("--max-n", verify_max, "Sweep end")->required();
    verify->add_option("--methods", verify_methods, "Comma-separated methods (default pruned,set-model)");
    verify->add_option("--identity-cases", verify_cases, "Randomized identity cases (default 1000)");
    verify->add_option("--output", verify_output, "Write the JSON report here instead of stdout");

    std::string bench_n_list, bench_methods = "pruned,sieve", bench_reps = "3", bench_output;
    auto* bench = app.add_subcommand("bench", "Time evaluators, best of --reps");
    bench->add_option("--n-list", bench_n_list, "Comma-separated n values")->required();
    bench->add_option("--methods", bench_methods, "Comma-separated methods (default pruned,sieve)");
    bench->add_option("--reps", bench_reps, "Repetitions per (n, method) (default 3)");
    bench->add_option("--output", bench_output, "Write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        g.resolve();
        if (*pi) return run_pi(g, pi_n, pi_method, pi_stats);
        if (*terms) return run_terms(g, terms_n, terms_nonzero, terms_limit);
        if (*grid) return run_grid(g, grid_n);
        if (*verify) return run_verify(g, verify_min, verify_max, verify_methods, verify_cases, verify_output);
        if (*bench) return run_bench(g, bench_n_list, bench_methods, bench_reps, bench_output);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const pcf::LimitExceeded& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kExitUsage;
    } catch (const pcf::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitMismatch;
    }
    return kExitUsage;
}
