#include "doctest.h"

#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "pcf/set_model.hpp"

using namespace pcf;

namespace {

using Elements = std::vector<Natural>;

struct Cell {
    Natural value;
    bool marked;
};

// Parses render_grid output back into (i, j) -> cell.
std::map<std::pair<Natural, Natural>, Cell> parse_grid(const std::string& text, Natural n) {
    const std::size_t width = std::to_string(n).size();
    std::map<std::pair<Natural, Natural>, Cell> cells;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line); // "j" header
    for (Natural j = n; j >= 1; --j) {
        REQUIRE(std::getline(in, line));
        const std::size_t bar = line.find('|');
        REQUIRE(bar != std::string::npos);
        CHECK(std::stoull(line.substr(0, bar)) == j);
        const std::string body = line.substr(bar + 1);
        for (std::size_t k = 0; k * (width + 2) < body.size(); ++k) {
            const std::string cell = body.substr(k * (width + 2), width + 2);
            const std::string digits = cell.substr(1, width);
            if (digits.find_first_not_of(' ') == std::string::npos) continue;
            cells[{k + 1, j}] = Cell{std::stoull(digits), cell.size() == width + 2 && cell.back() == '*'};
        }
    }
    return cells;
}

} // namespace

TEST_CASE("build_x / build_y: worked sets") {
    CHECK(build_x(11, 2).elements == Elements{4, 6, 8, 10});
    CHECK(build_x(11, 3).elements == Elements{9});
    CHECK(build_x(11, 4).elements.empty());
    CHECK(build_x(11, 2).kind == ColumnKind::X);
    CHECK(build_y(11, 2).elements == Elements{2, 4, 6, 8, 10});
    CHECK(build_y(11, 3).elements == Elements{3, 6, 9});
    CHECK(build_y(8, 3).elements == Elements{3, 6});
    CHECK(build_y(3, 2).elements == Elements{2});
    CHECK(build_y(0, 2).elements.empty());
    CHECK(build_y(8, 3).kind == ColumnKind::Y);
    CHECK_THROWS_AS(build_x(11, 1), InvalidArgument);
    CHECK_THROWS_AS(build_y(11, 0), InvalidArgument);
}

TEST_CASE("X_i is contained in Y_i and differs by the below-diagonal entries") {
    for (Natural n = 1; n <= 300; ++n) {
        for (Natural i = 2; i <= 40; ++i) {
            const Elements x = build_x(n, i).elements;
            const Elements y = build_y(n, i).elements;
            REQUIRE(std::includes(y.begin(), y.end(), x.begin(), x.end()));
            Elements diff;
            std::set_difference(y.begin(), y.end(), x.begin(), x.end(), std::back_inserter(diff));
            Elements expected;
            for (Natural j = 1; j < i && i * j <= n; ++j) expected.push_back(i * j);
            REQUIRE(diff == expected);
            if (i > isqrt(n)) REQUIRE(x.empty());
        }
    }
}

TEST_CASE("union_x is the composite set") {
    CHECK(union_x(11) == Elements{4, 6, 8, 9, 10});
    CHECK(union_x(3).empty());
    CHECK(union_x(1).empty());
    CHECK(union_x(16) == Elements{4, 6, 8, 9, 10, 12, 14, 15, 16});
    for (Natural n = 1; n <= 500; ++n) {
        Elements composites;
        for (Natural k = 2; k <= n; ++k) {
            if (!oracle::is_prime(k)) composites.push_back(k);
        }
        REQUIRE(union_x(n) == composites);
    }
}

TEST_CASE("intersect_x_explicit") {
    CHECK(intersect_x_explicit(11, {2, 3}) == 0);
    CHECK(intersect_x_explicit(36, {2, 3}) == 5);
    CHECK(intersect_x_explicit(36, {4}) == build_x(36, 4).elements.size());
    CHECK_THROWS_AS(intersect_x_explicit(11, {2, 4}), InvalidArgument);
    for (Natural n = 4; n <= 64; ++n) {
        for (const auto& t : oracle::all_tuples(isqrt(n))) {
            REQUIRE(intersect_x_explicit(n, IndexTuple{t}) == oracle::x_intersection(n, t));
        }
    }
}

TEST_CASE("identity checks: worked examples") {
    const IdentityReport s1 = verify_statement(11, {2, 3});
    CHECK(s1.lhs == 0);
    CHECK(s1.rhs == 0);
    CHECK(s1.pass());
    const IdentityReport s2 = verify_statement(11, {2});
    CHECK(s2.lhs == 4);
    CHECK(s2.rhs == 4);
    CHECK(s2.pass());

    // |Y(11)| = |{6}| = 1, |Y(8)| = |{6}| = 1
    const IdentityReport d = verify_difference_identity(11, {2, 3});
    CHECK(d.lhs == 0);
    CHECK(d.rhs == 0);
    CHECK(d.pass());
    CHECK(verify_difference_identity(49, {7}).pass());

    const IdentityReport y1 = verify_y_lcm_identity(11, {2, 3});
    CHECK(y1.lhs == 1);
    CHECK(y1.rhs == 1);
    const IdentityReport y2 = verify_y_lcm_identity(11, {2});
    CHECK(y2.lhs == 5);
    CHECK(y2.rhs == 5);
    const IdentityReport y3 = verify_y_lcm_identity(60, {2, 3, 5});
    CHECK(y3.lhs == 2);
    CHECK(y3.rhs == 2);
    // Y-sets need no isqrt bound
    CHECK(verify_y_lcm_identity(10, {7, 9}).pass());
    CHECK(verify_y_lcm_identity(0, {2}).pass());

    CHECK_THROWS_AS(verify_statement(11, {2, 4}), InvalidArgument);
    CHECK_THROWS_AS(verify_difference_identity(11, {4}), InvalidArgument);
}

TEST_CASE("identity checks: randomized n <= 500") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 2000; ++k) {
        const Natural n = rng() % 497 + 4;
        std::vector<Natural> t;
        for (Natural i = 2; i <= isqrt(n); ++i) {
            if (rng() % 2) t.push_back(i);
        }
        if (t.empty()) t.push_back(2);
        const IndexTuple tuple{t};
        REQUIRE(verify_statement(n, tuple).pass());
        REQUIRE(verify_difference_identity(n, tuple).pass());
        const IdentityReport y = verify_y_lcm_identity(n, tuple);
        REQUIRE(y.pass());
        REQUIRE(y.lhs == static_cast<std::int64_t>(oracle::y_intersection(n, t)));
    }
}

TEST_CASE("induction base: |Y_i(b)| = floor(b / i)") {
    for (Natural i = 2; i <= 50; ++i) {
        for (Natural b = 0; b <= 2000; ++b) {
            REQUIRE(build_y(b, i).elements.size() == b / i);
        }
    }
}

TEST_CASE("pi_set_model") {
    CHECK(pi_set_model(11).pi == 5);
    CHECK(pi_set_model(11).method == Method::SetModel);
    CHECK(pi_set_model(1).pi == 0);
    CHECK(pi_set_model(0).pi == 0);
    CHECK(pi_set_model(1000).pi == 168);
    try {
        pi_set_model(100001);
        FAIL("expected refusal");
    } catch (const LimitExceeded& e) {
        CHECK(e.override_hint() == "--set-model-cap");
    }
    CHECK(pi_set_model(500, SetModelOptions{600, WalkMode::Literal}).pi == 95);
    CHECK_THROWS_AS(pi_set_model(500, SetModelOptions{400, WalkMode::Literal}), LimitExceeded);
}

TEST_CASE("set model walks the same tuples as the pruned evaluator") {
    for (Natural n = 1; n <= 400; ++n) {
        const PiResult literal = pi_set_model(n, SetModelOptions{kDefaultSetModelCap, WalkMode::Literal});
        const PiResult shared = pi_set_model(n);
        const PiResult pruned = pi_formula_pruned(n);
        REQUIRE(literal.pi == pruned.pi);
        REQUIRE(shared.pi == pruned.pi);
        REQUIRE(literal.stats.same_counts(pruned.stats));
        REQUIRE(shared.stats.same_counts(pruned.stats));
    }
    for (Natural n : {1024, 2000, 5000}) {
        REQUIRE(pi_set_model(n).stats.same_counts(pi_formula_pruned(n).stats));
    }
}

TEST_CASE("render_grid") {
    SUBCASE("n = 11 grid layout") {
        const auto cells = parse_grid(render_grid(11), 11);
        Elements column2;
        Elements marked2;
        for (Natural j = 1; j <= 11; ++j) {
            auto it = cells.find({2, j});
            if (it == cells.end()) continue;
            column2.push_back(it->second.value);
            if (it->second.marked) marked2.push_back(it->second.value);
        }
        CHECK(column2 == Elements{2, 4, 6, 8, 10});
        CHECK(marked2 == Elements{4, 6, 8, 10});
        CHECK(cells.at({3, 3}).value == 9);
        CHECK(cells.at({3, 3}).marked);
        CHECK_FALSE(cells.at({3, 2}).marked);
        CHECK(cells.at({11, 1}).value == 11);
        CHECK(cells.at({1, 11}).value == 11);
        for (const auto& [pos, cell] : cells) {
            CHECK(cell.value == pos.first * pos.second);
            CHECK(cell.marked == (pos.first >= 2 && pos.second >= pos.first));
        }
    }
    SUBCASE("n = 4: only 4 is marked") {
        const auto cells = parse_grid(render_grid(4), 4);
        int marked = 0;
        for (const auto& [pos, cell] : cells) {
            if (cell.marked) {
                ++marked;
                CHECK(cell.value == 4);
                CHECK(pos.first == 2);
            }
        }
        CHECK(marked == 1);
    }
    SUBCASE("n = 25: column 5 marks exactly 25") {
        const auto cells = parse_grid(render_grid(25), 25);
        Elements marked5;
        for (const auto& [pos, cell] : cells) {
            if (pos.first == 5 && cell.marked) marked5.push_back(cell.value);
        }
        CHECK(marked5 == Elements{25});
    }
    SUBCASE("readability guard") {
        CHECK_NOTHROW(render_grid(200));
        CHECK_THROWS_AS(render_grid(201), LimitExceeded);
        CHECK_THROWS_AS(render_grid(0), LimitExceeded);
    }
}
