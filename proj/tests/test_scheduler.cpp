#include "doctest.h"

#include "confl/scheduler.hpp"
#include "helpers.hpp"

using namespace confl;
using namespace confl::testing;

namespace {

// matrix builder: mark strategy s as solving problem p in `millis`
struct MatrixBuilder {
    EvalMatrix m;
    MatrixBuilder& solves(const std::string& s, const std::string& p, long millis) {
        m.insert(s, p, {Answer::Yes, millis, 1});
        return *this;
    }
};

// exhaustive optimum over all strategy-per-split assignments (coverage is
// order-independent, so functions from splits to strategies suffice)
std::size_t exhaustive_optimum(const EvalMatrix& m, const std::vector<std::string>& strategies,
                               const std::vector<double>& splits,
                               const std::vector<std::string>& problems) {
    std::size_t best = 0;
    std::vector<std::size_t> pick(splits.size(), 0);
    for (;;) {
        Schedule sched;
        for (std::size_t i = 0; i < splits.size(); ++i)
            sched.push_back({strategies[pick[i]], splits[i]});
        best = std::max(best, schedule_coverage(sched, m, problems));
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
            if (++pick[i] < strategies.size()) break;
            pick[i] = 0;
        }
        if (i == pick.size()) return best;
    }
}

}  // namespace

TEST_CASE("greedy allocation over ordered splits") {
    MatrixBuilder b;
    b.solves("A", "p1", 500).solves("A", "p2", 500);
    b.solves("B", "p2", 800).solves("B", "p3", 800);
    b.solves("C", "p3", 900);
    std::vector<std::string> strategies = {"A", "B", "C"};
    std::vector<std::string> problems = {"p1", "p2", "p3"};

    Schedule s = greedy_schedule(b.m, strategies, {1.0, 1.0}, problems);
    REQUIRE(s.size() == 2);
    CHECK(s[0].strategy == "A");  // ties break to the lower index
    CHECK(s[1].strategy == "B");
    CHECK(schedule_coverage(s, b.m, problems) == 3);
}

TEST_CASE("single split, single strategy") {
    MatrixBuilder b;
    b.solves("A", "p1", 100);
    Schedule s = greedy_schedule(b.m, {"A"}, {60.0}, {"p1"});
    REQUIRE(s.size() == 1);
    CHECK(s[0].strategy == "A");
}

TEST_CASE("no credit beyond the split") {
    MatrixBuilder b;
    b.solves("A", "p1", 5000);  // five seconds
    CHECK_FALSE(solves_within(b.m, "A", "p1", 1.0));
    CHECK(solves_within(b.m, "A", "p1", 5.0));
    Schedule s = greedy_schedule(b.m, {"A"}, {1.0}, {"p1"});
    CHECK(schedule_coverage(s, b.m, {"p1"}) == 0);
}

TEST_CASE("best_schedule with a single full-budget pattern picks the best strategy") {
    MatrixBuilder b;
    b.solves("A", "p1", 100);
    b.solves("B", "p1", 100).solves("B", "p2", 100);
    Rng rng(1);
    Schedule s = best_schedule(b.m, {"A", "B"}, {{60.0}}, 10, {"p1", "p2"}, rng);
    REQUIRE(s.size() == 1);
    CHECK(s[0].strategy == "B");
    CHECK(schedule_coverage(s, b.m, {"p1", "p2"}) == 2);
}

TEST_CASE("shuffling recovers an order the sorted greedy misses") {
    // greedy on [1, 4]: the 1 s slot grabs X ({p1,p2}); the 4 s slot then
    // adds only one problem (tie broken to Y), total 3. Starting with the
    // long slot reaches the optimum 4.
    MatrixBuilder b;
    b.solves("X", "p1", 900).solves("X", "p2", 900);
    b.solves("Y", "p1", 3500).solves("Y", "p2", 3500).solves("Y", "p3", 3500);
    b.solves("Z", "p4", 900);
    std::vector<std::string> strategies = {"X", "Y", "Z"};
    std::vector<std::string> problems = {"p1", "p2", "p3", "p4"};
    std::vector<double> splits = {1.0, 4.0};

    Schedule sorted_order = greedy_schedule(b.m, strategies, splits, problems);
    CHECK(schedule_coverage(sorted_order, b.m, problems) == 3);

    CHECK(exhaustive_optimum(b.m, strategies, splits, problems) == 4);

    Rng rng(7);
    Schedule best = best_schedule(b.m, strategies, {splits}, 100, problems, rng);
    CHECK(schedule_coverage(best, b.m, problems) == 4);
}

TEST_CASE("best_schedule matches the exhaustive optimum on random instances") {
    Rng rng(424242);
    int optimal = 0, total = 0, at_least_single = 0;
    for (int inst = 0; inst < 60; ++inst) {
        Rng r = rng.split(static_cast<std::uint64_t>(inst));
        int n_strategies = static_cast<int>(r.uniform_int(2, 5));
        int n_splits = static_cast<int>(r.uniform_int(1, 4));
        int n_problems = static_cast<int>(r.uniform_int(3, 10));
        std::vector<std::string> strategies, problems;
        for (int s = 0; s < n_strategies; ++s) strategies.push_back("s" + std::to_string(s));
        for (int p = 0; p < n_problems; ++p) problems.push_back("p" + std::to_string(p));
        EvalMatrix m;
        for (const std::string& s : strategies)
            for (const std::string& p : problems)
                if (r.bernoulli(0.4))
                    m.insert(s, p, {Answer::Yes, r.uniform_int(100, 8000), 1});
        std::vector<double> splits;
        double budget = 10.0;
        for (int k = 0; k < n_splits; ++k) splits.push_back(budget / n_splits);

        Rng shuffler = r.split(99);
        Schedule best = best_schedule(m, strategies, {splits, {budget}}, 100, problems, shuffler);
        std::size_t got = schedule_coverage(best, m, problems);
        std::size_t opt = std::max(exhaustive_optimum(m, strategies, splits, problems),
                                   exhaustive_optimum(m, strategies, {budget}, problems));
        ++total;
        if (got == opt) ++optimal;

        // never worse than the best single strategy at full budget
        std::size_t best_single = 0;
        for (const std::string& s : strategies)
            best_single =
                std::max(best_single, schedule_coverage({{s, budget}}, m, problems));
        if (got >= best_single) ++at_least_single;
    }
    CHECK(total == 60);
    CHECK(at_least_single == 60);
    CHECK(optimal >= 57);  // >= 95%
}

TEST_CASE("greedy coverage is monotone as splits are consumed") {
    Rng rng(515);
    for (int inst = 0; inst < 20; ++inst) {
        Rng r = rng.split(static_cast<std::uint64_t>(inst));
        EvalMatrix m;
        std::vector<std::string> strategies = {"s0", "s1", "s2"};
        std::vector<std::string> problems;
        for (int p = 0; p < 8; ++p) problems.push_back("p" + std::to_string(p));
        for (const std::string& s : strategies)
            for (const std::string& p : problems)
                if (r.bernoulli(0.5)) m.insert(s, p, {Answer::No, r.uniform_int(100, 3000), 1});
        std::vector<double> splits = {1, 2, 4};
        Schedule sched = greedy_schedule(m, strategies, splits, problems);
        std::size_t prev = 0;
        for (std::size_t k = 1; k <= sched.size(); ++k) {
            Schedule prefix(sched.begin(), sched.begin() + static_cast<std::ptrdiff_t>(k));
            std::size_t cov = schedule_coverage(prefix, m, problems);
            CHECK(cov >= prev);
            prev = cov;
        }
    }
}

TEST_CASE("run_schedule stops at the first verdict") {
    std::map<std::string, StrategyDefs> defs;
    defs["notcr"] = parse_strategy("S = nonconfluence -steps 1 -tcap -fun");
    defs["slow"] = parse_strategy("S = kb");
    Schedule sched = {{"notcr", 5.0}, {"slow", 5.0}};
    Outcome o = run_schedule(sched, gramlich(), defs);
    CHECK(answer_of(o) == Answer::No);
    CHECK(o.total.count() < 4000);  // stopped well inside the first split
}

TEST_CASE("run_schedule returns MAYBE when every slot fails") {
    std::map<std::string, StrategyDefs> defs;
    defs["nothing"] = parse_strategy("S = fail");
    defs["orth"] = parse_strategy("S = orthogonal");
    Schedule sched = {{"nothing", 0.3}, {"orth", 0.3}};
    Outcome o = run_schedule(sched, trs_b(), defs);  // not left-linear: orthogonal fails
    CHECK(answer_of(o) == Answer::Maybe);
    CHECK(o.total.count() <= 1200);
}

TEST_CASE("schedule files accept short probes mixed with long slots") {
    Schedule sched = {{"short-probe", 0.5}, {"another", 0.5}, {"long", 12.0}};
    Schedule back = parse_schedule(print_schedule(sched));
    REQUIRE(back.size() == 3);
    CHECK(back[0].strategy == "short-probe");
    CHECK(back[0].seconds == doctest::Approx(0.5));
    CHECK(back[2].seconds == doctest::Approx(12.0));
}

TEST_CASE("default split patterns stay within budget and include the full slot") {
    for (double budget : {60.0, 30.0}) {
        auto patterns = default_split_patterns(budget);
        REQUIRE(!patterns.empty());
        CHECK(patterns[0] == std::vector<double>{budget});
        for (const auto& pattern : patterns) {
            double total = 0;
            for (double s : pattern) {
                CHECK(s > 0);
                total += s;
            }
            CHECK(total <= budget + 1e-9);
        }
    }
}
