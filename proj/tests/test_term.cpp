#include "doctest.h"

#include <functional>

#include "confl/rewrite.hpp"
#include "confl/term.hpp"
#include "helpers.hpp"

using namespace confl;
using namespace confl::testing;

namespace {

// independent structural-recursion oracle for vars_of
void collect_vars_oracle(const TermPtr& t, std::set<std::string>& out) {
    if (t->is_var()) {
        out.insert(t->var_name());
        return;
    }
    for (const auto& a : t->args()) collect_vars_oracle(a, out);
}

Substitution subst(std::initializer_list<std::pair<std::string, TermPtr>> bindings) {
    Substitution s;
    for (const auto& [v, t] : bindings) s.bind(v, t);
    return s;
}

}  // namespace

TEST_CASE("vars_of") {
    Trs g = gramlich();
    CHECK(vars_of(tparse("f(g(x),h(x))", g)) == std::set<std::string>{"x"});
    CHECK(vars_of(tparse("a", g)).empty());

    Trs two = parse_trs("(VAR x y)\n(RULES f(x,g(y)) -> x)");
    TermPtr t = tparse("f(x,g(y))", two);
    std::set<std::string> expected;
    collect_vars_oracle(t, expected);
    CHECK(vars_of(t) == expected);
    CHECK(expected == std::set<std::string>{"x", "y"});
}

TEST_CASE("apply_subst") {
    Trs ov = overlap_example();
    // the overlap example peak: l2 sigma with x |-> b
    TermPtr l2 = tparse("f(a,g(x))", ov);
    TermPtr peak = apply_subst(l2, subst({{"x", Term::constant("b")}}));
    CHECK(term_eq(peak, tparse("f(a,g(b))", ov)));

    TermPtr t = tparse("f(a,g(x))", ov);
    CHECK(term_eq(apply_subst(t, Substitution{}), t));

    Trs b = trs_b();
    TermPtr fxx = tparse("f(x,x)", b);
    CHECK(term_eq(apply_subst(fxx, subst({{"x", Term::constant("c")}})), tparse("f(c,c)", b)));
}

TEST_CASE("match_term") {
    Trs g = gramlich();
    auto exact = match_term(tparse("g(b)", g), tparse("g(b)", g));
    REQUIRE(exact.has_value());
    CHECK(exact->empty());

    Trs b = trs_b();
    CHECK_FALSE(match_term(tparse("f(x,x)", b), tparse("f(c,g(c))", b)).has_value());

    TermPtr any = tparse("f(g(b),h(b))", g);
    auto var = match_term(Term::var("x"), any);
    REQUIRE(var.has_value());
    CHECK(term_eq(*var->lookup("x"), any));
}

TEST_CASE("match soundness on random pairs") {
    Rng rng(101);
    int matched = 0;
    for (int i = 0; i < 2000; ++i) {
        TermPtr pattern = random_term(rng, 3);
        // bind only some variables; the rest stay as themselves, so the
        // subject shares variable names with the pattern
        Substitution sigma;
        for (const std::string& v : vars_of(pattern))
            if (rng.bernoulli(0.6)) sigma.bind(v, random_term(rng, 2, false));
        TermPtr subject = apply_subst(pattern, sigma);
        auto found = match_term(pattern, subject);
        REQUIRE(found.has_value());
        CHECK(term_eq(apply_subst(pattern, *found), subject));
        ++matched;

        // arbitrary pairs (with and without shared variables): success
        // still implies soundness
        for (bool ground : {true, false}) {
            TermPtr other = random_term(rng, 3, !ground);
            if (auto m = match_term(pattern, other))
                CHECK(term_eq(apply_subst(pattern, *m), other));
        }
    }
    CHECK(matched == 2000);

    // the non-linear pattern must not match a subject that instantiates
    // only one occurrence of its repeated variable
    Trs b = trs_b();
    CHECK_FALSE(match_term(tparse("f(x,x)", b), tparse("f(x,c)", b)).has_value());
    CHECK(match_term(tparse("f(x,x)", b), tparse("f(x,x)", b)).has_value());
}

TEST_CASE("unify") {
    Trs ov = overlap_example();
    auto mgu = unify(tparse("g(b)", ov), tparse("g(x)", ov));
    REQUIRE(mgu.has_value());
    CHECK(term_eq(*mgu->lookup("x"), Term::constant("b")));

    CHECK_FALSE(unify(Term::var("x"), Term::app(Symbol{"g", 1}, {Term::var("x")})).has_value());

    // renamed-apart lhs of TRS B rules 1 and 2: occurs check fires
    Trs b = trs_b();
    Trs renamed = parse_trs("(VAR x x1)\n(RULES f(x,x) -> a\n f(x1,g(x1)) -> b)");
    CHECK_FALSE(unify(tparse("f(x,x)", renamed), tparse("f(x1,g(x1))", renamed)).has_value());
    (void)b;
}

TEST_CASE("unify succeeds on instances of a common term") {
    Rng rng(201);
    for (int i = 0; i < 10000; ++i) {
        TermPtr base = random_term(rng, 3);
        Substitution sigma;
        for (const std::string& v : vars_of(base))
            if (rng.bernoulli(0.7)) sigma.bind(v, random_term(rng, 1, false));
        TermPtr instance = apply_subst(base, sigma);
        auto mgu = unify(base, instance);
        REQUIRE(mgu.has_value());
        CHECK(term_eq(apply_subst(base, *mgu), apply_subst(instance, *mgu)));
    }
}

TEST_CASE("unify soundness and idempotence on constructed pairs") {
    Rng rng(202);
    for (int i = 0; i < 10000; ++i) {
        TermPtr base = random_term(rng, 3);
        Substitution s1, s2;
        for (const std::string& v : vars_of(base)) {
            if (rng.bernoulli(0.5)) s1.bind(v, random_term(rng, 1, false));
            if (rng.bernoulli(0.5)) s2.bind(v, random_term(rng, 1, false));
        }
        TermPtr left = apply_subst(base, s1);
        TermPtr right = apply_subst(base, s2);
        auto mgu = unify(left, right);
        if (!mgu) {
            // s1 and s2 may genuinely conflict on a shared variable
            CHECK_FALSE(term_eq(left, right));
            continue;
        }
        TermPtr ls = apply_subst(left, *mgu);
        TermPtr rs = apply_subst(right, *mgu);
        CHECK(term_eq(ls, rs));
        CHECK(term_eq(apply_subst(ls, *mgu), ls));  // idempotent
    }
}

TEST_CASE("one_step_reducts on the running example") {
    Trs g = gramlich();
    TermPtr t = tparse("f(g(b),h(b))", g);
    auto reducts = one_step_reducts(t, g);
    REQUIRE(reducts.size() == 2);
    // leftmost-outermost: the root redex comes first
    CHECK(reducts[0].position.empty());
    CHECK(reducts[0].rule_index == 0);
    CHECK(term_eq(reducts[0].result, tparse("a", g)));
    CHECK(reducts[1].position == Position{1});
    CHECK(reducts[1].rule_index == 1);
    CHECK(term_eq(reducts[1].result, tparse("f(d,h(b))", g)));

    CHECK(one_step_reducts(tparse("a", g), g).empty());

    Trs loop = parse_trs("(VAR)\n(RULES c -> g(c))");
    auto r = one_step_reducts(tparse("c", loop), loop);
    REQUIRE(r.size() == 1);
    CHECK(r[0].position.empty());
    CHECK(r[0].rule_index == 0);
    CHECK(term_eq(r[0].result, tparse("g(c)", loop)));
}

TEST_CASE("reducts re-validate against their reported position and rule") {
    Rng rng(303);
    for (int i = 0; i < 200; ++i) {
        Trs trs = random_small_trs(77, static_cast<std::uint64_t>(i));
        Rng term_rng = rng.split(static_cast<std::uint64_t>(i));
        for (int k = 0; k < 5; ++k) {
            // terms over the TRS's own signature, via its own rules' lhs
            if (trs.rules.empty()) continue;
            TermPtr t = trs.rules[static_cast<std::size_t>(
                                      term_rng.uniform_int(0, static_cast<long>(trs.rules.size()) - 1))]
                            .lhs;
            for (const Reduct& r : one_step_reducts(t, trs)) {
                TermPtr sub = subterm_at(t, r.position);
                auto sigma = match_term(trs.rules[r.rule_index].lhs, sub);
                REQUIRE(sigma.has_value());
                TermPtr rebuilt =
                    replace_at(t, r.position, apply_subst(trs.rules[r.rule_index].rhs, *sigma));
                CHECK(term_eq(rebuilt, r.result));
            }
        }
    }
}

TEST_CASE("rewriting is closed under contexts and substitutions") {
    Rng rng(404);
    Trs trs = parse_trs("(VAR x y)\n(RULES f(a,x) -> g(x)\n g(g(y)) -> b)");
    for (int i = 0; i < 500; ++i) {
        TermPtr t = random_term(rng, 3);
        auto reducts = one_step_reducts(t, trs);
        if (reducts.empty()) continue;
        const Reduct& step = reducts[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<long>(reducts.size()) - 1))];
        Substitution sigma;
        for (const std::string& v : vars_of(t)) sigma.bind(v, random_term(rng, 1, false));
        // context: plug into the first argument of f(., b)
        TermPtr in_ctx = Term::app(Symbol{"f", 2}, {apply_subst(t, sigma), Term::constant("b")});
        TermPtr expected =
            Term::app(Symbol{"f", 2}, {apply_subst(step.result, sigma), Term::constant("b")});
        bool found = false;
        for (const Reduct& r : one_step_reducts(in_ctx, trs))
            if (term_eq(r.result, expected)) found = true;
        CHECK(found);
    }
}

TEST_CASE("bounded_join") {
    Trs d = diamond();
    // 4-node graph: b -> d <- c, one step each side
    CHECK(bounded_join(tparse("b", d), tparse("c", d), d, 1, -1) == JoinStatus::Joinable);

    TermPtr t = tparse("a", d);
    CHECK(bounded_join(t, t, d, 0, -1) == JoinStatus::Joinable);

    Trs g = gramlich();
    CHECK(bounded_join(tparse("a", g), tparse("f(d,h(b))", g), g, 8, -1) == JoinStatus::NotProven);
}

TEST_CASE("bounded_join is monotone in depth") {
    Rng rng(505);
    for (int i = 0; i < 100; ++i) {
        Trs trs = random_small_trs(88, static_cast<std::uint64_t>(i));
        if (trs.rules.empty()) continue;
        Rng r = rng.split(static_cast<std::uint64_t>(i));
        TermPtr s = trs.rules[0].lhs;
        TermPtr t = trs.rules[static_cast<std::size_t>(
                                  r.uniform_int(0, static_cast<long>(trs.rules.size()) - 1))]
                        .rhs;
        for (int d = 0; d <= 3; ++d) {
            if (bounded_join(s, t, trs, d, -1) == JoinStatus::Joinable) {
                CHECK(bounded_join(s, t, trs, d + 2, -1) == JoinStatus::Joinable);
                break;
            }
        }
    }
}

TEST_CASE("syntactic_predicates") {
    // f(g(x),h(x)) repeats x in the lhs, so the system is not left-linear
    SyntacticPredicates g = syntactic_predicates(gramlich());
    CHECK_FALSE(g.left_linear);
    CHECK(g.right_linear);
    CHECK_FALSE(g.linear);
    CHECK_FALSE(g.ground);
    CHECK_FALSE(g.collapsing);
    CHECK_FALSE(g.duplicating);

    CHECK_FALSE(syntactic_predicates(trs_b()).left_linear);

    SyntacticPredicates empty = syntactic_predicates(parse_trs("(VAR)\n(RULES)"));
    CHECK(empty.left_linear);
    CHECK(empty.right_linear);
    CHECK(empty.linear);
    CHECK(empty.ground);
    CHECK_FALSE(empty.collapsing);
    CHECK_FALSE(empty.duplicating);

    SyntacticPredicates dup = syntactic_predicates(parse_trs("(VAR x)\n(RULES f(x) -> g(x,x))"));
    CHECK(dup.duplicating);
    CHECK(dup.left_linear);
    CHECK_FALSE(dup.right_linear);

    CHECK(syntactic_predicates(parse_trs("(VAR x)\n(RULES f(x) -> x)")).collapsing);
    CHECK(syntactic_predicates(parse_trs("(VAR)\n(RULES a -> b)")).ground);

    // per-rule occurrence-count oracle over random systems
    Rng rng(606);
    for (int i = 0; i < 100; ++i) {
        Trs trs = random_small_trs(99, static_cast<std::uint64_t>(i));
        bool left_linear = true;
        for (const Rule& r : trs.rules) {
            std::map<std::string, int> counts;
            std::function<void(const TermPtr&)> count = [&](const TermPtr& t) {
                if (t->is_var())
                    ++counts[t->var_name()];
                else
                    for (const auto& a : t->args()) count(a);
            };
            count(r.lhs);
            for (const auto& [v, n] : counts)
                if (n > 1) left_linear = false;
        }
        CHECK(syntactic_predicates(trs).left_linear == left_linear);
    }
    (void)rng;
}

TEST_CASE("ground_freeze") {
    Trs two = parse_trs("(VAR x y)\n(RULES f(x,y) -> x)");
    TermPtr frozen = ground_freeze(tparse("f(x,y)", two));
    CHECK(term_to_string(frozen) == "f($x,$y)");
    CHECK(vars_of(frozen).empty());

    TermPtr a = Term::constant("a");
    CHECK(term_eq(ground_freeze(a), a));

    Trs b = trs_b();
    TermPtr fxx = ground_freeze(tparse("f(x,x)", b));
    CHECK(term_to_string(fxx) == "f($x,$x)");
    CHECK(term_eq(fxx->args()[0], fxx->args()[1]));
}
