#pragma once

#include <functional>
#include <string>
#include <vector>

#include "confl/generator.hpp"
#include "confl/rng.hpp"
#include "confl/term.hpp"
#include "confl/trs_io.hpp"

namespace confl::testing {

inline Trs gramlich() {
    return parse_trs("(VAR x)\n(RULES f(g(x),h(x)) -> a\n g(b) -> d\n h(c) -> d)", "gramlich");
}

// non-terminating: f(x) -> g(f(x)), g(y) -> f(g(y))
inline Trs trs_a() {
    return parse_trs("(VAR x y)\n(RULES f(x) -> g(f(x))\n g(y) -> f(g(y)))", "trs-a");
}

// non-left-linear, non-confluent via a variable peak
inline Trs trs_b() {
    return parse_trs("(VAR x)\n(RULES f(x,x) -> a\n f(x,g(x)) -> b\n c -> g(c))", "trs-b");
}

inline Trs assoc() {
    return parse_trs("(VAR x y z)\n(RULES f(f(x,y),z) -> f(x,f(y,z)))", "assoc");
}

// a -> b, a -> c, b -> d, c -> d
inline Trs diamond() {
    return parse_trs("(VAR)\n(RULES a -> b\n a -> c\n b -> d\n c -> d)", "diamond");
}

inline Trs overlap_example() {
    return parse_trs("(VAR x)\n(RULES f(a,g(x)) -> f(x,x)\n g(b) -> c)", "overlap");
}

inline TermPtr tparse(const std::string& text, const Trs& trs) { return parse_term(text, trs); }

/// Random term over a fixed small signature {f/2, g/1, a, b} and
/// variables {x, y, z}; used by the property tests.
inline TermPtr random_term(Rng& rng, int max_depth, bool allow_vars = true) {
    static const std::vector<std::string> vars = {"x", "y", "z"};
    int pick = static_cast<int>(rng.uniform_int(0, allow_vars ? 4 : 3));
    if (max_depth <= 0 && pick >= 2) pick = static_cast<int>(rng.uniform_int(0, allow_vars ? 2 : 1));
    switch (pick) {
        case 0: return Term::constant("a");
        case 1: return Term::constant("b");
        case 2: return Term::app(Symbol{"g", 1}, {random_term(rng, max_depth - 1, allow_vars)});
        case 3:
            return Term::app(Symbol{"f", 2}, {random_term(rng, max_depth - 1, allow_vars),
                                              random_term(rng, max_depth - 1, allow_vars)});
        default: return Term::var(vars[static_cast<std::size_t>(rng.uniform_int(0, 2))]);
    }
}

/// Small random TRS via the generator (tiny configuration).
inline Trs random_small_trs(std::uint64_t seed, std::uint64_t index) {
    GenConfig cfg;
    cfg.max_funs = 3;
    cfg.max_consts = 2;
    cfg.max_vars = 2;
    cfg.max_rules = 4;
    cfg.max_arity = 3;
    cfg.max_term_size = 7;
    cfg.seed = seed;
    return gen_trs_at(cfg, index).trs;
}

/// Arity-respecting random symbol bijection plus variable renaming plus
/// rule shuffle: the planted equivalence used to probe canonical forms.
inline Trs planted_renaming(const Trs& trs, Rng& rng) {
    std::map<int, std::vector<std::string>> by_arity;
    for (const auto& [name, arity] : trs.signature) by_arity[arity].push_back(name);
    std::map<std::string, std::string> symbol_map;
    for (auto& [arity, names] : by_arity) {
        std::vector<std::string> fresh;
        for (std::size_t i = 0; i < names.size(); ++i)
            fresh.push_back("q" + std::to_string(arity) + "_" + std::to_string(i));
        rng.shuffle(fresh);
        for (std::size_t i = 0; i < names.size(); ++i) symbol_map[names[i]] = fresh[i];
    }
    std::map<std::string, std::string> var_map;
    int vi = 0;
    for (const std::string& v : trs.variables) var_map[v] = "w" + std::to_string(vi++);

    std::function<TermPtr(const TermPtr&)> rename = [&](const TermPtr& t) -> TermPtr {
        if (t->is_var()) return Term::var(var_map.at(t->var_name()));
        std::vector<TermPtr> args;
        for (const auto& a : t->args()) args.push_back(rename(a));
        int arity = static_cast<int>(args.size());
        return Term::app(Symbol{symbol_map.at(t->root_name()), arity}, std::move(args));
    };
    Trs out;
    out.name = trs.name + "-renamed";
    for (const auto& [name, arity] : trs.signature) out.signature[symbol_map.at(name)] = arity;
    for (const auto& [v, w] : var_map) out.variables.insert(w);
    for (const Rule& r : trs.rules) out.rules.push_back({rename(r.lhs), rename(r.rhs)});
    rng.shuffle(out.rules);
    return out;
}

/// Consistent arity perturbation: every occurrence of one random symbol
/// gets an extra constant argument. Keys of perturbed systems must differ.
inline Trs arity_perturbation(const Trs& trs, Rng& rng) {
    std::vector<std::string> candidates;
    for (const auto& [name, arity] : trs.signature) candidates.push_back(name);
    if (candidates.empty()) return trs;
    std::string chosen = candidates[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<long>(candidates.size()) - 1))];
    std::function<TermPtr(const TermPtr&)> extend = [&](const TermPtr& t) -> TermPtr {
        if (t->is_var()) return t;
        std::vector<TermPtr> args;
        for (const auto& a : t->args()) args.push_back(extend(a));
        if (t->root_name() == chosen) args.push_back(Term::constant("pad"));
        int arity = static_cast<int>(args.size());
        return Term::app(Symbol{t->root_name(), arity}, std::move(args));
    };
    Trs out = trs;
    out.signature[chosen] += 1;
    out.signature["pad"] = 0;
    out.rules.clear();
    for (const Rule& r : trs.rules) out.rules.push_back({extend(r.lhs), extend(r.rhs)});
    return out;
}

/// Random ground term over a TRS's own signature. A signature without
/// constants gets an inert fallback constant so leaves exist.
inline TermPtr random_term_over(const Trs& trs, Rng& rng, int max_size) {
    GenContext ctx;
    ctx.max_term_size = max_size;
    ctx.side = RuleSide::Right;
    ctx.comp = 0.5;
    for (const auto& [name, arity] : trs.signature) {
        if (arity == 0)
            ctx.consts.push_back(Symbol{name, 0});
        else
            ctx.funs.push_back(Symbol{name, arity});
    }
    if (ctx.consts.empty()) ctx.consts.push_back(Symbol{"k0", 0});
    return gen_term(ctx, rng);
}

/// All terms over the signature (map name -> arity) plus the given
/// variables, with at most max_size symbol/variable occurrences.
inline std::vector<TermPtr> enumerate_terms(const std::map<std::string, int>& signature,
                                            const std::vector<std::string>& vars, int max_size) {
    std::vector<std::vector<TermPtr>> by_size(static_cast<std::size_t>(max_size) + 1);
    for (int size = 1; size <= max_size; ++size) {
        auto& bucket = by_size[static_cast<std::size_t>(size)];
        if (size == 1) {
            for (const std::string& v : vars) bucket.push_back(Term::var(v));
            for (const auto& [name, arity] : signature)
                if (arity == 0) bucket.push_back(Term::constant(name));
            continue;
        }
        for (const auto& [name, arity] : signature) {
            if (arity < 1 || arity > size - 1) continue;
            // distribute size-1 over `arity` argument slots
            std::vector<std::vector<TermPtr>> partial{{}};
            std::function<void(int, int, std::vector<TermPtr>&)> fill =
                [&](int slot, int remaining, std::vector<TermPtr>& acc) {
                    if (slot == arity) {
                        if (remaining == 0)
                            bucket.push_back(Term::app(Symbol{name, arity}, acc));
                        return;
                    }
                    int slots_left = arity - slot - 1;
                    for (int k = 1; k + slots_left <= remaining; ++k) {
                        for (const TermPtr& t : by_size[static_cast<std::size_t>(k)]) {
                            acc.push_back(t);
                            fill(slot + 1, remaining - k, acc);
                            acc.pop_back();
                        }
                    }
                };
            std::vector<TermPtr> acc;
            fill(0, size - 1, acc);
        }
    }
    std::vector<TermPtr> out;
    for (const auto& bucket : by_size) out.insert(out.end(), bucket.begin(), bucket.end());
    return out;
}

}  // namespace confl::testing
