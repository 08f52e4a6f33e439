#include "confl/critical_pairs.hpp"

#include <functional>
#include <map>

namespace confl {

namespace {

TermPtr rename_vars(const TermPtr& t, const std::string& suffix) {
    if (t->is_var()) return Term::var(t->var_name() + "#" + suffix);
    if (t->args().empty()) return t;
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    for (const auto& a : t->args()) args.push_back(rename_vars(a, suffix));
    return Term::app(t->symbol(), std::move(args));
}

// One consistent injective variable-to-variable mapping covering both
// sides of the rules, checked in one direction.
bool variant_direction(const Rule& a, const Rule& b) {
    std::map<std::string, std::string> fwd, bwd;
    std::function<bool(const TermPtr&, const TermPtr&)> go = [&](const TermPtr& s,
                                                                 const TermPtr& t) {
        if (s->is_var() != t->is_var()) return false;
        if (s->is_var()) {
            auto [it, inserted] = fwd.emplace(s->var_name(), t->var_name());
            if (!inserted && it->second != t->var_name()) return false;
            auto [jt, jnew] = bwd.emplace(t->var_name(), s->var_name());
            if (!jnew && jt->second != s->var_name()) return false;
            return true;
        }
        if (s->root_name() != t->root_name() || s->args().size() != t->args().size()) return false;
        for (std::size_t i = 0; i < s->args().size(); ++i)
            if (!go(s->args()[i], t->args()[i])) return false;
        return true;
    };
    return go(a.lhs, b.lhs) && go(a.rhs, b.rhs);
}

}  // namespace

Rule rename_rule(const Rule& r, const std::string& suffix) {
    return Rule{rename_vars(r.lhs, suffix), rename_vars(r.rhs, suffix)};
}

bool rules_are_variants(const Rule& a, const Rule& b) {
    return variant_direction(a, b) && variant_direction(b, a);
}

std::vector<Overlap> overlaps(const Trs& trs) {
    std::vector<Overlap> out;
    for (std::size_t j = 0; j < trs.rules.size(); ++j) {
        // inner rule gets suffix "<i>a", outer "<j>b" so self-overlaps
        // are renamed apart as well
        Rule outer = rename_rule(trs.rules[j], std::to_string(j) + "b");
        for (const Position& pos : function_positions(outer.lhs)) {
            TermPtr target = subterm_at(outer.lhs, pos);
            for (std::size_t i = 0; i < trs.rules.size(); ++i) {
                if (pos.empty() && rules_are_variants(trs.rules[i], trs.rules[j])) continue;
                Rule inner = rename_rule(trs.rules[i], std::to_string(i) + "a");
                if (auto sigma = unify(inner.lhs, target))
                    out.push_back({inner, i, pos, outer, j, std::move(*sigma)});
            }
        }
    }
    return out;
}

std::vector<CriticalPair> critical_pairs(const Trs& trs) {
    std::vector<CriticalPair> out;
    for (const Overlap& o : overlaps(trs)) {
        TermPtr peak = apply_subst(o.outer.lhs, o.mgu);
        TermPtr left = replace_at(peak, o.position, apply_subst(o.inner.rhs, o.mgu));
        TermPtr right = apply_subst(o.outer.rhs, o.mgu);
        out.push_back({std::move(left), std::move(right), std::move(peak), o.position});
    }
    return out;
}

std::vector<Peak> variable_peaks(const Trs& trs) {
    std::vector<Peak> out;
    for (std::size_t j = 0; j < trs.rules.size(); ++j) {
        Rule outer = rename_rule(trs.rules[j], std::to_string(j) + "b");
        for (const Position& q : variable_positions(outer.lhs)) {
            TermPtr v = subterm_at(outer.lhs, q);
            for (std::size_t i = 0; i < trs.rules.size(); ++i) {
                Rule inner = rename_rule(trs.rules[i], std::to_string(i) + "a");
                Substitution sigma;
                sigma.bind(v->var_name(), inner.lhs);
                TermPtr source = apply_subst(outer.lhs, sigma);
                // rewrite only the designated occurrence of the variable
                TermPtr left = replace_at(source, q, inner.rhs);
                TermPtr right = apply_subst(outer.rhs, sigma);
                out.push_back({std::move(source), std::move(left), std::move(right)});
            }
        }
    }
    return out;
}

}  // namespace confl
