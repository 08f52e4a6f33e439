#include "confl/rewrite.hpp"

#include <deque>
#include <map>

namespace confl {

std::vector<Reduct> one_step_reducts(const TermPtr& t, const Trs& trs) {
    std::vector<Reduct> out;
    for (const Position& pos : all_positions(t)) {
        TermPtr sub = subterm_at(t, pos);
        if (sub->is_var()) continue;
        for (std::size_t ri = 0; ri < trs.rules.size(); ++ri) {
            const Rule& rule = trs.rules[ri];
            if (auto sigma = match_term(rule.lhs, sub)) {
                TermPtr contracted = apply_subst(rule.rhs, *sigma);
                out.push_back({pos, ri, replace_at(t, pos, contracted)});
            }
        }
    }
    return out;
}

std::optional<TermPtr> first_reduct(const TermPtr& t, const Trs& trs) {
    for (const Position& pos : all_positions(t)) {
        TermPtr sub = subterm_at(t, pos);
        if (sub->is_var()) continue;
        for (const Rule& rule : trs.rules) {
            if (auto sigma = match_term(rule.lhs, sub))
                return replace_at(t, pos, apply_subst(rule.rhs, *sigma));
        }
    }
    return std::nullopt;
}

bool is_normal_form(const TermPtr& t, const Trs& trs) {
    return !first_reduct(t, trs).has_value();
}

namespace {

// One BFS layer: expand every frontier term, keeping at most `width`
// successors per node. Returns false when nothing new was produced.
bool expand_layer(TermSet& seen, std::vector<TermPtr>& frontier, const Trs& trs, int width,
                  bool& truncated, std::size_t max_terms, const RunControl& ctl) {
    std::vector<TermPtr> next;
    for (const TermPtr& u : frontier) {
        if (ctl.expired()) {
            truncated = true;
            break;
        }
        auto reducts = one_step_reducts(u, trs);
        int taken = 0;
        for (const Reduct& r : reducts) {
            if (width >= 0 && taken >= width) {
                truncated = true;
                break;
            }
            ++taken;
            if (seen.size() >= max_terms) {
                truncated = true;
                break;
            }
            if (seen.insert(r.result).second) next.push_back(r.result);
        }
        if (seen.size() >= max_terms) break;
    }
    frontier = std::move(next);
    return !frontier.empty();
}

}  // namespace

JoinStatus bounded_join(const TermPtr& s, const TermPtr& t, const Trs& trs, int depth, int width,
                        const RunControl& ctl) {
    if (term_eq(s, t)) return JoinStatus::Joinable;
    TermSet seen_s{s}, seen_t{t};
    std::vector<TermPtr> frontier_s{s}, frontier_t{t};
    bool truncated = false;
    constexpr std::size_t kMaxTerms = 200000;

    auto intersects = [&]() {
        const TermSet& small = seen_s.size() <= seen_t.size() ? seen_s : seen_t;
        const TermSet& large = seen_s.size() <= seen_t.size() ? seen_t : seen_s;
        for (const TermPtr& u : small)
            if (large.count(u)) return true;
        return false;
    };

    for (int d = 0; d < depth; ++d) {
        if (ctl.expired()) {
            truncated = true;
            break;
        }
        bool more_s = expand_layer(seen_s, frontier_s, trs, width, truncated, kMaxTerms, ctl);
        bool more_t = expand_layer(seen_t, frontier_t, trs, width, truncated, kMaxTerms, ctl);
        if (intersects()) return JoinStatus::Joinable;
        if (!more_s && !more_t) {
            // both reachability sets closed under rewriting
            return truncated ? JoinStatus::Exhausted : JoinStatus::NotProven;
        }
    }
    if (intersects()) return JoinStatus::Joinable;
    if (frontier_s.empty() && frontier_t.empty() && !truncated) return JoinStatus::NotProven;
    return JoinStatus::Exhausted;
}

ReductSet reachable_within(const TermPtr& t, const Trs& trs, int depth, int width,
                           std::size_t max_terms, const RunControl& ctl) {
    ReductSet out;
    out.terms.insert(t);
    std::vector<TermPtr> frontier{t};
    bool truncated = false;
    for (int d = 0; d < depth && !frontier.empty(); ++d) {
        if (ctl.expired()) {
            truncated = true;
            break;
        }
        expand_layer(out.terms, frontier, trs, width, truncated, max_terms, ctl);
    }
    if (!frontier.empty()) truncated = true;  // depth bound hit with work left
    out.complete = !truncated;
    return out;
}

NormalFormSet normal_forms(const TermPtr& t, const Trs& trs, std::size_t max_terms,
                           const RunControl& ctl) {
    NormalFormSet out;
    TermSet seen{t};
    std::deque<TermPtr> queue{t};
    while (!queue.empty()) {
        if (ctl.expired() || seen.size() >= max_terms) {
            out.complete = false;
            break;
        }
        TermPtr u = queue.front();
        queue.pop_front();
        auto reducts = one_step_reducts(u, trs);
        if (reducts.empty()) {
            out.forms.insert(u);
            continue;
        }
        for (const Reduct& r : reducts) {
            if (seen.size() >= max_terms) {
                out.complete = false;
                break;
            }
            if (seen.insert(r.result).second) queue.push_back(r.result);
        }
    }
    return out;
}

namespace {

void count_vars(const TermPtr& t, std::map<std::string, int>& counts) {
    if (t->is_var()) {
        ++counts[t->var_name()];
        return;
    }
    for (const auto& a : t->args()) count_vars(a, counts);
}

}  // namespace

bool is_linear_term(const TermPtr& t) {
    std::map<std::string, int> counts;
    count_vars(t, counts);
    for (const auto& [v, n] : counts)
        if (n > 1) return false;
    return true;
}

SyntacticPredicates syntactic_predicates(const Trs& trs) {
    SyntacticPredicates p;
    p.left_linear = true;
    p.right_linear = true;
    p.ground = true;
    p.collapsing = false;
    p.duplicating = false;
    for (const Rule& rule : trs.rules) {
        std::map<std::string, int> lhs_counts, rhs_counts;
        count_vars(rule.lhs, lhs_counts);
        count_vars(rule.rhs, rhs_counts);
        for (const auto& [v, n] : lhs_counts)
            if (n > 1) p.left_linear = false;
        for (const auto& [v, n] : rhs_counts) {
            if (n > 1) p.right_linear = false;
            auto it = lhs_counts.find(v);
            if (it == lhs_counts.end() || n > it->second) p.duplicating = true;
        }
        if (!lhs_counts.empty() || !rhs_counts.empty()) p.ground = false;
        if (rule.rhs->is_var()) p.collapsing = true;
    }
    p.linear = p.left_linear && p.right_linear;
    return p;
}

std::string frozen_constant_name(const std::string& var) {
    return "$" + var;
}

TermPtr ground_freeze(const TermPtr& t) {
    if (t->is_var()) return Term::constant(frozen_constant_name(t->var_name()));
    if (t->args().empty()) return t;
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    for (const auto& a : t->args()) args.push_back(ground_freeze(a));
    return Term::app(t->symbol(), std::move(args));
}

}  // namespace confl
