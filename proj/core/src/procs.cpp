#include "confl/procs.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace confl {

std::string to_string(Answer a) {
    switch (a) {
        case Answer::Yes: return "YES";
        case Answer::No: return "NO";
        default: return "MAYBE";
    }
}

namespace {

struct Stopwatch {
    Clock::time_point start = Clock::now();
    Duration elapsed() const {
        return std::chrono::duration_cast<Duration>(Clock::now() - start);
    }
};

std::string peak_line(const TermPtr& left, const TermPtr& source, const TermPtr& right) {
    std::ostringstream out;
    out << "PEAK " << term_to_string(left) << " <- " << term_to_string(source) << " -> "
        << term_to_string(right);
    return out.str();
}

std::string join_line(const JoinWitness& j) {
    std::ostringstream out;
    out << "JOIN " << term_to_string(j.left) << " ->" << j.steps_left << " "
        << term_to_string(j.meet) << " <-" << j.steps_right << " " << term_to_string(j.right);
    return out.str();
}

/// BFS distance from `from` to `to`, or -1 if not reached within maxd.
int bfs_distance(const TermPtr& from, const TermPtr& to, const Trs& trs, int maxd,
                 const RunControl& ctl) {
    if (term_eq(from, to)) return 0;
    TermSet seen{from};
    std::vector<TermPtr> frontier{from};
    for (int d = 1; d <= maxd; ++d) {
        std::vector<TermPtr> next;
        for (const TermPtr& u : frontier) {
            if (ctl.expired()) return -1;
            for (const Reduct& r : one_step_reducts(u, trs)) {
                if (term_eq(r.result, to)) return d;
                if (seen.insert(r.result).second) next.push_back(r.result);
            }
        }
        if (next.empty()) return -1;
        frontier = std::move(next);
    }
    return -1;
}

}  // namespace

ProcResult proc_orthogonal(const Trs& trs) {
    Stopwatch sw;
    ProcResult res;
    if (!syntactic_predicates(trs).left_linear) {
        res.reason = "not left-linear";
        res.elapsed = sw.elapsed();
        return res;
    }
    YesWitness wit;
    wit.criterion = "orthogonal";
    for (const CriticalPair& cp : critical_pairs(trs)) {
        if (!term_eq(cp.left, cp.right)) {
            res.reason = "nontrivial critical pair " + term_to_string(cp.left) + " = " +
                         term_to_string(cp.right);
            res.elapsed = sw.elapsed();
            return res;
        }
        wit.joins.push_back({cp.left, cp.right, cp.left, 0, 0});
    }
    res.outcome = ProcOutcome::Yes;
    res.reason = "weakly orthogonal: left-linear, all critical pairs trivial";
    res.yes_witness = std::move(wit);
    res.elapsed = sw.elapsed();
    return res;
}

ProcResult proc_strongly_closed(const Trs& trs, int steps, const RunControl& ctl) {
    Stopwatch sw;
    ProcResult res;
    if (steps < 0) steps = 32;
    if (!syntactic_predicates(trs).linear) {
        res.reason = "not linear";
        res.elapsed = sw.elapsed();
        return res;
    }
    YesWitness wit;
    wit.criterion = "strongly_closed";
    constexpr std::size_t kCap = 5000;
    for (const CriticalPair& cp : critical_pairs(trs)) {
        if (ctl.expired()) {
            res.reason = "timeout";
            res.elapsed = sw.elapsed();
            return res;
        }
        // s ->(<=n) u with t ->(=) u
        auto find_meet = [&](const TermPtr& deep, const TermPtr& shallow,
                             bool flipped) -> std::optional<JoinWitness> {
            ReductSet many = reachable_within(deep, trs, steps, -1, kCap, ctl);
            TermSet few{shallow};
            for (const Reduct& r : one_step_reducts(shallow, trs)) few.insert(r.result);
            for (const TermPtr& u : many.terms) {
                if (few.count(u)) {
                    int dk = bfs_distance(deep, u, trs, steps, ctl);
                    int dm = term_eq(shallow, u) ? 0 : 1;
                    JoinWitness j;
                    j.left = flipped ? shallow : deep;
                    j.right = flipped ? deep : shallow;
                    j.meet = u;
                    j.steps_left = flipped ? dm : dk;
                    j.steps_right = flipped ? dk : dm;
                    return j;
                }
            }
            return std::nullopt;
        };
        auto j1 = find_meet(cp.left, cp.right, false);
        auto j2 = find_meet(cp.right, cp.left, true);
        if (!j1 || !j2) {
            res.reason = "critical pair not strongly closed: " + term_to_string(cp.left) + " = " +
                         term_to_string(cp.right);
            res.elapsed = sw.elapsed();
            return res;
        }
        wit.joins.push_back(*j1);
        wit.joins.push_back(*j2);
    }
    res.outcome = ProcOutcome::Yes;
    std::ostringstream reason;
    reason << "strongly closed (linear TRS)";
    for (const JoinWitness& j : wit.joins) reason << '\n' << join_line(j);
    res.reason = reason.str();
    res.yes_witness = std::move(wit);
    res.elapsed = sw.elapsed();
    return res;
}

ProcResult proc_knuth_bendix(const Trs& trs, const TerminationBudget& budget, int join_depth,
                             const RunControl& ctl) {
    Stopwatch sw;
    ProcResult res;
    TermResult term = prove_termination(trs, budget, ctl);
    if (term.status != TermStatus::Terminating) {
        res.reason = "termination unknown";
        res.elapsed = sw.elapsed();
        return res;
    }
    YesWitness wit;
    wit.criterion = "knuth_bendix";
    wit.termination = term;
    auto cps = critical_pairs(trs);
    for (const CriticalPair& cp : cps) {
        if (ctl.expired()) {
            res.reason = "timeout";
            res.elapsed = sw.elapsed();
            return res;
        }
        NormalFormSet nf_l = normal_forms(cp.left, trs, 20000, ctl);
        NormalFormSet nf_r = normal_forms(cp.right, trs, 20000, ctl);
        if (!nf_l.complete || !nf_r.complete) {
            res.reason = "normal-form search exhausted";
            res.elapsed = sw.elapsed();
            return res;
        }
        std::optional<TermPtr> meet;
        for (const TermPtr& u : nf_l.forms) {
            if (nf_r.forms.count(u)) {
                meet = u;
                break;
            }
        }
        if (meet) {
            int dk = bfs_distance(cp.left, *meet, trs, join_depth * 4 + 8, ctl);
            int dm = bfs_distance(cp.right, *meet, trs, join_depth * 4 + 8, ctl);
            wit.joins.push_back({cp.left, cp.right, *meet, dk, dm});
            continue;
        }
        // disjoint complete normal-form sets under termination: the peak
        // has two reducts that can never meet
        NoWitness no;
        no.source = cp.peak;
        no.left = cp.left;
        no.right = cp.right;
        no.cand_left = ground_freeze(*nf_l.forms.begin());
        no.cand_right = ground_freeze(*nf_r.forms.begin());
        no.steps = -1;
        no.method = "nf";
        res.outcome = ProcOutcome::No;
        res.reason = peak_line(cp.left, cp.peak, cp.right) + "\nNONJOIN " +
                     term_to_string(no.cand_left) + " | " + term_to_string(no.cand_right) +
                     " via nf";
        res.no_witness = std::move(no);
        res.elapsed = sw.elapsed();
        return res;
    }
    res.outcome = ProcOutcome::Yes;
    std::ostringstream reason;
    reason << "terminating and locally confluent (" << term.describe() << ", " << cps.size()
           << " critical pairs)";
    for (const JoinWitness& j : wit.joins) reason << '\n' << join_line(j);
    res.reason = reason.str();
    res.yes_witness = std::move(wit);
    res.elapsed = sw.elapsed();
    return res;
}

namespace {

TermPtr tcap_go(const TermPtr& t, const std::vector<Rule>& renamed_lhs, int& fresh,
                const std::string& prefix) {
    if (t->is_var()) return Term::var(prefix + std::to_string(fresh++));
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    for (const auto& a : t->args()) args.push_back(tcap_go(a, renamed_lhs, fresh, prefix));
    TermPtr u = Term::app(t->symbol(), std::move(args));
    for (const Rule& r : renamed_lhs) {
        if (unify(u, r.lhs)) return Term::var(prefix + std::to_string(fresh++));
    }
    return u;
}

std::vector<Rule> rules_renamed(const Trs& trs) {
    std::vector<Rule> out;
    out.reserve(trs.rules.size());
    for (std::size_t i = 0; i < trs.rules.size(); ++i)
        out.push_back(rename_rule(trs.rules[i], std::to_string(i) + "r"));
    return out;
}

}  // namespace

TermPtr tcap(const TermPtr& t, const Trs& trs) {
    int fresh = 0;
    auto renamed = rules_renamed(trs);
    return tcap_go(t, renamed, fresh, "%");
}

namespace {

TermPtr tcap_prefixed(const TermPtr& t, const std::vector<Rule>& renamed, const std::string& prefix) {
    int fresh = 0;
    return tcap_go(t, renamed, fresh, prefix);
}

}  // namespace

ProcResult proc_nonconfluence(const Trs& trs, const NonconfluenceConfig& cfg,
                              const RunControl& ctl) {
    Stopwatch sw;
    ProcResult res;

    std::vector<Peak> peaks;
    if (cfg.overlap_mode == OverlapMode::Fun || cfg.overlap_mode == OverlapMode::Both) {
        for (const CriticalPair& cp : critical_pairs(trs)) peaks.push_back({cp.peak, cp.left, cp.right});
    }
    if (cfg.overlap_mode == OverlapMode::Var || cfg.overlap_mode == OverlapMode::Both) {
        for (const Peak& p : variable_peaks(trs)) peaks.push_back(p);
    }
    if (peaks.empty()) {
        res.reason = "no peaks";
        res.elapsed = sw.elapsed();
        return res;
    }

    auto renamed = rules_renamed(trs);
    constexpr std::size_t kReductCap = 4000;

    for (const Peak& peak : peaks) {
        if (ctl.expired()) break;
        ReductSet left_set = reachable_within(peak.left, trs, cfg.steps, cfg.width, kReductCap, ctl);
        ReductSet right_set =
            reachable_within(peak.right, trs, cfg.steps, cfg.width, kReductCap, ctl);
        for (const TermPtr& cl : left_set.terms) {
            for (const TermPtr& cr : right_set.terms) {
                if (ctl.expired()) break;
                TermPtr fl = ground_freeze(cl);
                TermPtr fr = ground_freeze(cr);
                if (term_eq(fl, fr)) continue;
                std::string method;
                if (cfg.use_tcap) {
                    TermPtr ta = tcap_prefixed(fl, renamed, "%a");
                    TermPtr tb = tcap_prefixed(fr, renamed, "%b");
                    if (!unify(ta, tb)) method = "tcap";
                }
                if (method.empty() && cfg.use_nf) {
                    if (is_normal_form(fl, trs) && is_normal_form(fr, trs)) method = "nf";
                }
                if (method.empty()) continue;
                // internal consistency: a certified non-joinable pair must
                // survive a direct joinability search
                if (bounded_join(fl, fr, trs, cfg.join_guard_depth, -1, ctl) ==
                    JoinStatus::Joinable)
                    throw std::logic_error("nonconfluence witness refuted by joinability search");
                NoWitness no;
                no.source = peak.source;
                no.left = peak.left;
                no.right = peak.right;
                no.cand_left = fl;
                no.cand_right = fr;
                no.steps = cfg.steps;
                no.method = method;
                res.outcome = ProcOutcome::No;
                res.reason = peak_line(peak.left, peak.source, peak.right) + "\nNONJOIN " +
                             term_to_string(fl) + " | " + term_to_string(fr) + " via " + method;
                res.no_witness = std::move(no);
                res.elapsed = sw.elapsed();
                return res;
            }
        }
    }
    res.reason = "no non-joinable peak found";
    res.elapsed = sw.elapsed();
    return res;
}

namespace {

// Renames '#'-suffixed variables of an added rule into parseable names
// that do not collide with the signature, extending the variable set.
Rule sanitize_rule(const Rule& r, Trs& target) {
    std::map<std::string, std::string> renames;
    std::set<std::string> used;
    for (const std::string& v : vars_of(r.lhs))
        if (v.find('#') == std::string::npos) used.insert(v);
    int counter = 0;
    auto fresh_name = [&]() {
        std::string name;
        do {
            name = "x" + std::to_string(counter++);
        } while (target.signature.count(name) || used.count(name));
        used.insert(name);
        return name;
    };
    std::function<TermPtr(const TermPtr&)> go = [&](const TermPtr& t) -> TermPtr {
        if (t->is_var()) {
            auto [it, inserted] = renames.emplace(t->var_name(), "");
            if (inserted) {
                if (t->var_name().find('#') == std::string::npos &&
                    !target.signature.count(t->var_name()))
                    it->second = t->var_name();
                else
                    it->second = fresh_name();
            }
            return Term::var(it->second);
        }
        if (t->args().empty()) return t;
        std::vector<TermPtr> args;
        for (const auto& a : t->args()) args.push_back(go(a));
        return Term::app(t->symbol(), std::move(args));
    };
    Rule out{go(r.lhs), go(r.rhs)};
    for (const std::string& v : vars_of(out.lhs)) target.variables.insert(v);
    return out;
}

bool have_variant(const std::vector<Rule>& rules, const Rule& r) {
    for (const Rule& x : rules)
        if (rules_are_variants(x, r)) return true;
    return false;
}

// Every added rule must be a consequence of the original system:
// l ->* r within the given depth. Complete searches that miss r indicate
// a construction bug.
void check_consequence(const Trs& original, const Rule& r, int depth, const RunControl& ctl) {
    ReductSet reach = reachable_within(r.lhs, original, depth, -1, 2000, ctl);
    if (reach.terms.count(r.rhs)) return;
    if (!reach.complete) return;  // cannot refute; accept
    throw std::logic_error("redundant rule is not a rewrite consequence: " +
                           term_to_string(r.lhs) + " -> " + term_to_string(r.rhs));
}

}  // namespace

Trs redundant_add(const Trs& trs, const RedundantConfig& cfg, const RunControl& ctl) {
    Trs out = trs;
    std::vector<std::pair<Rule, int>> pending;  // rule + consequence depth

    if (cfg.rhs) {
        for (const Rule& rule : trs.rules) {
            for (const Reduct& r : one_step_reducts(rule.rhs, trs))
                pending.push_back({Rule{rule.lhs, r.result}, 2});
        }
    }
    if (cfg.js || cfg.develop >= 1) {
        auto cps = critical_pairs(trs);
        for (const CriticalPair& cp : cps) {
            if (ctl.expired()) break;
            if (cfg.js) {
                if (cfg.join_m < 0) {
                    pending.push_back({Rule{cp.peak, cp.left}, 1});
                    pending.push_back({Rule{cp.peak, cp.right}, 1});
                } else {
                    // minimal join length, then all meets within minimal+m
                    constexpr int kMaxMinimal = 8;
                    int minimal = -1;
                    for (int d = 0; d <= kMaxMinimal && minimal < 0; ++d) {
                        ReductSet ls = reachable_within(cp.left, trs, d, -1, 2000, ctl);
                        ReductSet rs = reachable_within(cp.right, trs, d, -1, 2000, ctl);
                        for (const TermPtr& u : ls.terms)
                            if (rs.terms.count(u)) {
                                minimal = d;
                                break;
                            }
                    }
                    if (minimal >= 0) {
                        int reach = minimal + cfg.join_m;
                        ReductSet ls = reachable_within(cp.left, trs, reach, -1, 2000, ctl);
                        ReductSet rs = reachable_within(cp.right, trs, reach, -1, 2000, ctl);
                        for (const TermPtr& u : ls.terms) {
                            if (!rs.terms.count(u) || term_eq(u, cp.peak)) continue;
                            pending.push_back({Rule{cp.peak, u}, reach + 1});
                        }
                    }
                }
            }
            if (cfg.develop >= 1) {
                for (const TermPtr& side : {cp.left, cp.right}) {
                    ReductSet reach = reachable_within(side, trs, cfg.develop, -1, 2000, ctl);
                    for (const TermPtr& u : reach.terms) {
                        if (term_eq(u, cp.peak)) continue;
                        pending.push_back({Rule{cp.peak, u}, cfg.develop + 1});
                    }
                }
            }
        }
    }

    for (auto& [rule, depth] : pending) {
        if (ctl.expired()) break;
        if (rule.lhs->is_var()) continue;
        if (cfg.size_cap >= 0 && static_cast<int>(term_size(rule.rhs)) >= cfg.size_cap) continue;
        check_consequence(trs, rule, depth, ctl);
        Rule clean = sanitize_rule(rule, out);
        if (have_variant(out.rules, clean)) continue;
        out.rules.push_back(std::move(clean));
    }
    return out;
}

Trs redundant_remove(const Trs& trs, int n, const RunControl& ctl) {
    int depth = n < 0 ? 32 : n;
    Trs out = trs;
    std::size_t i = 0;
    while (i < out.rules.size()) {
        if (ctl.expired()) break;
        Trs without = out;
        without.rules.erase(without.rules.begin() + static_cast<std::ptrdiff_t>(i));
        // a rule is redundant when its rhs is derivable from its lhs in
        // the remaining system; removal then preserves the rewrite theory
        ReductSet reach = reachable_within(out.rules[i].lhs, without, depth, -1, 20000, ctl);
        if (reach.terms.count(out.rules[i].rhs)) {
            out = std::move(without);
        } else {
            ++i;
        }
    }
    return out;
}

bool validate_result(const Trs& trs, const ProcResult& result) {
    if (result.outcome == ProcOutcome::Fail) return true;
    if (result.outcome == ProcOutcome::Yes) {
        if (!result.yes_witness) return false;
        const YesWitness& w = *result.yes_witness;
        if (w.criterion == "orthogonal") {
            if (!syntactic_predicates(trs).left_linear) return false;
            for (const CriticalPair& cp : critical_pairs(trs))
                if (!term_eq(cp.left, cp.right)) return false;
            return true;
        }
        if (w.criterion == "strongly_closed") {
            if (!syntactic_predicates(trs).linear) return false;
        } else if (w.criterion == "knuth_bendix") {
            if (!validate_termination(trs, w.termination)) return false;
        } else {
            return false;
        }
        for (const JoinWitness& j : w.joins) {
            RunControl ctl = RunControl::within(Duration(5000));
            int dl = j.steps_left < 0 ? 64 : j.steps_left;
            int dr = j.steps_right < 0 ? 64 : j.steps_right;
            if (bfs_distance(j.left, j.meet, trs, dl, ctl) < 0 && !term_eq(j.left, j.meet))
                return false;
            if (bfs_distance(j.right, j.meet, trs, dr, ctl) < 0 && !term_eq(j.right, j.meet))
                return false;
        }
        return true;
    }
    // NO: replay the divergence and re-certify non-joinability
    if (!result.no_witness) return false;
    const NoWitness& w = *result.no_witness;
    RunControl ctl = RunControl::within(Duration(10000));
    bool left_ok = false, right_ok = false;
    for (const Reduct& r : one_step_reducts(w.source, trs)) {
        left_ok |= term_eq(r.result, w.left);
        right_ok |= term_eq(r.result, w.right);
    }
    if (!left_ok || !right_ok) return false;
    int reach_depth = w.steps < 0 ? 64 : w.steps;
    auto reaches = [&](const TermPtr& from, const TermPtr& to) {
        if (term_eq(ground_freeze(from), to)) return true;
        ReductSet set = reachable_within(from, trs, reach_depth, -1, 20000, ctl);
        for (const TermPtr& u : set.terms)
            if (term_eq(ground_freeze(u), to)) return true;
        return false;
    };
    if (!reaches(w.left, w.cand_left)) return false;
    if (!reaches(w.right, w.cand_right)) return false;
    if (w.method == "tcap") {
        auto renamed = rules_renamed(trs);
        if (unify(tcap_prefixed(w.cand_left, renamed, "%a"),
                  tcap_prefixed(w.cand_right, renamed, "%b")))
            return false;
    } else if (w.method == "nf") {
        if (!is_normal_form(w.cand_left, trs) || !is_normal_form(w.cand_right, trs)) return false;
        if (term_eq(w.cand_left, w.cand_right)) return false;
    } else {
        return false;
    }
    return bounded_join(w.cand_left, w.cand_right, trs, 6, -1, ctl) != JoinStatus::Joinable;
}

}  // namespace confl
