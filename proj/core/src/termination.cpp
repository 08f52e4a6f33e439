#include "confl/termination.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "confl/rng.hpp"

namespace confl {

std::string TermResult::describe() const {
    if (status == TermStatus::Unknown) return "unknown";
    std::ostringstream out;
    if (std::holds_alternative<std::monostate>(cert)) {
        out << "terminating (no rules)";
    } else if (const auto* c = std::get_if<InterpCert>(&cert)) {
        out << "linear interpretation:";
        for (const auto& [sym, v] : c->interp.coeffs) {
            out << ' ' << sym << "=[";
            for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
            out << ']';
        }
    } else if (const auto* c = std::get_if<LpoCert>(&cert)) {
        out << "lpo precedence:";
        std::vector<std::pair<int, std::string>> order;
        for (const auto& [sym, r] : c->prec.rank) order.emplace_back(r, sym);
        std::sort(order.rbegin(), order.rend());
        for (const auto& [r, sym] : order) out << ' ' << sym;
    } else if (const auto* c = std::get_if<KboCert>(&cert)) {
        out << "kbo w0=" << c->weights.w0 << " weights:";
        for (const auto& [sym, w] : c->weights.weights) out << ' ' << sym << "=" << w;
    }
    return out.str();
}

long interp_value(const TermPtr& t, const LinearInterp& interp,
                  const std::map<std::string, long>& assignment) {
    if (t->is_var()) {
        auto it = assignment.find(t->var_name());
        if (it == assignment.end())
            throw std::invalid_argument("unassigned variable " + t->var_name());
        return it->second;
    }
    auto ct = interp.coeffs.find(t->root_name());
    if (ct == interp.coeffs.end())
        throw std::invalid_argument("uninterpreted symbol " + t->root_name());
    const std::vector<long>& c = ct->second;
    long v = c.at(0);
    for (std::size_t i = 0; i < t->args().size(); ++i)
        v += c.at(i + 1) * interp_value(t->args()[i], interp, assignment);
    return v;
}

namespace {

struct LinPoly {
    long cst = 0;
    std::map<std::string, long> coef;
};

LinPoly poly_of(const TermPtr& t, const LinearInterp& interp) {
    if (t->is_var()) {
        LinPoly p;
        p.coef[t->var_name()] = 1;
        return p;
    }
    auto it = interp.coeffs.find(t->root_name());
    if (it == interp.coeffs.end())
        throw std::invalid_argument("uninterpreted symbol " + t->root_name());
    const std::vector<long>& c = it->second;
    LinPoly p;
    p.cst = c.at(0);
    for (std::size_t i = 0; i < t->args().size(); ++i) {
        LinPoly q = poly_of(t->args()[i], interp);
        p.cst += c.at(i + 1) * q.cst;
        for (const auto& [v, k] : q.coef) p.coef[v] += c.at(i + 1) * k;
    }
    return p;
}

bool poly_dominates(const LinPoly& l, const LinPoly& r) {
    bool strict_coef = false;
    for (const auto& [v, k] : r.coef) {
        auto it = l.coef.find(v);
        long lk = it == l.coef.end() ? 0 : it->second;
        if (lk < k) return false;
        if (lk > k) strict_coef = true;
    }
    for (const auto& [v, k] : l.coef) {
        if (!r.coef.count(v) && k > 0) strict_coef = true;
    }
    if (l.cst > r.cst) return true;
    return strict_coef && l.cst >= r.cst;
}

}  // namespace

bool interp_orients(const Trs& trs, const LinearInterp& interp) {
    for (const Rule& rule : trs.rules) {
        if (!poly_dominates(poly_of(rule.lhs, interp), poly_of(rule.rhs, interp))) return false;
    }
    return true;
}

namespace {

bool occurs_in(const TermPtr& var, const TermPtr& t) {
    if (t->is_var()) return t->var_name() == var->var_name();
    for (const auto& a : t->args())
        if (occurs_in(var, a)) return true;
    return false;
}

}  // namespace

bool lpo_greater(const TermPtr& s, const TermPtr& t, const Precedence& prec) {
    if (s->is_var()) return false;
    if (t->is_var()) return occurs_in(t, s);
    // some argument of s is >= t
    for (const auto& si : s->args())
        if (term_eq(si, t) || lpo_greater(si, t, prec)) return true;
    auto greater_than_all_args = [&]() {
        for (const auto& tj : t->args())
            if (!lpo_greater(s, tj, prec)) return false;
        return true;
    };
    if (prec.greater(s->root_name(), t->root_name())) return greater_than_all_args();
    if (s->root_name() == t->root_name() && s->args().size() == t->args().size()) {
        for (std::size_t i = 0; i < s->args().size(); ++i) {
            if (term_eq(s->args()[i], t->args()[i])) continue;
            if (!lpo_greater(s->args()[i], t->args()[i], prec)) return false;
            return greater_than_all_args();
        }
    }
    return false;
}

namespace {

void var_counts(const TermPtr& t, std::map<std::string, long>& counts) {
    if (t->is_var()) {
        ++counts[t->var_name()];
        return;
    }
    for (const auto& a : t->args()) var_counts(a, counts);
}

long kbo_weight(const TermPtr& t, const WeightFn& w) {
    if (t->is_var()) return w.w0;
    long v = w.weight_of(t->root_name());
    for (const auto& a : t->args()) v += kbo_weight(a, w);
    return v;
}

void collect_signature(const TermPtr& t, std::map<std::string, int>& sig) {
    if (t->is_var()) return;
    sig[t->root_name()] = static_cast<int>(t->args().size());
    for (const auto& a : t->args()) collect_signature(a, sig);
}

bool kbo_greater_checked(const TermPtr& s, const TermPtr& t, const Precedence& prec,
                         const WeightFn& w) {
    std::map<std::string, long> sc, tc;
    var_counts(s, sc);
    var_counts(t, tc);
    for (const auto& [v, n] : tc) {
        auto it = sc.find(v);
        if (it == sc.end() || it->second < n) return false;
    }
    long ws = kbo_weight(s, w), wt = kbo_weight(t, w);
    if (ws > wt) return true;
    if (ws < wt) return false;
    if (t->is_var()) {
        // s = f^n(x) for the special unary weight-zero symbol
        TermPtr cur = s;
        if (cur->is_var()) return false;
        const std::string f = cur->root_name();
        while (cur->is_app()) {
            if (cur->args().size() != 1 || cur->root_name() != f) return false;
            cur = cur->args()[0];
        }
        return cur->is_var() && cur->var_name() == t->var_name();
    }
    if (s->is_var()) return false;
    if (prec.greater(s->root_name(), t->root_name())) return true;
    if (s->root_name() != t->root_name() || s->args().size() != t->args().size()) return false;
    for (std::size_t i = 0; i < s->args().size(); ++i) {
        if (term_eq(s->args()[i], t->args()[i])) continue;
        return kbo_greater_checked(s->args()[i], t->args()[i], prec, w);
    }
    return false;
}

}  // namespace

bool weights_admissible(const WeightFn& w, const Precedence& prec,
                        const std::map<std::string, int>& signature) {
    if (w.w0 <= 0) return false;
    for (const auto& [sym, arity] : signature) {
        long wf = w.weight_of(sym);
        if (wf < 0) return false;
        if (arity == 0 && wf < w.w0) return false;
        if (arity == 1 && wf == 0) {
            for (const auto& [other, oa] : signature)
                if (prec.greater(other, sym)) return false;
        }
    }
    return true;
}

bool kbo_greater(const TermPtr& s, const TermPtr& t, const Precedence& prec, const WeightFn& w) {
    std::map<std::string, int> sig;
    collect_signature(s, sig);
    collect_signature(t, sig);
    if (!weights_admissible(w, prec, sig))
        throw std::invalid_argument("inadmissible KBO weight function");
    return kbo_greater_checked(s, t, prec, w);
}

namespace {

std::vector<std::string> signature_symbols(const Trs& trs) {
    std::vector<std::string> syms;
    syms.reserve(trs.signature.size());
    for (const auto& [name, arity] : trs.signature) syms.push_back(name);
    return syms;
}

bool lpo_orients(const Trs& trs, const Precedence& prec) {
    for (const Rule& r : trs.rules)
        if (!lpo_greater(r.lhs, r.rhs, prec)) return false;
    return true;
}

bool kbo_orients(const Trs& trs, const Precedence& prec, const WeightFn& w) {
    if (!weights_admissible(w, prec, trs.signature)) return false;
    for (const Rule& r : trs.rules)
        if (!kbo_greater_checked(r.lhs, r.rhs, prec, w)) return false;
    return true;
}

Precedence prec_from_order(const std::vector<std::string>& syms, const std::vector<int>& order) {
    Precedence p;
    for (std::size_t i = 0; i < order.size(); ++i)
        p.rank[syms[order[i]]] = static_cast<int>(order.size() - i);
    return p;
}

// A topological guess from root-symbol constraints lhs-root > rhs-root,
// useful as the first candidate for larger signatures.
std::vector<int> greedy_order(const Trs& trs, const std::vector<std::string>& syms) {
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < syms.size(); ++i) index[syms[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> above(syms.size());
    std::vector<int> indeg(syms.size(), 0);
    std::set<std::pair<int, int>> edges;
    for (const Rule& r : trs.rules) {
        if (r.lhs->is_app() && r.rhs->is_app() && r.lhs->root_name() != r.rhs->root_name()) {
            int a = index[r.lhs->root_name()], b = index[r.rhs->root_name()];
            if (edges.emplace(a, b).second) {
                above[a].push_back(b);
                ++indeg[b];
            }
        }
    }
    std::vector<int> order, ready;
    for (std::size_t i = 0; i < syms.size(); ++i)
        if (indeg[i] == 0) ready.push_back(static_cast<int>(i));
    while (!ready.empty()) {
        int n = ready.front();
        ready.erase(ready.begin());
        order.push_back(n);
        for (int m : above[n])
            if (--indeg[m] == 0) ready.push_back(m);
    }
    if (order.size() != syms.size()) {  // constraint cycle; fall back to declaration order
        order.clear();
        for (std::size_t i = 0; i < syms.size(); ++i) order.push_back(static_cast<int>(i));
    }
    return order;
}

template <typename TryOrder>
bool search_precedences(const Trs& trs, const std::vector<std::string>& syms,
                        const RunControl& ctl, TryOrder&& try_order) {
    std::vector<int> order(syms.size());
    std::iota(order.begin(), order.end(), 0);
    if (syms.size() <= 6) {
        std::sort(order.begin(), order.end());
        do {
            if (ctl.expired()) return false;
            if (try_order(order)) return true;
        } while (std::next_permutation(order.begin(), order.end()));
        return false;
    }
    if (try_order(greedy_order(trs, syms))) return true;
    Rng rng(0x5eedf00dULL);
    for (int restart = 0; restart < 100; ++restart) {
        if (ctl.expired()) return false;
        rng.shuffle(order);
        if (try_order(order)) return true;
    }
    return false;
}

std::optional<LinearInterp> search_interp(const Trs& trs, int bound, const RunControl& ctl) {
    std::vector<std::pair<std::string, int>> syms(trs.signature.begin(), trs.signature.end());
    // slot layout: per symbol, [a0, a1..an]
    struct Slot {
        std::size_t sym;
        std::size_t idx;  // 0 = constant part
        long lo, hi;
    };
    std::vector<Slot> slots;
    for (std::size_t si = 0; si < syms.size(); ++si) {
        int arity = syms[si].second;
        // constants interpret to at least 1 so ground values stay positive,
        // keeping the strict-coefficient disjunct of poly_dominates sound
        long a0_lo = arity == 0 ? 1 : 0;
        slots.push_back({si, 0, a0_lo, bound});
        for (int i = 1; i <= arity; ++i) slots.push_back({si, static_cast<std::size_t>(i), 1, bound});
    }
    std::vector<long> vals(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) vals[i] = slots[i].lo;

    auto build = [&]() {
        LinearInterp interp;
        std::size_t k = 0;
        for (const auto& [name, arity] : syms) {
            std::vector<long> c(static_cast<std::size_t>(arity) + 1);
            for (int i = 0; i <= arity; ++i) c[static_cast<std::size_t>(i)] = vals[k++];
            interp.coeffs[name] = std::move(c);
        }
        return interp;
    };

    std::size_t checked = 0;
    for (;;) {
        if ((++checked & 0x3ff) == 0 && ctl.expired()) return std::nullopt;
        LinearInterp interp = build();
        if (interp_orients(trs, interp)) return interp;
        // odometer increment
        std::size_t i = 0;
        for (; i < slots.size(); ++i) {
            if (vals[i] < slots[i].hi) {
                ++vals[i];
                break;
            }
            vals[i] = slots[i].lo;
        }
        if (i == slots.size()) return std::nullopt;
    }
}

std::optional<WeightFn> search_kbo_weights(const Trs& trs, const std::vector<std::string>& syms,
                                           const Precedence& prec, long bound,
                                           const RunControl& ctl) {
    // exhaustive weight vectors for small signatures, heuristic above
    if (syms.size() <= 4) {
        std::vector<long> w(syms.size(), 0);
        for (;;) {
            if (ctl.expired()) return std::nullopt;
            WeightFn fn;
            for (std::size_t i = 0; i < syms.size(); ++i) fn.weights[syms[i]] = w[i];
            if (kbo_orients(trs, prec, fn)) return fn;
            std::size_t i = 0;
            for (; i < syms.size(); ++i) {
                if (w[i] < bound) {
                    ++w[i];
                    break;
                }
                w[i] = 0;
            }
            if (i == syms.size()) return std::nullopt;
        }
    }
    WeightFn ones;
    for (const auto& s : syms) ones.weights[s] = 1;
    if (kbo_orients(trs, prec, ones)) return ones;
    Rng rng(0xbadc0deULL);
    for (int attempt = 0; attempt < 32; ++attempt) {
        if (ctl.expired()) return std::nullopt;
        WeightFn fn;
        for (const auto& s : syms) fn.weights[s] = rng.uniform_int(0, bound);
        if (kbo_orients(trs, prec, fn)) return fn;
    }
    return std::nullopt;
}

}  // namespace

TermResult prove_termination(const Trs& trs, const TerminationBudget& budget,
                             const RunControl& outer) {
    TermResult result;
    if (trs.rules.empty()) {
        result.status = TermStatus::Terminating;
        return result;
    }
    RunControl ctl = outer.restricted(budget.time_cap);
    std::vector<std::string> syms = signature_symbols(trs);

    if (budget.lpo_enabled && !ctl.expired()) {
        bool found = search_precedences(trs, syms, ctl, [&](const std::vector<int>& order) {
            Precedence p = prec_from_order(syms, order);
            if (lpo_orients(trs, p)) {
                result.status = TermStatus::Terminating;
                result.cert = LpoCert{std::move(p)};
                return true;
            }
            return false;
        });
        if (found) return result;
    }
    if (budget.kbo_enabled && !ctl.expired()) {
        bool found = search_precedences(trs, syms, ctl, [&](const std::vector<int>& order) {
            Precedence p = prec_from_order(syms, order);
            if (auto w = search_kbo_weights(trs, syms, p, budget.weight_bound, ctl)) {
                result.status = TermStatus::Terminating;
                result.cert = KboCert{std::move(p), std::move(*w)};
                return true;
            }
            return false;
        });
        if (found) return result;
    }
    if (budget.interp_enabled && !ctl.expired()) {
        if (auto interp = search_interp(trs, budget.coeff_bound, ctl)) {
            result.status = TermStatus::Terminating;
            result.cert = InterpCert{std::move(*interp)};
            return result;
        }
    }
    return result;
}

bool validate_termination(const Trs& trs, const TermResult& result) {
    if (result.status != TermStatus::Terminating) return false;
    if (std::holds_alternative<std::monostate>(result.cert)) return trs.rules.empty();
    if (const auto* c = std::get_if<InterpCert>(&result.cert)) {
        for (const auto& [sym, coeffs] : c->interp.coeffs) {
            for (std::size_t i = 1; i < coeffs.size(); ++i)
                if (coeffs[i] < 1) return false;
            if (coeffs.at(0) < 0) return false;
            auto it = trs.signature.find(sym);
            if (it != trs.signature.end() && it->second == 0 && coeffs.at(0) < 1) return false;
        }
        return interp_orients(trs, c->interp);
    }
    if (const auto* c = std::get_if<LpoCert>(&result.cert)) {
        for (const Rule& r : trs.rules)
            if (!lpo_greater(r.lhs, r.rhs, c->prec)) return false;
        return true;
    }
    if (const auto* c = std::get_if<KboCert>(&result.cert)) {
        if (!weights_admissible(c->weights, c->prec, trs.signature)) return false;
        for (const Rule& r : trs.rules)
            if (!kbo_greater(r.lhs, r.rhs, c->prec, c->weights)) return false;
        return true;
    }
    return false;
}

}  // namespace confl
