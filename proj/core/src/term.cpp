#include "confl/term.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>

namespace confl {

TermPtr Term::var(std::string name) {
    return TermPtr(new Term(true, std::move(name), {}));
}

TermPtr Term::app(Symbol sym, std::vector<TermPtr> args) {
    if (static_cast<int>(args.size()) != sym.arity)
        throw std::invalid_argument("arity mismatch for symbol " + sym.name);
    return TermPtr(new Term(false, std::move(sym.name), std::move(args)));
}

bool term_eq(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->is_var() != b->is_var()) return false;
    if (a->root_name() != b->root_name()) return false;
    if (a->args().size() != b->args().size()) return false;
    for (std::size_t i = 0; i < a->args().size(); ++i)
        if (!term_eq(a->args()[i], b->args()[i])) return false;
    return true;
}

int term_compare(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return 0;
    if (a->is_var() != b->is_var()) return a->is_var() ? -1 : 1;
    if (int c = a->root_name().compare(b->root_name()); c != 0) return c < 0 ? -1 : 1;
    if (a->args().size() != b->args().size())
        return a->args().size() < b->args().size() ? -1 : 1;
    for (std::size_t i = 0; i < a->args().size(); ++i)
        if (int c = term_compare(a->args()[i], b->args()[i]); c != 0) return c;
    return 0;
}

std::size_t term_hash(const TermPtr& t) {
    std::size_t h = std::hash<std::string>{}(t->root_name());
    h = h * 31 + (t->is_var() ? 0x9e3779b9u : 0x85ebca6bu);
    for (const auto& a : t->args()) h = h * 1000003 + term_hash(a);
    return h;
}

std::size_t term_size(const TermPtr& t) {
    std::size_t n = 1;
    for (const auto& a : t->args()) n += term_size(a);
    return n;
}

static void print_term(std::ostream& out, const TermPtr& t) {
    out << t->root_name();
    if (t->is_app() && !t->args().empty()) {
        out << '(';
        for (std::size_t i = 0; i < t->args().size(); ++i) {
            if (i) out << ',';
            print_term(out, t->args()[i]);
        }
        out << ')';
    }
}

std::string term_to_string(const TermPtr& t) {
    std::ostringstream out;
    print_term(out, t);
    return out.str();
}

std::string position_to_string(const Position& p) {
    if (p.empty()) return "e";
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(p[i]);
    }
    return s;
}

bool rule_eq(const Rule& a, const Rule& b) {
    return term_eq(a.lhs, b.lhs) && term_eq(a.rhs, b.rhs);
}

std::optional<TermPtr> Substitution::lookup(const std::string& var) const {
    auto it = bindings_.find(var);
    if (it == bindings_.end()) return std::nullopt;
    return it->second;
}

void Substitution::bind(const std::string& var, TermPtr t) {
    if (t->is_var() && t->var_name() == var) return;  // never map a variable to itself
    bindings_[var] = std::move(t);
}

TermPtr Substitution::apply(const TermPtr& t) const {
    if (t->is_var()) {
        auto it = bindings_.find(t->var_name());
        return it == bindings_.end() ? t : it->second;
    }
    if (t->args().empty()) return t;
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    bool changed = false;
    for (const auto& a : t->args()) {
        TermPtr a2 = apply(a);
        changed |= a2.get() != a.get();
        args.push_back(std::move(a2));
    }
    if (!changed) return t;
    return Term::app(t->symbol(), std::move(args));
}

std::set<std::string> vars_of(const TermPtr& t) {
    std::set<std::string> out;
    std::function<void(const TermPtr&)> go = [&](const TermPtr& u) {
        if (u->is_var())
            out.insert(u->var_name());
        else
            for (const auto& a : u->args()) go(a);
    };
    go(t);
    return out;
}

TermPtr apply_subst(const TermPtr& t, const Substitution& sigma) {
    return sigma.apply(t);
}

// Commitments are tracked in a plain map: an identity binding (x matched
// against the variable x in the subject) is still a commitment and must
// block later occurrences from rebinding, even though the resulting
// Substitution omits it.
static bool match_into(const TermPtr& pattern, const TermPtr& subject,
                       std::map<std::string, TermPtr>& bound) {
    if (pattern->is_var()) {
        auto [it, inserted] = bound.emplace(pattern->var_name(), subject);
        return inserted || term_eq(it->second, subject);
    }
    if (subject->is_var()) return false;
    if (pattern->root_name() != subject->root_name() ||
        pattern->args().size() != subject->args().size())
        return false;
    for (std::size_t i = 0; i < pattern->args().size(); ++i)
        if (!match_into(pattern->args()[i], subject->args()[i], bound)) return false;
    return true;
}

std::optional<Substitution> match_term(const TermPtr& pattern, const TermPtr& subject) {
    std::map<std::string, TermPtr> bound;
    if (!match_into(pattern, subject, bound)) return std::nullopt;
    Substitution sigma;
    for (auto& [v, t] : bound) sigma.bind(v, std::move(t));
    return sigma;
}

static bool occurs(const std::string& var, const TermPtr& t) {
    if (t->is_var()) return t->var_name() == var;
    for (const auto& a : t->args())
        if (occurs(var, a)) return true;
    return false;
}

// Robinson unification on a work list, applying the growing substitution
// eagerly so that the result is idempotent.
std::optional<Substitution> unify(const TermPtr& s, const TermPtr& t) {
    std::vector<std::pair<TermPtr, TermPtr>> work{{s, t}};
    Substitution sigma;
    while (!work.empty()) {
        auto [a, b] = work.back();
        work.pop_back();
        a = sigma.apply(a);
        b = sigma.apply(b);
        if (term_eq(a, b)) continue;
        if (a->is_var()) {
            if (occurs(a->var_name(), b)) return std::nullopt;
            Substitution binder;
            binder.bind(a->var_name(), b);
            // keep existing bindings fully applied
            std::map<std::string, TermPtr> updated;
            for (const auto& [v, u] : sigma.bindings()) updated[v] = binder.apply(u);
            sigma = Substitution(std::move(updated));
            sigma.bind(a->var_name(), b);
            continue;
        }
        if (b->is_var()) {
            work.emplace_back(b, a);
            continue;
        }
        if (a->root_name() != b->root_name() || a->args().size() != b->args().size())
            return std::nullopt;
        for (std::size_t i = 0; i < a->args().size(); ++i)
            work.emplace_back(a->args()[i], b->args()[i]);
    }
    return sigma;
}

TermPtr subterm_at(const TermPtr& t, const Position& p) {
    TermPtr cur = t;
    for (int i : p) {
        if (cur->is_var() || i < 1 || i > static_cast<int>(cur->args().size()))
            throw std::out_of_range("invalid position " + position_to_string(p));
        cur = cur->args()[i - 1];
    }
    return cur;
}

TermPtr replace_at(const TermPtr& t, const Position& p, const TermPtr& replacement) {
    if (p.empty()) return replacement;
    std::function<TermPtr(const TermPtr&, std::size_t)> go = [&](const TermPtr& u, std::size_t depth) -> TermPtr {
        if (depth == p.size()) return replacement;
        int i = p[depth];
        if (u->is_var() || i < 1 || i > static_cast<int>(u->args().size()))
            throw std::out_of_range("invalid position " + position_to_string(p));
        std::vector<TermPtr> args = u->args();
        args[i - 1] = go(args[i - 1], depth + 1);
        return Term::app(u->symbol(), std::move(args));
    };
    return go(t, 0);
}

bool position_valid(const TermPtr& t, const Position& p) {
    TermPtr cur = t;
    for (int i : p) {
        if (cur->is_var() || i < 1 || i > static_cast<int>(cur->args().size())) return false;
        cur = cur->args()[i - 1];
    }
    return true;
}

static void collect_positions(const TermPtr& t, Position& prefix, std::vector<Position>& out,
                              int mode) {  // 0 all, 1 fun, 2 var
    bool take = mode == 0 || (mode == 1 && t->is_app()) || (mode == 2 && t->is_var());
    if (take) out.push_back(prefix);
    for (std::size_t i = 0; i < t->args().size(); ++i) {
        prefix.push_back(static_cast<int>(i + 1));
        collect_positions(t->args()[i], prefix, out, mode);
        prefix.pop_back();
    }
}

std::vector<Position> all_positions(const TermPtr& t) {
    std::vector<Position> out;
    Position prefix;
    collect_positions(t, prefix, out, 0);
    return out;
}

std::vector<Position> function_positions(const TermPtr& t) {
    std::vector<Position> out;
    Position prefix;
    collect_positions(t, prefix, out, 1);
    return out;
}

std::vector<Position> variable_positions(const TermPtr& t) {
    std::vector<Position> out;
    Position prefix;
    collect_positions(t, prefix, out, 2);
    return out;
}

}  // namespace confl
