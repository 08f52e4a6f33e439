#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace confl {

/// A function symbol: a name together with a fixed arity.
/// Constants are symbols of arity zero.
struct Symbol {
    std::string name;
    int arity = 0;

    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// An immutable first-order term: either a variable or a function symbol
/// applied to exactly arity-many argument terms. Nodes are shared freely;
/// all operations treat terms as values.
class Term {
public:
    static TermPtr var(std::string name);
    static TermPtr app(Symbol sym, std::vector<TermPtr> args = {});
    /// Convenience for constants.
    static TermPtr constant(std::string name) { return app(Symbol{std::move(name), 0}); }

    bool is_var() const { return is_var_; }
    bool is_app() const { return !is_var_; }

    const std::string& var_name() const { return name_; }
    Symbol symbol() const { return Symbol{name_, static_cast<int>(args_.size())}; }
    const std::string& root_name() const { return name_; }
    const std::vector<TermPtr>& args() const { return args_; }

private:
    Term(bool is_var, std::string name, std::vector<TermPtr> args)
        : is_var_(is_var), name_(std::move(name)), args_(std::move(args)) {}

    bool is_var_;
    std::string name_;
    std::vector<TermPtr> args_;
};

bool term_eq(const TermPtr& a, const TermPtr& b);
/// Total order on terms (vars before apps, then by name, then by args).
int term_compare(const TermPtr& a, const TermPtr& b);
std::size_t term_hash(const TermPtr& t);
/// Number of symbol and variable occurrences; always >= 1.
std::size_t term_size(const TermPtr& t);
std::string term_to_string(const TermPtr& t);

struct TermLess {
    bool operator()(const TermPtr& a, const TermPtr& b) const { return term_compare(a, b) < 0; }
};
struct TermHash {
    std::size_t operator()(const TermPtr& t) const { return term_hash(t); }
};
struct TermEq {
    bool operator()(const TermPtr& a, const TermPtr& b) const { return term_eq(a, b); }
};

using TermSet = std::set<TermPtr, TermLess>;

/// A finite mapping from variable names to terms. Application replaces all
/// bound variables simultaneously; unbound variables are left unchanged.
class Substitution {
public:
    Substitution() = default;
    explicit Substitution(std::map<std::string, TermPtr> bindings) : bindings_(std::move(bindings)) {}

    bool empty() const { return bindings_.empty(); }
    std::size_t size() const { return bindings_.size(); }
    const std::map<std::string, TermPtr>& bindings() const { return bindings_; }

    std::optional<TermPtr> lookup(const std::string& var) const;
    void bind(const std::string& var, TermPtr t);

    TermPtr apply(const TermPtr& t) const;

private:
    std::map<std::string, TermPtr> bindings_;
};

/// A path of 1-based child indices; the empty path is the root.
using Position = std::vector<int>;

std::string position_to_string(const Position& p);

struct Rule {
    TermPtr lhs;
    TermPtr rhs;
};

bool rule_eq(const Rule& a, const Rule& b);

/// A named term rewrite system: signature, declared variables, and an
/// ordered list of rules. Every symbol occurring in the rules must be in
/// the signature with a consistent arity.
struct Trs {
    std::string name;
    std::map<std::string, int> signature;  // symbol name -> arity
    std::set<std::string> variables;
    std::vector<Rule> rules;
};

std::set<std::string> vars_of(const TermPtr& t);

TermPtr apply_subst(const TermPtr& t, const Substitution& sigma);

/// Syntactic matching: returns sigma with pattern.sigma == subject, with
/// domain exactly vars_of(pattern), if such a substitution exists.
std::optional<Substitution> match_term(const TermPtr& pattern, const TermPtr& subject);

/// Most general unifier with occurs check. The result is idempotent:
/// applying it twice equals applying it once.
std::optional<Substitution> unify(const TermPtr& s, const TermPtr& t);

TermPtr subterm_at(const TermPtr& t, const Position& p);
TermPtr replace_at(const TermPtr& t, const Position& p, const TermPtr& replacement);
bool position_valid(const TermPtr& t, const Position& p);

/// All positions of t in leftmost-outermost (pre-) order.
std::vector<Position> all_positions(const TermPtr& t);
/// Positions whose subterm is a function application, pre-order.
std::vector<Position> function_positions(const TermPtr& t);
/// Positions whose subterm is a variable, pre-order.
std::vector<Position> variable_positions(const TermPtr& t);

}  // namespace confl
