#pragma once

#include "confl/control.hpp"
#include "confl/term.hpp"

namespace confl {

struct Reduct {
    Position position;
    std::size_t rule_index;
    TermPtr result;
};

/// All single-step successors of t, enumerated deterministically:
/// leftmost-outermost positions first, rule list order within a position.
std::vector<Reduct> one_step_reducts(const TermPtr& t, const Trs& trs);

/// First reduct in the deterministic enumeration, if any.
std::optional<TermPtr> first_reduct(const TermPtr& t, const Trs& trs);

bool is_normal_form(const TermPtr& t, const Trs& trs);

enum class JoinStatus { Joinable, NotProven, Exhausted };

/// Breadth-first joinability search up to `depth` steps per side, with at
/// most `width` successors explored per frontier node (width < 0 means
/// unbounded). Joinable when the reduct sets intersect. NotProven means
/// both sides reached a rewrite fixpoint without meeting; Exhausted means
/// a bound (depth, width, node cap, or deadline) truncated the search.
/// This never establishes non-joinability.
JoinStatus bounded_join(const TermPtr& s, const TermPtr& t, const Trs& trs, int depth, int width,
                        const RunControl& ctl = RunControl::unbounded());

/// All terms reachable from t in at most `depth` steps (including t), with
/// the same width discipline as bounded_join. `complete` reports whether
/// the returned set is the full reachability set.
struct ReductSet {
    TermSet terms;
    bool complete = true;
};
ReductSet reachable_within(const TermPtr& t, const Trs& trs, int depth, int width,
                           std::size_t max_terms = 100000,
                           const RunControl& ctl = RunControl::unbounded());

/// All normal forms reachable from t. complete=false when a cap cut the
/// exploration, in which case the set is a lower approximation.
struct NormalFormSet {
    TermSet forms;
    bool complete = true;
};
NormalFormSet normal_forms(const TermPtr& t, const Trs& trs, std::size_t max_terms = 20000,
                           const RunControl& ctl = RunControl::unbounded());

struct SyntacticPredicates {
    bool left_linear = false;
    bool right_linear = false;
    bool linear = false;
    bool ground = false;
    bool collapsing = false;
    bool duplicating = false;
};

SyntacticPredicates syntactic_predicates(const Trs& trs);

bool is_linear_term(const TermPtr& t);

/// Replaces each distinct variable x with a reserved constant named "$x".
/// The '$' prefix is not accepted by the problem parser, so frozen
/// constants can never collide with signature symbols.
TermPtr ground_freeze(const TermPtr& t);

std::string frozen_constant_name(const std::string& var);

}  // namespace confl
