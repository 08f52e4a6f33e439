#pragma once

#include "confl/term.hpp"

namespace confl {

/// An overlap of a renamed inner rule into a function position of a
/// renamed outer rule's left-hand side. Root overlaps of a rule with its
/// own variant are excluded.
struct Overlap {
    Rule inner;             // renamed apart
    std::size_t inner_index;
    Position position;      // function position in outer lhs
    Rule outer;             // renamed apart
    std::size_t outer_index;
    Substitution mgu;
};

struct CriticalPair {
    TermPtr left;   // peak rewritten with the inner rule at `position`
    TermPtr right;  // peak rewritten with the outer rule at the root
    TermPtr peak;
    Position position;
};

/// A one-step divergence: source rewrites to left and to right.
struct Peak {
    TermPtr source;
    TermPtr left;
    TermPtr right;
};

/// Renames a rule's variables with the given suffix (appended after '#',
/// which no parseable identifier may contain).
Rule rename_rule(const Rule& r, const std::string& suffix);

/// Whether two rules are equal up to a variable renaming.
bool rules_are_variants(const Rule& a, const Rule& b);

std::vector<Overlap> overlaps(const Trs& trs);

std::vector<CriticalPair> critical_pairs(const Trs& trs);

/// Peaks obtained by instantiating a single variable occurrence of an
/// outer lhs with an inner lhs and rewriting that occurrence. Exposes
/// divergences of non-left-linear rules that function-position critical
/// pairs miss (one lhs insertion deep; further steps belong to the
/// nonconfluence processor's reduct search).
std::vector<Peak> variable_peaks(const Trs& trs);

}  // namespace confl
