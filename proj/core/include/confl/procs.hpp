#pragma once

#include "confl/control.hpp"
#include "confl/critical_pairs.hpp"
#include "confl/rewrite.hpp"
#include "confl/term.hpp"
#include "confl/termination.hpp"

namespace confl {

enum class Answer { Yes, No, Maybe };
std::string to_string(Answer a);

enum class ProcOutcome { Yes, No, Fail };

/// Join witness for one critical pair: left ->(k) meet <-(m) right.
struct JoinWitness {
    TermPtr left;
    TermPtr right;
    TermPtr meet;
    int steps_left = 0;
    int steps_right = 0;
};

struct YesWitness {
    std::string criterion;  // orthogonal | strongly_closed | knuth_bendix
    TermResult termination; // knuth_bendix only
    std::vector<JoinWitness> joins;
};

/// Non-joinability witness: a genuine one-step divergence plus the
/// (frozen) reduct pair certified non-joinable.
struct NoWitness {
    TermPtr source;
    TermPtr left;
    TermPtr right;
    TermPtr cand_left;   // frozen
    TermPtr cand_right;  // frozen
    int steps = 0;       // expansion bound that produced the candidates
    std::string method;  // tcap | nf
};

struct ProcResult {
    ProcOutcome outcome = ProcOutcome::Fail;
    std::string reason;
    Duration elapsed{0};
    std::optional<YesWitness> yes_witness;
    std::optional<NoWitness> no_witness;

    Answer answer() const {
        switch (outcome) {
            case ProcOutcome::Yes: return Answer::Yes;
            case ProcOutcome::No: return Answer::No;
            default: return Answer::Maybe;
        }
    }
};

enum class OverlapMode { Fun, Var, Both };

struct NonconfluenceConfig {
    int steps = 2;
    int width = -1;  // -1 = unbounded
    OverlapMode overlap_mode = OverlapMode::Fun;
    bool use_tcap = true;
    bool use_nf = false;
    int join_guard_depth = 3;
};

struct RedundantConfig {
    bool js = false;
    bool rhs = false;
    int develop = 0;    // k >= 1 enables bounded development closing
    int size_cap = -1;  // skip added rules whose rhs size >= cap; -1 = unrestricted
    int join_m = 0;     // (minimal+m)-length joins for js; -1 = no join search
};

/// Weak orthogonality: YES iff left-linear and every critical pair is
/// trivial.
ProcResult proc_orthogonal(const Trs& trs);

/// YES iff the TRS is linear and every critical pair (s, t) satisfies
/// s ->(<=n) . <-(=) t  and  s ->(=) . <-(<=n) t, searched breadth-first.
ProcResult proc_strongly_closed(const Trs& trs, int steps,
                                const RunControl& ctl = RunControl::unbounded());

/// Newman's lemma route: prove termination, then decide local confluence
/// by comparing the complete normal-form sets of every critical pair.
/// YES when all pairs join, NO when a pair has disjoint normal forms,
/// FAIL when termination is unknown or the search was cut short.
ProcResult proc_knuth_bendix(const Trs& trs, const TerminationBudget& budget = {},
                             int join_depth = 8,
                             const RunControl& ctl = RunControl::unbounded());

/// Bottom-up reduct abstraction: variables become fresh variables, and a
/// subterm that unifies with some (renamed) lhs is replaced by a fresh
/// variable. Non-unifiable tcaps certify non-joinability.
TermPtr tcap(const TermPtr& t, const Trs& trs);

/// Searches peaks (critical pairs and/or single-variable-instantiation
/// peaks), expands both sides by at most cfg.steps rewrite steps, and
/// reports NO with a witness whose frozen sides are certified
/// non-joinable by tcap or by being distinct normal forms. Every NO is
/// re-checked against a bounded joinability search before being reported.
ProcResult proc_nonconfluence(const Trs& trs, const NonconfluenceConfig& cfg = {},
                              const RunControl& ctl = RunControl::unbounded());

/// Adds redundant rules (l -> r with l ->* r in the original system)
/// according to the enabled modes. The result is a superset TRS.
Trs redundant_add(const Trs& trs, const RedundantConfig& cfg,
                  const RunControl& ctl = RunControl::unbounded());

/// Removes rules whose sides are joinable within n steps in the
/// remaining system (n = -1: unbounded depth with a global cap),
/// greedily in rule list order.
Trs redundant_remove(const Trs& trs, int n, const RunControl& ctl = RunControl::unbounded());

/// Replays the witness carried by a YES/NO result against the TRS it was
/// produced for. MAYBE results validate trivially.
bool validate_result(const Trs& trs, const ProcResult& result);

}  // namespace confl
