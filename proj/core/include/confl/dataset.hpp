#pragma once

#include <functional>

#include "confl/procs.hpp"
#include "confl/rng.hpp"
#include "confl/term.hpp"

namespace confl {

/// Canonical byte string of a TRS, invariant under per-rule variable
/// renaming, arity-preserving function-symbol bijection, and rule
/// reordering. Computed by iterative color refinement over symbols with
/// backtracking over residual symmetry classes; when the backtracking
/// budget is exceeded the key falls back to a raw serialization, which
/// can only fail to merge equivalent systems, never merge distinct ones.
using CanonicalKey = std::string;

CanonicalKey canonical_form(const Trs& trs);

struct DatasetProblem {
    std::string id;
    Trs trs;
    bool human = false;  // human-made problems win dedup ties
};

struct DedupResult {
    std::vector<std::vector<std::string>> classes;  // member ids, insertion order
    std::vector<std::string> survivors;             // one per class
};

/// Groups problems by canonical key. The survivor of each class is the
/// human-made member if any, then the lexicographically lowest id.
DedupResult dedup(const std::vector<DatasetProblem>& problems);

struct LabelOutcome {
    Answer answer = Answer::Maybe;
    long millis = 0;
    bool crashed = false;
};

struct LabelRecord {
    std::string problem;
    std::vector<LabelOutcome> per_strategy;
    int label = -1;  // index of the fastest solver, -1 = unsolved
};

using LabelRunner = std::function<LabelOutcome(std::size_t strategy, const std::string& problem)>;
using LabelSink = std::function<void(const std::string& problem, std::size_t strategy,
                                     const LabelOutcome&)>;

/// Runs every (strategy, problem) pair through the runner on a bounded
/// worker pool and labels each problem with its fastest solver (ties
/// break to the lowest strategy index). Pairs present in `preexisting`
/// are not re-run, which makes interrupted runs resumable; `sink` is
/// called once per fresh result under a lock.
std::vector<LabelRecord> label_problems(
    const std::vector<std::string>& problem_ids, std::size_t n_strategies,
    const LabelRunner& runner, int workers = 1, const LabelSink& sink = nullptr,
    const std::map<std::pair<std::string, std::size_t>, LabelOutcome>& preexisting = {});

/// Recomputes labels from recorded outcomes only (deterministic replay).
int label_of(const std::vector<LabelOutcome>& outcomes);

/// Balanced selection: at most `cap_per_label` problems per label sampled
/// uniformly, plus exactly min(unsolved_quota, available) unsolved
/// problems; the final order is shuffled deterministically by the rng.
std::vector<std::string> balance(const std::vector<LabelRecord>& records,
                                 std::size_t cap_per_label, std::size_t unsolved_quota, Rng& rng);

}  // namespace confl
