#pragma once

#include <functional>

#include "confl/param_space.hpp"
#include "confl/rng.hpp"

namespace confl {

struct EvalEntry {
    Answer answer = Answer::Maybe;
    long millis = 0;
    int workers = 1;
};

/// Append-only (strategy-hash, problem-id) -> result cache. A pair is
/// never run twice.
class EvalMatrix {
public:
    bool has(const std::string& strategy_hash, const std::string& problem) const;
    const EvalEntry* find(const std::string& strategy_hash, const std::string& problem) const;
    void insert(const std::string& strategy_hash, const std::string& problem, EvalEntry entry);
    std::size_t size() const { return entries_.size(); }
    std::size_t distinct_strategies() const;

    const std::map<std::pair<std::string, std::string>, EvalEntry>& entries() const {
        return entries_;
    }

    std::string to_jsonl() const;
    static EvalMatrix from_jsonl(const std::string& text);

private:
    std::map<std::pair<std::string, std::string>, EvalEntry> entries_;
};

/// One run of a strategy (given as config text) on one problem under a
/// wall-clock limit. The portfolio loop is generic over this, so the real
/// prover, an external solver adapter, and synthetic benchmark harnesses
/// all plug in the same way.
using StrategyRunner =
    std::function<EvalEntry(const std::string& strategy_text, const std::string& problem_id,
                            Duration limit)>;

struct PortfolioStrategy {
    std::string id;  // content hash
    ParamAssignment assignment;
    std::string parent;  // provenance: empty for initial strategies
    int born_iteration = 0;
    int specializations = 0;
    bool exhausted = false;
};

/// Loop hyperparameters.
struct Hyperparams {
    int generation_size = 8;
    int portfolio_cap = 200;
    Duration eval_limit = Duration(30000);
    Duration spec_budget = Duration(60000);
    int spec_steps = 200;     // ILS step cap within one specialization
    int max_specializations = 3;
    int max_iterations = 64;
    Duration wall_budget = Duration::max();
    int workers = 1;
    std::uint64_t seed = 0;
};

struct PortfolioState {
    ParamSpace space;
    std::vector<PortfolioStrategy> strategies;  // all invented strategies
    std::vector<std::string> current;           // current generation, by id
    EvalMatrix matrix;
    int iteration = 0;
    std::size_t total_runs = 0;  // runner invocations; equals fresh matrix entries

    const PortfolioStrategy* find(const std::string& id) const;
    PortfolioStrategy* find(const std::string& id);
};

/// Fills the cache for every (strategy, problem) pair not yet present.
void evaluate(PortfolioState& state, const std::vector<std::string>& strategy_ids,
              const std::vector<std::string>& problems, const StrategyRunner& runner,
              const Hyperparams& beta);

/// Scores every strategy (solved count, then lower total time on solved),
/// keeps the best generation_size as the current generation, and drops
/// the portfolio back to portfolio_cap.
void reduce(PortfolioState& state, const std::vector<std::string>& problems,
            const Hyperparams& beta);

/// Picks the current-generation strategy with the largest mastered set
/// (problems it solves at least as fast as every other strategy) that can
/// still be specialized; ties break randomly.
std::optional<std::string> select(PortfolioState& state, const std::vector<std::string>& problems,
                                  const Hyperparams& beta, Rng& rng);

/// Iterated local search around the selected strategy on its focus set
/// (problems it solves plus an equal-sized sample of globally unsolved
/// ones): single-parameter moves, strict improvement, random restarts
/// with a 3-parameter perturbation. Forbidden assignments are never
/// instantiated. Returns a new assignment distinct from the seed, or
/// nullopt when the search is exhausted.
std::optional<ParamAssignment> specialize(PortfolioState& state, const std::string& id,
                                          const std::vector<std::string>& problems,
                                          const StrategyRunner& runner, const Hyperparams& beta,
                                          Rng& rng);

/// Journaling hooks; per-run journaling is done by wrapping the runner.
struct LoopHooks {
    std::function<void(const PortfolioState&)> on_iteration;
    std::function<void(const PortfolioStrategy&)> on_strategy;
};

/// evaluate -> reduce -> select -> specialize until no strategy can be
/// selected, the wall budget is spent, or the iteration cap is reached.
PortfolioState portfolio_loop(const ParamSpace& space,
                            const std::vector<ParamAssignment>& initial,
                            const std::vector<std::string>& problems,
                            const StrategyRunner& runner, const Hyperparams& beta,
                            const LoopHooks& hooks = {});

/// Continues the loop from a persisted state (strategies plus eval
/// cache); pairs already in the matrix are never re-run.
PortfolioState portfolio_loop_resume(PortfolioState state, const std::vector<std::string>& problems,
                                   const StrategyRunner& runner, const Hyperparams& beta,
                                   const LoopHooks& hooks = {});

/// Problems a strategy solves at least as fast as every other evaluated
/// strategy (its mastered set).
std::vector<std::string> mastered_set(const PortfolioState& state, const std::string& id,
                                      const std::vector<std::string>& problems);

std::string state_to_json(const PortfolioState& state);
PortfolioState state_from_json(const std::string& text, const ParamSpace& space);

}  // namespace confl
