#pragma once

#include "confl/portfolio.hpp"
#include "confl/strategy.hpp"

namespace confl {

struct ScheduleItem {
    std::string strategy;
    double seconds = 0.0;
};

/// Ordered (strategy, time split) pairs; total time within the budget.
using Schedule = std::vector<ScheduleItem>;

/// Whether the matrix says the strategy answers the problem within the
/// given split (recorded millis <= split seconds; no partial credit).
bool solves_within(const EvalMatrix& matrix, const std::string& strategy,
                   const std::string& problem, double seconds);

std::size_t schedule_coverage(const Schedule& schedule, const EvalMatrix& matrix,
                              const std::vector<std::string>& problems);

/// For each split in order, picks the strategy covering the most still-
/// unsolved problems within that split (ties to the lower strategy
/// index). A strategy may appear again with a different split.
Schedule greedy_schedule(const EvalMatrix& matrix, const std::vector<std::string>& strategies,
                         const std::vector<double>& splits,
                         const std::vector<std::string>& problems);

/// Greedy selection over `shuffles` random permutations of every split
/// pattern; returns the schedule with maximal coverage (ties: shorter
/// total time, then earlier pattern).
Schedule best_schedule(const EvalMatrix& matrix, const std::vector<std::string>& strategies,
                       const std::vector<std::vector<double>>& split_patterns, int shuffles,
                       const std::vector<std::string>& problems, Rng& rng);

/// Default split patterns over a budget (seconds): the full budget as a
/// single slot, halves, six equal slots, a probe-heavy mix of 0.5 s
/// slots with a few long ones, and a geometric ramp.
std::vector<std::vector<double>> default_split_patterns(double budget);

/// Executes the schedule: each strategy runs under its split as a hard
/// deadline, first YES/NO stops the schedule.
Outcome run_schedule(const Schedule& schedule, const Trs& problem,
                     const std::map<std::string, StrategyDefs>& defs_by_id, int workers = 1);

std::string print_schedule(const Schedule& schedule);
Schedule parse_schedule(const std::string& text);

}  // namespace confl
