#include "confl/scheduler.hpp"

#include <algorithm>
#include <sstream>

namespace confl {

bool solves_within(const EvalMatrix& matrix, const std::string& strategy,
                   const std::string& problem, double seconds) {
    const EvalEntry* e = matrix.find(strategy, problem);
    if (!e || e->answer == Answer::Maybe) return false;
    return static_cast<double>(e->millis) <= seconds * 1000.0;
}

std::size_t schedule_coverage(const Schedule& schedule, const EvalMatrix& matrix,
                              const std::vector<std::string>& problems) {
    std::size_t covered = 0;
    for (const std::string& p : problems) {
        for (const ScheduleItem& item : schedule) {
            if (solves_within(matrix, item.strategy, p, item.seconds)) {
                ++covered;
                break;
            }
        }
    }
    return covered;
}

Schedule greedy_schedule(const EvalMatrix& matrix, const std::vector<std::string>& strategies,
                         const std::vector<double>& splits,
                         const std::vector<std::string>& problems) {
    Schedule schedule;
    std::set<std::string> remaining(problems.begin(), problems.end());
    for (double split : splits) {
        std::size_t best_count = 0;
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < strategies.size(); ++i) {
            std::size_t count = 0;
            for (const std::string& p : remaining)
                if (solves_within(matrix, strategies[i], p, split)) ++count;
            if (count > best_count) {
                best_count = count;
                best_idx = i;
            }
        }
        schedule.push_back({strategies[best_idx], split});
        std::vector<std::string> solved_now;
        for (const std::string& p : remaining)
            if (solves_within(matrix, strategies[best_idx], p, split)) solved_now.push_back(p);
        for (const std::string& p : solved_now) remaining.erase(p);
    }
    return schedule;
}

Schedule best_schedule(const EvalMatrix& matrix, const std::vector<std::string>& strategies,
                       const std::vector<std::vector<double>>& split_patterns, int shuffles,
                       const std::vector<std::string>& problems, Rng& rng) {
    Schedule best;
    std::size_t best_cov = 0;
    double best_total = 0.0;
    bool have = false;
    auto consider = [&](const Schedule& cand) {
        std::size_t cov = schedule_coverage(cand, matrix, problems);
        double total = 0;
        for (const ScheduleItem& it : cand) total += it.seconds;
        if (!have || cov > best_cov || (cov == best_cov && total < best_total)) {
            best = cand;
            best_cov = cov;
            best_total = total;
            have = true;
        }
    };
    for (const std::vector<double>& pattern : split_patterns) {
        std::vector<double> splits = pattern;
        consider(greedy_schedule(matrix, strategies, splits, problems));
        for (int i = 1; i < shuffles; ++i) {
            rng.shuffle(splits);
            consider(greedy_schedule(matrix, strategies, splits, problems));
        }
    }
    return best;
}

std::vector<std::vector<double>> default_split_patterns(double budget) {
    std::vector<std::vector<double>> out;
    out.push_back({budget});
    out.push_back({budget / 2, budget / 2});
    out.push_back(std::vector<double>(6, budget / 6));
    // probe-heavy: eight short slots, the rest in a few long ones
    {
        std::vector<double> probes(8, 0.5);
        double rest = budget - 4.0;
        if (rest > 0) {
            probes.push_back(rest * 0.15);
            probes.push_back(rest * 0.25);
            probes.push_back(rest * 0.6);
        }
        out.push_back(std::move(probes));
    }
    {
        std::vector<double> geo;
        double total = 0, v = budget / 60.0;
        while (total + v < budget) {
            geo.push_back(v);
            total += v;
            v *= 2;
        }
        if (budget > total) geo.push_back(budget - total);
        if (geo.size() > 1) out.push_back(std::move(geo));
    }
    return out;
}

Outcome run_schedule(const Schedule& schedule, const Trs& problem,
                     const std::map<std::string, StrategyDefs>& defs_by_id, int workers) {
    Outcome combined;
    combined.final_problem = problem;
    Clock::time_point start = Clock::now();
    for (const ScheduleItem& item : schedule) {
        auto it = defs_by_id.find(item.strategy);
        if (it == defs_by_id.end())
            throw StrategyError("schedule references unknown strategy '" + item.strategy + "'");
        Outcome o = eval_strategy(it->second, problem,
                                  Duration(static_cast<long>(item.seconds * 1000)), workers);
        combined.trace.insert(combined.trace.end(), o.trace.begin(), o.trace.end());
        if (o.success) {
            combined.success = true;
            combined.answer = o.answer;
            combined.decisive = std::move(o.decisive);
            combined.final_problem = std::move(o.final_problem);
            break;
        }
    }
    combined.total = std::chrono::duration_cast<Duration>(Clock::now() - start);
    return combined;
}

std::string print_schedule(const Schedule& schedule) {
    std::ostringstream out;
    for (const ScheduleItem& item : schedule) out << item.strategy << '\t' << item.seconds << '\n';
    return out.str();
}

Schedule parse_schedule(const std::string& text) {
    Schedule out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("schedule line " + std::to_string(lineno) +
                                     ": expected 'strategy<TAB>seconds'");
        out.push_back({line.substr(0, tab), std::stod(line.substr(tab + 1))});
    }
    return out;
}

}  // namespace confl
