#include "confl/portfolio.hpp"

#include <algorithm>
#include <mutex>
#include <thread>

#include "json.hpp"

namespace confl {

using nlohmann::json;

bool EvalMatrix::has(const std::string& strategy_hash, const std::string& problem) const {
    return entries_.count({strategy_hash, problem}) > 0;
}

const EvalEntry* EvalMatrix::find(const std::string& strategy_hash,
                                  const std::string& problem) const {
    auto it = entries_.find({strategy_hash, problem});
    return it == entries_.end() ? nullptr : &it->second;
}

void EvalMatrix::insert(const std::string& strategy_hash, const std::string& problem,
                        EvalEntry entry) {
    entries_.emplace(std::make_pair(strategy_hash, problem), entry);
}

std::size_t EvalMatrix::distinct_strategies() const {
    std::set<std::string> seen;
    for (const auto& [key, entry] : entries_) seen.insert(key.first);
    return seen.size();
}

std::string EvalMatrix::to_jsonl() const {
    std::string out;
    for (const auto& [key, e] : entries_) {
        json row{{"strategy", key.first},
                 {"problem", key.second},
                 {"answer", to_string(e.answer)},
                 {"millis", e.millis},
                 {"workers", e.workers}};
        out += row.dump();
        out += '\n';
    }
    return out;
}

EvalMatrix EvalMatrix::from_jsonl(const std::string& text) {
    EvalMatrix m;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        json row = json::parse(line);
        EvalEntry e;
        std::string ans = row.at("answer").get<std::string>();
        e.answer = ans == "YES" ? Answer::Yes : ans == "NO" ? Answer::No : Answer::Maybe;
        e.millis = row.at("millis").get<long>();
        e.workers = row.value("workers", 1);
        m.insert(row.at("strategy").get<std::string>(), row.at("problem").get<std::string>(), e);
    }
    return m;
}

const PortfolioStrategy* PortfolioState::find(const std::string& id) const {
    for (const PortfolioStrategy& s : strategies)
        if (s.id == id) return &s;
    return nullptr;
}

PortfolioStrategy* PortfolioState::find(const std::string& id) {
    for (PortfolioStrategy& s : strategies)
        if (s.id == id) return &s;
    return nullptr;
}

namespace {

bool solved(const EvalEntry& e) { return e.answer != Answer::Maybe; }

struct Score {
    std::size_t solved = 0;
    long total_millis = 0;  // on solved problems

    bool better_than(const Score& o) const {
        if (solved != o.solved) return solved > o.solved;
        return total_millis < o.total_millis;
    }
};

Score score_of(const PortfolioState& state, const std::string& id,
               const std::vector<std::string>& problems) {
    Score s;
    for (const std::string& p : problems) {
        const EvalEntry* e = state.matrix.find(id, p);
        if (e && solved(*e)) {
            ++s.solved;
            s.total_millis += e->millis;
        }
    }
    return s;
}

}  // namespace

void evaluate(PortfolioState& state, const std::vector<std::string>& strategy_ids,
              const std::vector<std::string>& problems, const StrategyRunner& runner,
              const Hyperparams& beta) {
    struct Job {
        const PortfolioStrategy* strategy;
        const std::string* problem;
    };
    std::vector<Job> jobs;
    for (const std::string& id : strategy_ids) {
        const PortfolioStrategy* s = state.find(id);
        if (!s) continue;
        for (const std::string& p : problems)
            if (!state.matrix.has(id, p)) jobs.push_back({s, &p});
    }
    std::mutex m;
    std::size_t next = 0;
    auto work = [&]() {
        for (;;) {
            Job job;
            {
                std::lock_guard lock(m);
                if (next >= jobs.size()) return;
                job = jobs[next++];
            }
            EvalEntry entry;
            try {
                entry = runner(job.strategy->assignment.text, *job.problem, beta.eval_limit);
            } catch (...) {
                entry = EvalEntry{Answer::Maybe, 0, beta.workers};
            }
            {
                std::lock_guard lock(m);
                state.matrix.insert(job.strategy->id, *job.problem, entry);
                ++state.total_runs;
            }
        }
    };
    int n_workers = std::max(1, beta.workers);
    std::vector<std::thread> pool;
    for (int i = 1; i < n_workers && i < static_cast<int>(jobs.size()); ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
}

void reduce(PortfolioState& state, const std::vector<std::string>& problems,
            const Hyperparams& beta) {
    std::vector<std::pair<Score, std::size_t>> scored;
    for (std::size_t i = 0; i < state.strategies.size(); ++i)
        scored.emplace_back(score_of(state, state.strategies[i].id, problems), i);
    // stable: ties keep insertion order
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first.better_than(b.first); });

    state.current.clear();
    for (std::size_t i = 0; i < scored.size() && i < static_cast<std::size_t>(beta.generation_size);
         ++i)
        state.current.push_back(state.strategies[scored[i].second].id);

    if (state.strategies.size() > static_cast<std::size_t>(beta.portfolio_cap)) {
        std::set<std::size_t> keep;
        for (std::size_t i = 0;
             i < scored.size() && keep.size() < static_cast<std::size_t>(beta.portfolio_cap); ++i)
            keep.insert(scored[i].second);
        std::vector<PortfolioStrategy> pruned;
        for (std::size_t i = 0; i < state.strategies.size(); ++i)
            if (keep.count(i)) pruned.push_back(std::move(state.strategies[i]));
        state.strategies = std::move(pruned);
    }
}

std::vector<std::string> mastered_set(const PortfolioState& state, const std::string& id,
                                      const std::vector<std::string>& problems) {
    std::vector<std::string> out;
    for (const std::string& p : problems) {
        const EvalEntry* mine = state.matrix.find(id, p);
        if (!mine || !solved(*mine)) continue;
        bool fastest = true;
        for (const PortfolioStrategy& other : state.strategies) {
            if (other.id == id) continue;
            const EvalEntry* theirs = state.matrix.find(other.id, p);
            if (theirs && solved(*theirs) && theirs->millis < mine->millis) {
                fastest = false;
                break;
            }
        }
        if (fastest) out.push_back(p);
    }
    return out;
}

std::optional<std::string> select(PortfolioState& state, const std::vector<std::string>& problems,
                                  const Hyperparams& beta, Rng& rng) {
    std::vector<std::string> best;
    std::size_t best_mastered = 0;
    for (const std::string& id : state.current) {
        const PortfolioStrategy* s = state.find(id);
        if (!s || s->exhausted || s->specializations >= beta.max_specializations) continue;
        std::size_t m = mastered_set(state, id, problems).size();
        if (best.empty() || m > best_mastered) {
            best = {id};
            best_mastered = m;
        } else if (m == best_mastered) {
            best.push_back(id);
        }
    }
    if (best.empty()) return std::nullopt;
    return best[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(best.size()) - 1))];
}

namespace {

// one cached objective evaluation of an assignment over the focus set
struct FocusObjective {
    PortfolioState* state;
    const std::vector<std::string>* focus;
    const StrategyRunner* runner;
    const Hyperparams* beta;

    Score eval(const ParamAssignment& a) {
        for (const std::string& p : *focus) {
            if (state->matrix.has(a.hash, p)) continue;
            EvalEntry entry;
            try {
                entry = (*runner)(a.text, p, beta->eval_limit);
            } catch (...) {
                entry = EvalEntry{Answer::Maybe, 0, beta->workers};
            }
            state->matrix.insert(a.hash, p, entry);
            ++state->total_runs;
        }
        Score s;
        for (const std::string& p : *focus) {
            const EvalEntry* e = state->matrix.find(a.hash, p);
            if (e && solved(*e)) {
                ++s.solved;
                s.total_millis += e->millis;
            }
        }
        return s;
    }
};

// single-parameter move; forbidden assignments are resampled, never
// instantiated
std::optional<std::map<std::string, std::string>> random_neighbor(
    const ParamSpace& space, const std::map<std::string, std::string>& values, Rng& rng,
    int changes) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::map<std::string, std::string> next = values;
        for (int c = 0; c < changes; ++c) {
            const ParamDef& p = space.params[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(space.params.size()) - 1))];
            next[p.name] = p.domain[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(p.domain.size()) - 1))];
        }
        if (!matches_forbidden(space, next)) return next;
    }
    return std::nullopt;
}

}  // namespace

std::optional<ParamAssignment> specialize(PortfolioState& state, const std::string& id,
                                          const std::vector<std::string>& problems,
                                          const StrategyRunner& runner, const Hyperparams& beta,
                                          Rng& rng) {
    PortfolioStrategy* seed = state.find(id);
    if (!seed) return std::nullopt;
    ++seed->specializations;

    if (beta.spec_budget <= Duration(0) || beta.spec_steps <= 0) {
        seed->exhausted = true;
        return std::nullopt;
    }

    // focus set: what the seed solves plus an equal-sized sample of
    // problems no strategy solves yet
    std::vector<std::string> solved_by_seed, unsolved;
    for (const std::string& p : problems) {
        const EvalEntry* e = state.matrix.find(id, p);
        if (e && solved(*e)) {
            solved_by_seed.push_back(p);
            continue;
        }
        bool any = false;
        for (const PortfolioStrategy& s : state.strategies) {
            const EvalEntry* o = state.matrix.find(s.id, p);
            if (o && solved(*o)) {
                any = true;
                break;
            }
        }
        if (!any) unsolved.push_back(p);
    }
    std::vector<std::string> focus = solved_by_seed;
    std::size_t want = std::max<std::size_t>(1, solved_by_seed.size());
    rng.shuffle(unsolved);
    for (std::size_t i = 0; i < unsolved.size() && i < want; ++i) focus.push_back(unsolved[i]);
    if (focus.empty()) focus = problems;

    FocusObjective obj{&state, &focus, &runner, &beta};
    Clock::time_point stop = Clock::now() + beta.spec_budget;

    ParamAssignment current = seed->assignment;
    Score current_score = obj.eval(current);
    ParamAssignment best = current;
    Score best_score = current_score;

    for (int step = 0; step < beta.spec_steps && Clock::now() < stop; ++step) {
        auto next_values = random_neighbor(state.space, current.values, rng, 1);
        if (!next_values) break;
        ParamAssignment next = instantiate_assignment(state.space, *next_values);
        Score sc = obj.eval(next);
        if (sc.better_than(current_score)) {
            current = next;
            current_score = sc;
            if (sc.better_than(best_score)) {
                best = next;
                best_score = sc;
            }
        }
        if (rng.uniform01() < 0.05) {
            if (auto restart = random_neighbor(state.space, best.values, rng, 3)) {
                current = instantiate_assignment(state.space, *restart);
                current_score = obj.eval(current);
                if (current_score.better_than(best_score)) {
                    best = current;
                    best_score = current_score;
                }
            }
        }
    }
    if (best.hash == seed->assignment.hash) {
        seed->exhausted = true;
        return std::nullopt;
    }
    return best;
}

PortfolioState portfolio_loop(const ParamSpace& space, const std::vector<ParamAssignment>& initial,
                            const std::vector<std::string>& problems,
                            const StrategyRunner& runner, const Hyperparams& beta,
                            const LoopHooks& hooks) {
    PortfolioState state;
    state.space = space;
    for (const ParamAssignment& a : initial) {
        if (state.find(a.hash)) continue;  // content-identical seeds collapse
        PortfolioStrategy s;
        s.id = a.hash;
        s.assignment = a;
        s.born_iteration = 0;
        state.strategies.push_back(std::move(s));
        if (hooks.on_strategy) hooks.on_strategy(state.strategies.back());
    }
    return portfolio_loop_resume(std::move(state), problems, runner, beta, hooks);
}

PortfolioState portfolio_loop_resume(PortfolioState state, const std::vector<std::string>& problems,
                                   const StrategyRunner& runner, const Hyperparams& beta,
                                   const LoopHooks& hooks) {
    Rng rng(beta.seed + static_cast<std::uint64_t>(state.iteration));
    Clock::time_point stop = beta.wall_budget == Duration::max()
                                 ? Clock::time_point::max()
                                 : Clock::now() + beta.wall_budget;

    while (state.iteration < beta.max_iterations && Clock::now() < stop) {
        ++state.iteration;
        std::vector<std::string> ids;
        for (const PortfolioStrategy& s : state.strategies) ids.push_back(s.id);
        evaluate(state, ids, problems, runner, beta);
        reduce(state, problems, beta);
        auto picked = select(state, problems, beta, rng);
        if (!picked) break;
        auto invented = specialize(state, *picked, problems, runner, beta, rng);
        if (invented && !state.find(invented->hash)) {
            PortfolioStrategy s;
            s.id = invented->hash;
            s.assignment = *invented;
            s.parent = *picked;
            s.born_iteration = state.iteration;
            state.strategies.push_back(std::move(s));
            if (hooks.on_strategy) hooks.on_strategy(state.strategies.back());
        }
        if (hooks.on_iteration) hooks.on_iteration(state);
    }
    // final evaluation so the portfolio's coverage is fully recorded
    std::vector<std::string> ids;
    for (const PortfolioStrategy& s : state.strategies) ids.push_back(s.id);
    evaluate(state, ids, problems, runner, beta);
    return state;
}

std::string state_to_json(const PortfolioState& state) {
    json out;
    out["iteration"] = state.iteration;
    out["total_runs"] = state.total_runs;
    out["current"] = state.current;
    json strategies = json::array();
    for (const PortfolioStrategy& s : state.strategies) {
        json row;
        row["id"] = s.id;
        row["parent"] = s.parent;
        row["born_iteration"] = s.born_iteration;
        row["specializations"] = s.specializations;
        row["exhausted"] = s.exhausted;
        row["values"] = s.assignment.values;
        strategies.push_back(std::move(row));
    }
    out["strategies"] = std::move(strategies);
    return out.dump(2);
}

PortfolioState state_from_json(const std::string& text, const ParamSpace& space) {
    PortfolioState state;
    state.space = space;
    json in = json::parse(text);
    state.iteration = in.value("iteration", 0);
    state.total_runs = in.value("total_runs", std::size_t{0});
    if (in.contains("current")) state.current = in["current"].get<std::vector<std::string>>();
    for (const json& row : in.at("strategies")) {
        PortfolioStrategy s;
        auto values = row.at("values").get<std::map<std::string, std::string>>();
        s.assignment = instantiate_assignment(space, values);
        s.id = row.at("id").get<std::string>();
        s.parent = row.value("parent", std::string{});
        s.born_iteration = row.value("born_iteration", 0);
        s.specializations = row.value("specializations", 0);
        s.exhausted = row.value("exhausted", false);
        state.strategies.push_back(std::move(s));
    }
    return state;
}

}  // namespace confl
