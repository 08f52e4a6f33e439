#include "confl/dataset.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <sstream>
#include <thread>

#include "confl/trs_io.hpp"

namespace confl {

namespace {

// ---------------------------------------------------------------------------
// canonical form

struct SymbolInfo {
    std::string name;
    int arity = 0;
    int color = 0;
};

// one occurrence of a symbol somewhere in the rule multiset
struct Occurrence {
    int symbol;       // index into symbol table
    int parent;       // parent symbol index, -1 at root
    int child_index;  // position under the parent, 0 at root
    int depth;
    bool in_lhs;
    bool root_of_side;
};

void collect_occurrences(const TermPtr& t, int parent, int child_index, int depth, bool in_lhs,
                         const std::map<std::string, int>& index, std::vector<Occurrence>& out) {
    if (t->is_var()) return;
    int self = index.at(t->root_name());
    out.push_back({self, parent, child_index, depth, in_lhs, depth == 0});
    for (std::size_t i = 0; i < t->args().size(); ++i)
        collect_occurrences(t->args()[i], self, static_cast<int>(i + 1), depth + 1, in_lhs, index,
                            out);
}

// serialize one rule with the symbol order fixed by `rank` and per-rule
// first-occurrence variable numbering
std::string rule_string(const Rule& rule, const std::map<std::string, int>& rank) {
    std::map<std::string, int> var_ids;
    std::ostringstream out;
    std::function<void(const TermPtr&)> go = [&](const TermPtr& t) {
        if (t->is_var()) {
            auto [it, inserted] = var_ids.emplace(t->var_name(), static_cast<int>(var_ids.size()));
            out << 'v' << it->second;
            return;
        }
        out << 's' << rank.at(t->root_name());
        if (!t->args().empty()) {
            out << '(';
            for (std::size_t i = 0; i < t->args().size(); ++i) {
                if (i) out << ',';
                go(t->args()[i]);
            }
            out << ')';
        }
    };
    go(rule.lhs);
    out << '>';
    go(rule.rhs);
    return out.str();
}

std::string serialize(const Trs& trs, const std::map<std::string, int>& rank) {
    std::vector<std::string> rules;
    rules.reserve(trs.rules.size());
    for (const Rule& r : trs.rules) rules.push_back(rule_string(r, rank));
    std::sort(rules.begin(), rules.end());
    std::ostringstream out;
    for (std::size_t i = 0; i < rules.size(); ++i) out << (i ? ";" : "") << rules[i];
    return out.str();
}

constexpr int kBacktrackBudget = 10000;

}  // namespace

CanonicalKey canonical_form(const Trs& trs) {
    std::vector<SymbolInfo> symbols;
    std::map<std::string, int> index;
    for (const auto& [name, arity] : trs.signature) {
        index[name] = static_cast<int>(symbols.size());
        symbols.push_back({name, arity, 0});
    }
    if (symbols.empty()) return serialize(trs, {});

    std::vector<Occurrence> occs;
    for (const Rule& r : trs.rules) {
        collect_occurrences(r.lhs, -1, 0, 0, true, index, occs);
        collect_occurrences(r.rhs, -1, 0, 0, false, index, occs);
    }

    // initial colors from arity and occurrence statistics
    {
        std::vector<std::vector<long>> features(symbols.size());
        for (std::size_t i = 0; i < symbols.size(); ++i)
            features[i] = {symbols[i].arity, 0, 0, 0, 0};
        for (const Occurrence& o : occs) {
            auto& f = features[static_cast<std::size_t>(o.symbol)];
            ++f[1];
            if (o.in_lhs) ++f[2];
            if (o.root_of_side) ++f[3];
            f[4] += o.depth;
        }
        std::vector<std::vector<long>> sorted = features;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (std::size_t i = 0; i < symbols.size(); ++i)
            symbols[i].color = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), features[i]) - sorted.begin());
    }

    // refine by neighbourhood colors until stable
    for (std::size_t round = 0; round < symbols.size(); ++round) {
        std::vector<std::vector<long>> features(symbols.size());
        for (std::size_t i = 0; i < symbols.size(); ++i) features[i] = {symbols[i].color};
        std::vector<std::vector<std::array<long, 3>>> ctx(symbols.size());
        for (const Occurrence& o : occs) {
            long parent_color = o.parent < 0 ? -1 : symbols[static_cast<std::size_t>(o.parent)].color;
            ctx[static_cast<std::size_t>(o.symbol)].push_back(
                {parent_color, static_cast<long>(o.child_index), o.in_lhs ? 1L : 0L});
        }
        for (std::size_t i = 0; i < symbols.size(); ++i) {
            std::sort(ctx[i].begin(), ctx[i].end());
            for (const auto& c : ctx[i]) {
                features[i].push_back(c[0]);
                features[i].push_back(c[1]);
                features[i].push_back(c[2]);
            }
        }
        std::vector<std::vector<long>> sorted = features;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        bool changed = false;
        for (std::size_t i = 0; i < symbols.size(); ++i) {
            int next = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), features[i]) - sorted.begin());
            if (next != symbols[i].color) changed = true;
            symbols[i].color = next;
        }
        if (!changed) break;
    }

    // group same-colored symbols; classes are ordered by color, which is
    // itself derived from invariant features only
    std::map<int, std::vector<int>> classes;
    for (std::size_t i = 0; i < symbols.size(); ++i)
        classes[symbols[i].color].push_back(static_cast<int>(i));

    std::vector<std::vector<int>> class_list;
    for (auto& [color, members] : classes) class_list.push_back(members);

    // backtrack over permutations within each class, minimizing the
    // serialized form
    std::optional<std::string> best;
    int leaves = 0;
    std::map<std::string, int> rank;
    std::function<bool(std::size_t, int)> assign = [&](std::size_t cls, int next_rank) -> bool {
        if (cls == class_list.size()) {
            if (++leaves > kBacktrackBudget) return false;
            std::string ser = serialize(trs, rank);
            if (!best || ser < *best) best = std::move(ser);
            return true;
        }
        std::vector<int> members = class_list[cls];
        std::sort(members.begin(), members.end());
        do {
            int r = next_rank;
            for (int m : members) rank[symbols[static_cast<std::size_t>(m)].name] = r++;
            if (!assign(cls + 1, r)) return false;
        } while (std::next_permutation(members.begin(), members.end()));
        return true;
    };
    bool complete = assign(0, 0);
    if (!complete || !best) {
        // conservative fallback: a raw key that never merges anything
        return "raw:" + print_trs(trs);
    }
    return "c:" + *best;
}

DedupResult dedup(const std::vector<DatasetProblem>& problems) {
    DedupResult out;
    std::map<CanonicalKey, std::size_t> class_of;
    std::vector<std::vector<std::size_t>> member_indices;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        CanonicalKey key = canonical_form(problems[i].trs);
        auto [it, inserted] = class_of.emplace(std::move(key), member_indices.size());
        if (inserted) member_indices.emplace_back();
        member_indices[it->second].push_back(i);
    }
    for (const auto& members : member_indices) {
        std::vector<std::string> ids;
        std::size_t winner = members.front();
        for (std::size_t m : members) {
            ids.push_back(problems[m].id);
            const DatasetProblem& cand = problems[m];
            const DatasetProblem& cur = problems[winner];
            if ((cand.human && !cur.human) ||
                (cand.human == cur.human && cand.id < cur.id))
                winner = m;
        }
        out.classes.push_back(std::move(ids));
        out.survivors.push_back(problems[winner].id);
    }
    return out;
}

int label_of(const std::vector<LabelOutcome>& outcomes) {
    int label = -1;
    long best = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].answer == Answer::Maybe) continue;
        if (label < 0 || outcomes[i].millis < best) {
            label = static_cast<int>(i);
            best = outcomes[i].millis;
        }
    }
    return label;
}

std::vector<LabelRecord> label_problems(
    const std::vector<std::string>& problem_ids, std::size_t n_strategies,
    const LabelRunner& runner, int workers, const LabelSink& sink,
    const std::map<std::pair<std::string, std::size_t>, LabelOutcome>& preexisting) {
    std::vector<LabelRecord> records(problem_ids.size());
    for (std::size_t p = 0; p < problem_ids.size(); ++p) {
        records[p].problem = problem_ids[p];
        records[p].per_strategy.resize(n_strategies);
    }

    struct Job {
        std::size_t problem;
        std::size_t strategy;
    };
    std::vector<Job> jobs;
    for (std::size_t p = 0; p < problem_ids.size(); ++p)
        for (std::size_t s = 0; s < n_strategies; ++s) {
            auto pre = preexisting.find({problem_ids[p], s});
            if (pre != preexisting.end())
                records[p].per_strategy[s] = pre->second;
            else
                jobs.push_back({p, s});
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
            LabelOutcome out;
            try {
                out = runner(job.strategy, problem_ids[job.problem]);
            } catch (...) {
                out.answer = Answer::Maybe;
                out.crashed = true;
            }
            {
                std::lock_guard lock(m);
                records[job.problem].per_strategy[job.strategy] = out;
                if (sink) sink(problem_ids[job.problem], job.strategy, out);
            }
        }
    };
    int n_workers = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int i = 1; i < n_workers; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    for (LabelRecord& rec : records) rec.label = label_of(rec.per_strategy);
    return records;
}

std::vector<std::string> balance(const std::vector<LabelRecord>& records,
                                 std::size_t cap_per_label, std::size_t unsolved_quota, Rng& rng) {
    std::map<int, std::vector<std::string>> by_label;
    for (const LabelRecord& rec : records) by_label[rec.label].push_back(rec.problem);

    std::vector<std::string> selected;
    for (auto& [label, ids] : by_label) {
        std::size_t quota = label < 0 ? unsolved_quota : cap_per_label;
        if (ids.size() > quota) {
            rng.shuffle(ids);
            ids.resize(quota);
            std::sort(ids.begin(), ids.end());
        }
        selected.insert(selected.end(), ids.begin(), ids.end());
    }
    rng.shuffle(selected);
    return selected;
}

}  // namespace confl
