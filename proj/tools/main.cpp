#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "confl/dataset.hpp"
#include "confl/generator.hpp"
#include "confl/portfolio.hpp"
#include "confl/report.hpp"
#include "confl/scheduler.hpp"
#include "confl/strategy.hpp"
#include "confl/trs_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace confl;

namespace {

constexpr const char* kDefaultStrategy = R"(# built-in prover configuration
AUTO = (CONF || NOTCR)!
CONF = (orthogonal | strongly_closed -steps 7 \
  | ((redundant_remove -steps 4)?; kb) \
  | ((redundant -js -size 9)?; (orthogonal | strongly_closed -steps 7)))
NOTCR = ((nonconfluence -steps 2 -tcap -fun \
  | nonconfluence -steps 3 -tcap -nf \
  | ((redundant -rhs)?; nonconfluence -steps 2 -tcap -fun))[20])
)";

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::vector<fs::path> list_files(const fs::path& dir, const std::string& extension) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == extension)
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

int default_workers() {
    if (const char* env = std::getenv("CONFL_WORKERS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

StrategyDefs load_strategy(const std::string& file, const std::string& entry) {
    StrategyDefs defs =
        parse_strategy(file.empty() ? std::string(kDefaultStrategy) : read_file(file));
    if (!entry.empty()) defs.entry = entry;
    validate_defs(defs);
    return defs;
}

struct LoadedProblems {
    std::vector<std::string> ids;
    std::map<std::string, Trs> by_id;
};

LoadedProblems load_problems(const std::string& dir) {
    LoadedProblems out;
    for (const fs::path& p : list_files(dir, ".trs")) {
        std::string id = p.stem().string();
        out.by_id[id] = parse_trs(read_file(p), id);
        out.ids.push_back(id);
    }
    if (out.ids.empty()) throw std::runtime_error("no .trs problems in " + dir);
    return out;
}

long elapsed_ms(Clock::time_point start) {
    return std::chrono::duration_cast<Duration>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------

int cmd_prove(const std::string& problem_file, const std::string& strategy_file,
              const std::string& entry, double timeout, int workers,
              const std::string& cert_file) {
    Trs trs;
    try {
        trs = parse_trs(read_file(problem_file), fs::path(problem_file).stem().string());
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    }
    StrategyDefs defs = load_strategy(strategy_file, entry);
    Outcome o = eval_strategy(defs, trs, Duration(static_cast<long>(timeout * 1000)), workers);
    std::cout << to_string(answer_of(o)) << "\n";
    if (!cert_file.empty() && o.decisive) write_file(cert_file, o.decisive->reason + "\n");
    return 0;
}

int cmd_gen(int count, std::uint64_t seed, const std::string& out_dir, GenConfig cfg) {
    cfg.seed = seed;
    fs::create_directories(out_dir);
    std::ostringstream manifest;
    for (int i = 0; i < count; ++i) {
        GeneratedTrs g = gen_trs_at(cfg, static_cast<std::uint64_t>(i));
        write_file(fs::path(out_dir) / (g.trs.name + ".trs"), print_trs(g.trs));
        SyntacticPredicates p = syntactic_predicates(g.trs);
        json row{{"name", g.trs.name},
                 {"seed", seed},
                 {"index", i},
                 {"forced_left_linear", g.forced_left_linear},
                 {"left_linear", p.left_linear},
                 {"rules", g.trs.rules.size()},
                 {"symbols", g.trs.signature.size()},
                 {"comp", g.comp}};
        manifest << row.dump() << "\n";
    }
    write_file(fs::path(out_dir) / "manifest.jsonl", manifest.str());
    std::cout << "generated " << count << " problems in " << out_dir << "\n";
    return 0;
}

int cmd_dedup(const std::string& dir, const std::string& human_dir, const std::string& classes_out,
              const std::string& survivors_out) {
    std::vector<DatasetProblem> problems;
    if (!human_dir.empty())
        for (const fs::path& p : list_files(human_dir, ".trs"))
            problems.push_back({p.stem().string(), parse_trs(read_file(p)), true});
    for (const fs::path& p : list_files(dir, ".trs"))
        problems.push_back({p.stem().string(), parse_trs(read_file(p)), false});

    DedupResult result = dedup(problems);
    std::map<std::string, CanonicalKey> keys;
    for (const DatasetProblem& p : problems) keys[p.id] = canonical_form(p.trs);

    std::ostringstream classes;
    for (std::size_t i = 0; i < result.classes.size(); ++i) {
        classes << keys[result.classes[i].front()] << '\t';
        for (std::size_t j = 0; j < result.classes[i].size(); ++j)
            classes << (j ? "," : "") << result.classes[i][j];
        classes << '\n';
    }
    write_file(classes_out, classes.str());
    if (!survivors_out.empty()) {
        std::ostringstream survivors;
        for (const std::string& id : result.survivors) survivors << id << '\n';
        write_file(survivors_out, survivors.str());
    }
    std::cout << problems.size() << " problems, " << result.classes.size() << " classes, "
              << (problems.size() - result.classes.size()) << " duplicates\n";
    return 0;
}

int cmd_label(const std::string& problems_dir, const std::string& strategies_dir, double limit,
              int workers, const std::string& out_file) {
    LoadedProblems problems = load_problems(problems_dir);
    std::vector<StrategyDefs> strategies;
    std::vector<std::string> strategy_names;
    for (const fs::path& p : list_files(strategies_dir, ".strat")) {
        StrategyDefs defs = parse_strategy(read_file(p));
        validate_defs(defs);
        strategies.push_back(std::move(defs));
        strategy_names.push_back(p.stem().string());
    }
    if (strategies.empty()) throw std::runtime_error("no .strat files in " + strategies_dir);

    // resume from an interrupted run
    std::map<std::pair<std::string, std::size_t>, LabelOutcome> preexisting;
    if (fs::exists(out_file)) {
        std::istringstream in(read_file(out_file));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json row = json::parse(line);
            LabelOutcome o;
            std::string ans = row.at("answer").get<std::string>();
            o.answer = ans == "YES" ? Answer::Yes : ans == "NO" ? Answer::No : Answer::Maybe;
            o.millis = row.at("millis").get<long>();
            o.crashed = row.value("crashed", false);
            preexisting[{row.at("problem").get<std::string>(),
                         row.at("strategy_index").get<std::size_t>()}] = o;
        }
    }

    std::ofstream log(out_file, std::ios::app);
    Duration limit_ms(static_cast<long>(limit * 1000));
    auto runner = [&](std::size_t s, const std::string& pid) {
        Clock::time_point start = Clock::now();
        Outcome o = eval_strategy(strategies[s], problems.by_id.at(pid), limit_ms, 1);
        return LabelOutcome{answer_of(o), elapsed_ms(start), false};
    };
    auto sink = [&](const std::string& pid, std::size_t s, const LabelOutcome& o) {
        json row{{"problem", pid},
                 {"strategy_index", s},
                 {"strategy", strategy_names[s]},
                 {"answer", to_string(o.answer)},
                 {"millis", o.millis},
                 {"crashed", o.crashed}};
        log << row.dump() << "\n";
        log.flush();
    };
    std::vector<LabelRecord> records =
        label_problems(problems.ids, strategies.size(), runner, workers, sink, preexisting);

    std::map<int, int> histogram;
    for (const LabelRecord& r : records) ++histogram[r.label];
    for (const auto& [label, n] : histogram) {
        if (label < 0)
            std::cout << "unsolved: " << n << "\n";
        else
            std::cout << strategy_names[static_cast<std::size_t>(label)] << ": " << n << "\n";
    }
    return 0;
}

int cmd_balance(const std::string& labels_file, std::size_t cap, std::size_t unsolved,
                std::uint64_t seed, const std::string& out_file) {
    // rebuild records from the label log (deterministic replay)
    std::map<std::string, std::map<std::size_t, LabelOutcome>> raw;
    std::istringstream in(read_file(labels_file));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json row = json::parse(line);
        LabelOutcome o;
        std::string ans = row.at("answer").get<std::string>();
        o.answer = ans == "YES" ? Answer::Yes : ans == "NO" ? Answer::No : Answer::Maybe;
        o.millis = row.at("millis").get<long>();
        raw[row.at("problem").get<std::string>()][row.at("strategy_index").get<std::size_t>()] = o;
    }
    std::vector<LabelRecord> records;
    for (const auto& [pid, outcomes] : raw) {
        LabelRecord rec;
        rec.problem = pid;
        std::size_t n = outcomes.empty() ? 0 : outcomes.rbegin()->first + 1;
        rec.per_strategy.resize(n);
        for (const auto& [idx, o] : outcomes) rec.per_strategy[idx] = o;
        rec.label = label_of(rec.per_strategy);
        records.push_back(std::move(rec));
    }
    Rng rng(seed);
    std::vector<std::string> chosen = balance(records, cap, unsolved, rng);
    std::ostringstream out;
    for (const std::string& id : chosen) out << id << '\n';
    write_file(out_file, out.str());
    std::cout << "selected " << chosen.size() << " problems\n";
    return 0;
}

StrategyRunner make_prover_runner(const LoadedProblems& problems, int workers_per_run) {
    return [&problems, workers_per_run](const std::string& text, const std::string& pid,
                                        Duration limit) {
        StrategyDefs defs = parse_strategy(text);
        Clock::time_point start = Clock::now();
        Outcome o = eval_strategy(defs, problems.by_id.at(pid), limit, workers_per_run);
        return EvalEntry{answer_of(o), elapsed_ms(start), workers_per_run};
    };
}

int cmd_invent(const std::string& space_file, const std::string& template_file,
               const std::string& problems_dir, double limit, int workers, double budget_hours,
               std::uint64_t seed, const std::string& out_dir, int generation_size,
               int iterations, double spec_budget_secs, int workers_per_run) {
    ParamSpace space = parse_param_space(read_file(space_file), read_file(template_file));
    LoadedProblems problems = load_problems(problems_dir);

    Hyperparams beta;
    beta.eval_limit = Duration(static_cast<long>(limit * 1000));
    beta.workers = workers;
    beta.seed = seed;
    beta.generation_size = generation_size;
    beta.max_iterations = iterations;
    beta.spec_budget = Duration(static_cast<long>(spec_budget_secs * 1000));
    if (budget_hours > 0)
        beta.wall_budget = Duration(static_cast<long>(budget_hours * 3600 * 1000));

    // initial strategies: template defaults plus one singleton per
    // execution-controlling parameter (its ancestors stay enabled)
    std::vector<ParamAssignment> initial;
    ParamAssignment defaults = default_assignment(space);
    initial.push_back(defaults);
    StrategyDefs base = parse_strategy(defaults.text);
    std::vector<std::string> bool_params;
    for (const ParamDef& p : space.params)
        if (p.category == ParamCategory::BoolExec) bool_params.push_back(p.name);
    std::function<bool(const std::string&, const std::string&)> reaches =
        [&](const std::string& from, const std::string& to) -> bool {
        std::set<std::string> seen;
        std::vector<std::string> stack{from};
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            if (cur == to) return true;
            if (!seen.insert(cur).second) continue;
            const StrategyPtr* body = base.find(cur);
            if (!body) continue;
            std::vector<const StrategyNode*> nodes{body->get()};
            while (!nodes.empty()) {
                const StrategyNode* n = nodes.back();
                nodes.pop_back();
                if (!n) continue;
                if (n->kind == StratKind::Proc && base.find(n->name)) stack.push_back(n->name);
                if (n->child) nodes.push_back(n->child.get());
                if (n->other) nodes.push_back(n->other.get());
            }
        }
        return false;
    };
    for (const std::string& target : bool_params) {
        std::map<std::string, std::string> values = defaults.values;
        for (const std::string& other : bool_params)
            values[other] = (other == target || reaches(other, target)) ? "yes" : "no";
        if (matches_forbidden(space, values)) continue;
        try {
            ParamAssignment singleton = instantiate_assignment(space, values);
            initial.push_back(std::move(singleton));
        } catch (const ParamError&) {
            // a singleton may be unbuildable under extra constraints; skip it
        }
    }

    fs::create_directories(out_dir);
    // resume an interrupted run from its snapshot and journal
    std::optional<PortfolioState> resumed;
    fs::path state_file = fs::path(out_dir) / "state.json";
    fs::path evals_file = fs::path(out_dir) / "evals.jsonl";
    if (fs::exists(state_file)) {
        resumed = state_from_json(read_file(state_file), space);
        if (fs::exists(evals_file)) resumed->matrix = EvalMatrix::from_jsonl(read_file(evals_file));
        std::cout << "resuming from iteration " << resumed->iteration << " with "
                  << resumed->strategies.size() << " strategies, " << resumed->matrix.size()
                  << " cached runs\n";
    }

    std::ofstream evals_log(evals_file, std::ios::app);
    std::mutex log_mutex;
    StrategyRunner base_runner = make_prover_runner(problems, workers_per_run);
    StrategyRunner runner = [&](const std::string& text, const std::string& pid, Duration lim) {
        EvalEntry e = base_runner(text, pid, lim);
        std::lock_guard lock(log_mutex);
        json row{{"strategy", content_hash(text)},
                 {"problem", pid},
                 {"answer", to_string(e.answer)},
                 {"millis", e.millis},
                 {"workers", e.workers}};
        evals_log << row.dump() << "\n";
        evals_log.flush();
        return e;
    };

    LoopHooks hooks;
    hooks.on_strategy = [&](const PortfolioStrategy& s) {
        write_file(fs::path(out_dir) / (s.id + ".strat"), s.assignment.text);
    };
    hooks.on_iteration = [&](const PortfolioState& st) {
        write_file(fs::path(out_dir) / "state.json", state_to_json(st));
    };

    PortfolioState state =
        resumed ? portfolio_loop_resume(std::move(*resumed), problems.ids, runner, beta, hooks)
                : portfolio_loop(space, initial, problems.ids, runner, beta, hooks);
    write_file(fs::path(out_dir) / "state.json", state_to_json(state));
    // the published matrix covers exactly the strategies that exist as
    // .strat files; search probes stay in the evals.jsonl journal
    EvalMatrix published;
    for (const auto& [key, e] : state.matrix.entries())
        if (state.find(key.first)) published.insert(key.first, key.second, e);
    write_file(fs::path(out_dir) / "matrix.jsonl", published.to_jsonl());

    std::set<std::string> solved;
    for (const auto& [key, e] : state.matrix.entries())
        if (e.answer != Answer::Maybe) solved.insert(key.second);
    std::cout << "portfolio: " << state.strategies.size() << " strategies, solved "
              << solved.size() << " / " << problems.ids.size() << " problems, "
              << state.total_runs << " runs\n";
    return 0;
}

int cmd_combine(const std::string& matrix_file, double budget, int shuffles, std::uint64_t seed,
                const std::string& out_file, bool allow_mixed) {
    EvalMatrix matrix = EvalMatrix::from_jsonl(read_file(matrix_file));
    std::set<std::string> strategy_set, problem_set;
    std::set<int> workers_seen;
    for (const auto& [key, e] : matrix.entries()) {
        strategy_set.insert(key.first);
        problem_set.insert(key.second);
        workers_seen.insert(e.workers);
    }
    if (workers_seen.size() > 1 && !allow_mixed)
        throw std::runtime_error(
            "matrix mixes entries measured with different worker counts; "
            "pass --allow-mixed-workers to combine anyway");
    std::vector<std::string> strategies(strategy_set.begin(), strategy_set.end());
    std::vector<std::string> problems(problem_set.begin(), problem_set.end());
    Rng rng(seed);
    Schedule sched =
        best_schedule(matrix, strategies, default_split_patterns(budget), shuffles, problems, rng);
    write_file(out_file, print_schedule(sched));
    std::cout << "schedule covers " << schedule_coverage(sched, matrix, problems) << " / "
              << problems.size() << " problems\n";
    return 0;
}

int cmd_run(const std::string& schedule_file, const std::string& problem_file,
            const std::string& strategies_dir, int workers) {
    Schedule sched = parse_schedule(read_file(schedule_file));
    Trs trs = parse_trs(read_file(problem_file), fs::path(problem_file).stem().string());
    std::map<std::string, StrategyDefs> defs_by_id;
    for (const ScheduleItem& item : sched) {
        if (defs_by_id.count(item.strategy)) continue;
        fs::path f = fs::path(strategies_dir) / (item.strategy + ".strat");
        StrategyDefs defs = parse_strategy(read_file(f));
        validate_defs(defs);
        defs_by_id[item.strategy] = std::move(defs);
    }
    Outcome o = run_schedule(sched, trs, defs_by_id, workers);
    std::cout << to_string(answer_of(o)) << "\n";
    return 0;
}

int cmd_bench(const std::string& problems_dir, const std::string& strategy_file,
              const std::string& entry, double timeout, int workers, int jobs,
              const std::string& out_file) {
    LoadedProblems problems = load_problems(problems_dir);
    StrategyDefs defs = load_strategy(strategy_file, entry);
    Duration limit(static_cast<long>(timeout * 1000));

    RunReport report;
    report.rows.resize(problems.ids.size());
    std::mutex m;
    std::size_t next = 0;
    auto work = [&]() {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard lock(m);
                if (next >= problems.ids.size()) return;
                i = next++;
            }
            const std::string& pid = problems.ids[i];
            ReportRow row;
            row.problem = pid;
            row.strategy = defs.entry;
            Clock::time_point start = Clock::now();
            try {
                Outcome o = eval_strategy(defs, problems.by_id.at(pid), limit, workers);
                row.answer = answer_of(o);
            } catch (const std::exception&) {
                row.answer = Answer::Maybe;  // a failing problem never aborts the batch
            }
            row.millis = elapsed_ms(start);
            {
                std::lock_guard lock(m);
                report.rows[i] = std::move(row);
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < jobs; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::cout << format_report(report);
    if (!out_file.empty()) write_file(out_file, report_to_jsonl(report));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"confl: confluence analysis toolkit for term rewrite systems"};
    app.require_subcommand(1);
    int workers_default = default_workers();

    auto* prove = app.add_subcommand("prove", "decide confluence of one problem");
    std::string prove_problem, prove_strategy, prove_entry, prove_cert;
    double prove_timeout = 60;
    int prove_workers = workers_default;
    prove->add_option("problem", prove_problem, "problem file (.trs)")->required();
    prove->add_option("--strategy-file", prove_strategy, "strategy config file");
    prove->add_option("--entry", prove_entry, "entry definition name");
    prove->add_option("--timeout", prove_timeout, "wall-clock budget in seconds");
    prove->add_option("--workers", prove_workers, "parallel workers inside strategies");
    prove->add_option("--cert", prove_cert, "write the certificate to this file");

    auto* gen = app.add_subcommand("gen", "generate random problems");
    int gen_count = 100;
    std::uint64_t gen_seed = 0;
    std::string gen_out = "problems";
    GenConfig gen_cfg;
    gen->add_option("--count", gen_count, "number of problems")->required();
    gen->add_option("--seed", gen_seed, "random seed")->required();
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--F", gen_cfg.max_funs, "max function symbols");
    gen->add_option("--C", gen_cfg.max_consts, "max constants");
    gen->add_option("--V", gen_cfg.max_vars, "max variables");
    gen->add_option("--R", gen_cfg.max_rules, "max rules");
    gen->add_option("--M", gen_cfg.max_arity, "max arity");
    gen->add_option("--L", gen_cfg.left_linear_prob, "left-linear forcing probability");
    gen->add_option("--CT", gen_cfg.complex_bias, "complex-term bias");
    gen->add_option("--max-size", gen_cfg.max_term_size, "term size cap");

    auto* dd = app.add_subcommand("dedup", "detect duplicates modulo renaming");
    std::string dd_dir, dd_human, dd_classes = "classes.tsv", dd_survivors;
    dd->add_option("--dir", dd_dir, "generated problem directory")->required();
    dd->add_option("--human", dd_human, "human-made problem directory (wins ties)");
    dd->add_option("--classes", dd_classes, "classes output (tsv)");
    dd->add_option("--survivors", dd_survivors, "survivor list output");

    auto* lb = app.add_subcommand("label", "label problems with their fastest strategy");
    std::string lb_problems, lb_strategies, lb_out = "labels.jsonl";
    double lb_limit = 30;
    int lb_workers = workers_default;
    lb->add_option("--problems", lb_problems, "problem directory")->required();
    lb->add_option("--strategies", lb_strategies, "directory of .strat files")->required();
    lb->add_option("--limit", lb_limit, "per-run limit in seconds");
    lb->add_option("--workers", lb_workers, "worker pool size");
    lb->add_option("--out", lb_out, "labels output (jsonl, appended)");

    auto* bal = app.add_subcommand("balance", "balanced dataset selection from labels");
    std::string bal_labels = "labels.jsonl", bal_out = "selection.txt";
    std::size_t bal_cap = 300, bal_unsolved = 1200;
    std::uint64_t bal_seed = 0;
    bal->add_option("--labels", bal_labels, "labels.jsonl from `label`");
    bal->add_option("--cap", bal_cap, "max problems per label");
    bal->add_option("--unsolved", bal_unsolved, "unsolved problems to add");
    bal->add_option("--seed", bal_seed, "selection seed")->required();
    bal->add_option("--out", bal_out, "selected problem ids");

    auto* inv = app.add_subcommand("invent", "strategy portfolio invention loop");
    std::string inv_space, inv_template, inv_problems, inv_out = "portfolio";
    double inv_limit = 30, inv_budget_hours = 0, inv_spec_budget = 60;
    int inv_workers = workers_default, inv_generation = 8, inv_iterations = 64,
        inv_workers_per_run = 1;
    std::uint64_t inv_seed = 0;
    inv->add_option("--space", inv_space, "parameter space file")->required();
    inv->add_option("--template", inv_template, "strategy template file")->required();
    inv->add_option("--problems", inv_problems, "benchmark problem directory")->required();
    inv->add_option("--limit", inv_limit, "per-run limit in seconds");
    inv->add_option("--workers", inv_workers, "evaluation worker pool size");
    inv->add_option("--workers-per-run", inv_workers_per_run, "workers inside one strategy run");
    inv->add_option("--budget", inv_budget_hours, "total wall budget in hours (0 = none)");
    inv->add_option("--seed", inv_seed, "run seed")->required();
    inv->add_option("--out", inv_out, "portfolio output directory");
    inv->add_option("--generation-size", inv_generation, "strategies per generation");
    inv->add_option("--iterations", inv_iterations, "iteration cap");
    inv->add_option("--spec-budget", inv_spec_budget, "seconds per specialization phase");

    auto* cmb = app.add_subcommand("combine", "combine strategies into a time-split schedule");
    std::string cmb_matrix, cmb_out = "schedule.tsv";
    double cmb_budget = 60;
    int cmb_shuffles = 100;
    std::uint64_t cmb_seed = 0;
    bool cmb_mixed = false;
    cmb->add_option("--matrix", cmb_matrix, "evals.jsonl / matrix.jsonl")->required();
    cmb->add_option("--budget", cmb_budget, "schedule budget in seconds");
    cmb->add_option("--shuffles", cmb_shuffles, "split-order shuffles per pattern");
    cmb->add_option("--seed", cmb_seed, "shuffle seed")->required();
    cmb->add_option("--out", cmb_out, "schedule output");
    cmb->add_flag("--allow-mixed-workers", cmb_mixed,
                  "combine matrices measured with different worker counts");

    auto* run = app.add_subcommand("run", "run a schedule on one problem");
    std::string run_schedule, run_problem, run_strategies;
    int run_workers = workers_default;
    run->add_option("--schedule", run_schedule, "schedule file")->required();
    run->add_option("--problem", run_problem, "problem file (.trs)")->required();
    run->add_option("--strategies", run_strategies, "directory with <id>.strat files")->required();
    run->add_option("--workers", run_workers, "workers inside each strategy");

    auto* bench = app.add_subcommand("bench", "run a strategy over a problem directory");
    std::string bench_problems, bench_strategy, bench_entry, bench_out;
    double bench_timeout = 60;
    int bench_workers = workers_default, bench_jobs = 1;
    bench->add_option("--problems", bench_problems, "problem directory")->required();
    bench->add_option("--strategy-file", bench_strategy, "strategy config file");
    bench->add_option("--entry", bench_entry, "entry definition name");
    bench->add_option("--timeout", bench_timeout, "per-problem budget in seconds");
    bench->add_option("--workers", bench_workers, "workers inside one run");
    bench->add_option("--jobs", bench_jobs, "problems run in parallel");
    bench->add_option("--out", bench_out, "jsonl report output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*prove)
            return cmd_prove(prove_problem, prove_strategy, prove_entry, prove_timeout,
                             prove_workers, prove_cert);
        if (*gen) return cmd_gen(gen_count, gen_seed, gen_out, gen_cfg);
        if (*dd) return cmd_dedup(dd_dir, dd_human, dd_classes, dd_survivors);
        if (*lb) return cmd_label(lb_problems, lb_strategies, lb_limit, lb_workers, lb_out);
        if (*bal) return cmd_balance(bal_labels, bal_cap, bal_unsolved, bal_seed, bal_out);
        if (*inv)
            return cmd_invent(inv_space, inv_template, inv_problems, inv_limit, inv_workers,
                              inv_budget_hours, inv_seed, inv_out, inv_generation, inv_iterations,
                              inv_spec_budget, inv_workers_per_run);
        if (*cmb)
            return cmd_combine(cmb_matrix, cmb_budget, cmb_shuffles, cmb_seed, cmb_out, cmb_mixed);
        if (*run) return cmd_run(run_schedule, run_problem, run_strategies, run_workers);
        if (*bench)
            return cmd_bench(bench_problems, bench_strategy, bench_entry, bench_timeout,
                             bench_workers, bench_jobs, bench_out);
    } catch (const TrsParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
