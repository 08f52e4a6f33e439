#include "confl/strategy.hpp"

#include <algorithm>
#include <cctype>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace confl {

// ---------------------------------------------------------------------------
// lexer

namespace {

enum class Tok {
    Word,
    Int,
    Float,
    Flag,    // -name
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Bar,
    ParBar,  // ||
    Quest,
    Star,
    Plus,
    Bang,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line = 0;
    int col = 0;
};

[[noreturn]] void fail_at(const std::string& msg, int line, int col) {
    std::ostringstream out;
    out << msg << " at line " << line << ", column " << col;
    throw StrategyError(out.str(), line, col);
}

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(const std::string& text, int base_line) {
    std::vector<Token> out;
    int line = base_line, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string s) { out.push_back({k, std::move(s), line, col}); };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++col;
            ++i;
            continue;
        }
        int tok_col = col;
        auto advance = [&](std::size_t n) {
            i += n;
            col += static_cast<int>(n);
        };
        if (c == '(') { push(Tok::LParen, "("); advance(1); continue; }
        if (c == ')') { push(Tok::RParen, ")"); advance(1); continue; }
        if (c == '{') { push(Tok::LBrace, "{"); advance(1); continue; }
        if (c == '}') { push(Tok::RBrace, "}"); advance(1); continue; }
        if (c == '[') { push(Tok::LBracket, "["); advance(1); continue; }
        if (c == ']') { push(Tok::RBracket, "]"); advance(1); continue; }
        if (c == ';') { push(Tok::Semi, ";"); advance(1); continue; }
        if (c == '?') { push(Tok::Quest, "?"); advance(1); continue; }
        if (c == '*') { push(Tok::Star, "*"); advance(1); continue; }
        if (c == '+') { push(Tok::Plus, "+"); advance(1); continue; }
        if (c == '!') { push(Tok::Bang, "!"); advance(1); continue; }
        if (c == '|') {
            if (i + 1 < text.size() && text[i + 1] == '|') {
                push(Tok::ParBar, "||");
                advance(2);
            } else {
                push(Tok::Bar, "|");
                advance(1);
            }
            continue;
        }
        if (c == '-') {
            if (i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
                std::size_t j = i + 1;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                push(Tok::Int, text.substr(i, j - i));
                advance(j - i);
                continue;
            }
            std::size_t j = i + 1;
            while (j < text.size() && word_char(text[j])) ++j;
            if (j == i + 1) fail_at("stray '-'", line, tok_col);
            push(Tok::Flag, text.substr(i + 1, j - i - 1));
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            bool dot = false;
            while (j < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[j])) || (!dot && text[j] == '.'))) {
                if (text[j] == '.') dot = true;
                ++j;
            }
            push(dot ? Tok::Float : Tok::Int, text.substr(i, j - i));
            advance(j - i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && word_char(text[j])) ++j;
            std::string word = text.substr(i, j - i);
            // split trailing digits when an iterator count follows: `name3*`
            std::size_t digits = 0;
            while (digits < word.size() &&
                   std::isdigit(static_cast<unsigned char>(word[word.size() - 1 - digits])))
                ++digits;
            std::size_t k = j;
            while (k < text.size() && (text[k] == ' ' || text[k] == '\t')) ++k;
            if (digits > 0 && digits < word.size() && k < text.size() && text[k] == '*') {
                push(Tok::Word, word.substr(0, word.size() - digits));
                out.push_back({Tok::Int, word.substr(word.size() - digits),
                               line, tok_col + static_cast<int>(word.size() - digits)});
            } else {
                push(Tok::Word, word);
            }
            advance(j - i);
            continue;
        }
        fail_at(std::string("unexpected character '") + c + "'", line, tok_col);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

// ---------------------------------------------------------------------------
// parser

struct Parser {
    std::vector<Token> toks;
    std::size_t pos = 0;

    const Token& peek(std::size_t ahead = 0) const {
        return toks[std::min(pos + ahead, toks.size() - 1)];
    }
    Token take() { return toks[std::min(pos++, toks.size() - 1)]; }
    bool at(Tok k) const { return peek().kind == k; }
    void expect(Tok k, const char* what) {
        if (!at(k)) fail_at(std::string("expected ") + what, peek().line, peek().col);
        take();
    }

    static StrategyPtr node(StrategyNode n) { return std::make_shared<StrategyNode>(std::move(n)); }

    StrategyPtr parse_par() {
        StrategyPtr left = parse_choice();
        while (at(Tok::ParBar)) {
            take();
            StrategyPtr right = parse_choice();
            left = node({StratKind::Par, "", {}, left, right});
        }
        return left;
    }

    StrategyPtr parse_choice() {
        StrategyPtr left = parse_seq();
        while (at(Tok::Bar)) {
            take();
            StrategyPtr right = parse_seq();
            left = node({StratKind::Choice, "", {}, left, right});
        }
        return left;
    }

    StrategyPtr parse_seq() {
        StrategyPtr left = parse_postfix();
        while (at(Tok::Semi)) {
            take();
            StrategyPtr right = parse_postfix();
            left = node({StratKind::Seq, "", {}, left, right});
        }
        return left;
    }

    StrategyPtr parse_postfix() {
        StrategyPtr s = parse_primary();
        for (;;) {
            if (at(Tok::Quest)) {
                take();
                s = node({StratKind::Opt, "", {}, s, nullptr});
            } else if (at(Tok::Star)) {
                take();
                s = node({StratKind::Star, "", {}, s, nullptr});
            } else if (at(Tok::Plus)) {
                take();
                s = node({StratKind::Plus, "", {}, s, nullptr});
            } else if (at(Tok::Bang)) {
                take();
                s = node({StratKind::Bang, "", {}, s, nullptr});
            } else if (at(Tok::Int) && peek(1).kind == Tok::Star) {
                Token n = take();
                take();  // '*'
                int count = std::stoi(n.text);
                if (count < 1) fail_at("iteration count must be >= 1", n.line, n.col);
                StrategyNode it{StratKind::IterN, "", {}, s, nullptr};
                it.count = count;
                s = node(std::move(it));
            } else if (at(Tok::LBracket)) {
                Token open = take();
                if (!at(Tok::Int) && !at(Tok::Float))
                    fail_at("expected a number of seconds", peek().line, peek().col);
                Token num = take();
                double secs = std::stod(num.text);
                if (secs <= 0) fail_at("time bound must be positive", num.line, num.col);
                expect(Tok::RBracket, "']'");
                StrategyNode t{at(Tok::Star) ? StratKind::IterTimed : StratKind::Timed,
                               "", {}, s, nullptr};
                if (at(Tok::Star)) take();
                t.seconds = secs;
                s = node(std::move(t));
            } else {
                return s;
            }
        }
    }

    StrategyPtr parse_primary() {
        if (at(Tok::LParen)) {
            take();
            StrategyPtr s = parse_par();
            expect(Tok::RParen, "')'");
            return s;
        }
        if (at(Tok::LBrace)) {
            take();
            StrategyPtr s = parse_par();
            expect(Tok::RBrace, "'}'");
            if (!at(Tok::Word)) fail_at("expected a modifier after '}'", peek().line, peek().col);
            Token mod = take();
            if (mod.text != "nono")
                fail_at("unsupported modifier '" + mod.text + "'", mod.line, mod.col);
            return node({StratKind::Modified, mod.text, {}, s, nullptr});
        }
        if (at(Tok::Word) && peek().text == "if") {
            take();
            std::string pred = parse_predicate();
            expect_keyword("then");
            StrategyPtr then_branch = parse_par();
            expect_keyword("else");
            StrategyPtr else_branch = parse_par();
            return node({StratKind::If, pred, {}, then_branch, else_branch});
        }
        if (at(Tok::Word)) {
            Token name = take();
            if (name.text == "then" || name.text == "else")
                fail_at("unexpected keyword '" + name.text + "'", name.line, name.col);
            StrategyNode p{StratKind::Proc, name.text, {}, nullptr, nullptr};
            while (at(Tok::Flag)) {
                Token flag = take();
                StratFlag f{flag.text, std::nullopt};
                if (at(Tok::Int) || at(Tok::Float)) f.value = take().text;
                p.flags.push_back(std::move(f));
            }
            return node(std::move(p));
        }
        fail_at("expected a strategy", peek().line, peek().col);
    }

    // predicates may be hyphenated (left-linear) which lexes as Word + Flag
    std::string parse_predicate() {
        if (!at(Tok::Word)) fail_at("expected a predicate", peek().line, peek().col);
        std::string pred = take().text;
        while (at(Tok::Flag)) pred += "-" + take().text;
        return pred;
    }

    void expect_keyword(const std::string& kw) {
        if (!at(Tok::Word) || peek().text != kw)
            fail_at("expected '" + kw + "'", peek().line, peek().col);
        take();
    }
};

void collect_refs(const StrategyPtr& s, std::vector<std::string>& refs) {
    if (!s) return;
    if (s->kind == StratKind::Proc) refs.push_back(s->name);
    if (s->kind == StratKind::If) {
        collect_refs(s->child, refs);
        collect_refs(s->other, refs);
        return;
    }
    collect_refs(s->child, refs);
    collect_refs(s->other, refs);
}

}  // namespace

StrategyPtr parse_strategy_expr(const std::string& text) {
    Parser p{lex(text, 1)};
    StrategyPtr s = p.parse_par();
    if (!p.at(Tok::End))
        fail_at("trailing input after strategy", p.peek().line, p.peek().col);
    return s;
}

StrategyDefs parse_strategy(const std::string& config_text) {
    StrategyDefs out;
    std::vector<std::pair<std::string, std::pair<std::string, int>>> raw;  // name -> (body, line)

    std::istringstream in(config_text);
    std::string line;
    int lineno = 0;
    std::string pending;
    int pending_line = 0;
    auto flush = [&]() {
        if (pending.empty()) return;
        std::string text = pending;
        pending.clear();
        std::size_t eq = text.find('=');
        std::size_t name_end = text.find_first_of(" \t=");
        if (eq == std::string::npos || name_end == 0)
            throw StrategyError("expected 'NAME = strategy' at line " + std::to_string(pending_line),
                                pending_line, 1);
        std::string name = text.substr(0, name_end);
        for (char c : name)
            if (!word_char(c))
                throw StrategyError("bad definition name '" + name + "' at line " +
                                        std::to_string(pending_line),
                                    pending_line, 1);
        raw.push_back({name, {text.substr(eq + 1), pending_line}});
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed = line;
        std::size_t first = trimmed.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            if (pending.empty()) continue;
            trimmed.clear();
        } else if (trimmed[first] == '#') {
            continue;
        }
        bool continued = false;
        std::size_t last = trimmed.find_last_not_of(" \t\r");
        if (last != std::string::npos && trimmed[last] == '\\') {
            continued = true;
            trimmed = trimmed.substr(0, last);
        }
        if (pending.empty()) {
            pending = trimmed;
            pending_line = lineno;
        } else {
            pending += " " + trimmed;
        }
        if (!continued) flush();
    }
    flush();

    for (const auto& [name, body] : raw) {
        Parser p{lex(body.first, body.second)};
        StrategyPtr s = p.parse_par();
        if (!p.at(Tok::End))
            fail_at("trailing input after strategy", p.peek().line, p.peek().col);
        if (out.find(name))
            throw StrategyError("duplicate definition of '" + name + "'", body.second, 1);
        out.defs.emplace_back(name, std::move(s));
    }
    if (out.defs.empty()) throw StrategyError("no definitions found", 1, 1);
    out.entry = out.defs.front().first;

    // reject cyclic references
    std::map<std::string, int> state;  // 0 unvisited, 1 in progress, 2 done
    std::function<void(const std::string&)> visit = [&](const std::string& name) {
        const StrategyPtr* body = out.find(name);
        if (!body) return;
        int& st = state[name];
        if (st == 1) throw StrategyError("cyclic definition involving '" + name + "'", 1, 1);
        if (st == 2) return;
        st = 1;
        std::vector<std::string> refs;
        collect_refs(*body, refs);
        for (const std::string& r : refs) visit(r);
        st = 2;
    };
    for (const auto& [name, body] : out.defs) visit(name);
    return out;
}

// ---------------------------------------------------------------------------
// processor registry

const std::vector<ProcSpec>& processor_registry() {
    static const std::vector<ProcSpec> registry = {
        {"orthogonal", false, {}},
        {"strongly_closed", false, {{"steps", true, -1, 64}}},
        {"kb",
         false,
         {{"join", true, 1, 64},
          {"coeff", true, 1, 4},
          {"weight", true, 1, 4},
          {"nolpo", false},
          {"nokbo", false},
          {"nointerp", false}}},
        {"nonconfluence",
         false,
         {{"steps", true, 0, 64},
          {"width", true, -1, 64},
          {"fun", false},
          {"var", false},
          {"tcap", false},
          {"nf", false},
          {"guard", true, 0, 8}}},
        {"redundant",
         true,
         {{"js", false},
          {"rhs", false},
          {"development", true, 1, 32},
          {"size", true, -1, 64},
          {"m", true, -1, 16}}},
        {"redundant_remove", true, {{"steps", true, -1, 64}}},
        {"fail", false, {}},
        {"succ", false, {}},
    };
    return registry;
}

bool is_processor(const std::string& name) {
    for (const ProcSpec& p : processor_registry())
        if (p.name == name) return true;
    return false;
}

const std::vector<std::string>& known_predicates() {
    static const std::vector<std::string> preds = {
        "trs",       "left-linear", "right-linear", "linear",
        "ground",    "collapsing",  "duplicating",
    };
    return preds;
}

namespace {

const ProcSpec* find_proc(const std::string& name) {
    for (const ProcSpec& p : processor_registry())
        if (p.name == name) return &p;
    return nullptr;
}

void validate_node(const StrategyPtr& s, const StrategyDefs& defs) {
    if (!s) return;
    if (s->kind == StratKind::Proc) {
        if (defs.find(s->name)) {
            if (!s->flags.empty())
                throw StrategyError("definition reference '" + s->name + "' takes no flags");
            return;
        }
        const ProcSpec* spec = find_proc(s->name);
        if (!spec) throw StrategyError("unknown processor '" + s->name + "'");
        for (const StratFlag& f : s->flags) {
            const FlagSpec* fs = nullptr;
            for (const FlagSpec& cand : spec->flags)
                if (cand.name == f.name) fs = &cand;
            if (!fs)
                throw StrategyError("unknown flag '-" + f.name + "' for processor '" + s->name +
                                    "'");
            if (fs->takes_value) {
                if (!f.value)
                    throw StrategyError("flag '-" + f.name + "' of '" + s->name +
                                        "' requires a value");
                long v = std::stol(*f.value);
                if (v < fs->min_value || v > fs->max_value)
                    throw StrategyError("flag '-" + f.name + " " + *f.value + "' of '" + s->name +
                                        "' out of range");
            } else if (f.value) {
                throw StrategyError("flag '-" + f.name + "' of '" + s->name +
                                    "' takes no value");
            }
        }
        return;
    }
    if (s->kind == StratKind::If) {
        const auto& preds = known_predicates();
        if (std::find(preds.begin(), preds.end(), s->name) == preds.end())
            throw StrategyError("unknown predicate '" + s->name + "'");
    }
    validate_node(s->child, defs);
    validate_node(s->other, defs);
}

}  // namespace

void validate_defs(const StrategyDefs& defs) {
    if (!defs.find(defs.entry)) throw StrategyError("undefined entry '" + defs.entry + "'");
    for (const auto& [name, body] : defs.defs) validate_node(body, defs);
}

// ---------------------------------------------------------------------------
// evaluation

bool trs_equal(const Trs& a, const Trs& b) {
    if (a.rules.size() != b.rules.size()) return false;
    for (std::size_t i = 0; i < a.rules.size(); ++i)
        if (!rule_eq(a.rules[i], b.rules[i])) return false;
    return a.variables == b.variables && a.signature == b.signature;
}

std::size_t trs_hash(const Trs& t) {
    std::size_t h = 0xcbf29ce484222325ull;
    for (const Rule& r : t.rules) {
        h = h * 1099511628211ull + term_hash(r.lhs);
        h = h * 1099511628211ull + term_hash(r.rhs);
    }
    return h;
}

namespace {

struct EvalResult {
    bool success = false;
    std::optional<Answer> verdict;
    Trs problem;
    std::optional<ProcResult> decisive;
};

struct EvalCtx {
    const StrategyDefs* defs;
    int workers;
};

long flag_long(const StrategyNode& node, const std::string& name, long fallback) {
    for (const StratFlag& f : node.flags)
        if (f.name == name && f.value) return std::stol(*f.value);
    return fallback;
}

bool flag_present(const StrategyNode& node, const std::string& name) {
    for (const StratFlag& f : node.flags)
        if (f.name == name) return true;
    return false;
}

bool eval_predicate(const std::string& pred, const Trs& trs) {
    if (pred == "trs") return true;
    SyntacticPredicates p = syntactic_predicates(trs);
    if (pred == "left-linear") return p.left_linear;
    if (pred == "right-linear") return p.right_linear;
    if (pred == "linear") return p.linear;
    if (pred == "ground") return p.ground;
    if (pred == "collapsing") return p.collapsing;
    if (pred == "duplicating") return p.duplicating;
    throw StrategyError("unknown predicate '" + pred + "'");
}

EvalResult eval_node(const StrategyPtr& s, const Trs& problem, const RunControl& ctl, EvalCtx& cx,
                     std::vector<TraceEntry>& trace);

EvalResult run_processor(const StrategyNode& node, const Trs& problem, const RunControl& ctl,
                         std::vector<TraceEntry>& trace) {
    EvalResult res;
    res.problem = problem;
    if (node.name == "fail") {
        return res;
    }
    if (node.name == "succ") {
        res.success = true;
        return res;
    }
    if (ctl.expired()) return res;

    Clock::time_point start = Clock::now();
    auto record = [&](const std::string& outcome) {
        trace.push_back({node.name,
                         std::chrono::duration_cast<Duration>(Clock::now() - start), outcome});
    };
    auto decide = [&](ProcResult pr) {
        if (pr.outcome == ProcOutcome::Fail) {
            record("fail");
            return;
        }
        res.success = true;
        res.verdict = pr.outcome == ProcOutcome::Yes ? Answer::Yes : Answer::No;
        record(to_string(*res.verdict));
        res.decisive = std::move(pr);
    };

    if (node.name == "orthogonal") {
        decide(proc_orthogonal(problem));
    } else if (node.name == "strongly_closed") {
        decide(proc_strongly_closed(problem, static_cast<int>(flag_long(node, "steps", 7)), ctl));
    } else if (node.name == "kb") {
        TerminationBudget budget;
        budget.coeff_bound = static_cast<int>(flag_long(node, "coeff", 2));
        budget.weight_bound = flag_long(node, "weight", 2);
        budget.lpo_enabled = !flag_present(node, "nolpo");
        budget.kbo_enabled = !flag_present(node, "nokbo");
        budget.interp_enabled = !flag_present(node, "nointerp");
        decide(proc_knuth_bendix(problem, budget, static_cast<int>(flag_long(node, "join", 8)),
                                 ctl));
    } else if (node.name == "nonconfluence") {
        NonconfluenceConfig cfg;
        cfg.steps = static_cast<int>(flag_long(node, "steps", 2));
        cfg.width = static_cast<int>(flag_long(node, "width", -1));
        bool fun = flag_present(node, "fun"), var = flag_present(node, "var");
        cfg.overlap_mode = fun && !var   ? OverlapMode::Fun
                           : var && !fun ? OverlapMode::Var
                                         : OverlapMode::Both;
        cfg.use_nf = flag_present(node, "nf");
        cfg.use_tcap = flag_present(node, "tcap") || !cfg.use_nf;
        cfg.join_guard_depth = static_cast<int>(flag_long(node, "guard", 3));
        decide(proc_nonconfluence(problem, cfg, ctl));
    } else if (node.name == "redundant") {
        RedundantConfig cfg;
        cfg.js = flag_present(node, "js");
        cfg.rhs = flag_present(node, "rhs");
        cfg.develop = static_cast<int>(flag_long(node, "development", 0));
        cfg.size_cap = static_cast<int>(flag_long(node, "size", -1));
        cfg.join_m = static_cast<int>(flag_long(node, "m", 0));
        if (!cfg.js && !cfg.rhs && cfg.develop == 0) {
            // no mode selected: identity transformation
            res.success = true;
            record("ok");
            return res;
        }
        res.problem = redundant_add(problem, cfg, ctl);
        res.success = true;
        record(trs_equal(res.problem, problem) ? "ok" : "ok(+rules)");
    } else if (node.name == "redundant_remove") {
        res.problem =
            redundant_remove(problem, static_cast<int>(flag_long(node, "steps", 4)), ctl);
        res.success = true;
        record(trs_equal(res.problem, problem) ? "ok" : "ok(-rules)");
    } else {
        throw StrategyError("unknown processor '" + node.name + "'");
    }
    return res;
}

EvalResult eval_par(const StrategyPtr& s, const Trs& problem, const RunControl& ctl, EvalCtx& cx,
                    std::vector<TraceEntry>& trace) {
    if (cx.workers <= 1) {
        // deterministic left-biased degeneration
        EvalResult left = eval_node(s->child, problem, ctl, cx, trace);
        if (left.success) return left;
        return eval_node(s->other, problem, ctl, cx, trace);
    }
    auto cancel_left = std::make_shared<std::atomic<bool>>(false);
    auto cancel_right = std::make_shared<std::atomic<bool>>(false);
    EvalResult results[2];
    std::vector<TraceEntry> traces[2];
    bool done[2] = {false, false};
    std::mutex m;
    std::condition_variable cv;

    auto runner = [&](int idx, const StrategyPtr& branch,
                      std::shared_ptr<std::atomic<bool>> cancel) {
        EvalResult r;
        try {
            r = eval_node(branch, problem, ctl.with_cancel(cancel), cx, traces[idx]);
        } catch (...) {
            r = EvalResult{};
            r.problem = problem;
        }
        std::lock_guard lock(m);
        results[idx] = std::move(r);
        done[idx] = true;
        cv.notify_all();
    };
    std::thread tl(runner, 0, s->child, cancel_left);
    std::thread tr(runner, 1, s->other, cancel_right);

    int winner = -1;
    {
        std::unique_lock lock(m);
        cv.wait(lock, [&] {
            if (done[0] && results[0].success) return true;
            if (done[1] && results[1].success) return true;
            return done[0] && done[1];
        });
        if (done[0] && results[0].success)
            winner = 0;  // ties go to the left branch
        else if (done[1] && results[1].success)
            winner = 1;
    }
    cancel_left->store(true);
    cancel_right->store(true);
    tl.join();
    tr.join();
    trace.insert(trace.end(), traces[0].begin(), traces[0].end());
    trace.insert(trace.end(), traces[1].begin(), traces[1].end());
    if (winner >= 0) return results[winner];
    EvalResult fail;
    fail.problem = problem;
    return fail;
}

EvalResult eval_node(const StrategyPtr& s, const Trs& problem, const RunControl& ctl, EvalCtx& cx,
                     std::vector<TraceEntry>& trace) {
    EvalResult failure;
    failure.problem = problem;
    if (!s) return failure;
    switch (s->kind) {
        case StratKind::Proc: {
            if (const StrategyPtr* def = cx.defs->find(s->name)) {
                if (!s->flags.empty())
                    throw StrategyError("definition reference '" + s->name + "' takes no flags");
                return eval_node(*def, problem, ctl, cx, trace);
            }
            return run_processor(*s, problem, ctl, trace);
        }
        case StratKind::Seq: {
            EvalResult first = eval_node(s->child, problem, ctl, cx, trace);
            if (!first.success || first.verdict) return first;
            return eval_node(s->other, first.problem, ctl, cx, trace);
        }
        case StratKind::Choice: {
            EvalResult first = eval_node(s->child, problem, ctl, cx, trace);
            if (first.success) return first;
            return eval_node(s->other, problem, ctl, cx, trace);
        }
        case StratKind::Par:
            return eval_par(s, problem, ctl, cx, trace);
        case StratKind::If: {
            bool hold = eval_predicate(s->name, problem);
            return eval_node(hold ? s->child : s->other, problem, ctl, cx, trace);
        }
        case StratKind::Opt: {
            EvalResult r = eval_node(s->child, problem, ctl, cx, trace);
            if (r.success) return r;
            EvalResult keep;
            keep.success = true;
            keep.problem = problem;
            return keep;
        }
        case StratKind::Star:
        case StratKind::IterN:
        case StratKind::IterTimed: {
            constexpr int kStarCap = 64;
            int limit = s->kind == StratKind::IterN ? s->count : kStarCap;
            RunControl loop_ctl =
                s->kind == StratKind::IterTimed
                    ? ctl.restricted(Duration(static_cast<long>(s->seconds * 1000)))
                    : ctl;
            Trs current = problem;
            for (int i = 0; i < limit; ++i) {
                if (loop_ctl.expired()) break;
                EvalResult r = eval_node(s->child, current, loop_ctl, cx, trace);
                if (!r.success) break;
                if (r.verdict) return r;
                if (trs_equal(r.problem, current)) break;
                current = std::move(r.problem);
            }
            EvalResult done;
            done.success = true;  // iterators always succeed
            done.problem = std::move(current);
            return done;
        }
        case StratKind::Plus: {
            // s+ = s*;s
            StrategyPtr star =
                std::make_shared<StrategyNode>(StrategyNode{StratKind::Star, "", {}, s->child, nullptr});
            EvalResult folded = eval_node(star, problem, ctl, cx, trace);
            if (folded.verdict) return folded;
            return eval_node(s->child, folded.problem, ctl, cx, trace);
        }
        case StratKind::Bang: {
            EvalResult r = eval_node(s->child, problem, ctl, cx, trace);
            if (r.success && r.verdict) return r;
            return failure;
        }
        case StratKind::Timed: {
            RunControl child = ctl.restricted(Duration(static_cast<long>(s->seconds * 1000)));
            return eval_node(s->child, problem, child, cx, trace);
        }
        case StratKind::Modified: {
            EvalResult r = eval_node(s->child, problem, ctl, cx, trace);
            if (!r.success) return failure;
            if (r.verdict == Answer::No) return failure;  // nono
            return r;
        }
    }
    return failure;
}

}  // namespace

Outcome eval_strategy(const StrategyDefs& defs, const Trs& problem, Duration budget, int workers,
                      const std::string& entry_override) {
    const std::string entry = entry_override.empty() ? defs.entry : entry_override;
    const StrategyPtr* body = defs.find(entry);
    if (!body) throw StrategyError("undefined entry '" + entry + "'");

    Outcome out;
    out.final_problem = problem;
    EvalCtx cx{&defs, workers};
    RunControl ctl = RunControl::within(budget);
    Clock::time_point start = Clock::now();
    // implicit top-level '!': a transformation-only success is not an answer
    EvalResult r = eval_node(*body, problem, ctl, cx, out.trace);
    out.total = std::chrono::duration_cast<Duration>(Clock::now() - start);
    if (r.success && r.verdict) {
        out.success = true;
        out.answer = *r.verdict;
        out.decisive = std::move(r.decisive);
        out.final_problem = std::move(r.problem);
    }
    return out;
}

Answer answer_of(const Outcome& o) {
    return o.success ? o.answer : Answer::Maybe;
}

}  // namespace confl
