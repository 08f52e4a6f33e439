#pragma once

#include <memory>

#include "confl/procs.hpp"

namespace confl {

enum class StratKind {
    Proc,      // processor call or reference to a named definition
    Seq,       // s ; s'
    Choice,    // s | s'
    Par,       // s || s'
    If,        // if p then s else s'
    Opt,       // s?
    Star,      // s*
    Plus,      // s+
    IterN,     // sn*
    IterTimed, // s[f]*
    Bang,      // s!
    Timed,     // s[f]
    Modified,  // {s}o
};

struct StratFlag {
    std::string name;
    std::optional<std::string> value;
};

struct StrategyNode;
using StrategyPtr = std::shared_ptr<const StrategyNode>;

struct StrategyNode {
    StratKind kind;
    std::string name;              // Proc name, If predicate, Modified modifier
    std::vector<StratFlag> flags;  // Proc only
    StrategyPtr child;
    StrategyPtr other;             // second operand / else branch
    int count = 0;                 // IterN
    double seconds = 0.0;          // Timed / IterTimed
};

class StrategyError : public std::runtime_error {
public:
    StrategyError(std::string message, int line = 0, int column = 0)
        : std::runtime_error(std::move(message)), line(line), column(column) {}
    int line;
    int column;
};

/// An ordered set of named strategy definitions plus the entry point.
struct StrategyDefs {
    std::vector<std::pair<std::string, StrategyPtr>> defs;
    std::string entry;

    const StrategyPtr* find(const std::string& name) const {
        for (const auto& [n, s] : defs)
            if (n == name) return &s;
        return nullptr;
    }
};

/// Parses a config file: `N = s` definitions, one per line, with `\`
/// line continuations and `#` comment lines. Postfix specifiers bind
/// tighter than `;`, `;` tighter than `|`, `|` tighter than `||`.
/// Definitions may reference each other; cycles are rejected.
StrategyDefs parse_strategy(const std::string& config_text);

/// Parses a single strategy expression (no definitions).
StrategyPtr parse_strategy_expr(const std::string& text);

struct TraceEntry {
    std::string proc;
    Duration elapsed{0};
    std::string result;
};

struct Outcome {
    Answer answer = Answer::Maybe;
    bool success = false;
    std::vector<TraceEntry> trace;
    Duration total{0};
    std::optional<ProcResult> decisive;  // the verdict-producing processor result
    Trs final_problem;
};

/// Runs the entry strategy on the problem under a wall-clock budget.
/// The entry is implicitly wrapped in `!` so that a transformation-only
/// success can never surface as YES. workers = 1 evaluates `||`
/// sequentially left-biased (fully deterministic); workers > 1 runs
/// parallel branches on threads, first success wins and the loser is
/// cancelled cooperatively.
Outcome eval_strategy(const StrategyDefs& defs, const Trs& problem, Duration budget,
                      int workers = 1, const std::string& entry_override = "");

Answer answer_of(const Outcome& o);

struct FlagSpec {
    std::string name;
    bool takes_value;
    long min_value = 0;
    long max_value = 0;
};

struct ProcSpec {
    std::string name;
    bool transformation;
    std::vector<FlagSpec> flags;
};

const std::vector<ProcSpec>& processor_registry();
bool is_processor(const std::string& name);
const std::vector<std::string>& known_predicates();

/// Eager validation: every processor token resolves (registry or a
/// definition), flags are known with in-domain values, predicates exist,
/// iteration counts are positive. Throws StrategyError.
void validate_defs(const StrategyDefs& defs);

/// Structural TRS equality (rules in order, variables, signature), used
/// to detect that an iteration no longer modifies the problem.
bool trs_equal(const Trs& a, const Trs& b);
std::size_t trs_hash(const Trs& t);

}  // namespace confl
