#pragma once

#include "confl/rng.hpp"
#include "confl/term.hpp"

namespace confl {

struct GenConfig {
    int max_funs = 12;
    int max_consts = 5;
    int max_vars = 8;
    int max_rules = 15;
    int max_arity = 8;
    double left_linear_prob = 0.6;
    double complex_bias = 1.6;
    int max_term_size = 15;
    std::uint64_t seed = 0;
};

enum class RuleSide { Left, Right };

/// Drawn once per TRS: the available symbols, the complex-term likelihood
/// sampled in [0, CT], and whether left-linearity is being forced.
struct GenContext {
    std::vector<Symbol> funs;    // arity >= 1
    std::vector<Symbol> consts;  // arity 0
    std::vector<std::string> vars;
    double comp = 0.0;
    bool linear = false;
    RuleSide side = RuleSide::Left;
    int max_term_size = 15;
};

/// One term per the generation procedure: the root is drawn from funs
/// only when a [0,1) sample is below comp (left sides always exclude
/// variables); open argument slots are filled breadth-first from all
/// symbols, and chosen variables are removed on linear left sides. A size
/// budget restricts candidates to leaves once the remaining budget equals
/// the number of open slots, so the cap needs no rejection sampling.
/// Throws std::runtime_error when no admissible root exists.
TermPtr gen_term(GenContext& ctx, Rng& rng);

Rule gen_rule(const GenContext& ctx_template, Rng& rng);

struct GeneratedTrs {
    Trs trs;
    bool forced_left_linear = false;
    double comp = 0.0;
};

/// One full TRS: symbol counts drawn in [0, max], rule count in
/// [1, max_rules], arities in [1, max_arity]; degenerate draws (no
/// symbols to build a lhs from) are resampled.
GeneratedTrs gen_trs(const GenConfig& cfg, Rng& rng);

/// Deterministic stream: problem `index` is generated from the substream
/// rng(seed).split(index), so any prefix or slice can be regenerated
/// independently.
GeneratedTrs gen_trs_at(const GenConfig& cfg, std::uint64_t index);

}  // namespace confl
