#pragma once

#include "confl/strategy.hpp"

namespace confl {

enum class ParamCategory { Flag, Iteration, BoolExec };

struct ParamDef {
    std::string name;
    std::vector<std::string> domain;
    std::string default_value;
    ParamCategory category = ParamCategory::Flag;
};

/// Discrete tunable parameters over a strategy template. The template is
/// an ordinary strategy config file with ${param} placeholders; a
/// parameter whose name matches a definition is a boolean
/// execution-controlling parameter (value `no` rewrites the definition
/// to `fail`), a parameter ending in `_time` or `_loop` splices its raw
/// value, and any other parameter expands to a processor flag: `yes` ->
/// `-flag`, `no`/`off` -> nothing, otherwise `-flag value` (the flag
/// name is the last '_'-separated segment).
struct ParamSpace {
    std::vector<ParamDef> params;
    std::vector<std::map<std::string, std::string>> forbidden;
    std::string template_text;

    const ParamDef* find(const std::string& name) const {
        for (const ParamDef& p : params)
            if (p.name == name) return &p;
        return nullptr;
    }
};

class ParamError : public std::runtime_error {
public:
    explicit ParamError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Space file: one `name {v1,v2,...} [default]` per line plus
/// `FORBID {p=v, q=w}` blocks; '#' starts a comment line.
ParamSpace parse_param_space(const std::string& space_text, const std::string& template_text);

struct ParamAssignment {
    std::map<std::string, std::string> values;
    std::string text;  // instantiated strategy config
    std::string hash;  // content hash of `text`: the strategy's identity
};

std::string content_hash(const std::string& text);

bool matches_forbidden(const ParamSpace& space, const std::map<std::string, std::string>& values);

/// Template expansion for a total, non-forbidden assignment. The result
/// parses and validates against the processor registry, so every emitted
/// strategy is well-formed by construction. Throws ParamError on
/// forbidden or incomplete assignments and unknown parameters.
ParamAssignment instantiate_assignment(const ParamSpace& space,
                                       const std::map<std::string, std::string>& values);

StrategyDefs instantiate(const ParamSpace& space, const ParamAssignment& assignment);

ParamAssignment default_assignment(const ParamSpace& space);

}  // namespace confl
