#pragma once

#include <stdexcept>

#include "confl/term.hpp"

namespace confl {

enum class TrsErrorKind {
    Syntax,
    ArityConflict,
    VariableLhs,
    UnboundRhsVariable,
};

class TrsParseError : public std::runtime_error {
public:
    TrsParseError(TrsErrorKind kind, std::string message, int line, int column)
        : std::runtime_error(std::move(message)), kind(kind), line(line), column(column) {}

    TrsErrorKind kind;
    int line;
    int column;
};

struct ProblemFile {
    std::string name;
    Trs trs;
    std::optional<std::string> comment;
};

/// Parses the .trs surface syntax documented in docs/format.md:
/// a (VAR ...) declaration followed by (RULES l -> r ...). Unknown
/// directives such as (COMMENT ...) are preserved as opaque comment text.
/// Arities are inferred from first use and checked globally.
ProblemFile parse_problem(const std::string& text, const std::string& name = "");

Trs parse_trs(const std::string& text, const std::string& name = "");

/// Canonical layout: declared variables sorted, one rule per line.
/// parse_trs(print_trs(R)) is structurally identical to R.
std::string print_trs(const Trs& trs);

/// Parses a single term against an existing TRS's signature/variables.
/// Used by tests and tools; same token syntax as rule terms.
TermPtr parse_term(const std::string& text, const Trs& trs);

}  // namespace confl
