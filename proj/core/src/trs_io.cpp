#include "confl/trs_io.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace confl {

namespace {

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    explicit Cursor(const std::string& t) : text(t) {}

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    char advance() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    [[noreturn]] void fail(TrsErrorKind kind, const std::string& msg) const {
        std::ostringstream out;
        out << msg << " at line " << line << ", column " << col;
        throw TrsParseError(kind, out.str(), line, col);
    }

    void expect(char c) {
        skip_ws();
        if (eof() || peek() != c) fail(TrsErrorKind::Syntax, std::string("expected '") + c + "'");
        advance();
    }

    std::string ident() {
        skip_ws();
        if (eof() || !is_ident_char(peek())) fail(TrsErrorKind::Syntax, "expected identifier");
        std::string s;
        while (!eof() && is_ident_char(peek())) s += advance();
        return s;
    }
};

struct Builder {
    Trs trs;
    std::optional<std::string> comment;

    void note_arity(const std::string& name, int arity, const Cursor& at) {
        auto [it, inserted] = trs.signature.emplace(name, arity);
        if (!inserted && it->second != arity) {
            std::ostringstream out;
            out << "symbol '" << name << "' used with arity " << arity << " but previously "
                << it->second << " at line " << at.line << ", column " << at.col;
            throw TrsParseError(TrsErrorKind::ArityConflict, out.str(), at.line, at.col);
        }
    }

    TermPtr term(Cursor& c) {
        std::string name = c.ident();
        c.skip_ws();
        if (!c.eof() && c.peek() == '(') {
            if (trs.variables.count(name))
                c.fail(TrsErrorKind::Syntax, "variable '" + name + "' applied to arguments");
            c.advance();
            std::vector<TermPtr> args;
            c.skip_ws();
            if (!c.eof() && c.peek() == ')') {
                c.advance();  // f() means a constant written with empty parens
            } else {
                for (;;) {
                    args.push_back(term(c));
                    c.skip_ws();
                    if (!c.eof() && c.peek() == ',') {
                        c.advance();
                        continue;
                    }
                    c.expect(')');
                    break;
                }
            }
            int arity = static_cast<int>(args.size());
            note_arity(name, arity, c);
            return Term::app(Symbol{name, arity}, std::move(args));
        }
        if (trs.variables.count(name)) return Term::var(name);
        note_arity(name, 0, c);
        return Term::constant(name);
    }

    void rule(Cursor& c) {
        int line = c.line, col = c.col;
        TermPtr lhs = term(c);
        c.skip_ws();
        if (c.eof() || c.peek() != '-') c.fail(TrsErrorKind::Syntax, "expected '->'");
        c.advance();
        c.expect('>');
        TermPtr rhs = term(c);
        if (lhs->is_var()) {
            std::ostringstream out;
            out << "rule left-hand side is a variable ('" << lhs->var_name() << "') at line "
                << line << ", column " << col;
            throw TrsParseError(TrsErrorKind::VariableLhs, out.str(), line, col);
        }
        auto lvars = vars_of(lhs);
        for (const std::string& v : vars_of(rhs)) {
            if (!lvars.count(v)) {
                std::ostringstream out;
                out << "right-hand side variable '" << v << "' does not occur on the left at line "
                    << line << ", column " << col;
                throw TrsParseError(TrsErrorKind::UnboundRhsVariable, out.str(), line, col);
            }
        }
        trs.rules.push_back({std::move(lhs), std::move(rhs)});
    }
};

}  // namespace

ProblemFile parse_problem(const std::string& text, const std::string& name) {
    Cursor c(text);
    Builder b;
    b.trs.name = name;
    bool saw_rules = false;

    c.skip_ws();
    while (!c.eof()) {
        c.expect('(');
        std::string directive = c.ident();
        if (directive == "VAR") {
            c.skip_ws();
            while (!c.eof() && c.peek() != ')') {
                b.trs.variables.insert(c.ident());
                c.skip_ws();
            }
            c.expect(')');
        } else if (directive == "RULES") {
            saw_rules = true;
            c.skip_ws();
            while (!c.eof() && c.peek() != ')') {
                b.rule(c);
                c.skip_ws();
            }
            c.expect(')');
        } else {
            // unknown directive: preserve the raw body as comment text
            std::string raw;
            int depth = 1;
            while (!c.eof() && depth > 0) {
                char ch = c.advance();
                if (ch == '(') ++depth;
                if (ch == ')') --depth;
                if (depth > 0) raw += ch;
            }
            if (depth != 0) c.fail(TrsErrorKind::Syntax, "unterminated directive");
            if (b.comment)
                *b.comment += "\n" + raw;
            else
                b.comment = raw;
        }
        c.skip_ws();
    }
    if (!saw_rules) c.fail(TrsErrorKind::Syntax, "missing (RULES ...) section");
    return ProblemFile{name, std::move(b.trs), std::move(b.comment)};
}

Trs parse_trs(const std::string& text, const std::string& name) {
    return parse_problem(text, name).trs;
}

std::string print_trs(const Trs& trs) {
    std::ostringstream out;
    out << "(VAR";
    for (const std::string& v : trs.variables) out << ' ' << v;
    out << ")\n(RULES";
    for (const Rule& r : trs.rules)
        out << "\n  " << term_to_string(r.lhs) << " -> " << term_to_string(r.rhs);
    out << ")\n";
    return out.str();
}

TermPtr parse_term(const std::string& text, const Trs& trs) {
    Cursor c(text);
    Builder b;
    b.trs = trs;
    TermPtr t = b.term(c);
    c.skip_ws();
    if (!c.eof()) c.fail(TrsErrorKind::Syntax, "trailing input after term");
    return t;
}

}  // namespace confl
