#pragma once

// Parser for the loop description language:
//   vars x, y;
//   path [label]: x >= 0, x' = -2*x + 10;
// Constraints are linear with `*` only between a literal and a variable;
// `#` starts a comment. Also parses golden formulas (`||` / `&&` text).

#include <cctype>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "loopterm/lincons.hpp"
#include "loopterm/rel.hpp"

namespace loopterm {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int l, int c)
        : std::runtime_error("parse error at " + std::to_string(l) + ":" + std::to_string(c) +
                             ": " + msg),
          line(l),
          col(c) {}
};

struct RawConstraint {
    LinExpr lhs;
    CmpOp op = CmpOp::Eq;
    LinExpr rhs;

    friend auto operator<=>(const RawConstraint&, const RawConstraint&) = default;

    std::string str() const {
        static const char* ops[] = {"=", "<=", ">=", "<", ">"};
        return lhs.str() + " " + ops[static_cast<int>(op)] + " " + rhs.str();
    }
};

struct LoopPath {
    std::string label;  // may be empty
    std::vector<RawConstraint> constraints;

    friend auto operator<=>(const LoopPath&, const LoopPath&) = default;
};

struct LoopSpec {
    std::string name;
    std::vector<VarId> vars;
    std::vector<LoopPath> paths;

    friend auto operator<=>(const LoopSpec&, const LoopSpec&) = default;

    std::string render() const {
        std::string s = "vars ";
        for (std::size_t i = 0; i < vars.size(); ++i) s += (i ? ", " : "") + vars[i].name;
        s += ";\n";
        for (const LoopPath& p : paths) {
            s += "path";
            if (!p.label.empty()) s += " " + p.label;
            s += ": ";
            for (std::size_t i = 0; i < p.constraints.size(); ++i)
                s += (i ? ", " : "") + p.constraints[i].str();
            s += ";\n";
        }
        return s;
    }

    Rel to_rel() const {
        Dnf body;
        for (const LoopPath& p : paths) {
            Conj c;
            for (const RawConstraint& rc : p.constraints)
                c.add(normalize_atom(rc.lhs, rc.op, rc.rhs));
            body.disjuncts.push_back(std::move(c));
        }
        body.normalize();
        return Rel{vars, std::move(body)};
    }
};

namespace detail {

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }

    void skip_ws() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '#') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
            } else if (c == '\n') {
                ++pos;
                ++line;
                col = 1;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
                ++col;
            } else {
                break;
            }
        }
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    void advance(std::size_t n) {
        pos += n;
        col += static_cast<int>(n);
    }

    bool eat(const std::string& tok) {
        skip_ws();
        if (text.compare(pos, tok.size(), tok) == 0) {
            advance(tok.size());
            return true;
        }
        return false;
    }

    void expect(const std::string& tok) {
        if (!eat(tok)) fail("expected '" + tok + "'");
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            advance(1);
        if (pos == start) fail("expected identifier");
        std::string name = text.substr(start, pos - start);
        if (std::isdigit(static_cast<unsigned char>(name[0]))) fail("identifier starts with digit");
        return name;
    }

    bool at_ident() {
        char c = peek();
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }

    bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())); }

    Int integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) advance(1);
        if (pos == start) fail("expected integer literal");
        return Int(text.substr(start, pos - start));
    }
};

struct ConstraintParser {
    Lexer& lx;
    const std::vector<VarId>& declared;

    VarId variable() {
        std::string name = lx.ident();
        bool primed = false;
        if (lx.pos < lx.text.size() && lx.text[lx.pos] == '\'') {
            primed = true;
            lx.advance(1);
        }
        for (const VarId& v : declared)
            if (v.name == name) return VarId{name, primed};
        lx.fail("undeclared variable '" + name + "'");
    }

    /// term := INT ['*' var] | var ['*' anything -> non-linear error]
    LinExpr term() {
        LinExpr e;
        if (lx.at_digit()) {
            Int k = lx.integer();
            if (lx.eat("*")) {
                if (!lx.at_ident()) lx.fail("expected variable after '*'");
                e.add_term(variable(), k);
            } else {
                e.set_constant(k);
            }
        } else if (lx.at_ident()) {
            VarId v = variable();
            if (lx.peek() == '*') lx.fail("non-linear term: variable * variable");
            e.add_term(v, Int(1));
        } else {
            lx.fail("expected term");
        }
        return e;
    }

    LinExpr linexpr() {
        LinExpr e;
        bool neg = false;
        if (lx.eat("-"))
            neg = true;
        else
            lx.eat("+");
        LinExpr t = term();
        e += neg ? -t : t;
        for (;;) {
            if (lx.eat("+"))
                e += term();
            else if (lx.eat("-"))
                e -= term();
            else
                break;
        }
        return e;
    }

    CmpOp cmp() {
        if (lx.eat("<=")) return CmpOp::Leq;
        if (lx.eat(">=")) return CmpOp::Geq;
        if (lx.eat("<")) return CmpOp::Lt;
        if (lx.eat(">")) return CmpOp::Gt;
        if (lx.eat("=")) return CmpOp::Eq;
        lx.fail("expected comparison operator");
    }

    RawConstraint constraint() {
        RawConstraint rc;
        rc.lhs = linexpr();
        rc.op = cmp();
        rc.rhs = linexpr();
        return rc;
    }
};

}  // namespace detail

inline LoopSpec parse_loop(const std::string& text, const std::string& name = "") {
    detail::Lexer lx(text);
    LoopSpec spec;
    spec.name = name;
    lx.expect("vars");
    for (;;) {
        std::string id = lx.ident();
        for (const VarId& v : spec.vars)
            if (v.name == id) lx.fail("duplicate variable '" + id + "'");
        spec.vars.push_back(VarId{id, false});
        if (!lx.eat(",")) break;
    }
    lx.expect(";");
    detail::ConstraintParser cp{lx, spec.vars};
    while (!lx.eof()) {
        lx.expect("path");
        LoopPath p;
        if (lx.at_ident()) p.label = lx.ident();
        lx.expect(":");
        for (;;) {
            p.constraints.push_back(cp.constraint());
            if (!lx.eat(",")) break;
        }
        lx.expect(";");
        spec.paths.push_back(std::move(p));
    }
    if (spec.paths.empty()) lx.fail("at least one path required");
    return spec;
}

/// Formula text used by golden sidecars: `true`, `false`, or disjuncts
/// separated by `||`, each a `&&`-conjunction, optionally parenthesized.
inline Dnf parse_formula(const std::string& text, const std::vector<VarId>& vars) {
    detail::Lexer lx(text);
    if (lx.eat("true")) return Dnf::truth();
    if (lx.eat("false")) return Dnf::falsity();
    detail::ConstraintParser cp{lx, vars};
    Dnf out;
    for (;;) {
        bool paren = lx.eat("(");
        Conj c;
        for (;;) {
            RawConstraint rc = cp.constraint();
            c.add(normalize_atom(rc.lhs, rc.op, rc.rhs));
            if (!lx.eat("&&")) break;
        }
        if (paren) lx.expect(")");
        out.disjuncts.push_back(std::move(c));
        if (!lx.eat("||")) break;
    }
    if (!lx.eof()) lx.fail("trailing input");
    out.normalize();
    return out;
}

}  // namespace loopterm
