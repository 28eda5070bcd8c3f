#pragma once

// A small expression language for metric files: infix arithmetic over the jet
// function set, parsed by recursive descent into an AST that is evaluated over
// jets at query time. Precedence, tightest first: ^ (right-associative, integer
// exponent), unary minus, * /, + -. Identifiers name chart coordinates,
// declared parameters, or 'let' macros (inlined at parse time). '#' starts a
// comment running to end of line.

#include <cctype>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "weylkk/catalog.hpp"

namespace weylkk {

struct SourcePos {
    int line = 1;
    int col = 1;
};

inline std::string to_string(const SourcePos& p) {
    return "line " + std::to_string(p.line) + ", col " + std::to_string(p.col);
}

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& kind, const SourcePos& pos, const std::string& what)
        : std::runtime_error(kind + " error at " + to_string(pos) + ": " + what),
          kind_(kind),
          pos_(pos) {}
    const std::string& kind() const { return kind_; }
    const SourcePos& pos() const { return pos_; }

private:
    std::string kind_;
    SourcePos pos_;
};

class lexical_error : public parse_error {
public:
    lexical_error(const SourcePos& pos, const std::string& what)
        : parse_error("lexical", pos, what) {}
};

class syntax_error : public parse_error {
public:
    syntax_error(const SourcePos& pos, const std::string& what)
        : parse_error("syntax", pos, what) {}
};

class semantic_error : public parse_error {
public:
    semantic_error(const SourcePos& pos, const std::string& what)
        : parse_error("semantic", pos, what) {}
};

// ---------------------------------------------------------------------------
// AST

enum class ExprKind { constant, coordinate, parameter, unary, binary, call };

struct ExprAst;
using ExprPtr = std::shared_ptr<const ExprAst>;

struct ExprAst {
    ExprKind kind;
    double value = 0.0;      // constant
    std::string name;        // coordinate / parameter / call; op for unary/binary
    int axis = -1;           // coordinate
    int exponent = 0;        // binary "^": integer exponent literal
    ExprPtr lhs, rhs;        // children (unary/call use lhs only)
    SourcePos pos;
};

inline ExprPtr make_constant(double v, SourcePos pos = {}) {
    return std::make_shared<ExprAst>(ExprAst{ExprKind::constant, v, "", -1, 0, nullptr,
                                             nullptr, pos});
}

// The function set is exactly what the jet layer provides.
inline bool is_supported_function(const std::string& name) {
    return name == "sqrt" || name == "exp" || name == "log" || name == "sin" ||
           name == "cos" || name == "tan";
}

// Evaluates the tree on jets expanded at a chart point. `vars[axis]` is the
// jet of coordinate `axis`; parameters are looked up by name.
inline Jet eval_expr(const ExprAst& e, const std::vector<Jet>& vars,
                     const std::map<std::string, double>& params) {
    const int dim = vars.empty() ? 3 : vars[0].dim();
    const int order = vars.empty() ? 3 : vars[0].order();
    switch (e.kind) {
        case ExprKind::constant: return Jet::constant(e.value, dim, order);
        case ExprKind::coordinate: return vars[e.axis];
        case ExprKind::parameter: {
            auto it = params.find(e.name);
            if (it == params.end())
                throw semantic_error(e.pos, "parameter '" + e.name + "' has no value");
            return Jet::constant(it->second, dim, order);
        }
        case ExprKind::unary: return -eval_expr(*e.lhs, vars, params);
        case ExprKind::binary: {
            if (e.name == "^") return pow_int(eval_expr(*e.lhs, vars, params), e.exponent);
            Jet a = eval_expr(*e.lhs, vars, params);
            Jet b = eval_expr(*e.rhs, vars, params);
            if (e.name == "+") return a + b;
            if (e.name == "-") return a - b;
            if (e.name == "*") return a * b;
            return a / b;
        }
        case ExprKind::call: {
            Jet a = eval_expr(*e.lhs, vars, params);
            if (e.name == "sqrt") return sqrt(a);
            if (e.name == "exp") return exp(a);
            if (e.name == "log") return log(a);
            if (e.name == "sin") return sin(a);
            if (e.name == "cos") return cos(a);
            return tan(a);
        }
    }
    throw std::logic_error("unreachable expression kind");
}

namespace detail {

// Binding strength used by the canonical printer to decide parentheses.
inline int precedence(const ExprAst& e) {
    switch (e.kind) {
        case ExprKind::binary: return (e.name == "+" || e.name == "-") ? 1
                                      : (e.name == "*" || e.name == "/") ? 2
                                                                         : 4;  // ^
        case ExprKind::unary: return 3;
        default: return 5;  // atoms never need parens
    }
}

inline void print_expr(std::ostream& os, const ExprAst& e, int parent_prec) {
    const int prec = precedence(e);
    const bool parens = prec < parent_prec;
    if (parens) os << "(";
    switch (e.kind) {
        case ExprKind::constant: {
            std::ostringstream num;
            num.precision(17);
            num << e.value;
            os << num.str();
            break;
        }
        case ExprKind::coordinate:
        case ExprKind::parameter: os << e.name; break;
        case ExprKind::unary:
            os << "-";
            print_expr(os, *e.lhs, prec + 1);
            break;
        case ExprKind::binary:
            if (e.name == "^") {
                print_expr(os, *e.lhs, prec + 1);
                os << "^";
                if (e.exponent < 0) os << "(" << e.exponent << ")";
                else os << e.exponent;
            } else {
                // left-associative: the right child needs parens at equal
                // precedence (a - (b - c)), the left child does not
                print_expr(os, *e.lhs, prec);
                os << " " << e.name << " ";
                print_expr(os, *e.rhs, prec + 1);
            }
            break;
        case ExprKind::call:
            os << e.name << "(";
            print_expr(os, *e.lhs, 0);
            os << ")";
            break;
    }
    if (parens) os << ")";
}

}  // namespace detail

// Canonical form: parsing the printed string yields a tree that prints
// identically (fixed point).
inline std::string print_expr(const ExprAst& e) {
    std::ostringstream os;
    detail::print_expr(os, e, 0);
    return os.str();
}

// ---------------------------------------------------------------------------
// Lexer

enum class TokKind { number, identifier, punct, end };

struct Token {
    TokKind kind = TokKind::end;
    std::string text;
    double value = 0.0;
    SourcePos pos;
};

class Lexer {
public:
    explicit Lexer(std::string src) : src_(std::move(src)) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_space_and_comments();
        tok_.pos = pos_;
        if (i_ >= src_.size()) {
            tok_ = {TokKind::end, "<end of input>", 0.0, pos_};
            return;
        }
        char c = src_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
                                        src_[i_] == '_'))
                id += take();
            tok_ = {TokKind::identifier, id, 0.0, tok_.pos};
            return;
        }
        if (std::string("+-*/^()[],=").find(c) != std::string::npos) {
            tok_ = {TokKind::punct, std::string(1, take()), 0.0, tok_.pos};
            return;
        }
        if (c == '\n') {
            take();
            tok_ = {TokKind::punct, "\n", 0.0, tok_.pos};
            return;
        }
        throw lexical_error(pos_, std::string("unexpected character '") + c + "'");
    }

    void lex_number() {
        std::string num;
        bool saw_digit = false, saw_dot = false;
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                saw_digit = true;
                num += take();
            } else if (c == '.' && !saw_dot) {
                saw_dot = true;
                num += take();
            } else {
                break;
            }
        }
        if (!saw_digit) throw lexical_error(tok_.pos, "malformed number '" + num + "'");
        if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
            std::size_t save = i_;
            std::string exp;
            exp += take();
            if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) exp += take();
            if (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
                while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_])))
                    exp += take();
                num += exp;
            } else {
                // not an exponent after all: restore (e.g. "2e" is "2" then id "e")
                while (i_ > save) untake();
            }
        }
        double value = 0.0;
        try {
            value = std::stod(num);
        } catch (const std::out_of_range&) {
            throw lexical_error(tok_.pos, "number '" + num + "' out of range");
        }
        tok_ = {TokKind::number, num, value, tok_.pos};
    }

    void skip_space_and_comments() {
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (c == '#') {
                while (i_ < src_.size() && src_[i_] != '\n') take();
            } else if (c == ' ' || c == '\t' || c == '\r') {
                take();
            } else {
                break;
            }
        }
        pos_ = cur_;
    }

    char take() {
        char c = src_[i_++];
        if (c == '\n') {
            ++cur_.line;
            cur_.col = 1;
        } else {
            ++cur_.col;
        }
        return c;
    }

    void untake() {
        --i_;
        --cur_.col;  // only used within one line (number backtrack)
    }

    std::string src_;
    std::size_t i_ = 0;
    SourcePos cur_{1, 1};  // position of src_[i_]
    SourcePos pos_{1, 1};  // position of the current token
    Token tok_;
};

// ---------------------------------------------------------------------------
// Parser

// Resolves identifiers while parsing: coordinates by axis, parameters by name,
// macros by inlining their tree.
struct ExprScope {
    std::vector<std::string> coords;
    std::vector<std::string> parameters;
    std::map<std::string, ExprPtr> macros;

    int coord_axis(const std::string& id) const {
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (coords[i] == id) return static_cast<int>(i);
        return -1;
    }
    bool is_parameter(const std::string& id) const {
        for (const auto& p : parameters)
            if (p == id) return true;
        return false;
    }
};

class ExprParser {
public:
    ExprParser(Lexer& lex, const ExprScope& scope) : lex_(lex), scope_(scope) {}

    // expr := term (('+'|'-') term)*
    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        while (is_punct("+") || is_punct("-")) {
            Token op = lex_.next();
            e = binary(op.text, e, parse_term(), op.pos);
        }
        return e;
    }

private:
    // term := unary (('*'|'/') unary)*
    ExprPtr parse_term() {
        ExprPtr e = parse_unary();
        while (is_punct("*") || is_punct("/")) {
            Token op = lex_.next();
            e = binary(op.text, e, parse_unary(), op.pos);
        }
        return e;
    }

    // unary := '-' unary | power
    ExprPtr parse_unary() {
        if (is_punct("-")) {
            Token op = lex_.next();
            ExprPtr inner = parse_unary();
            return std::make_shared<ExprAst>(
                ExprAst{ExprKind::unary, 0.0, "-", -1, 0, inner, nullptr, op.pos});
        }
        return parse_power();
    }

    // power := atom ('^' integer)? — exponents are integer literals, possibly
    // parenthesized and signed, so that jets never see fractional powers
    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (!is_punct("^")) return base;
        Token op = lex_.next();
        int sign = 1;
        bool parens = false;
        if (is_punct("(")) {
            parens = true;
            lex_.next();
        }
        if (is_punct("-")) {
            sign = -1;
            lex_.next();
        }
        Token t = lex_.peek();
        if (t.kind != TokKind::number || t.text.find('.') != std::string::npos ||
            t.text.find('e') != std::string::npos || t.text.find('E') != std::string::npos)
            throw syntax_error(t.pos, "expected integer exponent after '^', got '" +
                                          t.text + "'");
        lex_.next();
        if (parens) expect_punct(")");
        auto node = std::make_shared<ExprAst>(
            ExprAst{ExprKind::binary, 0.0, "^", -1, sign * static_cast<int>(t.value),
                    base, nullptr, op.pos});
        return node;
    }

    // atom := number | identifier | identifier '(' expr ')' | '(' expr ')'
    ExprPtr parse_atom() {
        Token t = lex_.peek();
        if (t.kind == TokKind::number) {
            lex_.next();
            return make_constant(t.value, t.pos);
        }
        if (is_punct("(")) {
            lex_.next();
            ExprPtr e = parse_expr();
            expect_punct(")");
            return e;
        }
        if (t.kind == TokKind::identifier) {
            lex_.next();
            if (is_punct("(")) {
                if (!is_supported_function(t.text))
                    throw semantic_error(t.pos, "unsupported function '" + t.text + "'");
                lex_.next();
                ExprPtr arg = parse_expr();
                expect_punct(")");
                return std::make_shared<ExprAst>(
                    ExprAst{ExprKind::call, 0.0, t.text, -1, 0, arg, nullptr, t.pos});
            }
            int axis = scope_.coord_axis(t.text);
            if (axis >= 0)
                return std::make_shared<ExprAst>(
                    ExprAst{ExprKind::coordinate, 0.0, t.text, axis, 0, nullptr, nullptr,
                            t.pos});
            if (scope_.is_parameter(t.text))
                return std::make_shared<ExprAst>(
                    ExprAst{ExprKind::parameter, 0.0, t.text, -1, 0, nullptr, nullptr,
                            t.pos});
            auto it = scope_.macros.find(t.text);
            if (it != scope_.macros.end()) return it->second;
            throw semantic_error(t.pos, "unknown identifier '" + t.text +
                                            "' (not a coordinate, parameter, or macro)");
        }
        throw syntax_error(t.pos, "expected a number, identifier, or '(', got '" +
                                      t.text + "'");
    }

    ExprPtr binary(const std::string& op, ExprPtr a, ExprPtr b, SourcePos pos) {
        return std::make_shared<ExprAst>(
            ExprAst{ExprKind::binary, 0.0, op, -1, 0, a, b, pos});
    }

    bool is_punct(const std::string& s) const {
        return lex_.peek().kind == TokKind::punct && lex_.peek().text == s;
    }

    void expect_punct(const std::string& s) {
        Token t = lex_.peek();
        if (!is_punct(s))
            throw syntax_error(t.pos, "expected '" + s + "', got '" + t.text + "'");
        lex_.next();
    }

    Lexer& lex_;
    const ExprScope& scope_;
};

// Parses a single expression against a scope; the whole input must be
// consumed. Used directly by tests and the canonical-printing round trip.
inline ExprPtr parse_expr(const std::string& text, const ExprScope& scope = {}) {
    Lexer lex(text);
    while (lex.peek().kind == TokKind::punct && lex.peek().text == "\n") lex.next();
    ExprParser parser(lex, scope);
    ExprPtr e = parser.parse_expr();
    while (lex.peek().kind == TokKind::punct && lex.peek().text == "\n") lex.next();
    Token t = lex.peek();
    if (t.kind != TokKind::end)
        throw syntax_error(t.pos, "expected end of input, got '" + t.text + "'");
    return e;
}

// Convenience for scalar golden tests: evaluates a closed expression.
inline double eval_constant_expr(const std::string& text) {
    ExprPtr e = parse_expr(text);
    return eval_expr(*e, std::vector<Jet>{}, {}).value();
}

// ---------------------------------------------------------------------------
// Metric files
//
// Line-oriented declarations around the expression language:
//
//   kind metric3 | metric4 | kk_triple
//   signature euclidean | lorentzian
//   coords <name> ...                  (3 names; 4 for metric4)
//   param <name> = <number>            (default value, overridable)
//   domain <coord> = <number> <number> (sample interval; optional)
//   let <name> = <expression>          (macro, inlined where referenced)
//   g[i,j] = <expression>              (1-based, symmetric; duplicates of an
//                                       unordered pair are rejected)
//   sigma = <expression>               (kk_triple only)
//   a[i] = <expression>                (kk_triple only, defaults to 0)
//
// Unlisted off-diagonal g components default to 0; every diagonal component
// must be declared.

namespace detail {

struct ParsedFile {
    int dim = 3;
    std::vector<std::string> coords;
    std::map<std::string, double> params;
    std::map<std::pair<int, int>, ExprPtr> g;  // keyed by ordered pair, i <= j
    std::map<int, ExprPtr> a;
    ExprPtr sigma;
};

inline Ten2 eval_metric_components(const ParsedFile& f,
                                   const std::map<std::string, double>& params,
                                   const Point& p) {
    auto vars = chart_vars(p, f.dim);
    Ten2 g = Ten2::zeros(f.dim, 3);
    for (const auto& [idx, expr] : f.g) {
        Jet v = eval_expr(*expr, vars, params);
        g(idx.first, idx.second) = v;
        g(idx.second, idx.first) = v;
    }
    return g;
}

}  // namespace detail

inline GeometryEntry parse_metric_file(const std::string& text,
                                       const std::map<std::string, double>& overrides = {},
                                       const std::string& name = "metric_file") {
    auto file = std::make_shared<detail::ParsedFile>();
    GeometryEntry e;
    e.name = name;
    e.kind = GeometryKind::metric3;
    e.provenance = "user metric file";

    bool saw_kind = false, saw_signature = false;
    Lexer lex(text);
    ExprScope scope;

    auto at_line_end = [&] {
        return lex.peek().kind == TokKind::end ||
               (lex.peek().kind == TokKind::punct && lex.peek().text == "\n");
    };
    auto end_line = [&] {
        Token t = lex.peek();
        if (!at_line_end())
            throw syntax_error(t.pos, "expected end of line, got '" + t.text + "'");
        if (t.kind != TokKind::end) lex.next();
    };
    auto expect_identifier = [&](const std::string& what) {
        Token t = lex.peek();
        if (t.kind != TokKind::identifier)
            throw syntax_error(t.pos, "expected " + what + ", got '" + t.text + "'");
        return lex.next();
    };
    auto expect_punct = [&](const std::string& s) {
        Token t = lex.peek();
        if (t.kind != TokKind::punct || t.text != s)
            throw syntax_error(t.pos, "expected '" + s + "', got '" + t.text + "'");
        lex.next();
    };
    auto expect_number = [&] {
        bool neg = false;
        if (lex.peek().kind == TokKind::punct && lex.peek().text == "-") {
            neg = true;
            lex.next();
        }
        Token t = lex.peek();
        if (t.kind != TokKind::number)
            throw syntax_error(t.pos, "expected a number, got '" + t.text + "'");
        lex.next();
        return neg ? -t.value : t.value;
    };
    auto expect_index = [&](int limit, const std::string& what) {
        Token t = lex.peek();
        if (t.kind != TokKind::number || t.text.find('.') != std::string::npos)
            throw syntax_error(t.pos, "expected an integer index, got '" + t.text + "'");
        lex.next();
        int idx = static_cast<int>(t.value);
        if (idx < 1 || idx > limit)
            throw semantic_error(t.pos, what + " index " + std::to_string(idx) +
                                            " out of range 1.." + std::to_string(limit));
        return idx - 1;
    };
    auto require_coords = [&](const Token& t) {
        if (scope.coords.empty())
            throw semantic_error(t.pos,
                                 "'" + t.text + "' requires a prior coords declaration");
    };

    while (lex.peek().kind != TokKind::end) {
        if (lex.peek().kind == TokKind::punct && lex.peek().text == "\n") {
            lex.next();
            continue;
        }
        Token head = expect_identifier("a declaration keyword or component");

        if (head.text == "kind") {
            Token v = expect_identifier("metric3, metric4, or kk_triple");
            if (v.text == "metric3") e.kind = GeometryKind::metric3;
            else if (v.text == "metric4") e.kind = GeometryKind::metric4;
            else if (v.text == "kk_triple") e.kind = GeometryKind::kk_triple;
            else throw semantic_error(v.pos, "unknown kind '" + v.text + "'");
            saw_kind = true;
            file->dim = e.kind == GeometryKind::metric4 ? 4 : 3;
            end_line();
        } else if (head.text == "signature") {
            Token v = expect_identifier("euclidean or lorentzian");
            if (v.text == "euclidean") e.signature = Signature::euclidean;
            else if (v.text == "lorentzian") e.signature = Signature::lorentzian;
            else throw semantic_error(v.pos, "unknown signature '" + v.text + "'");
            saw_signature = true;
            end_line();
        } else if (head.text == "coords") {
            if (!saw_kind)
                throw semantic_error(head.pos, "coords must follow the kind declaration");
            if (!scope.coords.empty())
                throw semantic_error(head.pos, "duplicate coords declaration");
            while (!at_line_end()) {
                Token c = expect_identifier("a coordinate name");
                if (scope.coord_axis(c.text) >= 0)
                    throw semantic_error(c.pos, "duplicate coordinate '" + c.text + "'");
                scope.coords.push_back(c.text);
            }
            if (static_cast<int>(scope.coords.size()) != file->dim)
                throw semantic_error(head.pos,
                                     "expected " + std::to_string(file->dim) +
                                         " coordinates, got " +
                                         std::to_string(scope.coords.size()));
            file->coords = scope.coords;
            end_line();
        } else if (head.text == "param") {
            Token n = expect_identifier("a parameter name");
            if (scope.coord_axis(n.text) >= 0 || scope.is_parameter(n.text) ||
                scope.macros.count(n.text))
                throw semantic_error(n.pos, "'" + n.text + "' is already declared");
            expect_punct("=");
            double v = expect_number();
            scope.parameters.push_back(n.text);
            file->params[n.text] = v;
            end_line();
        } else if (head.text == "domain") {
            require_coords(head);
            Token c = expect_identifier("a coordinate name");
            if (scope.coord_axis(c.text) < 0)
                throw semantic_error(c.pos, "unknown coordinate '" + c.text + "'");
            expect_punct("=");
            double lo = expect_number();
            double hi = expect_number();
            if (!(lo < hi))
                throw semantic_error(c.pos, "empty domain interval for '" + c.text + "'");
            for (const auto& d : e.domain)
                if (d.coord == c.text)
                    throw semantic_error(c.pos,
                                         "duplicate domain for '" + c.text + "'");
            e.domain.push_back({c.text, lo, hi});
            end_line();
        } else if (head.text == "let") {
            require_coords(head);
            Token n = expect_identifier("a macro name");
            if (scope.coord_axis(n.text) >= 0 || scope.is_parameter(n.text) ||
                scope.macros.count(n.text))
                throw semantic_error(n.pos, "'" + n.text + "' is already declared");
            expect_punct("=");
            ExprParser parser(lex, scope);
            scope.macros[n.text] = parser.parse_expr();
            end_line();
        } else if (head.text == "g") {
            require_coords(head);
            expect_punct("[");
            int i = expect_index(file->dim, "component");
            expect_punct(",");
            int j = expect_index(file->dim, "component");
            expect_punct("]");
            expect_punct("=");
            auto key = std::make_pair(std::min(i, j), std::max(i, j));
            if (file->g.count(key))
                throw semantic_error(head.pos,
                                     "duplicate component g[" + std::to_string(key.first + 1) +
                                         "," + std::to_string(key.second + 1) +
                                         "] (components are symmetric)");
            ExprParser parser(lex, scope);
            file->g[key] = parser.parse_expr();
            end_line();
        } else if (head.text == "sigma") {
            if (e.kind != GeometryKind::kk_triple)
                throw semantic_error(head.pos, "sigma is only valid for kind kk_triple");
            require_coords(head);
            if (file->sigma)
                throw semantic_error(head.pos, "duplicate component sigma");
            expect_punct("=");
            ExprParser parser(lex, scope);
            file->sigma = parser.parse_expr();
            end_line();
        } else if (head.text == "a") {
            if (e.kind != GeometryKind::kk_triple)
                throw semantic_error(head.pos, "a[i] is only valid for kind kk_triple");
            require_coords(head);
            expect_punct("[");
            int i = expect_index(3, "component");
            expect_punct("]");
            expect_punct("=");
            if (file->a.count(i))
                throw semantic_error(head.pos,
                                     "duplicate component a[" + std::to_string(i + 1) + "]");
            ExprParser parser(lex, scope);
            file->a[i] = parser.parse_expr();
            end_line();
        } else {
            throw syntax_error(head.pos, "unknown declaration '" + head.text + "'");
        }
    }

    SourcePos end_pos = lex.peek().pos;
    if (!saw_kind) throw semantic_error(end_pos, "missing kind declaration");
    if (!saw_signature) throw semantic_error(end_pos, "missing signature declaration");
    if (scope.coords.empty()) throw semantic_error(end_pos, "missing coords declaration");
    for (int i = 0; i < file->dim; ++i)
        if (!file->g.count({i, i}))
            throw semantic_error(end_pos, "missing component g[" + std::to_string(i + 1) +
                                              "," + std::to_string(i + 1) + "]");
    if (e.kind == GeometryKind::kk_triple && !file->sigma)
        throw semantic_error(end_pos, "missing component sigma");

    e.coords = file->coords;
    e.params = file->params;
    for (const auto& [k, v] : overrides) {
        if (!e.params.count(k))
            throw semantic_error(end_pos, "override for undeclared parameter '" + k + "'");
        e.params[k] = v;
    }
    for (const auto& c : e.coords) {
        bool declared = false;
        for (const auto& d : e.domain) declared = declared || d.coord == c;
        if (!declared) e.domain.push_back({c, -1.0, 1.0});
    }

    const std::map<std::string, double> params = e.params;
    if (e.kind == GeometryKind::kk_triple) {
        KKTriple kk;
        kk.reduction_signature = e.signature;
        kk.sigma = [file, params](const Point& p) {
            return eval_expr(*file->sigma, detail::chart_vars(p, 3), params);
        };
        kk.a = [file, params](const Point& p) {
            auto vars = detail::chart_vars(p, 3);
            Ten1 a = Ten1::zeros(3, 3);
            for (const auto& [i, expr] : file->a) a(i) = eval_expr(*expr, vars, params);
            return a;
        };
        kk.g3.dim = 3;
        kk.g3.signature = Signature::euclidean;
        kk.g3.name = name + "_g3";
        kk.g3.components = [file, params](const Point& p) {
            return detail::eval_metric_components(*file, params, p);
        };
        e.kk = kk;
    } else {
        MetricField m;
        m.dim = file->dim;
        m.signature = e.signature;
        m.name = name;
        m.components = [file, params](const Point& p) {
            return detail::eval_metric_components(*file, params, p);
        };
        e.metric = m;
    }
    return e;
}

}  // namespace weylkk
