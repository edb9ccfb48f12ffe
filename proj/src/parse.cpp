#include "isochron/parse.hpp"

#include <cctype>
#include <functional>

namespace isochron {

namespace {

enum class TokKind { Int, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, Dot, End };

struct Tok {
    TokKind kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : s_(text) { next(); }
    const Tok& peek() const { return tok_; }
    Tok take() {
        Tok t = tok_;
        next();
        return t;
    }

private:
    void next() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) {
            if (s_[pos_] == '\n') { ++line_; col_ = 1; }
            else ++col_;
            ++pos_;
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= s_.size()) { tok_.kind = TokKind::End; tok_.text.clear(); return; }
        char c = s_[pos_];
        auto one = [&](TokKind k) {
            tok_.kind = k;
            tok_.text = std::string(1, c);
            ++pos_; ++col_;
        };
        switch (c) {
            case '+': one(TokKind::Plus); return;
            case '-': one(TokKind::Minus); return;
            case '*': one(TokKind::Star); return;
            case '/': one(TokKind::Slash); return;
            case '^': one(TokKind::Caret); return;
            case '(': one(TokKind::LParen); return;
            case ')': one(TokKind::RParen); return;
            case '.': one(TokKind::Dot); return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) { ++pos_; ++col_; }
            tok_.kind = TokKind::Int;
            tok_.text = s_.substr(start, pos_ - start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) { ++pos_; ++col_; }
            tok_.kind = TokKind::Name;
            tok_.text = s_.substr(start, pos_ - start);
            return;
        }
        throw SyntaxError(line_, col_, std::string("unexpected character '") + c + "'");
    }

    std::string s_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Tok tok_;
};

enum class GrammarMode { Poly, RatFun, Extended };

// One grammar, three value algebras.
template <class Alg>
class Parser {
public:
    using Value = typename Alg::Value;
    Parser(const std::string& text, Alg& alg, GrammarMode mode)
        : lex_(text), alg_(alg), mode_(mode) {}

    Value parse() {
        Value v = expr();
        const Tok& t = lex_.peek();
        if (t.kind != TokKind::End)
            throw SyntaxError(t.line, t.col, "unexpected trailing input '" + t.text + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const Tok& t, const std::string& msg) {
        throw SyntaxError(t.line, t.col, msg);
    }

    Value expr() {
        bool neg = false;
        if (lex_.peek().kind == TokKind::Minus) { lex_.take(); neg = true; }
        else if (lex_.peek().kind == TokKind::Plus) lex_.take();
        Value v = term();
        if (neg) v = alg_.neg(std::move(v));
        while (lex_.peek().kind == TokKind::Plus || lex_.peek().kind == TokKind::Minus) {
            bool minus = lex_.take().kind == TokKind::Minus;
            Value rhs = term();
            v = minus ? alg_.sub(std::move(v), std::move(rhs)) : alg_.add(std::move(v), std::move(rhs));
        }
        return v;
    }

    Value term() {
        Value v = factor();
        for (;;) {
            TokKind k = lex_.peek().kind;
            if (k == TokKind::Star) {
                lex_.take();
                v = alg_.mul(std::move(v), factor());
            } else if (k == TokKind::Slash) {
                if (mode_ == GrammarMode::Poly)
                    fail(lex_.peek(), "division is not allowed in the polynomial grammar");
                lex_.take();
                v = alg_.div(std::move(v), factor());
            } else {
                return v;
            }
        }
    }

    Value factor() {
        Value v = primary();
        if (lex_.peek().kind == TokKind::Caret) {
            lex_.take();
            auto [p, q] = exponent();
            v = alg_.pow(std::move(v), p, q);
        }
        return v;
    }

    // INT, or '(' ['-'] INT ['/' INT] ')'
    std::pair<long, unsigned long> exponent() {
        Tok t = lex_.peek();
        if (t.kind == TokKind::Int) {
            lex_.take();
            return {std::stol(t.text), 1UL};
        }
        if (t.kind != TokKind::LParen)
            fail(t, "expected an exponent");
        lex_.take();
        bool neg = false;
        if (lex_.peek().kind == TokKind::Minus) { lex_.take(); neg = true; }
        Tok num = lex_.peek();
        if (num.kind != TokKind::Int) fail(num, "expected an integer exponent");
        lex_.take();
        long p = std::stol(num.text);
        if (neg) p = -p;
        unsigned long q = 1;
        if (lex_.peek().kind == TokKind::Slash) {
            if (mode_ != GrammarMode::Extended) {
                Tok s = lex_.peek();
                fail(s, "rational exponents are only allowed in the extended grammar");
            }
            lex_.take();
            Tok den = lex_.peek();
            if (den.kind != TokKind::Int)
                throw MalformedRationalExponent("exponent denominator must be an integer");
            lex_.take();
            q = std::stoul(den.text);
            if (q == 0) throw MalformedRationalExponent("exponent denominator must be nonzero");
        }
        Tok close = lex_.peek();
        if (close.kind != TokKind::RParen) fail(close, "expected ')' after exponent");
        lex_.take();
        if (mode_ == GrammarMode::Poly && p < 0) throw NegativeExponent();
        return {p, q};
    }

    Value primary() {
        Tok t = lex_.peek();
        switch (t.kind) {
            case TokKind::Int: {
                lex_.take();
                Rational r = rat_from_string(t.text);
                if (lex_.peek().kind == TokKind::Dot) {
                    if (mode_ != GrammarMode::Extended)
                        fail(lex_.peek(), "decimal literals are not allowed in this grammar");
                    lex_.take();
                    Tok frac = lex_.peek();
                    if (frac.kind != TokKind::Int) fail(frac, "expected digits after '.'");
                    lex_.take();
                    Rational scale = rat_pow(Rational(10), static_cast<long>(frac.text.size()));
                    r += Rational(rat_from_string(frac.text)) / scale;
                } else if (mode_ == GrammarMode::Poly && lex_.peek().kind == TokKind::Slash) {
                    // exact rational literal p/q
                    lex_.take();
                    Tok den = lex_.peek();
                    if (den.kind != TokKind::Int) fail(den, "expected integer denominator in rational literal");
                    lex_.take();
                    Rational d = rat_from_string(den.text);
                    if (rat_is_zero(d)) fail(den, "zero denominator in rational literal");
                    r /= d;
                }
                return alg_.number(r);
            }
            case TokKind::Name: {
                lex_.take();
                if (mode_ == GrammarMode::Extended && lex_.peek().kind == TokKind::LParen &&
                    (t.text == "sqrt" || t.text == "tan" || t.text == "arctan")) {
                    lex_.take();
                    Value arg = expr();
                    Tok close = lex_.peek();
                    if (close.kind != TokKind::RParen) fail(close, "expected ')' after function argument");
                    lex_.take();
                    return alg_.call(t.text, std::move(arg));
                }
                return alg_.variable(t.text, t.line, t.col);
            }
            case TokKind::LParen: {
                lex_.take();
                Value v = expr();
                Tok close = lex_.peek();
                if (close.kind != TokKind::RParen) fail(close, "expected ')'");
                lex_.take();
                return v;
            }
            case TokKind::Dot:
                fail(t, mode_ == GrammarMode::Extended ? "expected digits before '.'"
                                                       : "decimal literals are not allowed in this grammar");
            default:
                fail(t, "expected a literal, a name, or '('");
        }
    }

    Lexer lex_;
    Alg& alg_;
    GrammarMode mode_;
};

struct PolyAlg {
    using Value = ParamPoly;
    VarContext ctx;

    Value number(const Rational& r) { return ParamPoly::constant(ctx, r); }
    Value variable(const std::string& name, int line, int col) {
        if (ctx.index_of(name) < 0)
            throw UnknownVariable(std::to_string(line) + ":" + std::to_string(col) +
                                  ": unknown variable '" + name + "'");
        return ParamPoly::variable(ctx, name);
    }
    Value add(Value a, Value b) { return a + b; }
    Value sub(Value a, Value b) { return a - b; }
    Value mul(Value a, Value b) { return a * b; }
    Value div(Value, Value) { throw SyntaxError(0, 0, "unreachable"); }
    Value neg(Value a) { return -a; }
    Value pow(Value a, long p, unsigned long) {
        if (p < 0) throw NegativeExponent();
        return a.pow(p);
    }
    Value call(const std::string&, Value) { throw SyntaxError(0, 0, "unreachable"); }
};

struct RatFunAlg {
    using Value = PolyFraction;
    VarContext ctx;

    Value number(const Rational& r) { return PolyFraction(ParamPoly::constant(ctx, r)); }
    Value variable(const std::string& name, int line, int col) {
        if (ctx.index_of(name) < 0)
            throw UnknownVariable(std::to_string(line) + ":" + std::to_string(col) +
                                  ": unknown variable '" + name + "'");
        return PolyFraction(ParamPoly::variable(ctx, name));
    }
    Value add(Value a, Value b) { return a + b; }
    Value sub(Value a, Value b) { return a - b; }
    Value mul(Value a, Value b) { return a * b; }
    Value div(Value a, Value b) { return a / b; }
    Value neg(Value a) { return -a; }
    Value pow(Value a, long p, unsigned long) { return a.pow(p); }
    Value call(const std::string&, Value) { throw SyntaxError(0, 0, "unreachable"); }
};

struct EvalAlg {
    using Value = std::shared_ptr<const EvalExpr::Node>;
    using Node = EvalExpr::Node;

    static Value make(Node n) { return std::make_shared<const Node>(std::move(n)); }
    Value number(const Rational& r) {
        Node n;
        n.kind = EvalExpr::Kind::Num;
        n.num = r;
        return make(std::move(n));
    }
    Value variable(const std::string& name, int line, int col) {
        if (name != "x" && name != "y")
            throw SyntaxError(line, col, "only x and y may appear in extended expressions, got '" + name + "'");
        Node n;
        n.kind = EvalExpr::Kind::Var;
        n.var = name == "x" ? 0 : 1;
        return make(std::move(n));
    }
    Value binary(EvalExpr::Kind k, Value a, Value b) {
        Node n;
        n.kind = k;
        n.kids = {std::move(a), std::move(b)};
        return make(std::move(n));
    }
    Value add(Value a, Value b) { return binary(EvalExpr::Kind::Add, std::move(a), std::move(b)); }
    Value sub(Value a, Value b) { return binary(EvalExpr::Kind::Sub, std::move(a), std::move(b)); }
    Value mul(Value a, Value b) { return binary(EvalExpr::Kind::Mul, std::move(a), std::move(b)); }
    Value div(Value a, Value b) { return binary(EvalExpr::Kind::Div, std::move(a), std::move(b)); }
    Value neg(Value a) {
        Node n;
        n.kind = EvalExpr::Kind::Neg;
        n.kids = {std::move(a)};
        return make(std::move(n));
    }
    Value pow(Value a, long p, unsigned long q) {
        Node n;
        n.kind = EvalExpr::Kind::Pow;
        n.pow_p = p;
        n.pow_q = q;
        n.kids = {std::move(a)};
        return make(std::move(n));
    }
    Value call(const std::string& fn, Value a) {
        Node n;
        n.kind = fn == "sqrt" ? EvalExpr::Kind::Sqrt
               : fn == "tan" ? EvalExpr::Kind::Tan
                             : EvalExpr::Kind::Arctan;
        n.kids = {std::move(a)};
        return make(std::move(n));
    }
};

} // namespace

ParamPoly parse_poly_in(const std::string& text, const VarContext& ctx) {
    PolyAlg alg{ctx};
    Parser<PolyAlg> p(text, alg, GrammarMode::Poly);
    return p.parse();
}

ParamPoly parse_poly(const std::string& text, const std::vector<std::string>& params) {
    std::vector<std::string> names = {"x", "y"};
    for (const auto& n : params)
        if (n != "x" && n != "y") names.push_back(n);
    return parse_poly_in(text, VarContext::make(names));
}

PolyExpr parse_poly_expr(const std::string& text, const std::vector<std::string>& params) {
    return PolyExpr{text, parse_poly(text, params)};
}

PolyFraction parse_ratfun_in(const std::string& text, const VarContext& ctx) {
    RatFunAlg alg{ctx};
    Parser<RatFunAlg> p(text, alg, GrammarMode::RatFun);
    return p.parse();
}

EvalExpr parse_extended(const std::string& text) {
    EvalAlg alg;
    Parser<EvalAlg> p(text, alg, GrammarMode::Extended);
    return EvalExpr(p.parse(), text);
}

} // namespace isochron
