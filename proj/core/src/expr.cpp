#include "heis/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "heis/common.hpp"

namespace heis {

Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.dx + b.dx, a.dy + b.dy}; }
Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.dx - b.dx, a.dy - b.dy}; }
Jet operator-(const Jet& a) { return {-a.v, -a.dx, -a.dy}; }
Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v, a.dx * b.v + a.v * b.dx, a.dy * b.v + a.v * b.dy};
}
Jet operator/(const Jet& a, const Jet& b) {
    double q = a.v / b.v;
    return {q, (a.dx - q * b.dx) / b.v, (a.dy - q * b.dy) / b.v};
}
Jet operator*(double s, const Jet& a) { return {s * a.v, s * a.dx, s * a.dy}; }

namespace {
Jet chain(const Jet& a, double f, double fp) { return {f, fp * a.dx, fp * a.dy}; }
}  // namespace

Jet sin(const Jet& a) { return chain(a, std::sin(a.v), std::cos(a.v)); }
Jet cos(const Jet& a) { return chain(a, std::cos(a.v), -std::sin(a.v)); }
Jet tan(const Jet& a) {
    double t = std::tan(a.v);
    return chain(a, t, 1.0 + t * t);
}
Jet atan(const Jet& a) { return chain(a, std::atan(a.v), 1.0 / (1.0 + a.v * a.v)); }
Jet tanh(const Jet& a) {
    double t = std::tanh(a.v);
    return chain(a, t, 1.0 - t * t);
}
Jet exp(const Jet& a) {
    double e = std::exp(a.v);
    return chain(a, e, e);
}
Jet log(const Jet& a) { return chain(a, std::log(a.v), 1.0 / a.v); }
Jet sqrt(const Jet& a) {
    double r = std::sqrt(a.v);
    return chain(a, r, r > 0 ? 0.5 / r : 0.0);
}
Jet abs(const Jet& a) { return chain(a, std::fabs(a.v), a.v > 0 ? 1.0 : (a.v < 0 ? -1.0 : 0.0)); }
Jet pow(const Jet& a, const Jet& b) {
    if (b.dx == 0.0 && b.dy == 0.0) {
        double n = b.v;
        double f = std::pow(a.v, n);
        double fp = (n == 0.0) ? 0.0 : n * std::pow(a.v, n - 1.0);
        return chain(a, f, fp);
    }
    return exp(b * log(a));
}

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Lt, Gt, Le, Ge, Fn, Piecewise };
enum class Fn { Sin, Cos, Tan, Atan, Tanh, Exp, Log, Sqrt, Abs };

struct Expression::Node {
    Op op = Op::Const;
    double c = 0.0;
    int var = 0;
    Fn fn = Fn::Sin;
    std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using NodeP = std::shared_ptr<const Expression::Node>;

NodeP make(Op op, std::vector<NodeP> kids = {}) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->kids = std::move(kids);
    return n;
}

class Parser {
public:
    Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

    NodeP parse_all() {
        NodeP n = comparison();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return n;
    }

private:
    const std::string& s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::ParseError, msg + " at offset " + std::to_string(pos_) + " in '" + s_ + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char ch) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodeP comparison() {
        NodeP a = additive();
        skip();
        if (pos_ < s_.size() && (s_[pos_] == '<' || s_[pos_] == '>')) {
            char c = s_[pos_++];
            bool eq = eat('=');
            Op op = c == '<' ? (eq ? Op::Le : Op::Lt) : (eq ? Op::Ge : Op::Gt);
            return make(op, {a, additive()});
        }
        return a;
    }
    NodeP additive() {
        NodeP a = multiplicative();
        for (;;) {
            if (eat('+')) a = make(Op::Add, {a, multiplicative()});
            else if (eat('-')) a = make(Op::Sub, {a, multiplicative()});
            else return a;
        }
    }
    NodeP multiplicative() {
        NodeP a = unary();
        for (;;) {
            if (eat('*')) a = make(Op::Mul, {a, unary()});
            else if (eat('/')) a = make(Op::Div, {a, unary()});
            else return a;
        }
    }
    NodeP unary() {
        if (eat('-')) return make(Op::Neg, {unary()});
        if (eat('+')) return unary();
        return power();
    }
    NodeP power() {
        NodeP base = primary();
        if (eat('^')) return make(Op::Pow, {base, unary()});
        return base;
    }
    NodeP primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char ch = s_[pos_];
        if (ch == '(') {
            ++pos_;
            NodeP n = comparison();
            if (!eat(')')) fail("expected ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::Const;
            n->c = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            skip();
            if (pos_ < s_.size() && s_[pos_] == '(') {
                ++pos_;
                std::vector<NodeP> args;
                if (!eat(')')) {
                    do {
                        args.push_back(comparison());
                    } while (eat(','));
                    if (!eat(')')) fail("expected ')' after arguments");
                }
                return call(id, std::move(args));
            }
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                if (vars_[i] == id) {
                    auto n = std::make_shared<Expression::Node>();
                    n->op = Op::Var;
                    n->var = static_cast<int>(i);
                    return n;
                }
            }
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::Const;
            if (id == "pi") n->c = std::numbers::pi;
            else if (id == "e") n->c = std::numbers::e;
            else fail("unknown identifier '" + id + "'");
            return n;
        }
        fail(std::string("unexpected character '") + ch + "'");
    }

    NodeP call(const std::string& id, std::vector<NodeP> args) {
        if (id == "piecewise") {
            if (args.size() < 3 || args.size() % 2 == 0) fail("piecewise needs (c1,e1,...,else)");
            return make(Op::Piecewise, std::move(args));
        }
        if (id == "pow") {
            if (args.size() != 2) fail("pow takes two arguments");
            return make(Op::Pow, std::move(args));
        }
        static const std::pair<const char*, Fn> table[] = {
            {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},   {"arctan", Fn::Atan},
            {"atan", Fn::Atan}, {"tanh", Fn::Tanh}, {"exp", Fn::Exp},   {"log", Fn::Log},
            {"sqrt", Fn::Sqrt}, {"abs", Fn::Abs},
        };
        for (const auto& [name, fn] : table) {
            if (id == name) {
                if (args.size() != 1) fail(id + " takes one argument");
                auto n = std::make_shared<Expression::Node>();
                n->op = Op::Fn;
                n->fn = fn;
                n->kids = std::move(args);
                return n;
            }
        }
        fail("unknown function '" + id + "'");
    }
};

Jet apply(Fn fn, const Jet& a) {
    switch (fn) {
        case Fn::Sin: return sin(a);
        case Fn::Cos: return cos(a);
        case Fn::Tan: return tan(a);
        case Fn::Atan: return atan(a);
        case Fn::Tanh: return tanh(a);
        case Fn::Exp: return exp(a);
        case Fn::Log: return log(a);
        case Fn::Sqrt: return sqrt(a);
        case Fn::Abs: return abs(a);
    }
    return a;
}

Jet eval_jet(const Expression::Node& n, const Jet& a, const Jet& b) {
    switch (n.op) {
        case Op::Const: return Jet::constant(n.c);
        case Op::Var: return n.var == 0 ? a : b;
        case Op::Neg: return -eval_jet(*n.kids[0], a, b);
        case Op::Add: return eval_jet(*n.kids[0], a, b) + eval_jet(*n.kids[1], a, b);
        case Op::Sub: return eval_jet(*n.kids[0], a, b) - eval_jet(*n.kids[1], a, b);
        case Op::Mul: return eval_jet(*n.kids[0], a, b) * eval_jet(*n.kids[1], a, b);
        case Op::Div: return eval_jet(*n.kids[0], a, b) / eval_jet(*n.kids[1], a, b);
        case Op::Pow: return pow(eval_jet(*n.kids[0], a, b), eval_jet(*n.kids[1], a, b));
        case Op::Lt: return Jet::constant(eval_jet(*n.kids[0], a, b).v < eval_jet(*n.kids[1], a, b).v);
        case Op::Gt: return Jet::constant(eval_jet(*n.kids[0], a, b).v > eval_jet(*n.kids[1], a, b).v);
        case Op::Le: return Jet::constant(eval_jet(*n.kids[0], a, b).v <= eval_jet(*n.kids[1], a, b).v);
        case Op::Ge: return Jet::constant(eval_jet(*n.kids[0], a, b).v >= eval_jet(*n.kids[1], a, b).v);
        case Op::Fn: return apply(n.fn, eval_jet(*n.kids[0], a, b));
        case Op::Piecewise: {
            std::size_t k = 0;
            for (; k + 1 < n.kids.size(); k += 2)
                if (eval_jet(*n.kids[k], a, b).v > 0) return eval_jet(*n.kids[k + 1], a, b);
            return eval_jet(*n.kids.back(), a, b);
        }
    }
    return Jet{};
}

bool has_var(const Expression::Node& n) {
    if (n.op == Op::Var) return true;
    for (const auto& k : n.kids)
        if (has_var(*k)) return true;
    return false;
}

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& vars) {
    Expression e;
    Parser p(text, vars);
    e.root_ = p.parse_all();
    e.text_ = text;
    return e;
}

Expression Expression::constant(double c) {
    Expression e;
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->c = c;
    e.root_ = n;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    e.text_ = buf;
    return e;
}

double Expression::eval(double a, double b) const {
    return eval_jet(*root_, Jet::constant(a), Jet::constant(b)).v;
}

Jet Expression::jet(double a, double b) const {
    return eval_jet(*root_, Jet{a, 1.0, 0.0}, Jet{b, 0.0, 1.0});
}

bool Expression::is_constant() const { return root_ && !has_var(*root_); }

}  // namespace heis
