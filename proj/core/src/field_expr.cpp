#include "sgfract/field_expr.hpp"

#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

namespace sgf {
namespace detail {

enum class Op { add, sub, mul, div, pow };
enum class Fn { sin, cos, tan, exp, log, sqrt, abs };

struct ExprNode {
    enum class Tag { constant, var_x, var_y, negate, binary, call } tag;
    double value = 0.0;  // constant
    Op op = Op::add;     // binary
    Fn fn = Fn::sin;     // call
    std::shared_ptr<const ExprNode> lhs, rhs;  // negate/call use lhs only
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_const(double v) {
    auto n = std::make_shared<ExprNode>();
    n->tag = ExprNode::Tag::constant;
    n->value = v;
    return n;
}

NodePtr make_var(bool is_x) {
    auto n = std::make_shared<ExprNode>();
    n->tag = is_x ? ExprNode::Tag::var_x : ExprNode::Tag::var_y;
    return n;
}

NodePtr make_neg(NodePtr a) {
    auto n = std::make_shared<ExprNode>();
    n->tag = ExprNode::Tag::negate;
    n->lhs = std::move(a);
    return n;
}

NodePtr make_bin(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->tag = ExprNode::Tag::binary;
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr make_call(Fn fn, NodePtr a) {
    auto n = std::make_shared<ExprNode>();
    n->tag = ExprNode::Tag::call;
    n->fn = fn;
    n->lhs = std::move(a);
    return n;
}

struct FnName {
    const char* name;
    Fn fn;
};
constexpr FnName kFunctions[] = {{"sin", Fn::sin}, {"cos", Fn::cos},
                                 {"tan", Fn::tan}, {"exp", Fn::exp},
                                 {"log", Fn::log}, {"sqrt", Fn::sqrt},
                                 {"abs", Fn::abs}};

const char* fn_name(Fn fn) {
    for (const auto& f : kFunctions)
        if (f.fn == fn) return f.name;
    return "?";
}

// Recursive-descent parser over the raw text; offsets are 0-based
// character positions.
class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size())
            throw sgf::SyntaxError("unexpected trailing input", pos_);
        return e;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (eat('+'))
                lhs = make_bin(Op::add, lhs, term());
            else if (eat('-'))
                lhs = make_bin(Op::sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (eat('*'))
                lhs = make_bin(Op::mul, lhs, factor());
            else if (eat('/'))
                lhs = make_bin(Op::div, lhs, factor());
            else
                return lhs;
        }
    }

    NodePtr factor() {
        if (eat('-')) return make_neg(factor());
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (eat('^')) return make_bin(Op::pow, base, factor());  // right-assoc
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= text_.size())
            throw sgf::SyntaxError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) throw sgf::SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw sgf::SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + text_.size();
        auto [end, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || end == first)
            throw sgf::SyntaxError("malformed number", start);
        pos_ = static_cast<std::size_t>(end - text_.data());
        return make_const(value);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        if (name == "x") return make_var(true);
        if (name == "y") return make_var(false);
        if (name == "pi") return make_const(3.14159265358979323846);
        if (name == "e") return make_const(2.71828182845904523536);
        for (const auto& f : kFunctions) {
            if (name == f.name) {
                if (!eat('(')) throw sgf::SyntaxError("expected '(' after function name", pos_);
                NodePtr arg = expr();
                if (!eat(')')) throw sgf::SyntaxError("expected ')'", pos_);
                return make_call(f.fn, arg);
            }
        }
        throw sgf::UnknownIdentifier(name, start);
    }
};

double eval_node(const ExprNode& n, Point2 t) {
    switch (n.tag) {
        case ExprNode::Tag::constant:
            return n.value;
        case ExprNode::Tag::var_x:
            return t.x;
        case ExprNode::Tag::var_y:
            return t.y;
        case ExprNode::Tag::negate:
            return -eval_node(*n.lhs, t);
        case ExprNode::Tag::binary: {
            const double a = eval_node(*n.lhs, t);
            const double b = eval_node(*n.rhs, t);
            double r = 0.0;
            switch (n.op) {
                case Op::add: r = a + b; break;
                case Op::sub: r = a - b; break;
                case Op::mul: r = a * b; break;
                case Op::div:
                    if (b == 0.0) throw DomainError("division by zero");
                    r = a / b;
                    break;
                case Op::pow:
                    r = std::pow(a, b);
                    break;
            }
            if (!std::isfinite(r)) throw DomainError("non-finite result");
            return r;
        }
        case ExprNode::Tag::call: {
            const double a = eval_node(*n.lhs, t);
            double r = 0.0;
            switch (n.fn) {
                case Fn::sin: r = std::sin(a); break;
                case Fn::cos: r = std::cos(a); break;
                case Fn::tan: r = std::tan(a); break;
                case Fn::exp: r = std::exp(a); break;
                case Fn::log:
                    if (a <= 0.0) throw DomainError("log of non-positive argument");
                    r = std::log(a);
                    break;
                case Fn::sqrt:
                    if (a < 0.0) throw DomainError("sqrt of negative argument");
                    r = std::sqrt(a);
                    break;
                case Fn::abs: r = std::abs(a); break;
            }
            if (!std::isfinite(r)) throw DomainError("non-finite result");
            return r;
        }
    }
    return 0.0;  // unreachable
}

void print_node(const ExprNode& n, std::string& out) {
    switch (n.tag) {
        case ExprNode::Tag::constant: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", n.value);
            out += buf;
            break;
        }
        case ExprNode::Tag::var_x: out += 'x'; break;
        case ExprNode::Tag::var_y: out += 'y'; break;
        case ExprNode::Tag::negate:
            out += "(-";
            print_node(*n.lhs, out);
            out += ')';
            break;
        case ExprNode::Tag::binary: {
            static const char* kSym[] = {"+", "-", "*", "/", "^"};
            out += '(';
            print_node(*n.lhs, out);
            out += kSym[static_cast<int>(n.op)];
            print_node(*n.rhs, out);
            out += ')';
            break;
        }
        case ExprNode::Tag::call:
            out += fn_name(n.fn);
            out += '(';
            print_node(*n.lhs, out);
            out += ')';
            break;
    }
}

}  // namespace
}  // namespace detail

FieldExpr FieldExpr::parse(std::string_view text) {
    detail::Parser p(text);
    return FieldExpr(p.run(), std::string(text));
}

double FieldExpr::eval(Point2 t) const { return detail::eval_node(*root_, t); }

std::string FieldExpr::str() const {
    std::string out;
    detail::print_node(*root_, out);
    return out;
}

ScalarField ScalarField::expression(FieldExpr expr) {
    ScalarField f;
    f.kind_ = Kind::expression;
    f.text_ = expr.source();
    f.fn_ = [e = std::move(expr)](Point2 t) { return e.eval(t); };
    return f;
}

ScalarField ScalarField::callable(Kind kind, std::string name,
                                  std::function<double(Point2)> fn) {
    ScalarField f;
    f.kind_ = kind;
    f.text_ = std::move(name);
    f.fn_ = std::move(fn);
    return f;
}

namespace {

struct FigurePair {
    const char* f;
    const char* b;
};

// Caption formulas of the four parameter-sweep figures. The 0.866 literal
// is kept as written; it misses sqrt(3)/2 by ~2.5e-5, which is why the
// figure built-ins get the relaxed compatibility tolerance.
constexpr FigurePair kFigures[4] = {
    {"x/4 + y/9",
     "x/4 + y/9 - 1.3*y*(x - 0.5)"},
    {"sin(x + 3.7) + 1.3*x",
     "sin(x + 3.7) + 1.3*x - x^2*y + 0.866*x^2 + x*y - 0.866*x"},
    {"cos(2*x + 5) + sin(x + 2.7) - 1.5 + 1.3*x",
     "cos(2*x + 5) + sin(x + 2.7) - 1.5 + 1.3*x - x^2*y + 0.866*x^2 + x*y - 0.866*x"},
    {"cos(100*x + 5) + sin(x + 2.7) - 1.5 + 1.3*x",
     "cos(100*x + 5) + sin(x + 2.7) - 1.5 + 1.3*x - x^2*y + 0.866*x^2 + x*y - 0.866*x"},
};

}  // namespace

std::pair<ScalarField, ScalarField> builtin_figure_fields(int figure) {
    if (figure < 1 || figure > 4)
        throw UnknownFigure("figure index must be 1..4, got " + std::to_string(figure));
    const auto& pair = kFigures[static_cast<std::size_t>(figure - 1)];
    auto f = ScalarField::callable(
        ScalarField::Kind::builtin, pair.f,
        [e = FieldExpr::parse(pair.f)](Point2 t) { return e.eval(t); });
    auto b = ScalarField::callable(
        ScalarField::Kind::builtin, pair.b,
        [e = FieldExpr::parse(pair.b)](Point2 t) { return e.eval(t); });
    return {std::move(f), std::move(b)};
}

}  // namespace sgf
