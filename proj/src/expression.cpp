#include "anosov/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "anosov/errors.hpp"

namespace anosov {

using Op = Expression::Op;
using Node = Expression::Node;

class ExpressionBuilder {
public:
    ExpressionBuilder() = default;
    explicit ExpressionBuilder(const Expression& base) : nodes_(base.nodes_) {}

    std::int32_t constant(double v) {
        Node n;
        n.op = Op::Const;
        n.value = v;
        return push(n);
    }

    std::int32_t variable(Var v) {
        Node n;
        n.op = Op::Variable;
        n.var = v;
        return push(n);
    }

    bool is_const(std::int32_t i) const { return nodes_[i].op == Op::Const; }
    bool is_value(std::int32_t i, double v) const { return is_const(i) && nodes_[i].value == v; }
    const Node& node(std::int32_t i) const { return nodes_[i]; }

    std::int32_t unary(Op op, std::int32_t a) {
        if (is_const(a) && op != Op::Sign) {
            return constant(apply_unary(op, nodes_[a].value));
        }
        if (op == Op::Neg && nodes_[a].op == Op::Neg) return nodes_[a].lhs;
        Node n;
        n.op = op;
        n.lhs = a;
        return push(n);
    }

    std::int32_t binary(Op op, std::int32_t a, std::int32_t b) {
        if (is_const(a) && is_const(b)) {
            return constant(apply_binary(op, nodes_[a].value, nodes_[b].value));
        }
        switch (op) {
            case Op::Add:
                if (is_value(a, 0.0)) return b;
                if (is_value(b, 0.0)) return a;
                break;
            case Op::Sub:
                if (is_value(b, 0.0)) return a;
                if (is_value(a, 0.0)) return unary(Op::Neg, b);
                break;
            case Op::Mul:
                if (is_value(a, 0.0) || is_value(b, 0.0)) return constant(0.0);
                if (is_value(a, 1.0)) return b;
                if (is_value(b, 1.0)) return a;
                if (is_value(a, -1.0)) return unary(Op::Neg, b);
                if (is_value(b, -1.0)) return unary(Op::Neg, a);
                break;
            case Op::Div:
                if (is_value(a, 0.0)) return constant(0.0);
                if (is_value(b, 1.0)) return a;
                break;
            case Op::Pow:
                if (is_value(b, 1.0)) return a;
                if (is_value(b, 0.0)) return constant(1.0);
                break;
            default:
                break;
        }
        Node n;
        n.op = op;
        n.lhs = a;
        n.rhs = b;
        return push(n);
    }

    Expression finish(std::int32_t root, std::string source) && {
        Expression e;
        e.nodes_ = std::move(nodes_);
        e.root_ = root;
        e.source_ = std::move(source);
        return e;
    }

    static double apply_unary(Op op, double a) {
        switch (op) {
            case Op::Neg: return -a;
            case Op::Sin: return std::sin(a);
            case Op::Cos: return std::cos(a);
            case Op::Exp: return std::exp(a);
            case Op::Log: return std::log(a);
            case Op::Sqrt: return std::sqrt(a);
            case Op::Cosh: return std::cosh(a);
            case Op::Sinh: return std::sinh(a);
            case Op::Tanh: return std::tanh(a);
            case Op::Abs: return std::abs(a);
            case Op::Sign: return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
            default: return std::nan("");
        }
    }

    static double apply_binary(Op op, double a, double b) {
        switch (op) {
            case Op::Add: return a + b;
            case Op::Sub: return a - b;
            case Op::Mul: return a * b;
            case Op::Div: return a / b;
            case Op::Pow: return std::pow(a, b);
            default: return std::nan("");
        }
    }

private:
    std::int32_t push(const Node& n) {
        nodes_.push_back(n);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }

    std::vector<Node> nodes_;
};

namespace {

struct FunctionName {
    std::string_view name;
    Op op;
};

constexpr FunctionName kFunctions[] = {
    {"sin", Op::Sin},   {"cos", Op::Cos},   {"exp", Op::Exp},   {"log", Op::Log},   {"sqrt", Op::Sqrt},
    {"cosh", Op::Cosh}, {"sinh", Op::Sinh}, {"tanh", Op::Tanh}, {"abs", Op::Abs},
};

class Parser {
public:
    Parser(std::string_view text, std::vector<Var> allowed) : text_(text), allowed_(std::move(allowed)) {}

    Expression run() && {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
        std::int32_t root = parse_sum();
        skip_space();
        if (pos_ < text_.size()) {
            throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        }
        return std::move(builder_).finish(root, std::string(text_));
    }

private:
    std::int32_t parse_sum() {
        std::int32_t lhs = parse_product();
        for (;;) {
            skip_space();
            if (accept('+')) {
                lhs = builder_.binary(Op::Add, lhs, parse_product());
            } else if (accept('-')) {
                lhs = builder_.binary(Op::Sub, lhs, parse_product());
            } else {
                return lhs;
            }
        }
    }

    std::int32_t parse_product() {
        std::int32_t lhs = parse_unary();
        for (;;) {
            skip_space();
            if (accept('*')) {
                lhs = builder_.binary(Op::Mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = builder_.binary(Op::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    std::int32_t parse_unary() {
        skip_space();
        if (accept('-')) return builder_.unary(Op::Neg, parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    std::int32_t parse_power() {
        std::int32_t base = parse_primary();
        skip_space();
        if (accept('^')) return builder_.binary(Op::Pow, base, parse_unary());
        return base;
    }

    std::int32_t parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("expected expression", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            std::int32_t inner = parse_sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    std::int32_t parse_number() {
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr == first) throw ParseError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(ptr - first);
        return builder_.constant(value);
    }

    std::int32_t parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        for (const auto& f : kFunctions) {
            if (f.name == name) {
                skip_space();
                expect('(');
                std::int32_t arg = parse_sum();
                expect(')');
                return builder_.unary(f.op, arg);
            }
        }
        if (name == "pi") return builder_.constant(std::numbers::pi);
        if (name == "e") return builder_.constant(std::numbers::e);
        Var v;
        if (name == "s") {
            v = Var::S;
        } else if (name == "x") {
            v = Var::X;
        } else if (name == "y") {
            v = Var::Y;
        } else {
            throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        }
        if (std::find(allowed_.begin(), allowed_.end(), v) == allowed_.end()) {
            throw ParseError("variable '" + std::string(name) + "' not allowed here", start);
        }
        return builder_.variable(v);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "'", pos_);
        if (!accept(c)) {
            throw ParseError(std::string("expected '") + c + "', found '" + text_[pos_] + "'", pos_);
        }
    }

    std::string_view text_;
    std::vector<Var> allowed_;
    std::size_t pos_ = 0;
    ExpressionBuilder builder_;
};

class Differentiator {
public:
    Differentiator(const Expression& expr, const std::vector<Node>& nodes, Var wrt)
        : b_(expr), nodes_(nodes), wrt_(wrt), memo_(nodes.size(), -2) {}

    std::int32_t diff(std::int32_t i) {
        if (memo_[i] != -2) return memo_[i];
        const Node n = nodes_[i];
        std::int32_t u = n.lhs;
        std::int32_t v = n.rhs;
        std::int32_t r = -1;
        switch (n.op) {
            case Op::Const:
            case Op::Sign:
                r = b_.constant(0.0);
                break;
            case Op::Variable:
                r = b_.constant(n.var == wrt_ ? 1.0 : 0.0);
                break;
            case Op::Neg:
                r = b_.unary(Op::Neg, diff(u));
                break;
            case Op::Add:
                r = b_.binary(Op::Add, diff(u), diff(v));
                break;
            case Op::Sub:
                r = b_.binary(Op::Sub, diff(u), diff(v));
                break;
            case Op::Mul:
                r = b_.binary(Op::Add, b_.binary(Op::Mul, diff(u), v), b_.binary(Op::Mul, u, diff(v)));
                break;
            case Op::Div: {
                // (u'v - uv') / v^2
                std::int32_t num =
                    b_.binary(Op::Sub, b_.binary(Op::Mul, diff(u), v), b_.binary(Op::Mul, u, diff(v)));
                r = b_.binary(Op::Div, num, b_.binary(Op::Mul, v, v));
                break;
            }
            case Op::Pow: {
                std::int32_t du = diff(u);
                if (b_.is_const(v)) {
                    const double c = b_.node(v).value;
                    std::int32_t pw = b_.binary(Op::Pow, u, b_.constant(c - 1.0));
                    r = b_.binary(Op::Mul, b_.binary(Op::Mul, b_.constant(c), pw), du);
                } else {
                    // u^v (v' log u + v u'/u)
                    std::int32_t t1 = b_.binary(Op::Mul, diff(v), b_.unary(Op::Log, u));
                    std::int32_t t2 = b_.binary(Op::Div, b_.binary(Op::Mul, v, du), u);
                    r = b_.binary(Op::Mul, i, b_.binary(Op::Add, t1, t2));
                }
                break;
            }
            case Op::Sin:
                r = b_.binary(Op::Mul, b_.unary(Op::Cos, u), diff(u));
                break;
            case Op::Cos:
                r = b_.unary(Op::Neg, b_.binary(Op::Mul, b_.unary(Op::Sin, u), diff(u)));
                break;
            case Op::Exp:
                r = b_.binary(Op::Mul, i, diff(u));
                break;
            case Op::Log:
                r = b_.binary(Op::Div, diff(u), u);
                break;
            case Op::Sqrt:
                r = b_.binary(Op::Div, diff(u), b_.binary(Op::Mul, b_.constant(2.0), i));
                break;
            case Op::Cosh:
                r = b_.binary(Op::Mul, b_.unary(Op::Sinh, u), diff(u));
                break;
            case Op::Sinh:
                r = b_.binary(Op::Mul, b_.unary(Op::Cosh, u), diff(u));
                break;
            case Op::Tanh:
                r = b_.binary(Op::Mul, b_.binary(Op::Sub, b_.constant(1.0), b_.binary(Op::Mul, i, i)), diff(u));
                break;
            case Op::Abs:
                r = b_.binary(Op::Mul, b_.unary(Op::Sign, u), diff(u));
                break;
        }
        memo_[i] = r;
        return r;
    }

    ExpressionBuilder& builder() { return b_; }

private:
    ExpressionBuilder b_;
    const std::vector<Node>& nodes_;
    Var wrt_;
    std::vector<std::int32_t> memo_;
};

const char* op_name(Op op) {
    switch (op) {
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Exp: return "exp";
        case Op::Log: return "log";
        case Op::Sqrt: return "sqrt";
        case Op::Cosh: return "cosh";
        case Op::Sinh: return "sinh";
        case Op::Tanh: return "tanh";
        case Op::Abs: return "abs";
        case Op::Sign: return "sign";
        case Op::Add: return "+";
        case Op::Sub: return "-";
        case Op::Mul: return "*";
        case Op::Div: return "/";
        case Op::Pow: return "^";
        default: return "?";
    }
}

}  // namespace

Expression Expression::parse(std::string_view text, std::vector<Var> allowed) {
    return Parser(text, std::move(allowed)).run();
}

Expression Expression::constant(double value) {
    ExpressionBuilder b;
    std::int32_t root = b.constant(value);
    std::ostringstream os;
    os.precision(17);
    os << value;
    return std::move(b).finish(root, os.str());
}

double Expression::evaluate(const VarValues& values) const { return eval_node(root_, values); }

double Expression::eval_node(std::int32_t index, const VarValues& values) const {
    const Node& n = nodes_[index];
    switch (n.op) {
        case Op::Const:
            return n.value;
        case Op::Variable:
            return n.var == Var::S ? values.s : (n.var == Var::X ? values.x : values.y);
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Pow:
            return ExpressionBuilder::apply_binary(n.op, eval_node(n.lhs, values), eval_node(n.rhs, values));
        default:
            return ExpressionBuilder::apply_unary(n.op, eval_node(n.lhs, values));
    }
}

Expression Expression::derivative(Var wrt) const {
    Differentiator d(*this, nodes_, wrt);
    std::int32_t root = d.diff(root_);
    return std::move(d.builder()).finish(root, "d(" + source_ + ")");
}

bool Expression::is_constant() const { return nodes_[root_].op == Op::Const; }

bool Expression::depends_on(Var v) const {
    // Walk only nodes reachable from the root; the arena may hold dead nodes.
    std::vector<std::int32_t> stack{root_};
    while (!stack.empty()) {
        const Node& n = nodes_[stack.back()];
        stack.pop_back();
        if (n.op == Op::Variable && n.var == v) return true;
        if (n.lhs >= 0) stack.push_back(n.lhs);
        if (n.rhs >= 0) stack.push_back(n.rhs);
    }
    return false;
}

std::string Expression::to_string() const { return node_string(root_); }

std::string Expression::node_string(std::int32_t index) const {
    const Node& n = nodes_[index];
    switch (n.op) {
        case Op::Const: {
            std::ostringstream os;
            os.precision(17);
            os << n.value;
            return n.value < 0.0 ? "(" + os.str() + ")" : os.str();
        }
        case Op::Variable:
            return n.var == Var::S ? "s" : (n.var == Var::X ? "x" : "y");
        case Op::Neg:
            return "(-" + node_string(n.lhs) + ")";
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Pow:
            return "(" + node_string(n.lhs) + op_name(n.op) + node_string(n.rhs) + ")";
        default:
            return std::string(op_name(n.op)) + "(" + node_string(n.lhs) + ")";
    }
}

}  // namespace anosov
