#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace anosov {

/// Free variables an expression may reference.
enum class Var : std::uint8_t { S = 0, X = 1, Y = 2 };

struct VarValues {
    double s = 0.0;
    double x = 0.0;
    double y = 0.0;
};

/// Immutable arithmetic expression over s, x, y.
///
/// Grammar: numbers, the variables allowed at parse time, the constants pi and e,
/// binary + - * / ^ (^ is right-associative and binds tighter than unary minus),
/// parentheses, and the functions sin cos exp log sqrt cosh sinh tanh abs.
/// Nodes live in a flat arena; children always precede their parent.
class Expression {
public:
    enum class Op : std::uint8_t {
        Const, Variable, Neg, Add, Sub, Mul, Div, Pow,
        Sin, Cos, Exp, Log, Sqrt, Cosh, Sinh, Tanh, Abs,
        Sign,  // internal: derivative of abs
    };

    struct Node {
        Op op = Op::Const;
        double value = 0.0;
        Var var = Var::S;
        std::int32_t lhs = -1;
        std::int32_t rhs = -1;
    };

    /// Parses `text`; any identifier outside `allowed` raises ParseError.
    static Expression parse(std::string_view text, std::vector<Var> allowed = {Var::S, Var::X, Var::Y});
    static Expression constant(double value);

    double evaluate(const VarValues& values) const;
    double operator()(double s) const { return evaluate({s, 0.0, 0.0}); }
    double operator()(double x, double y) const { return evaluate({0.0, x, y}); }

    /// Symbolic derivative with constant folding.
    Expression derivative(Var wrt) const;

    bool is_constant() const;
    bool depends_on(Var v) const;
    std::string to_string() const;
    const std::string& source() const noexcept { return source_; }
    std::size_t size() const noexcept { return nodes_.size(); }

private:
    friend class ExpressionBuilder;

    double eval_node(std::int32_t index, const VarValues& values) const;
    std::string node_string(std::int32_t index) const;

    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
    std::string source_;
};

}  // namespace anosov
