#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "bihamo/coefffn.hpp"

namespace bihamo {

struct SyntaxError : std::runtime_error {
    size_t pos;  // byte offset into the source
    SyntaxError(const std::string& what, size_t p)
        : std::runtime_error(what + " at offset " + std::to_string(p)), pos(p) {}
};

struct UnknownVariable : std::runtime_error {
    std::string name;
    UnknownVariable(std::string n, size_t p)
        : std::runtime_error("unknown variable '" + n + "' at offset " + std::to_string(p)),
          name(std::move(n)) {}
};

struct LambdaDenominator : std::runtime_error {
    LambdaDenominator()
        : std::runtime_error("lambda may not appear under a division's denominator") {}
};

enum class ExprKind { Int, Var, Add, Sub, Mul, Div, Neg, Pow };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    Rat value;    // Int
    int var = 0;  // Var: 0 is lambda, i >= 1 is u^i
    long exp = 0; // Pow
    ExprPtr a, b;
};

// Expression tree over integer literals, u1..uN, lambda, +, -, *, /, and
// integer powers.  Division denominators are lambda-free by construction.
class ExprAst {
  public:
    ExprAst() = default;
    ExprAst(ExprPtr root, int n) : root_(std::move(root)), n_(n) {}

    bool empty() const { return !root_; }
    int coord_count() const { return n_; }
    const ExprPtr& root() const { return root_; }

    bool operator==(const ExprAst& o) const;

  private:
    ExprPtr root_;
    int n_ = 0;
};

// Tree builders; the binary ones demand matching coordinate counts and
// expr_div enforces the lambda-free-denominator invariant.
ExprAst expr_int(const Rat& v, int N);
ExprAst expr_var(int var, int N);  // 0 is lambda
ExprAst expr_add(const ExprAst& a, const ExprAst& b);
ExprAst expr_sub(const ExprAst& a, const ExprAst& b);
ExprAst expr_mul(const ExprAst& a, const ExprAst& b);
ExprAst expr_div(const ExprAst& a, const ExprAst& b);
ExprAst expr_neg(const ExprAst& a);
ExprAst expr_pow(const ExprAst& a, long e);  // e >= 0

// Recursive-descent parse with standard precedence: power binds tighter than
// unary minus, which binds tighter than * and /, which bind tighter than
// + and -.  Binary operators associate left; exponents are nonnegative
// integer literals.
ExprAst parse_expr(const std::string& src, int N);

// Prints with the minimal parentheses needed so that parse_expr(expr_str(e))
// rebuilds an equal tree.
std::string expr_str(const ExprAst& e);

CoeffFn expr_eval(const ExprAst& e);

}  // namespace bihamo
