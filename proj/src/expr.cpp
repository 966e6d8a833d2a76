#include "bihamo/expr.hpp"

#include <cctype>
#include <utility>
#include <vector>

namespace bihamo {

namespace {

bool node_eq(const ExprNode* x, const ExprNode* y) {
    if (!x || !y) return x == y;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case ExprKind::Int:
            return x->value == y->value;
        case ExprKind::Var:
            return x->var == y->var;
        case ExprKind::Pow:
            return x->exp == y->exp && node_eq(x->a.get(), y->a.get());
        case ExprKind::Neg:
            return node_eq(x->a.get(), y->a.get());
        default:
            return node_eq(x->a.get(), y->a.get()) && node_eq(x->b.get(), y->b.get());
    }
}

bool mentions_lambda(const ExprNode* n) {
    if (!n) return false;
    if (n->kind == ExprKind::Var) return n->var == 0;
    return mentions_lambda(n->a.get()) || mentions_lambda(n->b.get());
}

ExprPtr mk(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

void check_match(const ExprAst& a, const ExprAst& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty expression operand");
    if (a.coord_count() != b.coord_count())
        throw std::invalid_argument("expression operands declare different coordinate counts");
}

ExprAst binary(ExprKind k, const ExprAst& a, const ExprAst& b) {
    check_match(a, b);
    if (k == ExprKind::Div && mentions_lambda(b.root().get())) throw LambdaDenominator();
    return {mk({k, Rat(0), 0, 0, a.root(), b.root()}), a.coord_count()};
}

struct Token {
    enum Kind { Int, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
    std::string text;
    size_t pos;
};

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace((unsigned char)c)) {
            ++i;
            continue;
        }
        size_t start = i;
        if (std::isdigit((unsigned char)c)) {
            while (i < src.size() && std::isdigit((unsigned char)src[i])) ++i;
            out.push_back({Token::Int, src.substr(start, i - start), start});
        } else if (std::isalpha((unsigned char)c) || c == '_') {
            while (i < src.size() &&
                   (std::isalnum((unsigned char)src[i]) || src[i] == '_'))
                ++i;
            out.push_back({Token::Ident, src.substr(start, i - start), start});
        } else {
            Token::Kind k;
            switch (c) {
                case '+': k = Token::Plus; break;
                case '-': k = Token::Minus; break;
                case '*': k = Token::Star; break;
                case '/': k = Token::Slash; break;
                case '^': k = Token::Caret; break;
                case '(': k = Token::LParen; break;
                case ')': k = Token::RParen; break;
                default:
                    throw SyntaxError(std::string("unexpected character '") + c + "'", start);
            }
            out.push_back({k, src.substr(start, 1), start});
            ++i;
        }
    }
    out.push_back({Token::End, "", src.size()});
    return out;
}

class Parser {
  public:
    Parser(std::vector<Token> toks, int N) : toks_(std::move(toks)), n_(N) {}

    ExprAst run() {
        ExprAst e = sum();
        expect(Token::End, "trailing input");
        return e;
    }

  private:
    const Token& peek() const { return toks_[at_]; }
    Token take() { return toks_[at_++]; }
    void expect(Token::Kind k, const char* what) {
        if (peek().kind != k) throw SyntaxError(std::string("expected ") + what, peek().pos);
        ++at_;
    }

    ExprAst sum() {
        ExprAst e = product();
        while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
            bool plus = take().kind == Token::Plus;
            ExprAst r = product();
            e = plus ? expr_add(e, r) : expr_sub(e, r);
        }
        return e;
    }

    ExprAst product() {
        ExprAst e = factor();
        while (peek().kind == Token::Star || peek().kind == Token::Slash) {
            bool star = take().kind == Token::Star;
            ExprAst r = factor();
            e = star ? expr_mul(e, r) : expr_div(e, r);
        }
        return e;
    }

    ExprAst factor() {
        if (peek().kind == Token::Minus) {
            ++at_;
            return expr_neg(factor());
        }
        return power();
    }

    ExprAst power() {
        ExprAst base = atom();
        if (peek().kind != Token::Caret) return base;
        ++at_;
        if (peek().kind != Token::Int)
            throw SyntaxError("expected a nonnegative integer exponent", peek().pos);
        Token t = take();
        long e;
        try {
            e = std::stol(t.text);
        } catch (const std::exception&) {
            throw SyntaxError("exponent out of range", t.pos);
        }
        return expr_pow(base, e);
    }

    ExprAst atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Token::Int: {
                Token lit = take();
                return expr_int(rat_parse(lit.text), n_);
            }
            case Token::Ident: {
                Token id = take();
                if (id.text == "lambda") return expr_var(0, n_);
                if (id.text.size() > 1 && id.text[0] == 'u') {
                    bool digits = true;
                    for (size_t k = 1; k < id.text.size(); ++k)
                        if (!std::isdigit((unsigned char)id.text[k])) digits = false;
                    if (digits) {
                        int i = 0;
                        try {
                            i = std::stoi(id.text.substr(1));
                        } catch (const std::exception&) {
                            throw UnknownVariable(id.text, id.pos);
                        }
                        if (i < 1 || i > n_) throw UnknownVariable(id.text, id.pos);
                        return expr_var(i, n_);
                    }
                }
                throw UnknownVariable(id.text, id.pos);
            }
            case Token::LParen: {
                ++at_;
                ExprAst e = sum();
                expect(Token::RParen, "')'");
                return e;
            }
            default:
                throw SyntaxError("expected a literal, variable, or '('", t.pos);
        }
    }

    std::vector<Token> toks_;
    size_t at_ = 0;
    int n_;
};

int prec(const ExprNode* n) {
    switch (n->kind) {
        case ExprKind::Add:
        case ExprKind::Sub:
            return 1;
        case ExprKind::Mul:
        case ExprKind::Div:
            return 2;
        case ExprKind::Neg:
            return 3;
        case ExprKind::Pow:
            return 4;
        case ExprKind::Int:
        case ExprKind::Var:
            return 5;
    }
    return 5;
}

// min_prec is the loosest binding the context tolerates without parentheses;
// right operands of left-associative binaries demand one level more.
std::string render(const ExprNode* n, int min_prec) {
    std::string s;
    switch (n->kind) {
        case ExprKind::Int:
            s = rat_str(n->value);
            break;
        case ExprKind::Var:
            s = n->var == 0 ? "lambda" : "u" + std::to_string(n->var);
            break;
        case ExprKind::Add:
            s = render(n->a.get(), 1) + " + " + render(n->b.get(), 2);
            break;
        case ExprKind::Sub:
            s = render(n->a.get(), 1) + " - " + render(n->b.get(), 2);
            break;
        case ExprKind::Mul:
            s = render(n->a.get(), 2) + "*" + render(n->b.get(), 3);
            break;
        case ExprKind::Div:
            s = render(n->a.get(), 2) + "/" + render(n->b.get(), 3);
            break;
        case ExprKind::Neg:
            s = "-" + render(n->a.get(), 3);
            break;
        case ExprKind::Pow:
            s = render(n->a.get(), 5) + "^" + std::to_string(n->exp);
            break;
    }
    if (prec(n) < min_prec) return "(" + s + ")";
    return s;
}

CoeffFn eval(const ExprNode* n, const CoeffCtx& cx) {
    switch (n->kind) {
        case ExprKind::Int:
            return cx.rat(n->value);
        case ExprKind::Var:
            return n->var == 0 ? cx.lambda() : cx.u(n->var);
        case ExprKind::Add:
            return eval(n->a.get(), cx) + eval(n->b.get(), cx);
        case ExprKind::Sub:
            return eval(n->a.get(), cx) - eval(n->b.get(), cx);
        case ExprKind::Mul:
            return eval(n->a.get(), cx) * eval(n->b.get(), cx);
        case ExprKind::Div:
            return eval(n->a.get(), cx) / eval(n->b.get(), cx);
        case ExprKind::Neg:
            return -eval(n->a.get(), cx);
        case ExprKind::Pow:
            return eval(n->a.get(), cx).pow(n->exp);
    }
    throw std::logic_error("unreachable expression kind");
}

}  // namespace

bool ExprAst::operator==(const ExprAst& o) const {
    return n_ == o.n_ && node_eq(root_.get(), o.root_.get());
}

ExprAst expr_int(const Rat& v, int N) {
    if (v.get_den() != 1) throw std::invalid_argument("integer literal expected");
    if (sgn(v) < 0)
        throw std::invalid_argument("negative literals are written with unary minus");
    return {mk({ExprKind::Int, v, 0, 0, nullptr, nullptr}), N};
}

ExprAst expr_var(int var, int N) {
    if (var < 0 || var > N)
        throw UnknownVariable(var == 0 ? "lambda" : "u" + std::to_string(var), 0);
    return {mk({ExprKind::Var, Rat(0), var, 0, nullptr, nullptr}), N};
}

ExprAst expr_add(const ExprAst& a, const ExprAst& b) { return binary(ExprKind::Add, a, b); }
ExprAst expr_sub(const ExprAst& a, const ExprAst& b) { return binary(ExprKind::Sub, a, b); }
ExprAst expr_mul(const ExprAst& a, const ExprAst& b) { return binary(ExprKind::Mul, a, b); }
ExprAst expr_div(const ExprAst& a, const ExprAst& b) { return binary(ExprKind::Div, a, b); }

ExprAst expr_neg(const ExprAst& a) {
    if (a.empty()) throw std::invalid_argument("empty expression operand");
    return {mk({ExprKind::Neg, Rat(0), 0, 0, a.root(), nullptr}), a.coord_count()};
}

ExprAst expr_pow(const ExprAst& a, long e) {
    if (a.empty()) throw std::invalid_argument("empty expression operand");
    if (e < 0) throw std::invalid_argument("exponents must be nonnegative integers");
    return {mk({ExprKind::Pow, Rat(0), 0, e, a.root(), nullptr}), a.coord_count()};
}

ExprAst parse_expr(const std::string& src, int N) {
    return Parser(lex(src), N).run();
}

std::string expr_str(const ExprAst& e) {
    if (e.empty()) throw std::invalid_argument("empty expression");
    return render(e.root().get(), 1);
}

CoeffFn expr_eval(const ExprAst& e) {
    if (e.empty()) throw std::invalid_argument("empty expression");
    return eval(e.root().get(), CoeffCtx{e.coord_count()});
}

}  // namespace bihamo
