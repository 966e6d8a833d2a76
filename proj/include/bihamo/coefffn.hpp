#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bihamo/upoly.hpp"

namespace bihamo {

struct LambdaInDenominator : std::domain_error {
    LambdaInDenominator() : std::domain_error("lambda is not invertible: denominator would contain lambda") {}
};
struct DivisionByZero : std::domain_error {
    DivisionByZero() : std::domain_error("division by zero coefficient") {}
};

// Rational function in u1..uN and lambda, polynomial in lambda.
// Canonical form: gcd(num, den) = 1, den lambda-free and monic under
// graded-lex.  Zero is 0/1.  Variable layout: 0..N-1 are u1..uN, N is lambda.
class CoeffFn {
  public:
    CoeffFn() : num_(1), den_(UPoly::constant(1, Rat(1))) {}
    CoeffFn(UPoly num, UPoly den);

    static CoeffFn from_poly(UPoly p);
    static CoeffFn constant(int ncoords, const Rat& c);
    static CoeffFn u(int ncoords, int i);  // coordinate u^i, 1-based
    static CoeffFn lambda(int ncoords);

    int ncoords() const { return num_.nvars() - 1; }
    int coord_count() const { return ncoords(); }
    int lambda_var() const { return num_.nvars() - 1; }

    const UPoly& num() const { return num_; }
    const UPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    CoeffFn operator+(const CoeffFn& o) const;
    CoeffFn operator-(const CoeffFn& o) const;
    CoeffFn operator-() const;
    CoeffFn operator*(const CoeffFn& o) const;
    CoeffFn operator/(const CoeffFn& o) const;  // throws on zero or lambda-carrying divisor
    bool operator==(const CoeffFn& o) const { return num_ == o.num_ && den_ == o.den_; }

    CoeffFn scaled(const Rat& c) const;
    CoeffFn pow(long e) const;

    CoeffFn partial(int j) const;     // d/du^j, j 1-based
    CoeffFn mul_lambda() const;
    CoeffFn set_lambda(int i) const;  // substitute lambda -> u^i
    long lambda_degree() const { return num_.degree(lambda_var()); }
    CoeffFn lambda_component(int k) const;  // terms of lambda-degree exactly k

    long coeff_u_degree() const;  // max total u-degree of the numerator (polynomial view)

    Rat eval(const std::vector<Rat>& us, const Rat& lam) const;
    std::string str() const;

    // If the value is a constant rational, returns it.
    bool as_rat(Rat& out) const;

  private:
    UPoly num_, den_;
    void reduce();
};

// Mints coefficients for a fixed coordinate count.
struct CoeffCtx {
    int N = 1;
    CoeffFn one() const { return CoeffFn::constant(N, Rat(1)); }
    CoeffFn zero() const { return CoeffFn::constant(N, Rat(0)); }
    CoeffFn rat(const Rat& c) const { return CoeffFn::constant(N, c); }
    CoeffFn u(int i) const { return CoeffFn::u(N, i); }
    CoeffFn lambda() const { return CoeffFn::lambda(N); }
};

std::vector<std::string> coeff_var_names(int ncoords);

}  // namespace bihamo
