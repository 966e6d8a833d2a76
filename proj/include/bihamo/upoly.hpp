#pragma once

#include <map>
#include <string>
#include <vector>

#include "bihamo/rat.hpp"

namespace bihamo {

// Exponent vector for a fixed variable count.
using Expvec = std::vector<unsigned>;

// Graded-lex, descending: begin() of a UPoly term map is the leading term.
struct GradedLexGreater {
    bool operator()(const Expvec& a, const Expvec& b) const;
};

long expvec_total(const Expvec& e);

// Sparse multivariate polynomial over Rat.  Variable count is fixed per
// instance; all binary operations require matching counts.
class UPoly {
  public:
    using Terms = std::map<Expvec, Rat, GradedLexGreater>;

    UPoly() : nv_(0) {}
    explicit UPoly(int nv) : nv_(nv) {}
    static UPoly constant(int nv, const Rat& c);
    static UPoly variable(int nv, int v, unsigned e = 1);

    int nvars() const { return nv_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    const Terms& terms() const { return terms_; }

    // Accumulates c on exponent e, dropping the term if it cancels.
    void add_term(const Expvec& e, const Rat& c);

    UPoly operator+(const UPoly& o) const;
    UPoly operator-(const UPoly& o) const;
    UPoly operator-() const;
    UPoly operator*(const UPoly& o) const;
    bool operator==(const UPoly& o) const { return nv_ == o.nv_ && terms_ == o.terms_; }

    UPoly scaled(const Rat& c) const;
    UPoly pow(unsigned e) const;

    long degree(int v) const;      // -1 for zero polynomial
    long total_degree() const;     // across all variables; -1 for zero
    long total_degree_except(int v) const;

    const Rat& leading_coeff() const;  // graded-lex; poly must be nonzero
    const Expvec& leading_expvec() const;

    UPoly partial(int v) const;
    // Substitutes variable `from` by variable `to` (exponents migrate).
    UPoly subst_var(int from, int to) const;
    Rat eval(const std::vector<Rat>& point) const;
    // Coefficient of v^k viewed as a polynomial in variable v.
    UPoly coeff_of(int v, unsigned k) const;

    Rat content() const;  // gcd of coefficients as positive rational; 0 for zero poly
    std::string str(const std::vector<std::string>& names) const;

  private:
    int nv_;
    Terms terms_;
};

// Exact quotient; throws std::domain_error if b does not divide a.
UPoly upoly_divexact(const UPoly& a, const UPoly& b);
bool upoly_try_divexact(const UPoly& a, const UPoly& b, UPoly& quot);

// GCD over Q, computed by primitive subresultant remainder sequences,
// one variable at a time.  Result is primitive with positive leading
// coefficient; gcd(0, b) = normalized b.
UPoly upoly_gcd(const UPoly& a, const UPoly& b);

}  // namespace bihamo
