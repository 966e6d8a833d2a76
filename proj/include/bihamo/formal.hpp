#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bihamo/rat.hpp"

namespace bihamo {

// Free generators of the rotation-coefficient ring:
//   U(i)       coordinate u^i
//   H(i)       Lame coefficient H_i
//   Lam        pencil parameter lambda
//   Gd(i,j,m)  (d/du^j)^m gamma_ij, i != j  (derivatives along the second
//              index stay free; all other derivatives are rewritten)
//   Hd(i,m)    (d/du^i)^m H_i, m >= 1
enum class SymKind : uint8_t { U = 0, H = 1, Lam = 2, Gd = 3, Hd = 4 };

struct SymKey {
    SymKind k;
    int16_t i = 0;
    int16_t j = 0;
    int16_t m = 0;
    auto operator<=>(const SymKey&) const = default;
};

inline SymKey sym_u(int i) { return {SymKind::U, (int16_t)i, 0, 0}; }
inline SymKey sym_h(int i) { return {SymKind::H, (int16_t)i, 0, 0}; }
inline SymKey sym_lam() { return {SymKind::Lam, 0, 0, 0}; }
inline SymKey sym_gamma(int i, int j, int m = 0) { return {SymKind::Gd, (int16_t)i, (int16_t)j, (int16_t)m}; }
inline SymKey sym_hd(int i, int m) { return {SymKind::Hd, (int16_t)i, 0, (int16_t)m}; }

// Sorted (symbol, exponent) list; empty = 1.
using FMono = std::vector<std::pair<SymKey, unsigned>>;

class FPoly {
  public:
    using Terms = std::map<FMono, Rat>;

    FPoly() = default;
    static FPoly constant(const Rat& c);
    static FPoly sym(SymKey s, unsigned e = 1);
    static FPoly mono(const FMono& m, const Rat& c = Rat(1));

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    const Terms& terms() const { return terms_; }

    void add_term(const FMono& m, const Rat& c);
    FPoly operator+(const FPoly& o) const;
    FPoly operator-(const FPoly& o) const;
    FPoly operator-() const;
    FPoly operator*(const FPoly& o) const;
    bool operator==(const FPoly& o) const { return terms_ == o.terms_; }
    FPoly scaled(const Rat& c) const;

    long degree_of(SymKey s) const;
    unsigned min_exponent(SymKey s) const;  // 0 if any term lacks s
    FPoly shift_down(SymKey s, unsigned e) const;  // divide every term by s^e
    // Substitute symbol `from` by symbol `to` (exponents migrate, then merge).
    FPoly subst_sym(SymKey from, SymKey to) const;
    FPoly select(SymKey s, unsigned e) const;  // terms whose exponent of s is exactly e

    // P(U_i := U_j) == 0  iff  (U_i - U_j) divides P; quot receives P/(U_i-U_j).
    bool try_div_binomial(int i, int j, FPoly& quot) const;

    std::string str() const;

  private:
    Terms terms_;
};

// Denominator: a product of H_i powers and (U_i - U_j) powers with i < j.
struct FDen {
    std::map<int, unsigned> h;
    std::map<std::pair<int, int>, unsigned> d;
    bool trivial() const { return h.empty() && d.empty(); }
    bool operator==(const FDen&) const = default;
};

// Element of the rotation-coefficient ring localized at {H_i, u^i - u^j},
// kept in lowest terms; equality is structural.
class FormalScalar {
  public:
    FormalScalar() : n_(0) {}
    explicit FormalScalar(int n) : n_(n) {}

    static FormalScalar constant(int n, const Rat& c);
    static FormalScalar sym(int n, SymKey s);
    static FormalScalar u(int n, int i) { return sym(n, sym_u(i)); }
    static FormalScalar lambda(int n) { return sym(n, sym_lam()); }
    static FormalScalar gamma(int n, int i, int j);
    static FormalScalar h_power(int n, int i, long e);        // H_i^e, e may be negative
    static FormalScalar binom_power(int n, int i, int j, long e);  // (u^i - u^j)^e

    int coord_count() const { return n_; }
    bool is_zero() const { return num_.is_zero(); }
    const FPoly& num() const { return num_; }
    const FDen& den() const { return den_; }

    FormalScalar operator+(const FormalScalar& o) const;
    FormalScalar operator-(const FormalScalar& o) const;
    FormalScalar operator-() const;
    FormalScalar operator*(const FormalScalar& o) const;
    // Divisor numerator must be a single term in H symbols only.
    FormalScalar operator/(const FormalScalar& o) const;
    bool operator==(const FormalScalar& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }

    FormalScalar scaled(const Rat& c) const;
    FormalScalar partial(int j) const;  // d/du^j with Ferapontov rewriting
    FormalScalar mul_lambda() const;
    FormalScalar set_lambda(int i) const;
    long lambda_degree() const { return num_.degree_of(sym_lam()); }
    FormalScalar lambda_component(int k) const;

    bool as_rat(Rat& out) const;
    std::string str() const;

  private:
    int n_;
    FPoly num_;
    FDen den_;
    void reduce();
    friend FormalScalar formal_reduce(const FormalScalar&);
};

// Re-normalizes (cancels common factors with the denominator); idempotent.
FormalScalar formal_reduce(const FormalScalar& a);

// m-fold derivative along direction j.
FormalScalar formal_derive(const FormalScalar& a, int j, int m = 1);

// d_j d_k a - d_k d_j a; zero iff mixed partials commute on a.
FormalScalar formal_mixed_partial_residual(const FormalScalar& a, int j, int k);

// Derivative of a single generator (the rewrite table), memoized per (n, s, k).
const FormalScalar& formal_sym_derivative(int n, SymKey s, int k);

struct FormalCtx {
    int N = 1;
    FormalScalar one() const { return FormalScalar::constant(N, Rat(1)); }
    FormalScalar zero() const { return FormalScalar::constant(N, Rat(0)); }
    FormalScalar rat(const Rat& c) const { return FormalScalar::constant(N, c); }
    FormalScalar u(int i) const { return FormalScalar::u(N, i); }
    FormalScalar lambda() const { return FormalScalar::lambda(N); }
};

std::string sym_str(SymKey s);

}  // namespace bihamo
