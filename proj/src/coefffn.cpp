#include "bihamo/coefffn.hpp"

namespace bihamo {

std::vector<std::string> coeff_var_names(int ncoords) {
    std::vector<std::string> names;
    names.reserve(ncoords + 1);
    for (int i = 1; i <= ncoords; ++i) names.push_back("u" + std::to_string(i));
    names.push_back("lambda");
    return names;
}

CoeffFn::CoeffFn(UPoly num, UPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DivisionByZero();
    if (den_.degree(lambda_var()) > 0) throw LambdaInDenominator();
    reduce();
}

void CoeffFn::reduce() {
    if (num_.is_zero()) {
        den_ = UPoly::constant(num_.nvars(), Rat(1));
        return;
    }
    if (!den_.is_constant()) {
        UPoly g = upoly_gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = upoly_divexact(num_, g);
            den_ = upoly_divexact(den_, g);
        }
    }
    const Rat lc = den_.leading_coeff();
    if (lc != 1) {
        Rat inv = Rat(1) / lc;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

CoeffFn CoeffFn::from_poly(UPoly p) {
    int nv = p.nvars();
    return CoeffFn(std::move(p), UPoly::constant(nv, Rat(1)));
}

CoeffFn CoeffFn::constant(int ncoords, const Rat& c) {
    return from_poly(UPoly::constant(ncoords + 1, c));
}

CoeffFn CoeffFn::u(int ncoords, int i) {
    if (i < 1 || i > ncoords) throw std::out_of_range("CoeffFn::u index");
    return from_poly(UPoly::variable(ncoords + 1, i - 1));
}

CoeffFn CoeffFn::lambda(int ncoords) {
    return from_poly(UPoly::variable(ncoords + 1, ncoords));
}

CoeffFn CoeffFn::operator+(const CoeffFn& o) const {
    return CoeffFn(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

CoeffFn CoeffFn::operator-(const CoeffFn& o) const {
    return CoeffFn(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

CoeffFn CoeffFn::operator-() const {
    CoeffFn r = *this;
    r.num_ = -r.num_;
    return r;
}

CoeffFn CoeffFn::operator*(const CoeffFn& o) const {
    return CoeffFn(num_ * o.num_, den_ * o.den_);
}

CoeffFn CoeffFn::operator/(const CoeffFn& o) const {
    if (o.is_zero()) throw DivisionByZero();
    return CoeffFn(num_ * o.den_, den_ * o.num_);  // ctor rejects lambda in denominator
}

CoeffFn CoeffFn::scaled(const Rat& c) const {
    CoeffFn r = *this;
    r.num_ = r.num_.scaled(c);
    if (rat_is_zero(c)) r.den_ = UPoly::constant(num_.nvars(), Rat(1));
    return r;
}

CoeffFn CoeffFn::pow(long e) const {
    if (e == 0) return constant(ncoords(), Rat(1));
    CoeffFn base = *this;
    if (e < 0) {
        base = constant(ncoords(), Rat(1)) / base;
        e = -e;
    }
    CoeffFn acc = constant(ncoords(), Rat(1));
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

CoeffFn CoeffFn::partial(int j) const {
    int v = j - 1;
    if (v < 0 || v >= ncoords()) throw std::out_of_range("CoeffFn::partial index");
    if (is_polynomial()) {
        // den_ is a constant; keep it to avoid renormalizing.
        return CoeffFn(num_.partial(v), den_);
    }
    return CoeffFn(num_.partial(v) * den_ - num_ * den_.partial(v), den_ * den_);
}

CoeffFn CoeffFn::mul_lambda() const {
    return CoeffFn(num_ * UPoly::variable(num_.nvars(), lambda_var()), den_);
}

CoeffFn CoeffFn::set_lambda(int i) const {
    if (i < 1 || i > ncoords()) throw std::out_of_range("CoeffFn::set_lambda index");
    return CoeffFn(num_.subst_var(lambda_var(), i - 1), den_);
}

CoeffFn CoeffFn::lambda_component(int k) const {
    UPoly r(num_.nvars());
    for (const auto& [e, c] : num_.terms())
        if ((int)e[lambda_var()] == k) {
            Expvec e2 = e;
            e2[lambda_var()] = 0;
            r.add_term(e2, c);
        }
    return CoeffFn(r, den_);
}

long CoeffFn::coeff_u_degree() const { return num_.total_degree_except(lambda_var()); }

Rat CoeffFn::eval(const std::vector<Rat>& us, const Rat& lam) const {
    std::vector<Rat> pt = us;
    pt.push_back(lam);
    Rat d = den_.eval(pt);
    if (rat_is_zero(d)) throw DivisionByZero();
    return num_.eval(pt) / d;
}

std::string CoeffFn::str() const {
    auto names = coeff_var_names(ncoords());
    if (is_polynomial()) {
        Rat d = den_.is_zero() ? Rat(1) : den_.leading_coeff();
        return num_.scaled(Rat(1) / d).str(names);
    }
    return "(" + num_.str(names) + ")/(" + den_.str(names) + ")";
}

bool CoeffFn::as_rat(Rat& out) const {
    if (!num_.is_constant() || !den_.is_constant()) return false;
    if (num_.is_zero()) {
        out = Rat(0);
        return true;
    }
    out = num_.leading_coeff() / den_.leading_coeff();
    return true;
}

}  // namespace bihamo
