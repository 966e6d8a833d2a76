#include "bihamo/upoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace bihamo {

long expvec_total(const Expvec& e) {
    long t = 0;
    for (unsigned x : e) t += x;
    return t;
}

bool GradedLexGreater::operator()(const Expvec& a, const Expvec& b) const {
    long ta = expvec_total(a), tb = expvec_total(b);
    if (ta != tb) return ta > tb;
    return a > b;  // lex, variable 0 heaviest
}

UPoly UPoly::constant(int nv, const Rat& c) {
    UPoly p(nv);
    p.add_term(Expvec(nv, 0), c);
    return p;
}

UPoly UPoly::variable(int nv, int v, unsigned e) {
    if (v < 0 || v >= nv) throw std::out_of_range("UPoly::variable");
    UPoly p(nv);
    Expvec ev(nv, 0);
    ev[v] = e;
    p.add_term(ev, Rat(1));
    return p;
}

bool UPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && expvec_total(terms_.begin()->first) == 0);
}

void UPoly::add_term(const Expvec& e, const Rat& c) {
    if (rat_is_zero(c)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (rat_is_zero(it->second)) terms_.erase(it);
    }
}

UPoly UPoly::operator+(const UPoly& o) const {
    UPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

UPoly UPoly::operator-(const UPoly& o) const {
    UPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

UPoly UPoly::operator-() const {
    UPoly r(nv_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

UPoly UPoly::operator*(const UPoly& o) const {
    UPoly r(nv_);
    Expvec e(nv_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (int v = 0; v < nv_; ++v) e[v] = ea[v] + eb[v];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

UPoly UPoly::scaled(const Rat& c) const {
    UPoly r(nv_);
    if (rat_is_zero(c)) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

UPoly UPoly::pow(unsigned e) const {
    UPoly acc = UPoly::constant(nv_, Rat(1));
    UPoly base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

long UPoly::degree(int v) const {
    long d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, (long)e[v]);
    return d;
}

long UPoly::total_degree() const {
    long d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, expvec_total(e));
    return d;
}

long UPoly::total_degree_except(int v) const {
    long d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, expvec_total(e) - (long)e[v]);
    return d;
}

const Rat& UPoly::leading_coeff() const {
    if (terms_.empty()) throw std::domain_error("leading_coeff of zero polynomial");
    return terms_.begin()->second;
}

const Expvec& UPoly::leading_expvec() const {
    if (terms_.empty()) throw std::domain_error("leading_expvec of zero polynomial");
    return terms_.begin()->first;
}

UPoly UPoly::partial(int v) const {
    UPoly r(nv_);
    for (const auto& [e, c] : terms_) {
        if (e[v] == 0) continue;
        Expvec e2 = e;
        e2[v] -= 1;
        r.add_term(e2, c * Rat((long)e[v]));
    }
    return r;
}

UPoly UPoly::subst_var(int from, int to) const {
    UPoly r(nv_);
    for (const auto& [e, c] : terms_) {
        Expvec e2 = e;
        e2[to] += e2[from];
        e2[from] = 0;
        r.add_term(e2, c);
    }
    return r;
}

Rat UPoly::eval(const std::vector<Rat>& point) const {
    Rat acc(0);
    for (const auto& [e, c] : terms_) {
        Rat t = c;
        for (int v = 0; v < nv_; ++v)
            if (e[v]) t *= rat_pow(point[v], (long)e[v]);
        acc += t;
    }
    return acc;
}

UPoly UPoly::coeff_of(int v, unsigned k) const {
    UPoly r(nv_);
    for (const auto& [e, c] : terms_) {
        if (e[v] != k) continue;
        Expvec e2 = e;
        e2[v] = 0;
        r.add_term(e2, c);
    }
    return r;
}

Rat UPoly::content() const {
    if (terms_.empty()) return Rat(0);
    mpz_class gnum(0), dlcm(1);
    for (const auto& [e, c] : terms_) {
        mpz_gcd(gnum.get_mpz_t(), gnum.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(dlcm.get_mpz_t(), dlcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    Rat r(gnum, dlcm);
    r.canonicalize();
    return abs(r);
}

std::string UPoly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Rat a = abs(c);
        if (first) {
            if (sgn(c) < 0) out += "-";
            first = false;
        } else {
            out += sgn(c) < 0 ? " - " : " + ";
        }
        std::string mono;
        for (int v = 0; v < nv_; ++v) {
            if (!e[v]) continue;
            if (!mono.empty()) mono += "*";
            mono += names[v];
            if (e[v] > 1) mono += "^" + std::to_string(e[v]);
        }
        if (mono.empty()) {
            out += rat_str(a);
        } else {
            if (a != 1) out += rat_str(a) + "*";
            out += mono;
        }
    }
    return out;
}

bool upoly_try_divexact(const UPoly& a, const UPoly& b, UPoly& quot) {
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    UPoly q(a.nvars()), r = a;
    const Expvec& lb = b.leading_expvec();
    const Rat& cb = b.leading_coeff();
    const int nv = a.nvars();
    while (!r.is_zero()) {
        const Expvec& lr = r.leading_expvec();
        Expvec t(nv);
        for (int v = 0; v < nv; ++v) {
            if (lr[v] < lb[v]) return false;
            t[v] = lr[v] - lb[v];
        }
        UPoly step(nv);
        step.add_term(t, r.leading_coeff() / cb);
        q = q + step;
        r = r - step * b;
    }
    quot = q;
    return true;
}

UPoly upoly_divexact(const UPoly& a, const UPoly& b) {
    UPoly q(a.nvars());
    if (!upoly_try_divexact(a, b, q)) throw std::domain_error("inexact polynomial division");
    return q;
}

namespace {

// Primitive, positive-leading-coefficient normalization.
UPoly normalize_sign_content(const UPoly& a) {
    if (a.is_zero()) return a;
    Rat c = a.content();
    if (sgn(a.leading_coeff()) < 0) c = -c;
    return a.scaled(Rat(1) / c);
}

UPoly lc_in(const UPoly& a, int v) { return a.coeff_of(v, (unsigned)a.degree(v)); }

// gcd of the coefficients of a viewed as a polynomial in v.
UPoly content_in(const UPoly& a, int v) {
    UPoly g(a.nvars());
    long d = a.degree(v);
    for (long k = 0; k <= d; ++k) {
        UPoly ck = a.coeff_of(v, (unsigned)k);
        if (!ck.is_zero()) g = upoly_gcd(g, ck);
        if (g.is_constant() && !g.is_zero()) break;
    }
    return g;
}

// Pseudo-remainder of a by b with respect to v: lc(b)^(da-db+1) * a mod b.
UPoly prem(const UPoly& a, const UPoly& b, int v) {
    long db = b.degree(v);
    UPoly lb = lc_in(b, v);
    UPoly r = a;
    long e = a.degree(v) - db + 1;
    while (!r.is_zero() && r.degree(v) >= db) {
        UPoly lr = lc_in(r, v);
        UPoly shift = UPoly::variable(a.nvars(), v, (unsigned)(r.degree(v) - db));
        r = lb * r - lr * shift * b;
        --e;
    }
    for (; e > 0; --e) r = lb * r;
    return r;
}

}  // namespace

UPoly upoly_gcd(const UPoly& a, const UPoly& b) {
    if (a.is_zero()) return normalize_sign_content(b);
    if (b.is_zero()) return normalize_sign_content(a);
    if (a.is_constant() || b.is_constant()) return UPoly::constant(a.nvars(), Rat(1));

    int v = -1;
    for (int w = a.nvars() - 1; w >= 0; --w) {
        if (a.degree(w) > 0 || b.degree(w) > 0) {
            v = w;
            break;
        }
    }

    UPoly ca = content_in(a, v), cb = content_in(b, v);
    UPoly A = upoly_divexact(a, ca), B = upoly_divexact(b, cb);
    UPoly cont = upoly_gcd(ca, cb);

    if (A.degree(v) < B.degree(v)) std::swap(A, B);
    UPoly g = UPoly::constant(a.nvars(), Rat(1));
    UPoly h = g;
    for (;;) {
        long delta = A.degree(v) - B.degree(v);
        UPoly R = prem(A, B, v);
        if (R.is_zero()) break;
        if (R.degree(v) == 0) {
            B = UPoly::constant(a.nvars(), Rat(1));
            break;
        }
        A = B;
        UPoly divisor = g * h.pow((unsigned)delta);
        B = upoly_divexact(R, divisor);
        g = lc_in(A, v);
        if (delta > 0) h = upoly_divexact(g.pow((unsigned)delta), h.pow((unsigned)(delta - 1)));
    }
    if (B.degree(v) > 0) B = upoly_divexact(B, content_in(B, v));
    return normalize_sign_content(cont * B);
}

}  // namespace bihamo
