#include "bihamo/formal.hpp"

#include <algorithm>
#include <tuple>

namespace bihamo {

namespace {

FMono mono_mul(const FMono& a, const FMono& b) {
    FMono r;
    r.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
            r.push_back(a[i++]);
        } else if (b[j].first < a[i].first) {
            r.push_back(b[j++]);
        } else {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    while (i < a.size()) r.push_back(a[i++]);
    while (j < b.size()) r.push_back(b[j++]);
    return r;
}

FPoly mul_sym_power(const FPoly& p, SymKey s, unsigned e) {
    if (e == 0) return p;
    FPoly r;
    FMono f{{s, e}};
    for (const auto& [m, c] : p.terms()) r.add_term(mono_mul(m, f), c);
    return r;
}

FPoly binom_poly(int i, int j) {  // U_i - U_j
    FPoly r = FPoly::sym(sym_u(i));
    r.add_term(FMono{{sym_u(j), 1}}, Rat(-1));
    return r;
}

FPoly den_to_poly(const FDen& d) {
    FPoly r = FPoly::constant(Rat(1));
    for (const auto& [i, e] : d.h) r = mul_sym_power(r, sym_h(i), e);
    for (const auto& [ij, e] : d.d)
        for (unsigned k = 0; k < e; ++k) r = r * binom_poly(ij.first, ij.second);
    return r;
}

}  // namespace

FPoly FPoly::constant(const Rat& c) {
    FPoly p;
    p.add_term(FMono{}, c);
    return p;
}

FPoly FPoly::sym(SymKey s, unsigned e) {
    FPoly p;
    if (e == 0) return constant(Rat(1));
    p.add_term(FMono{{s, e}}, Rat(1));
    return p;
}

FPoly FPoly::mono(const FMono& m, const Rat& c) {
    FPoly p;
    p.add_term(m, c);
    return p;
}

bool FPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

void FPoly::add_term(const FMono& m, const Rat& c) {
    if (rat_is_zero(c)) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (rat_is_zero(it->second)) terms_.erase(it);
    }
}

FPoly FPoly::operator+(const FPoly& o) const {
    FPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

FPoly FPoly::operator-(const FPoly& o) const {
    FPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

FPoly FPoly::operator-() const {
    FPoly r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

FPoly FPoly::operator*(const FPoly& o) const {
    FPoly r;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
    return r;
}

FPoly FPoly::scaled(const Rat& c) const {
    FPoly r;
    if (rat_is_zero(c)) return r;
    for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
    return r;
}

long FPoly::degree_of(SymKey s) const {
    long d = is_zero() ? -1 : 0;
    for (const auto& [m, c] : terms_)
        for (const auto& [sk, e] : m)
            if (sk == s) d = std::max(d, (long)e);
    return d;
}

unsigned FPoly::min_exponent(SymKey s) const {
    if (terms_.empty()) return 0;
    unsigned mn = ~0u;
    for (const auto& [m, c] : terms_) {
        unsigned e = 0;
        for (const auto& [sk, ee] : m)
            if (sk == s) e = ee;
        mn = std::min(mn, e);
        if (!mn) break;
    }
    return mn;
}

FPoly FPoly::shift_down(SymKey s, unsigned e) const {
    if (e == 0) return *this;
    FPoly r;
    for (const auto& [m, c] : terms_) {
        FMono m2;
        m2.reserve(m.size());
        for (const auto& [sk, ee] : m) {
            if (sk == s) {
                if (ee < e) throw std::domain_error("shift_down underflow");
                if (ee > e) m2.emplace_back(sk, ee - e);
            } else {
                m2.push_back({sk, ee});
            }
        }
        r.add_term(m2, c);
    }
    return r;
}

FPoly FPoly::subst_sym(SymKey from, SymKey to) const {
    FPoly r;
    for (const auto& [m, c] : terms_) {
        unsigned moved = 0;
        FMono m2;
        m2.reserve(m.size());
        for (const auto& [sk, e] : m) {
            if (sk == from)
                moved = e;
            else
                m2.push_back({sk, e});
        }
        if (moved) m2 = mono_mul(m2, FMono{{to, moved}});
        r.add_term(m2, c);
    }
    return r;
}

FPoly FPoly::select(SymKey s, unsigned e) const {
    FPoly r;
    for (const auto& [m, c] : terms_) {
        unsigned have = 0;
        for (const auto& [sk, ee] : m)
            if (sk == s) have = ee;
        if (have == e) r.add_term(m, c);
    }
    return r;
}

bool FPoly::try_div_binomial(int i, int j, FPoly& quot) const {
    // Synthetic division by (U_i - U_j), remainder = value at U_i := U_j.
    std::map<unsigned, FPoly> parts;
    SymKey x = sym_u(i), y = sym_u(j);
    unsigned top = 0;
    for (const auto& [m, c] : terms_) {
        unsigned e = 0;
        FMono m2;
        m2.reserve(m.size());
        for (const auto& [sk, ee] : m) {
            if (sk == x)
                e = ee;
            else
                m2.push_back({sk, ee});
        }
        parts[e].add_term(m2, c);
        top = std::max(top, e);
    }
    if (top == 0) return is_zero() ? (quot = FPoly(), true) : false;
    FPoly q, b;
    for (unsigned k = top; k >= 1; --k) {
        auto it = parts.find(k);
        b = mul_sym_power(b, y, 1) + (it == parts.end() ? FPoly() : it->second);
        // after this step b is the coefficient of x^{k-1} in the quotient
        q = q + mul_sym_power(b, x, k - 1);
        if (k == 1) break;
    }
    FPoly rem = mul_sym_power(b, y, 1);
    auto it0 = parts.find(0);
    if (it0 != parts.end()) rem = rem + it0->second;
    if (!rem.is_zero()) return false;
    quot = q;
    return true;
}

std::string sym_str(SymKey s) {
    switch (s.k) {
        case SymKind::U:
            return "u" + std::to_string(s.i);
        case SymKind::H:
            return "H[" + std::to_string(s.i) + "]";
        case SymKind::Lam:
            return "lambda";
        case SymKind::Gd:
            if (s.m == 0) return "gamma[" + std::to_string(s.i) + "," + std::to_string(s.j) + "]";
            return "dgamma[" + std::to_string(s.i) + "," + std::to_string(s.j) + ";" + std::to_string(s.m) + "]";
        case SymKind::Hd:
            return "dH[" + std::to_string(s.i) + ";" + std::to_string(s.m) + "]";
    }
    return "?";
}

std::string FPoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rat a = abs(c);
        if (first) {
            if (sgn(c) < 0) out += "-";
            first = false;
        } else {
            out += sgn(c) < 0 ? " - " : " + ";
        }
        std::string mono;
        for (const auto& [sk, e] : m) {
            if (!mono.empty()) mono += "*";
            mono += sym_str(sk);
            if (e > 1) mono += "^" + std::to_string(e);
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

// ---------------------------------------------------------------------------

FormalScalar FormalScalar::constant(int n, const Rat& c) {
    FormalScalar r(n);
    r.num_ = FPoly::constant(c);
    return r;
}

FormalScalar FormalScalar::sym(int n, SymKey s) {
    FormalScalar r(n);
    r.num_ = FPoly::sym(s);
    return r;
}

FormalScalar FormalScalar::gamma(int n, int i, int j) {
    if (i == j) throw std::domain_error("gamma requires distinct indices");
    return sym(n, sym_gamma(i, j));
}

FormalScalar FormalScalar::h_power(int n, int i, long e) {
    FormalScalar r(n);
    if (e >= 0) {
        r.num_ = FPoly::sym(sym_h(i), (unsigned)e);
    } else {
        r.num_ = FPoly::constant(Rat(1));
        r.den_.h[i] = (unsigned)(-e);
    }
    return r;
}

FormalScalar FormalScalar::binom_power(int n, int i, int j, long e) {
    if (i == j) throw std::domain_error("binom_power requires distinct indices");
    FormalScalar r(n);
    if (e >= 0) {
        r.num_ = FPoly::constant(Rat(1));
        for (long k = 0; k < e; ++k) r.num_ = r.num_ * binom_poly(i, j);
        return r;
    }
    bool flip = i > j;
    auto key = std::minmax(i, j);
    r.num_ = FPoly::constant((flip && (e & 1)) ? Rat(-1) : Rat(1));
    r.den_.d[{key.first, key.second}] = (unsigned)(-e);
    return r;
}

void FormalScalar::reduce() {
    if (num_.is_zero()) {
        den_ = FDen{};
        return;
    }
    for (auto it = den_.h.begin(); it != den_.h.end();) {
        unsigned c = std::min(it->second, num_.min_exponent(sym_h(it->first)));
        if (c) {
            num_ = num_.shift_down(sym_h(it->first), c);
            it->second -= c;
        }
        it = it->second == 0 ? den_.h.erase(it) : std::next(it);
    }
    for (auto it = den_.d.begin(); it != den_.d.end();) {
        while (it->second > 0) {
            FPoly q;
            if (!num_.try_div_binomial(it->first.first, it->first.second, q)) break;
            num_ = q;
            --it->second;
        }
        it = it->second == 0 ? den_.d.erase(it) : std::next(it);
    }
}

namespace {
void check_same(const FormalScalar& a, const FormalScalar& b) {
    if (a.coord_count() != b.coord_count())
        throw std::logic_error("FormalScalar coordinate count mismatch");
}
}  // namespace

FormalScalar FormalScalar::operator+(const FormalScalar& o) const {
    check_same(*this, o);
    FormalScalar r(n_);
    FPoly na = num_, nb = o.num_;
    for (const auto& [i, e] : den_.h) r.den_.h[i] = e;
    for (const auto& [i, e] : o.den_.h) {
        auto& slot = r.den_.h[i];
        slot = std::max(slot, e);
    }
    for (const auto& [ij, e] : den_.d) r.den_.d[ij] = e;
    for (const auto& [ij, e] : o.den_.d) {
        auto& slot = r.den_.d[ij];
        slot = std::max(slot, e);
    }
    for (const auto& [i, e] : r.den_.h) {
        unsigned ea = den_.h.count(i) ? den_.h.at(i) : 0;
        unsigned eb = o.den_.h.count(i) ? o.den_.h.at(i) : 0;
        na = mul_sym_power(na, sym_h(i), e - ea);
        nb = mul_sym_power(nb, sym_h(i), e - eb);
    }
    for (const auto& [ij, e] : r.den_.d) {
        unsigned ea = den_.d.count(ij) ? den_.d.at(ij) : 0;
        unsigned eb = o.den_.d.count(ij) ? o.den_.d.at(ij) : 0;
        for (unsigned k = ea; k < e; ++k) na = na * binom_poly(ij.first, ij.second);
        for (unsigned k = eb; k < e; ++k) nb = nb * binom_poly(ij.first, ij.second);
    }
    r.num_ = na + nb;
    r.reduce();
    return r;
}

FormalScalar FormalScalar::operator-(const FormalScalar& o) const { return *this + (-o); }

FormalScalar FormalScalar::operator-() const {
    FormalScalar r = *this;
    r.num_ = -r.num_;
    return r;
}

FormalScalar FormalScalar::operator*(const FormalScalar& o) const {
    check_same(*this, o);
    FormalScalar r(n_);
    r.num_ = num_ * o.num_;
    r.den_ = den_;
    for (const auto& [i, e] : o.den_.h) r.den_.h[i] += e;
    for (const auto& [ij, e] : o.den_.d) r.den_.d[ij] += e;
    r.reduce();
    return r;
}

FormalScalar FormalScalar::operator/(const FormalScalar& o) const {
    check_same(*this, o);
    if (o.is_zero()) throw std::domain_error("formal division by zero");
    if (o.num_.terms().size() != 1)
        throw std::domain_error("formal division: divisor must be a single H-term");
    const auto& [mono, c] = *o.num_.terms().begin();
    for (const auto& [sk, e] : mono)
        if (sk.k != SymKind::H)
            throw std::domain_error("formal division: divisor must be a single H-term");
    FormalScalar r(n_);
    r.num_ = (num_ * den_to_poly(o.den_)).scaled(Rat(1) / c);
    r.den_ = den_;
    for (const auto& [sk, e] : mono) r.den_.h[sk.i] += e;
    r.reduce();
    return r;
}

FormalScalar FormalScalar::scaled(const Rat& c) const {
    FormalScalar r(n_);
    r.num_ = num_.scaled(c);
    if (!rat_is_zero(c)) r.den_ = den_;
    return r;
}

FormalScalar FormalScalar::mul_lambda() const {
    FormalScalar r(n_);
    r.num_ = mul_sym_power(num_, sym_lam(), 1);
    r.den_ = den_;
    return r;
}

FormalScalar FormalScalar::set_lambda(int i) const {
    FormalScalar r(n_);
    r.num_ = num_.subst_sym(sym_lam(), sym_u(i));
    r.den_ = den_;
    r.reduce();
    return r;
}

FormalScalar FormalScalar::lambda_component(int k) const {
    FormalScalar r(n_);
    r.num_ = num_.select(sym_lam(), (unsigned)k).shift_down(sym_lam(), (unsigned)k);
    r.den_ = den_;
    r.reduce();
    return r;
}

bool FormalScalar::as_rat(Rat& out) const {
    if (!den_.trivial() || !num_.is_constant()) return false;
    out = num_.is_zero() ? Rat(0) : num_.terms().begin()->second;
    return true;
}

std::string FormalScalar::str() const {
    if (den_.trivial()) return num_.str();
    std::string d;
    for (const auto& [i, e] : den_.h) {
        if (!d.empty()) d += "*";
        d += sym_str(sym_h(i));
        if (e > 1) d += "^" + std::to_string(e);
    }
    for (const auto& [ij, e] : den_.d) {
        if (!d.empty()) d += "*";
        d += "(u" + std::to_string(ij.first) + "-u" + std::to_string(ij.second) + ")";
        if (e > 1) d += "^" + std::to_string(e);
    }
    return "(" + num_.str() + ")/(" + d + ")";
}

FormalScalar formal_reduce(const FormalScalar& a) {
    FormalScalar r = a;
    r.reduce();
    return r;
}

namespace {

// d gamma_ij / d u^i, from the linear system formed by the two summed
// Ferapontov families:
//   x + y = -S,   u^i x + u^j y = -T
// with x = d_i gamma_ij, y = d_j gamma_ji,
// S = sum_{k != i,j} gamma_ki gamma_kj,
// T = sum_{k != i,j} u^k gamma_ki gamma_kj + (gamma_ij + gamma_ji)/2.
FormalScalar dgamma_first(int n, int i, int j) {
    FormalScalar S = FormalScalar::constant(n, Rat(0));
    FormalScalar T = S;
    for (int k = 1; k <= n; ++k) {
        if (k == i || k == j) continue;
        FormalScalar g = FormalScalar::gamma(n, k, i) * FormalScalar::gamma(n, k, j);
        S = S + g;
        T = T + FormalScalar::u(n, k) * g;
    }
    T = T + (FormalScalar::gamma(n, i, j) + FormalScalar::gamma(n, j, i)).scaled(rat(1, 2));
    // x = (T - S u^j) / (u^j - u^i)
    return (T - S * FormalScalar::u(n, j)) * FormalScalar::binom_power(n, j, i, -1);
}

}  // namespace

const FormalScalar& formal_sym_derivative(int n, SymKey s, int k) {
    static std::map<std::tuple<int, SymKey, int>, FormalScalar> cache;
    auto key = std::make_tuple(n, s, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    FormalScalar r(n);
    switch (s.k) {
        case SymKind::U:
            r = FormalScalar::constant(n, s.i == k ? Rat(1) : Rat(0));
            break;
        case SymKind::Lam:
            r = FormalScalar::constant(n, Rat(0));
            break;
        case SymKind::H:
            r = (k == s.i) ? FormalScalar::sym(n, sym_hd(s.i, 1))
                           : FormalScalar::gamma(n, k, s.i) * FormalScalar::sym(n, sym_h(k));
            break;
        case SymKind::Hd:
            if (k == s.i) {
                r = FormalScalar::sym(n, sym_hd(s.i, s.m + 1));
            } else {
                FormalScalar base = FormalScalar::gamma(n, k, s.i) * FormalScalar::sym(n, sym_h(k));
                r = formal_derive(base, s.i, s.m);
            }
            break;
        case SymKind::Gd:
            if (k == s.j) {
                r = FormalScalar::sym(n, sym_gamma(s.i, s.j, s.m + 1));
            } else if (k == s.i) {
                r = formal_derive(dgamma_first(n, s.i, s.j), s.j, s.m);
            } else {
                FormalScalar base = FormalScalar::gamma(n, s.i, k) * FormalScalar::gamma(n, k, s.j);
                r = formal_derive(base, s.j, s.m);
            }
            break;
    }
    return cache.emplace(key, std::move(r)).first->second;
}

FormalScalar formal_derive(const FormalScalar& a, int j, int m) {
    FormalScalar cur = a;
    for (int step = 0; step < m; ++step) cur = cur.partial(j);
    return cur;
}

FormalScalar FormalScalar::partial(int j) const {
    if (j < 1 || j > n_) throw std::out_of_range("FormalScalar::partial index");
    // numerator part: Leibniz across each factor of each term
    FormalScalar acc(n_);
    acc.num_ = FPoly();
    for (const auto& [m, c] : num_.terms()) {
        for (size_t f = 0; f < m.size(); ++f) {
            const auto& [sk, e] = m[f];
            const FormalScalar& ds = formal_sym_derivative(n_, sk, j);
            if (ds.is_zero()) continue;
            FMono rest;
            rest.reserve(m.size());
            for (size_t g = 0; g < m.size(); ++g) {
                if (g == f) {
                    if (e > 1) rest.push_back({sk, e - 1});
                } else {
                    rest.push_back(m[g]);
                }
            }
            FormalScalar part(n_);
            part.num_ = FPoly::mono(rest, c * Rat((long)e));
            acc = acc + part * ds;
        }
    }
    FormalScalar inv_den(n_);
    inv_den.num_ = FPoly::constant(Rat(1));
    inv_den.den_ = den_;
    FormalScalar result = acc * inv_den;
    if (!den_.trivial()) {
        // logarithmic derivative of the denominator
        FormalScalar dlog(n_);
        dlog.num_ = FPoly();
        for (const auto& [i, e] : den_.h) {
            FormalScalar t = (j == i)
                                 ? FormalScalar::sym(n_, sym_hd(i, 1)) * FormalScalar::h_power(n_, i, -1)
                                 : FormalScalar::gamma(n_, j, i) * FormalScalar::sym(n_, sym_h(j)) *
                                       FormalScalar::h_power(n_, i, -1);
            dlog = dlog + t.scaled(Rat((long)e));
        }
        for (const auto& [ij, e] : den_.d) {
            long sign = (j == ij.first) ? 1 : (j == ij.second) ? -1 : 0;
            if (!sign) continue;
            dlog = dlog + FormalScalar::binom_power(n_, ij.first, ij.second, -1).scaled(Rat(sign * (long)e));
        }
        result = result - (*this) * dlog;
    }
    return result;
}

FormalScalar formal_mixed_partial_residual(const FormalScalar& a, int j, int k) {
    return a.partial(j).partial(k) - a.partial(k).partial(j);
}

}  // namespace bihamo
