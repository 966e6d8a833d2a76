#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bihamo/rat.hpp"

namespace bihamo {

// One jet variable: u^{i,s} (even) or theta_i^s (odd), depending on context.
// i is the 1-based coordinate index, s the jet order.
struct JetVar {
    uint16_t i = 0;
    uint16_t s = 0;
    auto operator<=>(const JetVar&) const = default;
};

enum class Grading { Standard, Theta, DegU, Theta0, Theta1, ThetaGe2, Lambda };

// Product of u-jet powers (s >= 1) and distinct thetas, both kept sorted.
// u^{i,0} never appears here: it lives in the coefficient ring.
struct JetMonomial {
    std::vector<std::pair<JetVar, unsigned>> ujets;  // ascending by variable
    std::vector<JetVar> thetas;                      // strictly ascending

    auto operator<=>(const JetMonomial&) const = default;

    bool empty() const { return ujets.empty() && thetas.empty(); }

    long degree(Grading g) const;
    long standard_degree() const { return degree(Grading::Standard); }
    int theta_degree() const { return (int)thetas.size(); }

    unsigned ujet_exp(JetVar v) const;
    bool has_theta(JetVar v) const;
    int max_jet_order() const;

    std::string str() const;
};

// theta-part merge; returns false when a theta repeats (the product is zero).
bool mono_mul(const JetMonomial& a, const JetMonomial& b, JetMonomial& out, int& sign);

// Builds a monomial from an unsorted theta list with the Koszul sign of the
// sorting permutation; returns false when a theta repeats.
bool mono_normalize(std::vector<std::pair<JetVar, unsigned>> ujets, std::vector<JetVar> thetas,
                    JetMonomial& out, int& sign);

enum class SubspaceKind { CHat, CIntN, MHat };
struct Subspace {
    SubspaceKind kind;
    int i = 0;  // the single index carrying positive-order content, for CIntN
    bool operator==(const Subspace&) const = default;
};

// Trichotomy: no positive-order content / all of it on one index / mixed.
Subspace subspace_classify(const JetMonomial& m);

// Weight of the i-th Euler operator: u^{i,s} counts s/2 + 1, theta_i^s
// counts (s-1)/2, all other generators count 0.
Rat weight(const JetMonomial& m, int i);

// All monomials with theta-degree p and standard degree d in N coordinates.
std::vector<JetMonomial> slice_basis(int p, int d, int N);

template <class R>
class ElementT {
  public:
    using Terms = std::map<JetMonomial, R>;

    ElementT() = default;
    static ElementT zero() { return ElementT(); }
    static ElementT from_coeff(R c) {
        ElementT e;
        e.add_term(JetMonomial{}, std::move(c));
        return e;
    }
    static ElementT monomial(JetMonomial m, R c) {
        ElementT e;
        e.add_term(std::move(m), std::move(c));
        return e;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(JetMonomial m, R c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), std::move(c));
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    ElementT operator+(const ElementT& o) const {
        ElementT r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }
    ElementT operator-(const ElementT& o) const {
        ElementT r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
        return r;
    }
    ElementT operator-() const {
        ElementT r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    bool operator==(const ElementT& o) const { return terms_ == o.terms_; }

    ElementT scaled(const Rat& q) const {
        ElementT r;
        if (rat_is_zero(q)) return r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, c.scaled(q));
        return r;
    }
    ElementT coeff_mul(const R& k) const {
        ElementT r;
        for (const auto& [m, c] : terms_) r.add_term(m, c * k);
        return r;
    }

    ElementT operator*(const ElementT& o) const {
        ElementT r;
        JetMonomial m;
        int sign;
        for (const auto& [ma, ca] : terms_)
            for (const auto& [mb, cb] : o.terms_) {
                if (!mono_mul(ma, mb, m, sign)) continue;
                R c = ca * cb;
                if (sign < 0) c = -c;
                r.add_term(m, std::move(c));
            }
        return r;
    }

    // Left partial derivative with respect to u^{i,s}, s >= 1.
    ElementT partial_ujet(JetVar v) const {
        ElementT r;
        for (const auto& [m, c] : terms_) {
            unsigned e = m.ujet_exp(v);
            if (!e) continue;
            JetMonomial m2 = m;
            for (auto& [w, ee] : m2.ujets)
                if (w == v) --ee;
            std::erase_if(m2.ujets, [](const auto& p) { return p.second == 0; });
            r.add_term(std::move(m2), c.scaled(Rat((long)e)));
        }
        return r;
    }

    // Left partial derivative with respect to theta_i^s.
    ElementT partial_theta(JetVar v) const {
        ElementT r;
        for (const auto& [m, c] : terms_) {
            for (size_t k = 0; k < m.thetas.size(); ++k) {
                if (m.thetas[k] != v) continue;
                JetMonomial m2 = m;
                m2.thetas.erase(m2.thetas.begin() + (long)k);
                r.add_term(std::move(m2), (k % 2) ? -c : c);
                break;
            }
        }
        return r;
    }

    // Derivative through the coefficient ring only (d/du^j at jet order 0).
    ElementT partial_coord(int j) const {
        ElementT r;
        for (const auto& [m, c] : terms_) r.add_term(m, c.partial(j));
        return r;
    }

    ElementT mul_lambda() const {
        ElementT r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, c.mul_lambda());
        return r;
    }
    ElementT set_lambda(int i) const {
        ElementT r;
        for (const auto& [m, c] : terms_) r.add_term(m, c.set_lambda(i));
        return r;
    }

    int coord_count() const {
        return terms_.empty() ? 0 : terms_.begin()->second.coord_count();
    }

    int max_jet_order() const {
        int s = 0;
        for (const auto& [m, c] : terms_) s = std::max(s, m.max_jet_order());
        return s;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            if (!out.empty()) out += " + ";
            std::string ms = m.str();
            if (ms.empty())
                out += c.str();
            else
                out += "(" + c.str() + ") " + ms;
        }
        return out;
    }

  private:
    Terms terms_;
};

// x-derivative: raises jets and thetas, and runs the chain rule through the
// coefficients via u^{j,1}.
template <class R>
ElementT<R> elem_dx(const ElementT<R>& a) {
    ElementT<R> r;
    for (const auto& [m, c] : a.terms()) {
        const int N = c.coord_count();
        for (int j = 1; j <= N; ++j) {
            R dc = c.partial(j);
            if (dc.is_zero()) continue;
            JetMonomial m2;
            int sign;
            JetMonomial uj;
            uj.ujets.push_back({JetVar{(uint16_t)j, 1}, 1});
            if (!mono_mul(uj, m, m2, sign)) continue;
            r.add_term(std::move(m2), sign < 0 ? -dc : dc);
        }
        for (size_t k = 0; k < m.ujets.size(); ++k) {
            const auto& [v, e] = m.ujets[k];
            JetMonomial m2 = m;
            for (auto& [w, ee] : m2.ujets)
                if (w == v) --ee;
            std::erase_if(m2.ujets, [](const auto& p) { return p.second == 0; });
            JetMonomial raised;
            raised.ujets.push_back({JetVar{v.i, (uint16_t)(v.s + 1)}, 1});
            JetMonomial prod;
            int sign;
            if (!mono_mul(raised, m2, prod, sign)) continue;
            R c2 = c.scaled(Rat((long)e));
            r.add_term(std::move(prod), sign < 0 ? -c2 : c2);
        }
        for (size_t k = 0; k < m.thetas.size(); ++k) {
            JetMonomial m2 = m;
            m2.thetas.erase(m2.thetas.begin() + (long)k);
            JetMonomial raised;
            raised.thetas.push_back(JetVar{m.thetas[k].i, (uint16_t)(m.thetas[k].s + 1)});
            // theta raising is parity-neutral: re-insert at the old position's
            // parity, then normalize
            int pre_sign = (k % 2) ? -1 : 1;
            JetMonomial prod;
            int sign;
            if (!mono_mul(raised, m2, prod, sign)) continue;
            R c2 = (pre_sign * sign < 0) ? -c : c;
            r.add_term(std::move(prod), std::move(c2));
        }
    }
    return r;
}

template <class R>
ElementT<R> elem_dx_pow(ElementT<R> a, int s) {
    for (int k = 0; k < s; ++k) a = elem_dx(a);
    return a;
}

template <class R>
std::optional<long> elem_degree(const ElementT<R>& a, Grading g) {
    std::optional<long> deg;
    if (g == Grading::Lambda) {
        for (const auto& [m, c] : a.terms()) {
            long top = c.lambda_degree();
            for (long k = 0; k < top; ++k)
                if (!c.lambda_component((int)k).is_zero()) return std::nullopt;
            if (deg && *deg != top) return std::nullopt;
            deg = top;
        }
        return deg;
    }
    for (const auto& [m, c] : a.terms()) {
        long d = m.degree(g);
        if (deg && *deg != d) return std::nullopt;
        deg = d;
    }
    return deg;
}

template <class R>
ElementT<R> homogeneous_component(const ElementT<R>& a, Grading g, long k) {
    ElementT<R> r;
    if (g == Grading::Lambda) {
        for (const auto& [m, c] : a.terms()) r.add_term(m, c.lambda_component((int)k));
        return r;
    }
    for (const auto& [m, c] : a.terms())
        if (m.degree(g) == k) r.add_term(m, c);
    return r;
}

}  // namespace bihamo
