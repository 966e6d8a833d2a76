#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "bihamo/coefffn.hpp"
#include "bihamo/formal.hpp"
#include "bihamo/jet.hpp"

namespace bihamo {

struct MissingSqrtWitness : std::runtime_error {
    explicit MissingSqrtWitness(int i)
        : std::runtime_error("operation needs a square-root witness h" + std::to_string(i) +
                             " with h^2 = f" + std::to_string(i)) {}
};

struct EqualIndices : std::logic_error {
    EqualIndices() : std::logic_error("rotation coefficient indices must differ") {}
};

struct WitnessMismatch : std::runtime_error {
    explicit WitnessMismatch(int i)
        : std::runtime_error("witness h" + std::to_string(i) + "^2 does not equal f" +
                             std::to_string(i)) {}
};

// Diagonal metric pair (f^i delta^ij, u^i f^i delta^ij) in canonical
// coordinates, with optional square-root witnesses h_i^2 = f^i.  Witnesses
// are demanded lazily: only half-integer powers consult them.
class PencilData {
  public:
    using Ring = CoeffFn;

    PencilData(int N, std::vector<CoeffFn> f, std::optional<std::vector<CoeffFn>> h = {})
        : n_(N), f_(std::move(f)), h_(std::move(h)) {
        if ((int)f_.size() != N) throw std::invalid_argument("need one metric entry per coordinate");
        for (int i = 1; i <= N; ++i) {
            if (f_[i - 1].is_zero()) throw std::invalid_argument("metric entry f" + std::to_string(i) + " is zero");
            if (f_[i - 1].lambda_degree() > 0)
                throw std::invalid_argument("metric entry f" + std::to_string(i) + " depends on lambda");
        }
        if (h_) {
            if ((int)h_->size() != N) throw std::invalid_argument("need one witness per coordinate");
            for (int i = 1; i <= N; ++i)
                if (!((*h_)[i - 1] * (*h_)[i - 1] == f_[i - 1])) throw WitnessMismatch(i);
        }
    }

    int coord_count() const { return n_; }
    bool has_witness() const { return h_.has_value(); }

    const CoeffFn& f(int i) const { return f_[(size_t)i - 1]; }
    const CoeffFn& sqrt_witness(int i) const {
        if (!h_) throw MissingSqrtWitness(i);
        return (*h_)[(size_t)i - 1];
    }

    CoeffFn u(int i) const { return CoeffFn::u(n_, i); }
    CoeffFn lambda() const { return CoeffFn::lambda(n_); }
    CoeffFn one() const { return CoeffFn::constant(n_, Rat(1)); }
    CoeffFn zero() const { return CoeffFn::constant(n_, Rat(0)); }
    CoeffFn rat(const Rat& c) const { return CoeffFn::constant(n_, c); }

    CoeffFn df(int i, int j) const { return f(i).partial(j); }
    CoeffFn fquot(int a, int b) const { return df(b, a) / f(b); }

    // gamma_ij = H_i^{-1} d_i H_j = -1/2 (h_i / h_j^3) d_i f^j; the witness is
    // consulted only when d_i f^j != 0.
    CoeffFn gamma(int i, int j) const {
        if (i == j) throw EqualIndices();
        CoeffFn d = df(j, i);
        if (d.is_zero()) return zero();
        const CoeffFn& hi = sqrt_witness(i);
        const CoeffFn& hj = sqrt_witness(j);
        return (hi * d / (hj * hj * hj)).scaled(bihamo::rat(-1, 2));
    }

    // (f^i)^{k/2}; even k stays rational, odd k consults the witness.
    CoeffFn fpow_half(int i, long k) const {
        if (k % 2 == 0) return f(i).pow(k / 2);
        return sqrt_witness(i).pow(k);
    }

  private:
    int n_;
    std::vector<CoeffFn> f_;
    std::optional<std::vector<CoeffFn>> h_;
};

// The same interface over the rotation-coefficient ring: f^i = H_i^{-2},
// gamma_ij stays symbolic, and (f^i)^{k/2} = H_i^{-k} needs no witness.
class FormalPencil {
  public:
    using Ring = FormalScalar;

    explicit FormalPencil(int N) : n_(N) {}

    int coord_count() const { return n_; }
    bool has_witness() const { return true; }

    FormalScalar f(int i) const { return FormalScalar::h_power(n_, i, -2); }

    FormalScalar u(int i) const { return FormalScalar::u(n_, i); }
    FormalScalar lambda() const { return FormalScalar::lambda(n_); }
    FormalScalar one() const { return FormalScalar::constant(n_, Rat(1)); }
    FormalScalar zero() const { return FormalScalar::constant(n_, Rat(0)); }
    FormalScalar rat(const Rat& c) const { return FormalScalar::constant(n_, c); }

    FormalScalar df(int i, int j) const { return formal_derive(f(i), j); }
    FormalScalar fquot(int a, int b) const {
        return df(b, a) * FormalScalar::h_power(n_, b, 2);
    }

    FormalScalar gamma(int i, int j) const {
        if (i == j) throw EqualIndices();
        return FormalScalar::gamma(n_, i, j);
    }

    FormalScalar fpow_half(int i, long k) const { return FormalScalar::h_power(n_, i, -k); }

  private:
    int n_;
};

// Generator rescaling u^{i,s} -> (f^i)^{s/2} u^{i,s}, theta_i^s ->
// (f^i)^{(s+1)/2} theta_i^s (inverse: opposite exponents).
template <class P>
ElementT<typename P::Ring> psi(const P& p, const ElementT<typename P::Ring>& a, bool forward) {
    using E = ElementT<typename P::Ring>;
    const int N = p.coord_count();
    E r;
    for (const auto& [m, c] : a.terms()) {
        std::vector<long> k((size_t)N + 1, 0);
        for (const auto& [v, e] : m.ujets) k[v.i] += (long)v.s * e;
        for (const auto& v : m.thetas) k[v.i] += (long)v.s + 1;
        typename P::Ring c2 = c;
        for (int i = 1; i <= N; ++i)
            if (k[(size_t)i]) c2 = c2 * p.fpow_half(i, forward ? k[(size_t)i] : -k[(size_t)i]);
        r.add_term(m, std::move(c2));
    }
    return r;
}

template <class P>
ElementT<typename P::Ring> theta_tilde(const P& p, int i) {
    using E = ElementT<typename P::Ring>;
    const int N = p.coord_count();
    JetMonomial th;
    th.thetas.push_back(JetVar{(uint16_t)i, 0});
    E r = E::monomial(th, p.f(i));
    for (int j = 1; j <= N; ++j) {
        if (j == i) continue;
        JetMonomial tj;
        tj.thetas.push_back(JetVar{(uint16_t)j, 0});
        r.add_term(tj, (p.u(i) - p.u(j)) * p.f(j) * p.fquot(j, i));
    }
    return r;
}

template <class P>
ElementT<typename P::Ring> theta_bar(const P& p, int i) {
    using E = ElementT<typename P::Ring>;
    const int N = p.coord_count();
    JetMonomial th;
    th.thetas.push_back(JetVar{(uint16_t)i, 0});
    E r = E::monomial(th, p.one());
    for (int j = 1; j <= N; ++j) {
        if (j == i) continue;
        JetMonomial tj;
        tj.thetas.push_back(JetVar{(uint16_t)j, 0});
        r.add_term(tj, (p.u(j) - p.u(i)).scaled(Rat(2)) * p.gamma(j, i));
    }
    return r;
}

struct FerapontovReport {
    struct Entry {
        std::string equation;  // "cross", "pair", "upair"
        int i = 0, j = 0, k = 0;
        bool ok = true;
        std::string residual;
    };
    bool pass = true;
    std::vector<Entry> entries;
};

// Evaluates the three equation families; every residual must be exactly 0.
//   cross (i,j,k distinct):  d_k gamma_ij - gamma_ik gamma_kj
//   pair  (i<j):  d_i gamma_ij + d_j gamma_ji + sum_{k!=i,j} gamma_ki gamma_kj
//   upair (i<j):  u^i d_i gamma_ij + u^j d_j gamma_ji
//                 + sum_{k!=i,j} u^k gamma_ki gamma_kj + (gamma_ij+gamma_ji)/2
template <class P>
FerapontovReport validate_ferapontov(const P& p) {
    using R = typename P::Ring;
    const int N = p.coord_count();
    FerapontovReport rep;
    auto deriv = [&](const R& a, int k) {
        if constexpr (std::is_same_v<R, FormalScalar>)
            return formal_derive(a, k);
        else
            return a.partial(k);
    };
    auto push = [&](const char* eq, int i, int j, int k, const R& res) {
        FerapontovReport::Entry e;
        e.equation = eq;
        e.i = i;
        e.j = j;
        e.k = k;
        e.ok = res.is_zero();
        e.residual = res.str();
        if (!e.ok) rep.pass = false;
        rep.entries.push_back(std::move(e));
    };
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) {
            if (j == i) continue;
            for (int k = 1; k <= N; ++k) {
                if (k == i || k == j) continue;
                R res = deriv(p.gamma(i, j), k) - p.gamma(i, k) * p.gamma(k, j);
                push("cross", i, j, k, res);
            }
        }
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) {
            R s = p.zero(), t = p.zero();
            for (int k = 1; k <= N; ++k) {
                if (k == i || k == j) continue;
                R prod = p.gamma(k, i) * p.gamma(k, j);
                s = s + prod;
                t = t + p.u(k) * prod;
            }
            R gij = p.gamma(i, j), gji = p.gamma(j, i);
            R dii = deriv(gij, i), djj = deriv(gji, j);
            push("pair", i, j, 0, dii + djj + s);
            push("upair", i, j, 0,
                 p.u(i) * dii + p.u(j) * djj + t + (gij + gji).scaled(rat(1, 2)));
        }
    return rep;
}

}  // namespace bihamo
