#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bihamo/operators.hpp"

namespace bihamo {

struct NonHomogeneous : std::invalid_argument {
    explicit NonHomogeneous(const std::string& what) : std::invalid_argument(what) {}
};

// A variable of the variational calculus: u^i or theta_i.
struct Variable {
    bool theta = false;
    int i = 0;
};
inline Variable var_u(int i) { return {false, i}; }
inline Variable var_theta(int i) { return {true, i}; }

// Euler-Lagrange operator: sum over s >= 0 of (-d_x)^s after the partial
// derivative at jet order s.  The s = 0 term for u^i differentiates through
// the coefficient ring.  The sum truncates at the operand's top jet order.
template <class R>
ElementT<R> variational(const ElementT<R>& a, Variable v) {
    using E = ElementT<R>;
    E r = E::zero();
    const int top = a.max_jet_order();
    for (int s = 0; s <= top; ++s) {
        E d;
        if (v.theta)
            d = a.partial_theta(opdetail::tv(v.i, s));
        else
            d = (s == 0) ? a.partial_coord(v.i) : a.partial_ujet(opdetail::uv(v.i, s));
        if (d.is_zero()) continue;
        d = elem_dx_pow(std::move(d), s);
        r = (s % 2) ? r - d : r + d;
    }
    return r;
}

// A local functional, kept as a chosen density representative.  Equality of
// classes is semantic, via is_zero_functional of the difference.
template <class R>
struct FunctionalT {
    ElementT<R> density;

    FunctionalT operator+(const FunctionalT& o) const { return {density + o.density}; }
    FunctionalT operator-(const FunctionalT& o) const { return {density - o.density}; }
    FunctionalT operator-() const { return {-density}; }
};

using Functional = FunctionalT<CoeffFn>;
using FormalFunctional = FunctionalT<FormalScalar>;

// The class of the density is zero iff every variational derivative vanishes
// and the augmentation (all jet generators and thetas to zero) is the zero
// function: the kernel of all Euler-Lagrange operators is d_x-images plus
// constants, and the augmentation isolates the constant part.
template <class R>
bool is_zero_functional(const FunctionalT<R>& F) {
    const auto& a = F.density;
    if (a.is_zero()) return true;
    auto it = a.terms().find(JetMonomial{});
    if (it != a.terms().end() && !it->second.is_zero()) return false;
    const int N = a.coord_count();
    for (int i = 1; i <= N; ++i) {
        if (!variational(a, var_u(i)).is_zero()) return false;
        if (!variational(a, var_theta(i)).is_zero()) return false;
    }
    return true;
}

// Schouten-Nijenhuis bracket of two functionals; the first operand must be
// homogeneous in theta-degree p, and the bracket density is
// sum_i dA/dtheta_i * dB/du^i + (-1)^p dA/du^i * dB/dtheta_i.
template <class R>
FunctionalT<R> schouten(const FunctionalT<R>& A, const FunctionalT<R>& B) {
    using E = ElementT<R>;
    if (A.density.is_zero() || B.density.is_zero()) return {E::zero()};
    auto p = elem_degree(A.density, Grading::Theta);
    if (!p) throw NonHomogeneous("bracket operand is not homogeneous in theta-degree");
    const int N = A.density.coord_count();
    if (B.density.coord_count() != N)
        throw RingMismatch("bracket operands live over different coordinate rings");
    const bool odd = *p % 2;
    E acc = E::zero();
    for (int i = 1; i <= N; ++i) {
        acc = acc + variational(A.density, var_theta(i)) * variational(B.density, var_u(i));
        E t = variational(A.density, var_u(i)) * variational(B.density, var_theta(i));
        acc = odd ? acc - t : acc + t;
    }
    return {acc};
}

// The pencil differential descends to functionals because it commutes with
// d_x; the class of the image represents d_lambda of the class.
template <class P>
FunctionalT<typename P::Ring> d_lambda_functional(const P& p,
                                                  const FunctionalT<typename P::Ring>& F) {
    return {d_lambda(p)(F.density)};
}

// Coefficients A^{ij}_{k,l;a} of a deformed bracket, keyed by
// (epsilon order k, delta-derivative order l, pencil index a, i, j).
// Unset slots read as zero.
class DeformationCoeffs {
  public:
    explicit DeformationCoeffs(int N) : n_(N) {}

    int coord_count() const { return n_; }

    void set(int k, int l, int a, int i, int j, CoeffFn v) {
        check(k, l, a, i, j);
        entries_[{k, l, a, i, j}] = std::move(v);
    }

    CoeffFn get(int k, int l, int a, int i, int j) const {
        check(k, l, a, i, j);
        auto it = entries_.find({k, l, a, i, j});
        return it == entries_.end() ? CoeffFn::constant(n_, Rat(0)) : it->second;
    }

  private:
    void check(int k, int l, int a, int i, int j) const {
        if (k < 1) throw IndexOutOfRange(k, 0);
        if (l < 0 || l > k + 1) throw IndexOutOfRange(l, k + 1);
        if (a < 1 || a > 2) throw IndexOutOfRange(a, 2);
        opdetail::check_index(i, n_);
        opdetail::check_index(j, n_);
    }

    int n_;
    std::map<std::array<int, 5>, CoeffFn> entries_;
};

// Result of the central-invariants formula, with the per-index single-variable
// check: violations lists every pair (i, j) with j != i and d_j c_i != 0.
struct CentralInvariants {
    std::vector<CoeffFn> c;
    std::vector<std::pair<int, int>> violations;

    bool single_variable(int i) const {
        for (const auto& [vi, vj] : violations)
            if (vi == i) return false;
        return true;
    }
    bool all_single_variable() const { return violations.empty(); }
};

inline CentralInvariants central_invariants(const PencilData& p, const DeformationCoeffs& A) {
    const int N = p.coord_count();
    if (A.coord_count() != N)
        throw RingMismatch("deformation coefficients sized for a different coordinate count");
    for (int k = 1; k <= N; ++k)
        if (p.f(k).is_zero()) throw DivisionByZero();
    CentralInvariants out;
    for (int i = 1; i <= N; ++i) {
        const CoeffFn ui = p.u(i);
        CoeffFn s = A.get(2, 3, 2, i, i) - ui * A.get(2, 3, 1, i, i);
        for (int k = 1; k <= N; ++k) {
            if (k == i) continue;
            CoeffFn num = A.get(1, 2, 2, k, i) - ui * A.get(1, 2, 1, k, i);
            if (num.is_zero()) continue;
            s = s + num * num / (p.f(k) * (p.u(k) - ui));
        }
        CoeffFn ci = s / (p.f(i) * p.f(i)).scaled(Rat(3));
        for (int j = 1; j <= N; ++j)
            if (j != i && !ci.partial(j).is_zero()) out.violations.emplace_back(i, j);
        out.c.push_back(std::move(ci));
    }
    return out;
}

}  // namespace bihamo
