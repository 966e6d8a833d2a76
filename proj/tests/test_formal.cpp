#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bihamo/coefffn.hpp"
#include "bihamo/formal.hpp"
#include "testutil.hpp"

using namespace bihamo;
using testutil::Rng;

namespace {

FormalScalar G(int n, int i, int j, int m = 0) {
    return FormalScalar::sym(n, sym_gamma(i, j, m));
}
FormalScalar H(int n, int i) { return FormalScalar::sym(n, sym_h(i)); }

// Specialize to the constant metric: H -> 1, all rotation coefficients and
// their derivatives -> 0.  Lands in the concrete coefficient ring.
CoeffFn constant_metric(const FormalScalar& a) {
    const int N = a.coord_count();
    CoeffCtx cx{N};
    CoeffFn acc = cx.zero();
    for (const auto& [m, c] : a.num().terms()) {
        CoeffFn t = cx.rat(c);
        bool alive = true;
        for (const auto& [s, e] : m) {
            switch (s.k) {
                case SymKind::U:
                    t = t * cx.u(s.i).pow(e);
                    break;
                case SymKind::Lam:
                    t = t * cx.lambda().pow(e);
                    break;
                case SymKind::H:
                    break;
                default:
                    alive = false;
            }
            if (!alive) break;
        }
        if (alive) acc = acc + t;
    }
    for (const auto& [ij, e] : a.den().d)
        acc = acc / (cx.u(ij.first) - cx.u(ij.second)).pow(e);
    return acc;
}

}  // namespace

TEST_CASE("derivative table on generators") {
    const int N = 3;
    CHECK(formal_derive(G(N, 1, 2), 3) == G(N, 1, 3) * G(N, 3, 2));
    CHECK(formal_derive(H(N, 2), 3) == G(N, 3, 2) * H(N, 3));
    CHECK(formal_derive(G(N, 1, 2), 2) == FormalScalar::sym(N, sym_gamma(1, 2, 1)));
    CHECK(formal_derive(H(N, 1), 1) == FormalScalar::sym(N, sym_hd(1, 1)));
    CHECK(formal_derive(FormalScalar::u(N, 2), 2) == FormalScalar::constant(N, Rat(1)));
    CHECK(formal_derive(FormalScalar::u(N, 2), 1).is_zero());
    CHECK(formal_derive(FormalScalar::lambda(N), 1).is_zero());
}

TEST_CASE("first-index derivative solves the two-equation system") {
    const int N = 2;
    FormalScalar expect =
        (G(N, 1, 2) + G(N, 2, 1)).scaled(rat(-1, 2)) * FormalScalar::binom_power(N, 1, 2, -1);
    CHECK(formal_derive(G(N, 1, 2), 1) == expect);
    FormalScalar expect21 =
        (G(N, 1, 2) + G(N, 2, 1)).scaled(rat(1, 2)) * FormalScalar::binom_power(N, 1, 2, -1);
    CHECK(formal_derive(G(N, 2, 1), 2) == expect21);
}

TEST_CASE("cross-derivative identity reduces to zero") {
    const int N = 3;
    FormalScalar r = formal_derive(G(N, 1, 2), 3) - G(N, 1, 3) * G(N, 3, 2);
    CHECK(r.is_zero());
}

TEST_CASE("reduction is idempotent and fixes reduced monomials") {
    const int N = 2;
    FormalScalar a = G(N, 1, 2) * H(N, 1);
    CHECK(formal_reduce(a) == a);
    Rng rng(0x5eedf001);
    for (int it = 0; it < 100; ++it) {
        FormalScalar x = testutil::rand_formal(rng, N, 3, 2);
        CHECK(formal_reduce(x) == x);
        CHECK(formal_reduce(formal_reduce(x)) == formal_reduce(x));
    }
}

TEST_CASE("localized fractions cancel") {
    const int N = 2;
    FormalScalar b = FormalScalar::binom_power(N, 1, 2, 1);
    FormalScalar binv = FormalScalar::binom_power(N, 1, 2, -1);
    CHECK(b * binv == FormalScalar::constant(N, Rat(1)));
    CHECK(FormalScalar::binom_power(N, 2, 1, 1) == -b);
    FormalScalar h = H(N, 1);
    CHECK(h * FormalScalar::h_power(N, 1, -1) == FormalScalar::constant(N, Rat(1)));
    FormalScalar diff = FormalScalar::u(N, 1) - FormalScalar::u(N, 2);
    CHECK(diff * binv == FormalScalar::constant(N, Rat(1)));
}

TEST_CASE("derivatives satisfy the Leibniz rule") {
    Rng rng(0x5eedf002);
    for (int it = 0; it < 200; ++it) {
        int N = 2 + (it % 2);
        FormalScalar a = testutil::rand_formal(rng, N, 2, 2);
        FormalScalar b = testutil::rand_formal(rng, N, 2, 2);
        int k = rng.uniform(1, N);
        CHECK(formal_derive(a * b, k) ==
              formal_derive(a, k) * b + a * formal_derive(b, k));
    }
}

TEST_CASE("mixed partials commute on generators") {
    for (int N : {2, 3}) {
        std::vector<SymKey> gens;
        for (int i = 1; i <= N; ++i) {
            gens.push_back(sym_u(i));
            gens.push_back(sym_h(i));
            gens.push_back(sym_hd(i, 1));
            for (int j = 1; j <= N; ++j)
                if (j != i) {
                    gens.push_back(sym_gamma(i, j, 0));
                    gens.push_back(sym_gamma(i, j, 1));
                }
        }
        for (SymKey s : gens)
            for (int j = 1; j <= N; ++j)
                for (int k = j + 1; k <= N; ++k) {
                    FormalScalar a = FormalScalar::sym(N, s);
                    CHECK(formal_mixed_partial_residual(a, j, k).is_zero());
                }
    }
}

TEST_CASE("mixed partials commute on random elements") {
    Rng rng(0x5eedf003);
    for (int it = 0; it < 200; ++it) {
        int N = 2 + (it % 2);
        FormalScalar a = testutil::rand_formal(rng, N, 2, 2);
        int j = rng.uniform(1, N);
        int k = rng.uniform(1, N);
        CHECK(formal_mixed_partial_residual(a, j, k).is_zero());
    }
}

TEST_CASE("constant-metric specialization is a homomorphism commuting with derivatives") {
    Rng rng(0x5eedf004);
    for (int it = 0; it < 200; ++it) {
        int N = 2 + (it % 2);
        FormalScalar a = testutil::rand_formal(rng, N, 2, 2);
        FormalScalar b = testutil::rand_formal(rng, N, 2, 2);
        CHECK(constant_metric(a * b) == constant_metric(a) * constant_metric(b));
        CHECK(constant_metric(a + b) == constant_metric(a) + constant_metric(b));
        int k = rng.uniform(1, N);
        CHECK(constant_metric(formal_derive(a, k)) == constant_metric(a).partial(k));
    }
}

TEST_CASE("lambda bookkeeping in the formal ring") {
    const int N = 2;
    FormalScalar a = FormalScalar::u(N, 1) +
                     FormalScalar::lambda(N) * G(N, 1, 2);
    CHECK(a.lambda_degree() == 1);
    CHECK(a.lambda_component(0) == FormalScalar::u(N, 1));
    CHECK(a.lambda_component(1) == G(N, 1, 2));
    CHECK(a.set_lambda(2) == FormalScalar::u(N, 1) + FormalScalar::u(N, 2) * G(N, 1, 2));
}
