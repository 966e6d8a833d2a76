#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bihamo/jet.hpp"
#include "testutil.hpp"

using namespace bihamo;
using testutil::Elem;
using testutil::Rng;

namespace {

JetMonomial mono(std::vector<std::pair<JetVar, unsigned>> u, std::vector<JetVar> th) {
    JetMonomial m;
    int sign;
    REQUIRE(mono_normalize(std::move(u), std::move(th), m, sign));
    REQUIRE(sign == 1);
    return m;
}

Elem one_term(int N, JetMonomial m) {
    return Elem::monomial(std::move(m), CoeffFn::constant(N, Rat(1)));
}

}  // namespace

TEST_CASE("monomial printing") {
    JetMonomial m = mono({{{1, 1}, 2}}, {{2, 0}});
    CHECK(m.str() == "u[1,1]^2 theta[2,0]");
    CHECK(JetMonomial{}.str() == "");
}

TEST_CASE("gradings of a mixed monomial") {
    JetMonomial m = mono({{{1, 2}, 1}, {{2, 1}, 3}}, {{1, 0}, {1, 3}, {2, 1}});
    CHECK(m.degree(Grading::Standard) == 2 + 3 + 0 + 3 + 1);
    CHECK(m.degree(Grading::Theta) == 3);
    CHECK(m.degree(Grading::DegU) == 4);
    CHECK(m.degree(Grading::Theta0) == 1);
    CHECK(m.degree(Grading::Theta1) == 1);
    CHECK(m.degree(Grading::ThetaGe2) == 1);
    CHECK(m.max_jet_order() == 3);
}

TEST_CASE("theta ordering carries the sign of the permutation") {
    JetMonomial m;
    int sign;
    REQUIRE(mono_normalize({}, {{2, 0}, {1, 0}}, m, sign));
    CHECK(sign == -1);
    CHECK(m.thetas.size() == 2);
    REQUIRE(!mono_normalize({}, {{1, 0}, {1, 0}}, m, sign));
}

TEST_CASE("product merges and annihilates") {
    JetMonomial a = mono({}, {{1, 0}});
    JetMonomial b = mono({}, {{2, 0}});
    JetMonomial ab, ba;
    int sa, sb;
    REQUIRE(mono_mul(a, b, ab, sa));
    REQUIRE(mono_mul(b, a, ba, sb));
    CHECK(ab == ba);
    CHECK(sa == -sb);
    JetMonomial sq;
    CHECK(!mono_mul(a, a, sq, sa));
}

TEST_CASE("slice basis at top theta degree") {
    auto rows = slice_basis(3, 3, 1);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].str() == "theta[1,0] theta[1,1] theta[1,2]");
}

TEST_CASE("slice basis small counts") {
    CHECK(slice_basis(1, 0, 2).size() == 2);
    CHECK(slice_basis(0, 1, 1).size() == 1);
    CHECK(slice_basis(1, 1, 1).size() == 2);
    CHECK(slice_basis(2, 1, 1).size() == 1);
    CHECK(slice_basis(0, 0, 3).size() == 1);
    for (const auto& m : slice_basis(2, 3, 2)) {
        CHECK(m.degree(Grading::Theta) == 2);
        CHECK(m.degree(Grading::Standard) == 3);
    }
}

TEST_CASE("slice basis monomials are distinct") {
    auto rows = slice_basis(2, 4, 2);
    for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1] < rows[i]);
}

TEST_CASE("subspace trichotomy") {
    CHECK(subspace_classify(mono({}, {{1, 0}, {2, 1}})).kind == SubspaceKind::CHat);
    Subspace s = subspace_classify(mono({{{2, 1}, 1}}, {{2, 3}}));
    CHECK(s.kind == SubspaceKind::CIntN);
    CHECK(s.i == 2);
    CHECK(subspace_classify(mono({{{1, 1}, 1}}, {{2, 2}})).kind == SubspaceKind::MHat);
}

TEST_CASE("euler weights") {
    JetMonomial m = mono({{{1, 1}, 1}}, {{1, 0}});
    CHECK(weight(m, 1) == rat(3, 2) + rat(-1, 2));
    CHECK(weight(m, 2) == Rat(0));
    CHECK(weight(mono({}, {{1, 3}}), 1) == Rat(1));
}

TEST_CASE("x-derivative raises jets and runs through coefficients") {
    const int N = 1;
    CoeffCtx cx{N};
    Elem c = Elem::from_coeff(cx.u(1));
    CHECK(elem_dx(c) == one_term(N, mono({{{1, 1}, 1}}, {})));
    Elem uj = one_term(N, mono({{{1, 1}, 1}}, {}));
    CHECK(elem_dx(uj) == one_term(N, mono({{{1, 2}, 1}}, {})));
    Elem th = one_term(N, mono({}, {{1, 0}}));
    CHECK(elem_dx(th) == one_term(N, mono({}, {{1, 1}})));
    Elem sq = one_term(N, mono({{{1, 1}, 2}}, {}));
    CHECK(elem_dx(sq) == one_term(N, mono({{{1, 1}, 1}, {{1, 2}, 1}}, {})).scaled(Rat(2)));
}

TEST_CASE("graded commutativity") {
    Rng rng(0x5eedaa01);
    int done = 0;
    while (done < 200) {
        int N = 1 + (done % 2);
        JetMonomial ma = testutil::rand_monomial(rng, N, 3, 3);
        JetMonomial mb = testutil::rand_monomial(rng, N, 3, 3);
        Elem a = Elem::monomial(ma, testutil::rand_coeff(rng, N, false, false));
        Elem b = Elem::monomial(mb, testutil::rand_coeff(rng, N, true, false));
        if (a.is_zero() || b.is_zero()) continue;
        long p = ma.degree(Grading::Theta), q = mb.degree(Grading::Theta);
        Elem rhs = (p * q) % 2 ? -(b * a) : b * a;
        CHECK(a * b == rhs);
        ++done;
    }
}

TEST_CASE("x-derivative is a derivation") {
    Rng rng(0x5eedaa02);
    for (int it = 0; it < 200; ++it) {
        int N = 1 + (it % 2);
        Elem a = testutil::rand_element(rng, N, 2);
        Elem b = testutil::rand_element(rng, N, 2);
        CHECK(elem_dx(a * b) == elem_dx(a) * b + a * elem_dx(b));
    }
}

TEST_CASE("theta derivative is a left anti-derivation") {
    Rng rng(0x5eedaa03);
    int done = 0;
    while (done < 200) {
        int N = 1 + (done % 2);
        JetMonomial ma = testutil::rand_monomial(rng, N, 2, 2);
        Elem a = Elem::monomial(ma, testutil::rand_coeff(rng, N, false, false));
        Elem b = testutil::rand_element(rng, N, 2);
        if (a.is_zero()) continue;
        JetVar v{(uint16_t)rng.uniform(1, N), (uint16_t)rng.uniform(0, 2)};
        Elem lhs = (a * b).partial_theta(v);
        Elem sgn_a = ma.degree(Grading::Theta) % 2 ? -a : a;
        CHECK(lhs == a.partial_theta(v) * b + sgn_a * b.partial_theta(v));
        ++done;
    }
}

TEST_CASE("jet partials commute with each other") {
    Rng rng(0x5eedaa04);
    for (int it = 0; it < 100; ++it) {
        int N = 2;
        Elem a = testutil::rand_element(rng, N, 3);
        JetVar v{1, 1}, w{2, 1};
        CHECK(a.partial_ujet(v).partial_ujet(w) == a.partial_ujet(w).partial_ujet(v));
        CHECK(a.partial_ujet(v).partial_coord(2) == a.partial_coord(2).partial_ujet(v));
    }
}

TEST_CASE("homogeneous components reassemble") {
    Rng rng(0x5eedaa05);
    for (int it = 0; it < 50; ++it) {
        Elem a = testutil::rand_element(rng, 2, 4);
        for (Grading g : {Grading::Standard, Grading::Theta, Grading::DegU}) {
            Elem sum;
            for (long k = 0; k <= 12; ++k) sum = sum + homogeneous_component(a, g, k);
            CHECK(sum == a);
        }
    }
}

TEST_CASE("degree reports homogeneity or nothing") {
    const int N = 2;
    CoeffCtx cx{N};
    Elem a = one_term(N, mono({}, {{1, 1}}));
    CHECK(elem_degree(a, Grading::Standard) == 1);
    Elem b = a + one_term(N, mono({{{1, 1}, 2}}, {}));
    CHECK(!elem_degree(b, Grading::Standard).has_value());
    Elem lam = Elem::from_coeff(cx.lambda() * cx.u(1));
    CHECK(elem_degree(lam, Grading::Lambda) == 1);
    Elem mixed = Elem::from_coeff(cx.lambda() + cx.u(1));
    CHECK(!elem_degree(mixed, Grading::Lambda).has_value());
}
