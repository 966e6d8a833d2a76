#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bihamo/functionals.hpp"
#include "testutil.hpp"

using namespace bihamo;
using testutil::Rng;
using testutil::th;
using testutil::uj;

namespace {

using Elem = ElementT<CoeffFn>;
using FElem = ElementT<FormalScalar>;

PencilData unit_pencil(int N) {
    CoeffCtx cx{N};
    std::vector<CoeffFn> f((size_t)N, cx.one()), h((size_t)N, cx.one());
    return PencilData(N, std::move(f), std::move(h));
}

template <class R>
ElementT<R> mono(JetMonomial m, R c) {
    return ElementT<R>::monomial(std::move(m), std::move(c));
}

JetMonomial jm(std::vector<std::pair<JetVar, unsigned>> ujets, std::vector<JetVar> thetas) {
    JetMonomial m;
    int sign;
    REQUIRE(mono_normalize(std::move(ujets), std::move(thetas), m, sign));
    REQUIRE(sign == 1);
    return m;
}

// random element cut down to a single theta-degree; redraws until nonzero
Elem rand_homogeneous(Rng& rng, int N, int p) {
    for (int tries = 0; tries < 40; ++tries) {
        Elem e = homogeneous_component(testutil::rand_element(rng, N, 4, 2, p + 1), Grading::Theta,
                                       p);
        if (!e.is_zero()) return e;
    }
    return Elem::zero();
}

FElem rand_felem(Rng& rng, int N, int nterms) {
    FElem e;
    for (int t = 0; t < nterms; ++t) {
        JetMonomial m = testutil::rand_monomial(rng, N, 2, 2);
        FormalScalar c = FormalScalar::constant(N, rng.small_rat_nonzero());
        if (rng.uniform(0, 1)) c = c * FormalScalar::u(N, rng.uniform(1, N));
        e.add_term(m, c);
    }
    return e;
}

FElem rand_fhomogeneous(Rng& rng, int N, int p) {
    for (int tries = 0; tries < 40; ++tries) {
        FElem e = homogeneous_component(rand_felem(rng, N, 4), Grading::Theta, p);
        if (!e.is_zero()) return e;
    }
    return FElem::zero();
}

}  // namespace

TEST_CASE("variational derivative point checks") {
    CoeffCtx cx{1};
    // d/du^1 of (1/2)(u^{1,1})^2 is -u^{1,2}
    Elem a = mono(jm({{JetVar{1, 1}, 2}}, {}), cx.rat(rat(1, 2)));
    CHECK(variational(a, var_u(1)) == -mono(uj(1, 2), cx.one()));
    CHECK(variational(a, var_theta(1)).is_zero());

    // d/dtheta_1 of theta_1^1 u^{1,1} is -u^{1,2}
    Elem b = mono(jm({{JetVar{1, 1}, 1}}, {JetVar{1, 1}}), cx.one());
    CHECK(variational(b, var_theta(1)) == -mono(uj(1, 2), cx.one()));

    // the coordinate term differentiates through the coefficient ring
    Elem c = Elem::from_coeff(cx.u(1) * cx.u(1));
    CHECK(variational(c, var_u(1)) == Elem::from_coeff(cx.u(1).scaled(Rat(2))));
}

TEST_CASE("variational derivative kills x-derivatives") {
    Rng rng(71);
    for (int N : {1, 2, 3}) {
        for (int run = 0; run < 30; ++run) {
            Elem b = testutil::rand_element(rng, N, 3);
            Elem db = elem_dx(b);
            for (int i = 1; i <= N; ++i) {
                CHECK(variational(db, var_u(i)).is_zero());
                CHECK(variational(db, var_theta(i)).is_zero());
            }
        }
    }
    for (int run = 0; run < 20; ++run) {
        FElem b = rand_felem(rng, 2, 3);
        FElem db = elem_dx(b);
        for (int i = 1; i <= 2; ++i) {
            CHECK(variational(db, var_u(i)).is_zero());
            CHECK(variational(db, var_theta(i)).is_zero());
        }
    }
}

TEST_CASE("zero functional recognition") {
    CoeffCtx cx{1};
    // d_x(u^1 theta_1^0) = u^{1,1} theta_1^0 + u^1 theta_1^1
    Functional f1{mono(jm({{JetVar{1, 1}, 1}}, {JetVar{1, 0}}), cx.one()) +
                  mono(th(1, 1), cx.u(1))};
    CHECK(is_zero_functional(f1));
    CHECK(is_zero_functional(Functional{elem_dx(f1.density)}));

    CHECK(is_zero_functional(Functional{mono(uj(1, 1), cx.one())}));
    CHECK(!is_zero_functional(Functional{mono(th(1, 0), cx.one())}));

    // constants survive integration; non-constant coefficients fail earlier
    CHECK(!is_zero_functional(Functional{Elem::from_coeff(cx.one())}));
    CHECK(!is_zero_functional(Functional{Elem::from_coeff(cx.u(1))}));
    CHECK(is_zero_functional(Functional{Elem::zero()}));

    Rng rng(72);
    for (int run = 0; run < 25; ++run) {
        int N = rng.uniform(1, 3);
        Elem b = testutil::rand_element(rng, N, 3);
        CHECK(is_zero_functional(Functional{elem_dx(b)}));
        CoeffCtx cn{N};
        CHECK(!is_zero_functional(Functional{elem_dx(b) + Elem::from_coeff(cn.one())}));
    }
}

TEST_CASE("bracket point checks") {
    CoeffCtx cx{2};
    Functional A{mono(jm({}, {JetVar{1, 0}, JetVar{2, 0}}), cx.one())};
    Functional B{Elem::from_coeff(cx.u(1))};
    Functional expected{mono(th(2, 0), cx.one())};
    CHECK(schouten(A, B).density == expected.density);
    CHECK(is_zero_functional(schouten(A, B) - expected));

    // no theta content on either slot kills both summands
    CHECK(schouten(B, B).density.is_zero());

    Functional C{mono(th(1, 0), cx.one())};
    CHECK(schouten(C, C).density.is_zero());
    CHECK(is_zero_functional(schouten(C, C)));

    Functional mixed{mono(th(1, 0), cx.one()) + mono(jm({}, {JetVar{1, 0}, JetVar{2, 0}}), cx.one())};
    CHECK_THROWS_AS(schouten(mixed, B), NonHomogeneous);

    CoeffCtx c1{1};
    Functional other{ElementT<CoeffFn>::from_coeff(c1.u(1))};
    CHECK_THROWS_AS(schouten(A, other), RingMismatch);

    // zero on either side short-circuits the homogeneity requirement
    CHECK(schouten(Functional{Elem::zero()}, mixed).density.is_zero());
    CHECK(schouten(mixed, Functional{Elem::zero()}).density.is_zero());
}

TEST_CASE("bracket graded symmetry") {
    Rng rng(73);
    auto sgn = [](int e) { return e % 2 == 0 ? 1 : -1; };
    for (int run = 0; run < 40; ++run) {
        int N = rng.uniform(1, 2);
        int p = rng.uniform(0, 3), q = rng.uniform(0, 3);
        Functional A{rand_homogeneous(rng, N, p)};
        Functional B{rand_homogeneous(rng, N, q)};
        if (A.density.is_zero() || B.density.is_zero()) continue;
        Functional lhs = schouten(A, B);
        Functional rhs = schouten(B, A);
        if (sgn(p * q) < 0) rhs = -rhs;
        CHECK(is_zero_functional(lhs - rhs));
    }
    for (int run = 0; run < 15; ++run) {
        int p = rng.uniform(0, 2), q = rng.uniform(0, 2);
        FormalFunctional A{rand_fhomogeneous(rng, 2, p)};
        FormalFunctional B{rand_fhomogeneous(rng, 2, q)};
        if (A.density.is_zero() || B.density.is_zero()) continue;
        FormalFunctional lhs = schouten(A, B);
        FormalFunctional rhs = schouten(B, A);
        if (sgn(p * q) < 0) rhs = -rhs;
        CHECK(is_zero_functional(lhs - rhs));
    }
}

TEST_CASE("bracket jacobi identity on a curated set") {
    CoeffCtx cx{2};
    auto one = cx.one();
    Functional A{mono(jm({}, {JetVar{1, 0}, JetVar{2, 0}}), cx.u(1) * cx.u(2))};
    Functional B{mono(jm({{JetVar{2, 1}, 1}}, {JetVar{1, 0}}), one) + mono(th(1, 0), cx.u(1))};
    Functional C{mono(jm({{JetVar{1, 1}, 1}, {JetVar{2, 1}, 1}}, {}), one) +
                 mono(uj(1, 1), cx.u(1) * cx.u(2))};
    Functional D{mono(jm({}, {JetVar{1, 0}, JetVar{1, 1}}), cx.u(2)) +
                 mono(jm({}, {JetVar{2, 0}, JetVar{2, 1}}), cx.u(1))};
    Functional G{mono(jm({}, {JetVar{1, 0}, JetVar{2, 0}, JetVar{2, 1}}), cx.u(1))};

    struct Item {
        Functional f;
        int p;
    };
    std::vector<Item> set = {{A, 2}, {B, 1}, {C, 0}, {D, 2}, {G, 3}};
    auto sgn = [](int e) { return e % 2 == 0 ? 1 : -1; };
    auto scale = [](const Functional& f, int s) { return s < 0 ? -f : f; };

    // cyclic form: (-1)^{pr}[[X,Y],Z] + (-1)^{qp}[[Y,Z],X] + (-1)^{rq}[[Z,X],Y] = 0
    for (const auto& X : set)
        for (const auto& Y : set)
            for (const auto& Z : set) {
                Functional j = scale(schouten(schouten(X.f, Y.f), Z.f), sgn(X.p * Z.p)) +
                               scale(schouten(schouten(Y.f, Z.f), X.f), sgn(Y.p * X.p)) +
                               scale(schouten(schouten(Z.f, X.f), Y.f), sgn(Z.p * Y.p));
                CHECK(is_zero_functional(j));
            }
}

TEST_CASE("induced differential on classes") {
    PencilData p1 = unit_pencil(1);
    CoeffCtx cx{1};

    // jetless density c(u^1): the image is (u^1 - lambda) c' theta_1^1 plus
    // the metric's u^{1,1} theta_1^0 group
    CoeffFn c = cx.u(1) * cx.u(1);
    CoeffFn cp = c.partial(1);
    Functional F{Elem::from_coeff(c)};
    Elem image = d_lambda_functional(p1, F).density;
    Elem expected = mono(th(1, 1), (cx.u(1) - cx.lambda()) * cp) +
                    mono(jm({{JetVar{1, 1}, 1}}, {JetVar{1, 0}}), cp.scaled(rat(1, 2)));
    CHECK(image == expected);

    CHECK(d_lambda_functional(p1, Functional{Elem::zero()}).density.is_zero());

    Rng rng(74);
    for (int run = 0; run < 15; ++run) {
        Elem b = testutil::rand_element(rng, 1, 3);
        CHECK(is_zero_functional(d_lambda_functional(p1, Functional{elem_dx(b)})));
    }

    // the square vanishes as a functional only for pencils that satisfy the
    // Ferapontov equations
    PencilData p2 = testutil::rand_separable_witnessed(rng, 2);
    REQUIRE(validate_ferapontov(p2).pass);
    for (int run = 0; run < 10; ++run) {
        Functional F1{testutil::rand_element(rng, 1, 3)};
        CHECK(is_zero_functional(d_lambda_functional(p1, d_lambda_functional(p1, F1))));
        Functional F2{testutil::rand_element(rng, 2, 3)};
        CHECK(is_zero_functional(d_lambda_functional(p2, d_lambda_functional(p2, F2))));
    }
    FormalPencil fp(2);
    for (int run = 0; run < 5; ++run) {
        JetMonomial m = testutil::rand_monomial(rng, 2, 1, 2);
        FormalScalar c = FormalScalar::constant(2, rng.small_rat_nonzero());
        if (rng.uniform(0, 1)) c = c * FormalScalar::u(2, rng.uniform(1, 2));
        FormalFunctional F3{FElem::monomial(m, c)};
        CHECK(is_zero_functional(d_lambda_functional(fp, d_lambda_functional(fp, F3))));
    }
}

TEST_CASE("central invariants") {
    // the KdV normalization: N = 1, f = 1, A_{2,3;2} = 1/8
    {
        CoeffCtx cx{1};
        PencilData p(1, {cx.one()});
        DeformationCoeffs A(1);
        A.set(2, 3, 2, 1, 1, cx.rat(rat(1, 8)));
        CentralInvariants ci = central_invariants(p, A);
        REQUIRE(ci.c.size() == 1);
        CHECK(ci.c[0] == cx.rat(rat(1, 24)));
        CHECK(ci.all_single_variable());
    }
    // the all-zero deformation
    {
        CoeffCtx cx{2};
        PencilData p(2, {cx.one(), cx.one()});
        CentralInvariants ci = central_invariants(p, DeformationCoeffs(2));
        REQUIRE(ci.c.size() == 2);
        CHECK(ci.c[0].is_zero());
        CHECK(ci.c[1].is_zero());
        CHECK(ci.all_single_variable());
    }
    // non-deformation input trips the dependence check
    {
        CoeffCtx cx{2};
        PencilData p(2, {cx.one(), cx.one()});
        DeformationCoeffs A(2);
        A.set(1, 2, 2, 2, 1, cx.one());
        CentralInvariants ci = central_invariants(p, A);
        CoeffFn expected = cx.one() / (cx.u(2) - cx.u(1)).scaled(Rat(3));
        CHECK(ci.c[0] == expected);
        CHECK(ci.c[1].is_zero());
        CHECK(!ci.single_variable(1));
        CHECK(ci.single_variable(2));
        REQUIRE(ci.violations.size() == 1);
        CHECK(ci.violations[0] == std::pair<int, int>(1, 2));
    }
    // the first-order slot enters through -u^i A_{2,3;1}
    {
        CoeffCtx cx{1};
        PencilData p(1, {cx.one()});
        DeformationCoeffs A(1);
        A.set(2, 3, 1, 1, 1, cx.one());
        CentralInvariants ci = central_invariants(p, A);
        CHECK(ci.c[0] == cx.u(1).scaled(rat(-1, 3)));
        CHECK(ci.all_single_variable());
    }
    // nonconstant metric enters through 1/(3 f^2) and the k-sum denominator
    {
        CoeffCtx cx{2};
        CoeffFn h1 = cx.u(1) + cx.rat(Rat(2));
        PencilData p(2, {h1 * h1, cx.one()}, {{h1, cx.one()}});
        DeformationCoeffs A(2);
        A.set(2, 3, 2, 1, 1, cx.one());
        A.set(1, 2, 1, 2, 1, cx.one());
        CentralInvariants ci = central_invariants(p, A);
        CoeffFn f1 = h1 * h1;
        CoeffFn num = -cx.u(1);
        CoeffFn expected = (cx.one() + num * num / (cx.u(2) - cx.u(1))) / (f1 * f1).scaled(Rat(3));
        CHECK(ci.c[0] == expected);
        CHECK(!ci.single_variable(1));
    }
}

TEST_CASE("deformation coefficient errors") {
    DeformationCoeffs A(2);
    CoeffCtx cx{2};
    CHECK_THROWS_AS(A.set(0, 0, 1, 1, 1, cx.one()), IndexOutOfRange);
    CHECK_THROWS_AS(A.set(1, 3, 1, 1, 1, cx.one()), IndexOutOfRange);
    CHECK_THROWS_AS(A.set(1, 2, 3, 1, 1, cx.one()), IndexOutOfRange);
    CHECK_THROWS_AS(A.set(1, 2, 1, 3, 1, cx.one()), IndexOutOfRange);
    CHECK_THROWS_AS(A.get(1, 2, 1, 1, 0), IndexOutOfRange);
    CHECK(A.get(2, 3, 1, 2, 2).is_zero());

    PencilData p1 = unit_pencil(1);
    CHECK_THROWS_AS(central_invariants(p1, A), RingMismatch);
}
