#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bihamo/cohomology.hpp"
#include "testutil.hpp"

using namespace bihamo;
using testutil::rand_separable;
using testutil::Rng;
using testutil::th;
using testutil::uj;

namespace {

using Elem = ElementT<CoeffFn>;
using Op = OperatorId<CoeffFn>;

PencilData unit_pencil(int N) {
    CoeffCtx cx{N};
    std::vector<CoeffFn> f((size_t)N, cx.one()), h((size_t)N, cx.one());
    return PencilData(N, std::move(f), std::move(h));
}

// N=2 pencil with square witnesses, f distinct so the D_i family is honest
PencilData pencil14() {
    CoeffCtx cx{2};
    return PencilData(2, {cx.one(), cx.rat(Rat(4))}, {{cx.one(), cx.rat(Rat(2))}});
}

Elem key_element(int N, const SliceKey& k) {
    UPoly q(N + 1);
    Expvec ev = k.uexp;
    ev.push_back((unsigned)k.lpow);
    q.add_term(ev, Rat(1));
    return Elem::monomial(k.mono, CoeffFn::from_poly(std::move(q)));
}

SliceSpec mk(int p, int d, int K, int L, SliceSpace space = SliceSpace::AFull, int i = 0,
             Op diff = Op::d_lambda()) {
    SliceSpec s;
    s.p = p;
    s.d = d;
    s.K = K;
    s.L = L;
    s.space = space;
    s.i = i;
    s.differential = diff;
    return s;
}

bool all_zero(const CohomologyReport& r) {
    for (const auto& row : r.rows)
        if (row.dim_h != 0) return false;
    return true;
}

// zero on every certified interior degree, and certified by stabilization
void require_certified_vanishing(const CohomologyReport& r) {
    REQUIRE(r.interior_limit >= 0);
    REQUIRE(r.stabilized);
    for (int k = 0; k <= r.interior_limit; ++k) REQUIRE(r.interior[(size_t)k] == 0);
}

}  // namespace

TEST_CASE("assemble enumerates the window and applies the differential") {
    PencilData p = unit_pencil(1);

    SliceMatrix m = assemble(mk(0, 1, 0, 0, SliceSpace::AFull, 0, Op::delta_minus1()), p);
    REQUIRE(m.cols.size() == 1);
    REQUIRE(m.cols[0].mono.str() == "u[1,1]");
    REQUIRE(m.span[0].size() == 1);
    REQUIRE(m.image[0].size() == 2);
    REQUIRE(exact_rank(m) == 1);
    REQUIRE(m.codomain.p == 1);
    REQUIRE(m.codomain.d == 2);
    REQUIRE(m.codomain.K == 1);
    REQUIRE(m.codomain.L == 1);

    // the (3,3) slice has a single monomial; its d_lambda image lands in the
    // empty (4,4) slice, so every image column vanishes
    SliceMatrix top = assemble(mk(3, 3, 2, 1), p);
    REQUIRE(top.cols.size() == 3 * 2);
    REQUIRE(exact_rank(top) == 0);
    for (const auto& v : top.image) REQUIRE(v.empty());

    // negative budgets mean an empty window
    REQUIRE(assemble(mk(3, 3, -1, 0), p).cols.empty());
    REQUIRE(assemble(mk(-1, 0, 2, 2), p).cols.empty());

    // Euler operator keeps the bidegree
    SliceMatrix eu = assemble(mk(1, 1, 1, 0, SliceSpace::AFull, 0, Op::euler(1)), p);
    REQUIRE(eu.codomain.p == 1);
    REQUIRE(eu.codomain.d == 1);
}

TEST_CASE("slice keys print readably") {
    SliceKey k;
    k.uexp = {2, 0};
    k.lpow = 1;
    REQUIRE(k.str() == "u1^2 lambda");
    SliceKey one;
    one.uexp = {0};
    REQUIRE(one.str() == "1");
}

TEST_CASE("parallel assembly agrees with serial") {
    PencilData p = unit_pencil(2);
    SliceSpec s = mk(2, 2, 2, 1);
    SliceMatrix a = assemble(s, p, true);
    SliceMatrix b = assemble(s, p, false);
    REQUIRE(a.cols.size() >= 48);  // large enough to actually split
    REQUIRE(a.cols == b.cols);
    REQUIRE(a.span == b.span);
    REQUIRE(a.image == b.image);
}

TEST_CASE("the composed differential vanishes on every window column") {
    Rng rng(0xc0c0a);
    for (int n = 0; n < 12; ++n) {
        int N = 1 + (int)rng.uniform(0, 1);
        PencilData p = rand_separable(rng, N, 2);
        REQUIRE(validate_ferapontov(p).pass);
        long g = 0;
        for (int i = 1; i <= N; ++i) g = std::max(g, p.f(i).num().total_degree());
        int pd = (int)rng.uniform(0, 2), dd = (int)rng.uniform(0, 2);
        int K = (int)rng.uniform(0, 1), L = (int)rng.uniform(0, 1);
        SliceSpec in = mk(pd, dd, K, L);
        SliceSpec at = mk(pd + 1, dd + 1, K + (int)g + 1, L + 1);
        auto z = compose(assemble(at, p), assemble(in, p));
        for (const auto& v : z) REQUIRE(v.empty());
    }
}

TEST_CASE("delta_minus1 composes to zero as well") {
    PencilData p = unit_pencil(2);
    SliceSpec in = mk(1, 1, 1, 1, SliceSpace::AFull, 0, Op::delta_minus1());
    SliceSpec at = mk(2, 2, 2, 2, SliceSpace::AFull, 0, Op::delta_minus1());
    auto z = compose(assemble(at, p), assemble(in, p));
    REQUIRE(!z.empty());
    for (const auto& v : z) REQUIRE(v.empty());
}

TEST_CASE("D_i squares to zero on substituted dhat representatives") {
    PencilData p = pencil14();
    for (int i = 1; i <= 2; ++i) {
        SliceMatrix m = assemble(mk(2, 2, 2, 1, SliceSpace::DCi, i, Op::di(i)), p);
        REQUIRE(!m.cols.empty());
        for (const auto& gen : m.cols) {
            Elem rep = apply(Op::dhat(i), p, key_element(2, gen)).set_lambda(i);
            Elem once = apply(Op::di(i), p, rep).set_lambda(i);
            REQUIRE(apply(Op::di(i), p, once).set_lambda(i).is_zero());
        }
    }
}

TEST_CASE("budget escapes and non-polynomial data are rejected") {
    CoeffCtx cx{1};
    PencilData p = unit_pencil(1);

    // a custom quadratic characteristic overflows the codomain budget sized
    // from the pencil's own f
    std::vector<CoeffFn> g = {cx.u(1) * cx.u(1)};
    REQUIRE_THROWS_AS(assemble(mk(1, 1, 1, 0, SliceSpace::AFull, 0, Op::d_g(g)), p),
                      TruncationOverflow);

    PencilData rational(1, {cx.one() / cx.u(1)});
    REQUIRE_THROWS_AS(assemble(mk(1, 1, 1, 0), rational), UnsupportedCoefficient);

    REQUIRE_THROWS_AS(assemble(mk(1, 1, 1, 0, SliceSpace::DCi, 3), p), IndexOutOfRange);
}

TEST_CASE("cohomology_dim validates the window pair") {
    PencilData p = unit_pencil(1);
    REQUIRE_THROWS_AS(cohomology_dim(mk(1, 1, -1, 0), mk(0, 0, -2, -1), p),
                      std::invalid_argument);
    // wrong bidegree feed
    REQUIRE_THROWS_AS(cohomology_dim(mk(1, 1, 2, 1), mk(1, 0, 1, 0), p), std::invalid_argument);
    // wrong window chain
    REQUIRE_THROWS_AS(cohomology_dim(mk(1, 1, 2, 1), mk(0, 0, 0, 0), p), std::invalid_argument);
    // wrong space
    REQUIRE_THROWS_AS(cohomology_dim(mk(1, 1, 2, 1), mk(0, 0, 1, 0, SliceSpace::CHat), p),
                      std::invalid_argument);
}

TEST_CASE("compose rejects span spaces and unchained windows") {
    PencilData p = pencil14();
    SliceMatrix dci = assemble(mk(2, 2, 1, 1, SliceSpace::DCi, 1, Op::di(1)), p);
    REQUIRE_THROWS_AS(compose(dci, dci), std::invalid_argument);
    SliceMatrix small = assemble(mk(1, 1, 0, 0), p);
    SliceMatrix in = assemble(mk(0, 0, 1, 1), p);
    REQUIRE_THROWS_AS(compose(small, in), std::invalid_argument);
}

TEST_CASE("window rows are local: enlarging the window preserves shared rows") {
    PencilData p = unit_pencil(1);
    auto big = cohomology_dim(mk(3, 3, 3, 2), mk(2, 2, 2, 1), p);
    auto small = cohomology_dim(mk(3, 3, 2, 1), mk(2, 2, 1, 0), p);
    for (int l = 0; l <= 1; ++l)
        for (int k = 0; k <= 2; ++k) {
            REQUIRE(big.row(k, l).dim_ker == small.row(k, l).dim_ker);
            REQUIRE(big.row(k, l).dim_im == small.row(k, l).dim_im);
            REQUIRE(big.row(k, l).dim_h == small.row(k, l).dim_h);
        }
}

TEST_CASE("exact ranks for the lowest nontrivial window") {
    // at bidegree (1,2) under delta_minus1 with one coordinate the kernel is
    // the theta^2-line, the incoming image identifies lambda with u, and the
    // quotient collapses to one class per substituted degree
    PencilData p = unit_pencil(1);
    for (int K = 1; K <= 3; ++K)
        for (int L = 0; L <= 2; ++L) {
            auto r = cohomology_dim(mk(1, 2, K, L, SliceSpace::AFull, 0, Op::delta_minus1()),
                                    mk(0, 1, K - 1, L - 1, SliceSpace::AFull, 0,
                                       Op::delta_minus1()),
                                    p);
            const auto& top = r.row(K, L);
            REQUIRE(top.dim_ker == (K + 1) * (L + 1));
            REQUIRE(top.dim_im == K * L);
            REQUIRE(top.dim_h == K + L + 1);
            REQUIRE(top.dim_space == 4 * (K + 1) * (L + 1));
        }
}

TEST_CASE("one-coordinate dimension table across bidegrees") {
    PencilData p = unit_pencil(1);

    // (0,0): kernel is exactly the lambda-line, no incoming differential
    auto r00 = cohomology_dim(mk(0, 0, 3, 2), mk(-1, -1, 2, 1), p);
    for (const auto& row : r00.rows) REQUIRE(row.dim_h == row.L + 1);

    // (1,1) and (2,2) vanish on all certified interior degrees
    for (int pd = 1; pd <= 2; ++pd) {
        auto r = cohomology_dim(mk(pd, pd, 4, 2), mk(pd - 1, pd - 1, 3, 1), p);
        require_certified_vanishing(r);
    }

    // (3,3): one class per joint degree, the d_lambda image is empty on the
    // lambda-free rows
    for (int K = 2; K <= 4; ++K)
        for (int L = 0; L <= 2; ++L) {
            auto r = cohomology_dim(mk(3, 3, K, L), mk(2, 2, K - 1, L - 1), p);
            for (int k = 0; k <= K; ++k) {
                REQUIRE(r.interior[(size_t)k] == k + 1);
                REQUIRE(r.row(k, 0).dim_h == k + 1);
            }
            REQUIRE(r.stabilized == (r.interior_limit >= 0));
            REQUIRE(r.interior.back() == K + 1);
        }
}

TEST_CASE("two-coordinate vanishing spots with constant pencil") {
    CoeffCtx cx{2};
    PencilData p(2, {cx.one(), cx.rat(Rat(2))});

    // fully empty tables
    for (auto [pd, dd] : {std::pair{0, 1}, std::pair{1, 2}}) {
        auto r = cohomology_dim(mk(pd, dd, 2, 2), mk(pd - 1, dd - 1, 1, 1), p);
        REQUIRE(all_zero(r));
        for (int x : r.interior) REQUIRE(x == 0);
    }

    // (2,1) and (3,2) vanish on the certified region; the remainder is
    // boundary artifact and labelled as such
    for (auto [pd, dd] : {std::pair{2, 1}, std::pair{3, 2}}) {
        auto r = cohomology_dim(mk(pd, dd, 3, 2), mk(pd - 1, dd - 1, 2, 1), p);
        require_certified_vanishing(r);
        for (const auto& row : r.rows) REQUIRE(row.boundary == (row.K > r.interior_limit));
    }

    // the (6,2) slice is empty outright
    REQUIRE(assemble(mk(6, 2, 2, 2), p).cols.empty());
    auto r62 = cohomology_dim(mk(6, 2, 2, 2), mk(5, 1, 1, 1), p);
    REQUIRE(all_zero(r62));
}

TEST_CASE("the full slice decomposes into CHat plus substituted dhat spans") {
    // top-row dim H under delta_minus1 equals the count of CHat generators
    // plus the substituted dhat(C_i) span ranks, window by window
    auto check = [](const PencilData& p, int N, int pd, int dd, int K, int L) {
        auto r = cohomology_dim(mk(pd, dd, K, L, SliceSpace::AFull, 0, Op::delta_minus1()),
                                mk(pd - 1, dd - 1, K - 1, L - 1, SliceSpace::AFull, 0,
                                   Op::delta_minus1()),
                                p);
        int expect = (int)assemble(mk(pd, dd, K, L, SliceSpace::CHat), p).cols.size();
        for (int i = 1; i <= N; ++i)
            expect += slice_space_dim(assemble(mk(pd, dd, K, L, SliceSpace::DCi, i, Op::di(i)), p));
        REQUIRE(r.rows.back().dim_h == expect);
    };
    PencilData p1 = unit_pencil(1);
    PencilData p2 = pencil14();
    for (int K = 1; K <= 2; ++K)
        for (int L = 0; L <= 1; ++L) {
            check(p1, 1, 1, 2, K, L);
            check(p2, 2, 1, 2, K, L);
            check(p2, 2, 2, 2, K, L);
        }
}

TEST_CASE("functional slices: vanishing at (2,2), one function of u at (2,3)") {
    PencilData p = unit_pencil(1);
    REQUIRE_THROWS_AS(bh_slice(p, 2, 1, 2, 2), RangeError);

    for (int K = 2; K <= 3; ++K)
        for (int L = 0; L <= 2; ++L) {
            auto r22 = bh_slice(p, 2, 2, K, L);
            REQUIRE(all_zero(r22));

            auto r23 = bh_slice(p, 2, 3, K, L);
            REQUIRE(r23.interior.back() == K + 1);
            REQUIRE(r23.stabilized == (r23.interior_limit >= 0));
            for (int k = 0; k <= K; ++k) REQUIRE(r23.interior[(size_t)k] == k + 1);
        }
}

TEST_CASE("representative verification") {
    PencilData p = unit_pencil(1);
    SliceSpec inc = mk(2, 2, 2, 1);

    // theta^0 theta^1 theta^2 u^m: closed, never exact
    for (int m = 0; m <= 2; ++m) {
        Elem cand = Elem::monomial(
            [&] {
                JetMonomial jm;
                jm.thetas = {{1, 0}, {1, 1}, {1, 2}};
                return jm;
            }(),
            [&] {
                UPoly q(2);
                Expvec e = {(unsigned)m, 0};
                q.add_term(e, Rat(1));
                return CoeffFn::from_poly(std::move(q));
            }());
        auto rep = verify_representative(p, cand, Op::d_lambda(), inc);
        REQUIRE(rep.cocycle);
        REQUIRE(!rep.coboundary);
        REQUIRE(rep.rank_with_candidate == rep.rank_incoming + 1);
    }

    // an incoming image is closed and exact
    Elem gen = Elem::monomial(
        [&] {
            JetMonomial jm;
            jm.thetas = {{1, 0}, {1, 2}};
            return jm;
        }(),
        CoeffFn::u(1, 1));
    Elem img = apply(Op::d_lambda(), p, gen);
    REQUIRE(!img.is_zero());
    auto rep = verify_representative(p, img, Op::d_lambda(), inc);
    REQUIRE(rep.cocycle);
    REQUIRE(rep.coboundary);

    // zero candidate is trivially both
    auto zr = verify_representative(p, Elem{}, Op::d_lambda(), inc);
    REQUIRE(zr.cocycle);
    REQUIRE(zr.coboundary);

    // mixed bidegrees are rejected
    Elem mixed = img + Elem::monomial(JetMonomial{}, CoeffFn::constant(1, Rat(1)));
    REQUIRE_THROWS_AS(verify_representative(p, mixed, Op::d_lambda(), inc),
                      std::invalid_argument);
}

TEST_CASE("representative verification on the substituted subcomplex") {
    PencilData p = pencil14();
    SliceSpec inc = mk(2, 2, 2, 1, SliceSpace::DCi, 1, Op::di(1));
    SliceMatrix m = assemble(inc, p);
    REQUIRE(!m.cols.empty());
    // a D_i image of a substituted representative is closed and exact
    for (size_t j = 0; j < m.cols.size() && j < 4; ++j) {
        Elem rep0 = apply(Op::dhat(1), p, key_element(2, m.cols[j])).set_lambda(1);
        Elem img = apply(Op::di(1), p, rep0).set_lambda(1);
        if (img.is_zero()) continue;
        auto rep = verify_representative(p, img, Op::di(1), inc);
        REQUIRE(rep.cocycle);
        REQUIRE(rep.coboundary);
    }
}

TEST_CASE("random windows keep ranks consistent") {
    Rng rng(0xd1ce);
    for (int n = 0; n < 24; ++n) {
        int N = 1 + (int)rng.uniform(0, 1);
        PencilData p = rand_separable(rng, N, 1);
        int pd = (int)rng.uniform(0, 3), dd = (int)rng.uniform(0, 3);
        int K = (int)rng.uniform(0, 2), L = (int)rng.uniform(0, 1);
        long g = 0;
        for (int i = 1; i <= N; ++i) g = std::max(g, p.f(i).num().total_degree());
        auto r = cohomology_dim(mk(pd, dd, K, L), mk(pd - 1, dd - 1, K - (int)g - 1, L - 1), p);
        for (const auto& row : r.rows) {
            REQUIRE(row.dim_h >= 0);
            REQUIRE(row.dim_ker <= row.dim_space);
            REQUIRE(row.dim_im <= row.dim_ker);
        }
        // profiles are monotone in the cut
        for (size_t k = 1; k < r.interior.size(); ++k)
            REQUIRE(r.interior[k] >= r.interior[k - 1]);
    }
}
