#include "bihamo/cohomology.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <utility>

namespace bihamo {

namespace {

using Elem = ElementT<CoeffFn>;
using Op = OperatorId<CoeffFn>;
using Applier = std::function<Elem(const Elem&)>;

// ---- exact sparse column algebra ----

// v += c * w, dropping entries that cancel.
void axpy(SliceVec& v, const Rat& c, const SliceVec& w) {
    for (const auto& [k, q] : w) {
        auto [it, fresh] = v.try_emplace(k, Rat(0));
        it->second += c * q;
        if (rat_is_zero(it->second)) v.erase(it);
    }
}

void scale(SliceVec& v, const Rat& c) {
    for (auto& [k, q] : v) q *= c;
}

// Pivots are normalized to leading coefficient 1 and keyed by their leading
// basis triple, so reduction eliminates the leading term exactly.
struct Elim {
    std::map<SliceKey, SliceVec> pivots;
    int rank = 0;

    void reduce(SliceVec& v) const {
        while (!v.empty()) {
            auto it = pivots.find(v.begin()->first);
            if (it == pivots.end()) return;
            Rat c = -v.begin()->second;
            axpy(v, c, it->second);
        }
    }
    bool add(SliceVec v) {
        reduce(v);
        if (v.empty()) return false;
        scale(v, Rat(1) / v.begin()->second);
        SliceKey k = v.begin()->first;
        pivots.emplace(std::move(k), std::move(v));
        ++rank;
        return true;
    }
};

int rank_of(std::initializer_list<const std::vector<SliceVec>*> groups) {
    Elim e;
    for (const auto* g : groups)
        for (const auto& v : *g) e.add(v);
    return e.rank;
}

using Combo = std::map<size_t, Rat>;

void axpy_combo(Combo& a, const Rat& c, const Combo& b) {
    for (const auto& [t, q] : b) {
        auto [it, fresh] = a.try_emplace(t, Rat(0));
        it->second += c * q;
        if (rat_is_zero(it->second)) a.erase(it);
    }
}

// Combinations of `cols` that land in the span of `mod`: the kernel of the
// induced map modulo that subspace.  Elimination with combination tracking;
// the mod columns seed untracked pivots.
std::vector<Combo> kernel_combos(const std::vector<SliceVec>& cols,
                                 const std::vector<SliceVec>& mod) {
    struct Piv {
        SliceVec col;
        Combo combo;
        bool tracked = false;
    };
    std::map<SliceKey, Piv> pivots;

    auto feed = [&](SliceVec w, Combo cb, bool tracked) -> std::optional<Combo> {
        while (!w.empty()) {
            auto it = pivots.find(w.begin()->first);
            if (it == pivots.end()) break;
            Rat c = -w.begin()->second;
            axpy(w, c, it->second.col);
            if (it->second.tracked) axpy_combo(cb, c, it->second.combo);
        }
        if (w.empty()) return cb;
        Rat inv = Rat(1) / w.begin()->second;
        scale(w, inv);
        for (auto& [t, q] : cb) q *= inv;
        SliceKey k = w.begin()->first;
        pivots.emplace(std::move(k), Piv{std::move(w), std::move(cb), tracked});
        return std::nullopt;
    };

    for (const auto& q : mod) feed(q, {}, false);
    std::vector<Combo> out;
    for (size_t j = 0; j < cols.size(); ++j) {
        auto r = feed(cols[j], Combo{{j, Rat(1)}}, true);
        if (r && !r->empty()) out.push_back(std::move(*r));
    }
    return out;
}

// ---- window enumeration ----

// All u-exponent vectors with total degree <= K, in a fixed lexicographic
// order.
std::vector<Expvec> umonos(int N, int K) {
    std::vector<Expvec> out;
    if (K < 0) return out;
    Expvec cur((size_t)N, 0u);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == N) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur[(size_t)pos] = (unsigned)e;
            rec(pos + 1, left - e);
        }
        cur[(size_t)pos] = 0;
    };
    rec(0, K);
    return out;
}

std::vector<SliceKey> window_triples(int pdeg, int ddeg, int K, int L, int N, SliceSpace space,
                                     int ci) {
    std::vector<SliceKey> out;
    if (pdeg < 0 || ddeg < 0 || K < 0 || L < 0) return out;
    const auto ues = umonos(N, K);
    for (const auto& m : slice_basis(pdeg, ddeg, N)) {
        if (space == SliceSpace::CHat && subspace_classify(m).kind != SubspaceKind::CHat) continue;
        if (space == SliceSpace::DCi) {
            Subspace s = subspace_classify(m);
            if (s.kind != SubspaceKind::CIntN || s.i != ci) continue;
        }
        for (const auto& ue : ues)
            for (int lp = 0; lp <= L; ++lp) out.push_back({m, ue, lp});
    }
    return out;
}

CoeffFn key_coeff(int N, const Expvec& ue, int lp) {
    UPoly q(N + 1);
    Expvec ev = ue;
    ev.push_back((unsigned)lp);
    q.add_term(ev, Rat(1));
    return CoeffFn::from_poly(std::move(q));
}

Elem key_elem(int N, const SliceKey& k) {
    return Elem::monomial(k.mono, key_coeff(N, k.uexp, k.lpow));
}

// ---- operator plumbing ----

std::pair<int, int> op_bidegree(const Op& op) {
    using K_ = Op::Kind;
    switch (op.kind) {
        case K_::Euler:
        case K_::Deltahat:
            return {0, 0};
        default:
            return {1, 1};
    }
}

long max_f_degree(const PencilData& p) {
    long g = 0;
    for (int i = 1; i <= p.coord_count(); ++i) {
        const CoeffFn& f = p.f(i);
        if (!f.is_polynomial())
            throw UnsupportedCoefficient("f^" + std::to_string(i) +
                                         " is not polynomial: " + f.str());
        g = std::max(g, f.num().total_degree());
    }
    return g;
}

template <class OpObj>
Applier wrap_op(OpObj o) {
    auto sp = std::make_shared<OpObj>(std::move(o));
    return [sp](const Elem& a) { return (*sp)(a); };
}

// One reusable operator instance; the generator-image caches inside make it
// per-thread state, so parallel assembly builds one applier per thread.
Applier make_applier(const Op& op, const PencilData& p) {
    using K_ = Op::Kind;
    switch (op.kind) {
        case K_::DG:
            if ((int)op.g.size() != p.coord_count())
                throw RingMismatch("need one coefficient function per coordinate");
            return wrap_op(d_g(p, gvec_custom(op.g)));
        case K_::DLambda:
            return wrap_op(d_lambda(p));
        case K_::DeltaMinus1:
            return wrap_op(delta_minus1(p));
        case K_::Dhat:
            return wrap_op(dhat(p, op.i));
        case K_::Delta0Appendix:
            return wrap_op(delta0_appendix(p));
        case K_::Delta01Tilde:
            return wrap_op(delta01_tilde(p));
        case K_::Delta01:
            return wrap_op(delta01(p));
        case K_::Delta00:
            return wrap_op(delta00(p));
        case K_::Delta0Minus1:
            return wrap_op(delta0_minus1(p));
        case K_::DiTilde:
            return wrap_op(di_tilde(p, op.i));
        case K_::Di:
            return wrap_op(di(p, op.i));
        case K_::DiTildePrime:
            return wrap_op(di_tilde_prime(p, op.i));
        case K_::Deltahat:
            return wrap_op(deltahat(p, op.k, op.i));
        case K_::Di1:
            return wrap_op(di_1(p, op.i));
        case K_::Delta0Up1:
            return wrap_op(delta0_up1(p));
        case K_::Delta011:
            return wrap_op(delta0_11(p));
        case K_::Delta010:
            return wrap_op(delta0_10(p));
        case K_::DeltaBar:
            return wrap_op(delta_bar(p));
        case K_::Euler:
            return wrap_op(euler_op(p, op.i));
    }
    throw std::logic_error("unhandled operator kind");
}

// Window-coordinate expansion with the truncation-closure checks: terms must
// sit at the expected bidegree, coefficients must be polynomial, and the
// (Kcap, Lcap) budget must contain every monomial.
void add_to_col(SliceVec& col, const Elem& e, long kcap, int lcap, int pdeg, int ddeg,
                const std::string& what) {
    for (const auto& [m, c] : e.terms()) {
        if (m.theta_degree() != pdeg || m.standard_degree() != ddeg)
            throw TruncationOverflow(what + ": term " + m.str() + " leaves bidegree (" +
                                     std::to_string(pdeg) + "," + std::to_string(ddeg) + ")");
        if (!c.is_polynomial())
            throw UnsupportedCoefficient(what + ": coefficient " + c.str() +
                                         " is not polynomial");
        for (const auto& [ev, q] : c.num().terms()) {
            SliceKey k;
            k.mono = m;
            k.uexp.assign(ev.begin(), ev.end() - 1);
            k.lpow = (int)ev.back();
            if (k.udeg() > kcap || k.lpow > lcap)
                throw TruncationOverflow(what + ": " + k.str() + " escapes the (" +
                                         std::to_string(kcap) + "," + std::to_string(lcap) +
                                         ") window");
            auto [it, fresh] = col.try_emplace(std::move(k), Rat(0));
            it->second += q;
            if (rat_is_zero(it->second)) col.erase(it);
        }
    }
}

// d/dx-image of the window one standard degree down, plus the constant lines
// at bidegree (0,0): the subspaces an F_hat slice divides out.
void dx_quot(int N, int pdeg, int ddeg, int K, int L, std::vector<SliceKey>& qcols,
             std::vector<SliceVec>& qvecs) {
    for (const auto& gen : window_triples(pdeg, ddeg - 1, K, L, N, SliceSpace::AFull, 0)) {
        SliceVec col;
        add_to_col(col, elem_dx(key_elem(N, gen)), K, L, pdeg, ddeg, "d/dx image");
        if (col.empty()) continue;
        qcols.push_back(gen);
        qvecs.push_back(std::move(col));
    }
    if (pdeg == 0 && ddeg == 0 && K >= 0) {
        for (int lp = 0; lp <= L; ++lp) {
            SliceKey k{JetMonomial{}, Expvec((size_t)N, 0u), lp};
            qcols.push_back(k);
            qvecs.push_back(SliceVec{{k, Rat(1)}});
        }
    }
}

std::vector<int> select(const std::vector<SliceKey>& keys, long kcap, int lcap) {
    std::vector<int> idx;
    if (kcap < 0 || lcap < 0) return idx;
    for (size_t j = 0; j < keys.size(); ++j)
        if (keys[j].udeg() <= kcap && keys[j].lpow <= lcap) idx.push_back((int)j);
    return idx;
}

// lambda carries coordinate degree, so udeg + lpow is the degree the
// interior profile filters by.
std::vector<int> select_joint(const std::vector<SliceKey>& keys, long cap) {
    std::vector<int> idx;
    if (cap < 0) return idx;
    for (size_t j = 0; j < keys.size(); ++j)
        if (keys[j].udeg() + keys[j].lpow <= cap) idx.push_back((int)j);
    return idx;
}

std::vector<SliceVec> pick(const std::vector<SliceVec>& v, const std::vector<int>& idx) {
    std::vector<SliceVec> out;
    out.reserve(idx.size());
    for (int j : idx) out.push_back(v[(size_t)j]);
    return out;
}

bool window_live(const SliceSpec& s) { return s.p >= 0 && s.d >= 0 && s.K >= 0 && s.L >= 0; }

}  // namespace

std::string SliceKey::str() const {
    std::string s;
    auto sep = [&] {
        if (!s.empty()) s += " ";
    };
    for (size_t t = 0; t < uexp.size(); ++t) {
        if (!uexp[t]) continue;
        sep();
        s += "u" + std::to_string(t + 1);
        if (uexp[t] > 1) s += "^" + std::to_string(uexp[t]);
    }
    if (lpow) {
        sep();
        s += "lambda";
        if (lpow > 1) s += "^" + std::to_string(lpow);
    }
    if (!mono.empty()) {
        sep();
        s += mono.str();
    }
    return s.empty() ? "1" : s;
}

SliceMatrix assemble(const SliceSpec& spec, const PencilData& p, bool parallel) {
    const int N = p.coord_count();
    const long g = max_f_degree(p);
    const auto [dp, dd] = op_bidegree(spec.differential);

    SliceMatrix m;
    m.domain = spec;
    m.codomain = spec;
    m.codomain.p = spec.p + dp;
    m.codomain.d = spec.d + dd;
    m.codomain.K = spec.K + (int)g + 1;
    m.codomain.L = spec.L + 1;
    m.fdeg = g;

    if (!window_live(spec)) return m;

    const bool dci = spec.space == SliceSpace::DCi;
    if (dci) {
        opdetail::check_index(spec.i, N);
        m.cols = window_triples(spec.p - 1, spec.d - 1, spec.K, spec.L, N, SliceSpace::DCi,
                                spec.i);
    } else {
        m.cols = window_triples(spec.p, spec.d, spec.K, spec.L, N, spec.space, spec.i);
    }

    const size_t n = m.cols.size();
    m.span.assign(n, {});
    m.image.assign(n, {});

    // After the lambda -> u^i identification a DCi column is lambda-free
    // with the lambda budget folded into the u-degree.
    const long span_kcap = dci ? (long)spec.K + spec.L : spec.K;
    const long im_kcap = dci ? (long)m.codomain.K + m.codomain.L : m.codomain.K;
    const int im_lcap = dci ? 0 : m.codomain.L;

    auto work = [&](size_t lo, size_t hi) {
        Applier dop = make_applier(spec.differential, p);
        for (size_t j = lo; j < hi; ++j) {
            Elem rep = key_elem(N, m.cols[j]);
            if (dci) {
                rep = apply(Op::dhat(spec.i), p, rep).set_lambda(spec.i);
                add_to_col(m.span[j], rep, span_kcap, 0, spec.p, spec.d, "spanning vector");
                if (rep.is_zero()) continue;
            } else {
                m.span[j].emplace(m.cols[j], Rat(1));
            }
            Elem im = dop(rep);
            if (dci) im = im.set_lambda(spec.i);
            add_to_col(m.image[j], im, im_kcap, im_lcap, m.codomain.p, m.codomain.d,
                       "differential image");
        }
    };

    const unsigned hw = std::thread::hardware_concurrency();
    const size_t nthreads = std::min<size_t>(hw ? hw : 1, 8);
    if (parallel && nthreads > 1 && n >= 48) {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(nthreads);
        const size_t chunk = (n + nthreads - 1) / nthreads;
        for (size_t t = 0; t < nthreads; ++t) {
            size_t lo = t * chunk, hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi, t] {
                try {
                    work(lo, hi);
                } catch (...) {
                    errs[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& e : errs)
            if (e) std::rethrow_exception(e);
    } else {
        work(0, n);
    }

    if (spec.space == SliceSpace::FHat) {
        dx_quot(N, spec.p, spec.d, spec.K, spec.L, m.domain_quot_cols, m.domain_quot);
        dx_quot(N, m.codomain.p, m.codomain.d, m.codomain.K, m.codomain.L, m.codomain_quot_cols,
                m.codomain_quot);
    }
    return m;
}

int exact_rank(const SliceMatrix& m) { return rank_of({&m.image}); }

int slice_rank(const std::vector<SliceVec>& cols) { return rank_of({&cols}); }

int slice_space_dim(const SliceMatrix& m) {
    return rank_of({&m.span, &m.domain_quot}) - rank_of({&m.domain_quot});
}

std::vector<SliceVec> compose(const SliceMatrix& at, const SliceMatrix& incoming) {
    if (at.domain.space == SliceSpace::DCi)
        throw std::invalid_argument("composition needs unit basis columns on the at-side");
    std::map<SliceKey, size_t> index;
    for (size_t j = 0; j < at.cols.size(); ++j) index.emplace(at.cols[j], j);
    std::vector<SliceVec> out;
    out.reserve(incoming.image.size());
    for (const auto& v : incoming.image) {
        SliceVec acc;
        for (const auto& [k, c] : v) {
            auto it = index.find(k);
            if (it == index.end())
                throw std::invalid_argument("incoming image hits " + k.str() +
                                            " outside the at-domain window");
            axpy(acc, c, at.image[it->second]);
        }
        out.push_back(std::move(acc));
    }
    return out;
}

const CohomologyReport::Row& CohomologyReport::row(int k, int l) const {
    for (const auto& r : rows)
        if (r.K == k && r.L == l) return r;
    throw std::out_of_range("no (" + std::to_string(k) + "," + std::to_string(l) +
                            ") row in the report");
}

CohomologyReport cohomology_dim(const SliceSpec& at, const SliceSpec& incoming,
                                const PencilData& p) {
    if (!window_live(at)) throw std::invalid_argument("the at-window must be nonempty");
    const long g = max_f_degree(p);
    if (window_live(incoming)) {
        const auto [dp, dd] = op_bidegree(incoming.differential);
        if (incoming.p + dp != at.p || incoming.d + dd != at.d)
            throw std::invalid_argument("incoming bidegree does not feed the at-slice");
        if (incoming.K + (int)g + 1 != at.K || incoming.L + 1 != at.L)
            throw std::invalid_argument("incoming codomain window differs from the at-window");
        if (incoming.space != at.space ||
            (at.space == SliceSpace::DCi && incoming.i != at.i))
            throw std::invalid_argument("incoming space differs from the at-space");
    }

    const SliceMatrix A = assemble(at, p);
    const SliceMatrix In = assemble(incoming, p);

    CohomologyReport rep;
    rep.at = at;
    rep.incoming = incoming;
    rep.fdeg = g;
    rep.interior_limit = std::min(at.K - (int)g - 2, at.L - 1);

    for (int l = 0; l <= at.L; ++l) {
        for (int k = 0; k <= at.K; ++k) {
            const auto idx = select(A.cols, k, l);
            const auto span_f = pick(A.span, idx);
            const auto img_f = pick(A.image, idx);
            const auto qd = pick(A.domain_quot, select(A.domain_quot_cols, k, l));
            const auto qc =
                pick(A.codomain_quot, select(A.codomain_quot_cols, k + g + 1, l + 1));
            const auto in_f = pick(In.image, select(In.cols, k - g - 1, l - 1));

            const int rq = rank_of({&qd});

            std::vector<SliceVec> z;
            for (const auto& cb : kernel_combos(img_f, qc)) {
                SliceVec v;
                for (const auto& [t, c] : cb) axpy(v, c, span_f[t]);
                if (!v.empty()) z.push_back(std::move(v));
            }

            CohomologyReport::Row row;
            row.K = k;
            row.L = l;
            row.dim_space = rank_of({&span_f, &qd}) - rq;
            row.dim_ker = rank_of({&z, &qd}) - rq;
            row.dim_im = rank_of({&in_f, &qd}) - rq;
            row.dim_h = row.dim_ker - row.dim_im;
            row.boundary = k > rep.interior_limit;
            if (row.dim_h < 0)
                throw std::invalid_argument(
                    "incoming image leaves the kernel: the pair is not a complex on window (" +
                    std::to_string(k) + "," + std::to_string(l) + ")");
            rep.rows.push_back(row);
        }
    }

    // Kernel bases of the joint-degree cuts udeg + lpow <= k.
    std::vector<std::vector<SliceVec>> zcut((size_t)at.K + 1);
    for (int k = 0; k <= at.K; ++k) {
        const auto idx = select_joint(A.cols, k);
        const auto span_f = pick(A.span, idx);
        const auto img_f = pick(A.image, idx);
        const auto qc = pick(A.codomain_quot, select_joint(A.codomain_quot_cols, k + g + 1));
        for (const auto& cb : kernel_combos(img_f, qc)) {
            SliceVec v;
            for (const auto& [t, c] : cb) axpy(v, c, span_f[t]);
            if (!v.empty()) zcut[(size_t)k].push_back(std::move(v));
        }
    }

    // Interior profiles: classes representable with joint coefficient degree
    // <= k, against the full incoming window and against the incoming window
    // one K-step smaller.
    auto profile = [&](int kwin, std::vector<int>& out) {
        std::vector<SliceVec> im = pick(In.image, select(In.cols, kwin - g - 1, at.L - 1));
        const auto qd = pick(A.domain_quot, select(A.domain_quot_cols, kwin, at.L));
        for (const auto& v : qd) im.push_back(v);
        const int base = rank_of({&im});
        for (int k = 0; k <= kwin; ++k)
            out.push_back(rank_of({&zcut[(size_t)k], &im}) - base);
    };
    profile(at.K, rep.interior);
    if (at.K >= 1) profile(at.K - 1, rep.interior_prev);

    rep.stabilized = rep.interior_limit >= 0 && at.K >= 1;
    for (int k = 0; rep.stabilized && k <= rep.interior_limit; ++k)
        if (rep.interior[(size_t)k] != rep.interior_prev[(size_t)k]) rep.stabilized = false;
    return rep;
}

RepresentativeReport verify_representative(const PencilData& p, const ElementT<CoeffFn>& candidate,
                                           const OperatorId<CoeffFn>& diff,
                                           const SliceSpec& modulo_incoming) {
    RepresentativeReport rep;
    if (candidate.is_zero()) {
        rep.cocycle = true;
        rep.coboundary = true;
        return rep;
    }
    const auto tdeg = elem_degree(candidate, Grading::Theta);
    const auto sdeg = elem_degree(candidate, Grading::Standard);
    if (!tdeg || !sdeg)
        throw std::invalid_argument("candidate must be homogeneous in both gradings");

    const int N = p.coord_count();
    const long g = max_f_degree(p);
    const auto [dp, dd] = op_bidegree(diff);
    const int ap = (int)*tdeg, ad = (int)*sdeg;
    const bool dci = modulo_incoming.space == SliceSpace::DCi;

    long kcap;
    int lcap;
    if (window_live(modulo_incoming)) {
        const auto [ip, id] = op_bidegree(modulo_incoming.differential);
        if (modulo_incoming.p + ip != ap || modulo_incoming.d + id != ad)
            throw std::invalid_argument("candidate bidegree is not the incoming codomain");
        kcap = modulo_incoming.K + g + 1;
        lcap = modulo_incoming.L + 1;
    } else {
        // nothing to compare against: fit the window to the candidate
        kcap = 0;
        for (const auto& [m, c] : candidate.terms())
            kcap = std::max(kcap, c.coeff_u_degree());
        lcap = 0;
        for (const auto& [m, c] : candidate.terms())
            lcap = std::max(lcap, (int)std::max<long>(c.lambda_degree(), 0));
    }
    if (dci) {
        kcap += lcap;
        lcap = 0;
    }

    Elem cand = dci ? candidate.set_lambda(modulo_incoming.i) : candidate;
    SliceVec ccol;
    add_to_col(ccol, cand, kcap, lcap, ap, ad, "candidate");

    // cocycle: the differential must vanish modulo the codomain quotient
    Elem im = apply(diff, p, cand);
    if (dci) im = im.set_lambda(modulo_incoming.i);
    SliceVec icol;
    long im_kcap = kcap + g + 1 + (dci ? 1 : 0);
    int im_lcap = dci ? 0 : lcap + 1;
    add_to_col(icol, im, im_kcap, im_lcap, ap + dp, ad + dd, "candidate image");
    Elim cycle;
    if (modulo_incoming.space == SliceSpace::FHat) {
        std::vector<SliceKey> qcols;
        std::vector<SliceVec> qvecs;
        dx_quot(N, ap + dp, ad + dd, (int)im_kcap, im_lcap, qcols, qvecs);
        for (auto& v : qvecs) cycle.add(std::move(v));
    }
    cycle.reduce(icol);
    rep.cocycle = icol.empty();

    // coboundary: the candidate must not move the incoming image rank
    const SliceMatrix In = assemble(modulo_incoming, p);
    Elim bound;
    for (const auto& v : In.image) bound.add(v);
    for (const auto& v : In.codomain_quot) bound.add(v);
    rep.rank_incoming = bound.rank;
    bound.add(std::move(ccol));
    rep.rank_with_candidate = bound.rank;
    rep.coboundary = rep.rank_with_candidate == rep.rank_incoming;
    return rep;
}

CohomologyReport bh_slice(const PencilData& p, int pdeg, int ddeg, int K, int L) {
    if (ddeg < 2)
        throw RangeError("functional slices model the cohomology only for standard degree >= 2");
    const long g = max_f_degree(p);
    SliceSpec at{pdeg, ddeg, K, L, SliceSpace::FHat, 0, OperatorId<CoeffFn>::d_lambda()};
    SliceSpec in{pdeg - 1, ddeg - 1, K - (int)g - 1, L - 1, SliceSpace::FHat, 0,
                 OperatorId<CoeffFn>::d_lambda()};
    return cohomology_dim(at, in, p);
}

}  // namespace bihamo
