#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bihamo/operators.hpp"
#include "bihamo/pencil.hpp"

namespace bihamo {

// Finite linear models of the slice complexes: a bidegree-(p,d) slice with
// coefficients truncated to numerator u-degree <= K and lambda-degree <= L
// is a finite-dimensional Q-vector space, on which the differentials act as
// exact sparse matrices.

struct TruncationOverflow : std::domain_error {
    explicit TruncationOverflow(const std::string& what) : std::domain_error(what) {}
};
struct UnsupportedCoefficient : std::domain_error {
    explicit UnsupportedCoefficient(const std::string& what) : std::domain_error(what) {}
};
struct RangeError : std::domain_error {
    explicit RangeError(const std::string& what) : std::domain_error(what) {}
};

// A_full: the whole slice.  C_hat: only monomials free of positive jet
// content.  DCi: the image of dhat(i) on the single-index subspace one
// bidegree down, with lambda identified with u^i at the basis level.  FHat:
// the slice modulo the d/dx-image one standard degree down (and modulo
// constants at bidegree (0,0)).
enum class SliceSpace { AFull, CHat, DCi, FHat };

struct SliceSpec {
    int p = 0;
    int d = 0;
    int K = 0;  // max total u-degree of numerator coefficients
    int L = 0;  // max lambda-degree
    SliceSpace space = SliceSpace::AFull;
    int i = 0;  // carrier index, DCi only
    OperatorId<CoeffFn> differential = OperatorId<CoeffFn>::d_lambda();
};
// Negative p, d, K or L denote an empty window; incoming differentials into
// the smallest windows are vacuous that way.

// One basis triple of a window: jet monomial times u-monomial times lambda
// power.  uexp holds the exponents of u^1..u^N.
struct SliceKey {
    JetMonomial mono;
    Expvec uexp;
    int lpow = 0;

    auto operator<=>(const SliceKey&) const = default;
    long udeg() const { return expvec_total(uexp); }
    std::string str() const;
};

// Sparse column over the window basis.
using SliceVec = std::map<SliceKey, Rat>;

// The differential on one truncated slice.  Columns are labelled by the
// generator triples `cols`; `span[j]` is the j-th spanning vector of the
// domain space in window coordinates and `image[j]` its differential in
// codomain coordinates.  For A_full/C_hat/F_hat the spanning vectors are the
// unit vectors on `cols`; for DCi they are the dhat(i)-images of the
// generators with lambda set to u^i, so they need not be independent.  The
// quot columns span the subspaces divided out on each side (F_hat only).
// The codomain window is (K + maxdeg(f) + 1, L + 1) at the shifted bidegree,
// which contains the image exactly; assembly throws TruncationOverflow the
// moment a term escapes it.
struct SliceMatrix {
    SliceSpec domain;
    SliceSpec codomain;
    long fdeg = 0;  // maxdeg(f) behind the codomain window

    std::vector<SliceKey> cols;
    std::vector<SliceVec> span;
    std::vector<SliceVec> image;

    std::vector<SliceKey> domain_quot_cols;
    std::vector<SliceVec> domain_quot;
    std::vector<SliceKey> codomain_quot_cols;
    std::vector<SliceVec> codomain_quot;
};

SliceMatrix assemble(const SliceSpec& spec, const PencilData& p, bool parallel = true);

// Rank of the differential's columns over Q; exact and deterministic.
int exact_rank(const SliceMatrix& m);

// Rank of an arbitrary column collection (the pieces rank bookkeeping needs:
// spans, quotients, concatenations).
int slice_rank(const std::vector<SliceVec>& cols);

// dim of the domain space: rank of the span modulo the domain quotient.
int slice_space_dim(const SliceMatrix& m);

// at.image composed with incoming.image, for unit-column at-spaces; the
// complex property is the statement that every composed column is zero.
std::vector<SliceVec> compose(const SliceMatrix& at, const SliceMatrix& incoming);

// Scan of dim ker / dim im / dim H over all windows (k, l) <= (K, L).  Raw
// rows are exact for their own window; how they relate to the untruncated
// cohomology is certified only through stabilization.  `interior[k]` counts
// the classes of the full-window cohomology representable with joint
// coefficient degree udeg + lambda-deg <= k (lambda carries coordinate
// degree, so the joint degree is the one the truncation is honest about);
// `interior_prev` is the same profile against the incoming window one K-step
// smaller.  The flag records their agreement for k <= interior_limit =
// min(K - maxdeg(f) - 2, L - 1): a killer of a joint-degree-k class needs
// u-budget up to about k + maxdeg(f) + 1 and lambda-budget up to about k, so
// past that line the incoming window cannot resolve classes.  Degrees past
// the limit are boundary artifacts of the truncation and are labelled as
// such, and interior.back() is the headline stabilized dimension of the
// window.
struct CohomologyReport {
    struct Row {
        int K = 0, L = 0;
        int dim_space = 0;
        int dim_ker = 0;
        int dim_im = 0;
        int dim_h = 0;
        bool boundary = false;
    };
    SliceSpec at, incoming;
    long fdeg = 0;
    std::vector<Row> rows;  // l major, k minor
    std::vector<int> interior;
    std::vector<int> interior_prev;
    int interior_limit = -1;
    bool stabilized = false;

    const Row& row(int k, int l) const;
};

CohomologyReport cohomology_dim(const SliceSpec& at, const SliceSpec& incoming,
                                const PencilData& p);

// Cocycle/coboundary test for one candidate representative: diff(candidate)
// must vanish in the quotient, and the candidate must move the rank of the
// incoming image.  modulo_incoming is the spec of the incoming differential;
// the candidate lives in its codomain window.
struct RepresentativeReport {
    bool cocycle = false;
    bool coboundary = false;
    int rank_incoming = 0;
    int rank_with_candidate = 0;
};

RepresentativeReport verify_representative(const PencilData& p, const ElementT<CoeffFn>& candidate,
                                           const OperatorId<CoeffFn>& diff,
                                           const SliceSpec& modulo_incoming);

// The F_hat slice complex at (pdeg, ddeg) under the pencil differential;
// the quotient model represents the functional slices only for ddeg >= 2
// (RangeError below that).
CohomologyReport bh_slice(const PencilData& p, int pdeg, int ddeg, int K, int L);

}  // namespace bihamo
