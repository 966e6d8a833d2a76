#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bihamo/expr.hpp"
#include "bihamo/functionals.hpp"
#include "bihamo/pencil.hpp"

namespace bihamo {

struct PencilFileError : std::runtime_error {
    int line;  // 1-based; 0 when the error is not tied to a single line
    PencilFileError(const std::string& what, int l)
        : std::runtime_error(l > 0 ? "line " + std::to_string(l) + ": " + what : what),
          line(l) {}
};

enum class PencilMode { Concrete, Formal };

// Line-oriented pencil description.  Each line is `key = expression`; '#'
// starts a comment.  Keys: `N` (first), `mode` (concrete | formal, default
// concrete), metric entries `f1..fN`, optional witnesses `h1..hN` (all or
// none), and deformation entries `A[k][l][a][i][j]`.  Expressions use u1..uN
// and lambda, but pencil data itself must be lambda-free; in formal mode the
// metric is symbolic and no data lines are accepted.  Witness consistency
// h^2 = f is checked at load.
struct PencilFile {
    int N = 0;
    PencilMode mode = PencilMode::Concrete;
    std::vector<ExprAst> f;  // size N in concrete mode
    std::vector<ExprAst> h;  // empty or size N
    std::vector<std::pair<std::array<int, 5>, ExprAst>> deformation;

    bool has_witness() const { return !h.empty(); }
    bool has_deformation() const { return !deformation.empty(); }

    PencilData concrete() const;
    FormalPencil formal() const;
    DeformationCoeffs deformation_coeffs() const;
};

PencilFile load_pencil_file(std::istream& in);
PencilFile load_pencil_file(const std::string& path);

}  // namespace bihamo
