#include "bihamo/pencilfile.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace bihamo {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace((unsigned char)s[a])) ++a;
    while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
    return s.substr(a, b - a);
}

// `u`-indexed key like f2 or h1; returns 0 when the shape does not match
int indexed_key(const std::string& key, char prefix) {
    if (key.size() < 2 || key[0] != prefix) return 0;
    for (size_t k = 1; k < key.size(); ++k)
        if (!std::isdigit((unsigned char)key[k])) return 0;
    try {
        return std::stoi(key.substr(1));
    } catch (const std::exception&) {
        return 0;
    }
}

// A[k][l][a][i][j]
bool deformation_key(const std::string& key, std::array<int, 5>& out) {
    size_t at = 1;
    if (key.empty() || key[0] != 'A') return false;
    for (int slot = 0; slot < 5; ++slot) {
        if (at >= key.size() || key[at] != '[') return false;
        size_t close = key.find(']', ++at);
        if (close == std::string::npos || close == at) return false;
        try {
            out[(size_t)slot] = std::stoi(key.substr(at, close - at));
        } catch (const std::exception&) {
            return false;
        }
        at = close + 1;
    }
    return at == key.size();
}

CoeffFn eval_lambda_free(const ExprAst& e, const std::string& key, int line) {
    CoeffFn v = expr_eval(e);
    if (v.lambda_degree() != 0)
        throw PencilFileError("lambda is not allowed in pencil data (" + key + ")", line);
    return v;
}

}  // namespace

PencilData PencilFile::concrete() const {
    if (mode != PencilMode::Concrete)
        throw PencilFileError("formal pencils carry symbolic metric data", 0);
    std::vector<CoeffFn> fs;
    for (const auto& e : f) fs.push_back(expr_eval(e));
    if (h.empty()) return PencilData(N, std::move(fs));
    std::vector<CoeffFn> hs;
    for (const auto& e : h) hs.push_back(expr_eval(e));
    return PencilData(N, std::move(fs), std::move(hs));
}

FormalPencil PencilFile::formal() const {
    if (mode != PencilMode::Formal)
        throw PencilFileError("pencil file declares concrete mode", 0);
    return FormalPencil(N);
}

DeformationCoeffs PencilFile::deformation_coeffs() const {
    DeformationCoeffs out(N);
    for (const auto& [key, e] : deformation)
        out.set(key[0], key[1], key[2], key[3], key[4], expr_eval(e));
    return out;
}

PencilFile load_pencil_file(std::istream& in) {
    PencilFile pf;
    bool n_seen = false, mode_seen = false;
    std::map<std::string, int> seen;  // key -> first line, for duplicate checks
    std::vector<ExprAst> f, h;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (size_t hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw PencilFileError("expected `key = value`", line);
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty())
            throw PencilFileError("expected `key = value`", line);
        if (auto [it, fresh] = seen.emplace(key, line); !fresh)
            throw PencilFileError("duplicate entry for " + key + " (first on line " +
                                      std::to_string(it->second) + ")",
                                  line);

        if (key == "N") {
            int n = 0;
            try {
                n = std::stoi(value);
            } catch (const std::exception&) {
                throw PencilFileError("N must be a positive integer", line);
            }
            if (n < 1 || std::to_string(n) != value)
                throw PencilFileError("N must be a positive integer", line);
            pf.N = n;
            n_seen = true;
            f.assign((size_t)n, ExprAst{});
            h.assign((size_t)n, ExprAst{});
            continue;
        }
        if (key == "mode") {
            if (value == "concrete")
                pf.mode = PencilMode::Concrete;
            else if (value == "formal")
                pf.mode = PencilMode::Formal;
            else
                throw PencilFileError("mode must be concrete or formal", line);
            mode_seen = true;
            continue;
        }

        if (!n_seen) throw PencilFileError("N must be declared before " + key, line);
        if (pf.mode == PencilMode::Formal && mode_seen)
            throw PencilFileError("formal mode determines the metric symbolically; " + key +
                                      " is not allowed",
                                  line);

        ExprAst ast;
        try {
            ast = parse_expr(value, pf.N);
        } catch (const std::exception& e) {
            throw PencilFileError(std::string(e.what()) + " (in " + key + ")", line);
        }

        if (int i = indexed_key(key, 'f'); i >= 1) {
            if (i > pf.N) throw PencilFileError("f index exceeds N", line);
            eval_lambda_free(ast, key, line);
            f[(size_t)i - 1] = ast;
        } else if (int j = indexed_key(key, 'h'); j >= 1) {
            if (j > pf.N) throw PencilFileError("h index exceeds N", line);
            eval_lambda_free(ast, key, line);
            h[(size_t)j - 1] = ast;
        } else if (std::array<int, 5> idx{}; deformation_key(key, idx)) {
            CoeffFn v = eval_lambda_free(ast, key, line);
            DeformationCoeffs probe(pf.N);
            try {
                probe.set(idx[0], idx[1], idx[2], idx[3], idx[4], std::move(v));
            } catch (const std::exception& e) {
                throw PencilFileError(std::string(e.what()) + " (in " + key + ")", line);
            }
            pf.deformation.emplace_back(idx, ast);
        } else {
            throw PencilFileError("unknown key " + key, line);
        }
    }

    if (!n_seen) throw PencilFileError("missing N", 0);
    if (pf.mode == PencilMode::Formal) {
        bool any_data = pf.has_deformation();
        for (const auto& e : f) any_data = any_data || !e.empty();
        for (const auto& e : h) any_data = any_data || !e.empty();
        if (any_data)
            throw PencilFileError("formal mode does not take metric or deformation data", 0);
    }
    if (pf.mode == PencilMode::Concrete) {
        for (int i = 1; i <= pf.N; ++i)
            if (f[(size_t)i - 1].empty())
                throw PencilFileError("missing metric entry f" + std::to_string(i), 0);
        pf.f = std::move(f);
        size_t given = 0;
        for (const auto& e : h)
            if (!e.empty()) ++given;
        if (given == (size_t)pf.N) {
            pf.h = std::move(h);
        } else if (given != 0) {
            throw PencilFileError("witnesses must be given for all coordinates or none", 0);
        }
        // realize once so witness consistency and value-level errors surface
        // at load; WitnessMismatch passes through untouched
        pf.concrete();
    }
    return pf;
}

PencilFile load_pencil_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PencilFileError("cannot open " + path, 0);
    return load_pencil_file(in);
}

}  // namespace bihamo
