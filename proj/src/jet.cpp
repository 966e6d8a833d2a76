#include "bihamo/jet.hpp"

#include <set>

namespace bihamo {

long JetMonomial::degree(Grading g) const {
    long d = 0;
    switch (g) {
        case Grading::Standard:
            for (const auto& [v, e] : ujets) d += (long)v.s * e;
            for (const auto& v : thetas) d += v.s;
            return d;
        case Grading::Theta:
            return (long)thetas.size();
        case Grading::DegU:
            for (const auto& [v, e] : ujets) d += e;
            return d;
        case Grading::Theta0:
            for (const auto& v : thetas) d += (v.s == 0);
            return d;
        case Grading::Theta1:
            for (const auto& v : thetas) d += (v.s == 1);
            return d;
        case Grading::ThetaGe2:
            for (const auto& v : thetas) d += (v.s >= 2);
            return d;
        case Grading::Lambda:
            throw std::logic_error("lambda grading lives on coefficients");
    }
    return 0;
}

unsigned JetMonomial::ujet_exp(JetVar v) const {
    for (const auto& [w, e] : ujets)
        if (w == v) return e;
    return 0;
}

bool JetMonomial::has_theta(JetVar v) const {
    return std::binary_search(thetas.begin(), thetas.end(), v);
}

int JetMonomial::max_jet_order() const {
    int s = 0;
    for (const auto& [v, e] : ujets) s = std::max(s, (int)v.s);
    for (const auto& v : thetas) s = std::max(s, (int)v.s);
    return s;
}

std::string JetMonomial::str() const {
    std::string out;
    for (const auto& [v, e] : ujets) {
        if (!out.empty()) out += " ";
        out += "u[" + std::to_string(v.i) + "," + std::to_string(v.s) + "]";
        if (e > 1) out += "^" + std::to_string(e);
    }
    for (const auto& v : thetas) {
        if (!out.empty()) out += " ";
        out += "theta[" + std::to_string(v.i) + "," + std::to_string(v.s) + "]";
    }
    return out;
}

bool mono_mul(const JetMonomial& a, const JetMonomial& b, JetMonomial& out, int& sign) {
    out.ujets.clear();
    out.thetas.clear();
    sign = 1;
    {
        size_t i = 0, j = 0;
        while (i < a.ujets.size() && j < b.ujets.size()) {
            if (a.ujets[i].first < b.ujets[j].first) {
                out.ujets.push_back(a.ujets[i++]);
            } else if (b.ujets[j].first < a.ujets[i].first) {
                out.ujets.push_back(b.ujets[j++]);
            } else {
                out.ujets.push_back({a.ujets[i].first, a.ujets[i].second + b.ujets[j].second});
                ++i;
                ++j;
            }
        }
        while (i < a.ujets.size()) out.ujets.push_back(a.ujets[i++]);
        while (j < b.ujets.size()) out.ujets.push_back(b.ujets[j++]);
    }
    {
        size_t i = 0, j = 0;
        const size_t p = a.thetas.size();
        while (i < p && j < b.thetas.size()) {
            if (a.thetas[i] < b.thetas[j]) {
                out.thetas.push_back(a.thetas[i++]);
            } else if (b.thetas[j] < a.thetas[i]) {
                if ((p - i) % 2) sign = -sign;  // b[j] crosses the rest of a
                out.thetas.push_back(b.thetas[j++]);
            } else {
                return false;  // repeated odd variable
            }
        }
        while (i < p) out.thetas.push_back(a.thetas[i++]);
        while (j < b.thetas.size()) out.thetas.push_back(b.thetas[j++]);
    }
    return true;
}

bool mono_normalize(std::vector<std::pair<JetVar, unsigned>> ujets, std::vector<JetVar> thetas,
                    JetMonomial& out, int& sign) {
    sign = 1;
    // insertion sort, counting transpositions of the odd factors
    for (size_t i = 1; i < thetas.size(); ++i) {
        JetVar v = thetas[i];
        size_t j = i;
        while (j > 0 && v < thetas[j - 1]) {
            thetas[j] = thetas[j - 1];
            --j;
            sign = -sign;
        }
        thetas[j] = v;
    }
    for (size_t i = 1; i < thetas.size(); ++i)
        if (thetas[i] == thetas[i - 1]) return false;
    std::sort(ujets.begin(), ujets.end());
    out.thetas = std::move(thetas);
    out.ujets.clear();
    for (const auto& [v, e] : ujets) {
        if (e == 0) continue;
        if (!out.ujets.empty() && out.ujets.back().first == v)
            out.ujets.back().second += e;
        else
            out.ujets.push_back({v, e});
    }
    return true;
}

Subspace subspace_classify(const JetMonomial& m) {
    std::set<int> carriers;
    for (const auto& [v, e] : m.ujets) carriers.insert(v.i);
    for (const auto& v : m.thetas)
        if (v.s >= 2) carriers.insert(v.i);
    if (carriers.empty()) return {SubspaceKind::CHat, 0};
    if (carriers.size() == 1) return {SubspaceKind::CIntN, *carriers.begin()};
    return {SubspaceKind::MHat, 0};
}

Rat weight(const JetMonomial& m, int i) {
    Rat w(0);
    for (const auto& [v, e] : m.ujets)
        if (v.i == i) w += rat((long)v.s, 2) * Rat((long)e) + Rat((long)e);
    for (const auto& v : m.thetas)
        if (v.i == i) w += rat((long)v.s - 1, 2);
    return w;
}

namespace {

void enum_uparts(int N, int deg, int min_i, int min_s, JetMonomial& cur,
                 std::vector<JetMonomial>& out) {
    if (deg == 0) {
        out.push_back(cur);
        return;
    }
    for (int i = min_i; i <= N; ++i) {
        for (int s = (i == min_i ? min_s : 1); s <= deg; ++s) {
            for (int e = 1; s * e <= deg; ++e) {
                cur.ujets.push_back({JetVar{(uint16_t)i, (uint16_t)s}, (unsigned)e});
                enum_uparts(N, deg - s * e, i, s + 1, cur, out);
                cur.ujets.pop_back();
            }
        }
    }
}

void enum_thetas(int N, int need, int degleft, int min_i, int min_s, std::vector<JetVar>& cur,
                 std::vector<std::pair<std::vector<JetVar>, int>>& out, int used_deg) {
    if (need == 0) {
        out.push_back({cur, used_deg});
        return;
    }
    for (int i = min_i; i <= N; ++i) {
        for (int s = (i == min_i ? min_s : 0); s <= degleft; ++s) {
            cur.push_back(JetVar{(uint16_t)i, (uint16_t)s});
            enum_thetas(N, need - 1, degleft - s, i, s + 1, cur, out, used_deg + s);
            cur.pop_back();
        }
    }
}

}  // namespace

std::vector<JetMonomial> slice_basis(int p, int d, int N) {
    if (p < 0 || d < 0 || N < 1) throw std::out_of_range("slice_basis arguments");
    std::vector<std::pair<std::vector<JetVar>, int>> thetasets;
    std::vector<JetVar> curt;
    enum_thetas(N, p, d, 1, 0, curt, thetasets, 0);
    std::vector<JetMonomial> out;
    for (const auto& [ts, tdeg] : thetasets) {
        JetMonomial cur;
        cur.thetas = ts;
        std::vector<JetMonomial> filled;
        enum_uparts(N, d - tdeg, 1, 1, cur, filled);
        for (auto& m : filled) out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace bihamo
