#ifndef VOA_INVARIANT_HPP
#define VOA_INVARIANT_HPP

#include <optional>
#include <tuple>

#include "basis.hpp"
#include "linalg.hpp"
#include "state.hpp"

namespace voa {

/// Classical variable x_{i,k} (primed = 0) or x'_{i,k} (primed = 1);
/// 1 <= i <= n, k >= 0. Weight: wt(x_{i,k}) = k+1, wt(x'_{i,k}) = k.
struct CVar {
    int primed;
    long i;
    long k;
    friend auto operator<=>(const CVar&, const CVar&) = default;
};

using CMono = std::vector<CVar>; // sorted
using CPoly = std::map<CMono, Scalar>;

inline void cpoly_add(CPoly& p, CMono m, const Scalar& c) {
    if (is_zero(c)) return;
    auto it = p.find(m);
    if (it == p.end()) p.emplace(std::move(m), c);
    else {
        it->second += c;
        if (is_zero(it->second)) p.erase(it);
    }
}

inline CPoly cpoly_mul(const CPoly& a, const CPoly& b) {
    CPoly out;
    for (auto& [ma, ca] : a)
        for (auto& [mb, cb] : b) {
            CMono m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            std::sort(m.begin(), m.end());
            cpoly_add(out, std::move(m), ca * cb);
        }
    return out;
}

/// Weyl's quadratic invariant q_{a,b} = sum_i x_{i,a} x'_{i,b}.
inline CPoly q_gen(long a, long b, long n) {
    CPoly out;
    for (long i = 1; i <= n; ++i) {
        CMono m{CVar{0, i, a}, CVar{1, i, b}};
        std::sort(m.begin(), m.end());
        cpoly_add(out, std::move(m), 1);
    }
    return out;
}

/// Monomial in the abstract generators Q_{a,b}: sorted list of (a,b) pairs.
using QPair = std::pair<long, long>;
using QMono = std::vector<QPair>;

/// Degree first, then lexicographic on the sorted factor list.
struct QMonoLess {
    bool operator()(const QMono& x, const QMono& y) const {
        if (x.size() != y.size()) return x.size() < y.size();
        return x < y;
    }
};
using QPoly = std::map<QMono, Scalar, QMonoLess>;

inline void qpoly_add(QPoly& p, QMono m, const Scalar& c) {
    if (is_zero(c)) return;
    auto it = p.find(m);
    if (it == p.end()) p.emplace(std::move(m), c);
    else {
        it->second += c;
        if (is_zero(it->second)) p.erase(it);
    }
}

inline QPoly qpoly_mul(const QPoly& a, const QPoly& b) {
    QPoly out;
    for (auto& [ma, ca] : a)
        for (auto& [mb, cb] : b) {
            QMono m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            std::sort(m.begin(), m.end());
            qpoly_add(out, std::move(m), ca * cb);
        }
    return out;
}

inline long qmono_weight(const QMono& m) {
    long w = 0;
    for (auto& [a, b] : m) w += a + b + 1;
    return w;
}

/// Determinant d_{I,J} = det(Q_{i_r, j_s}) with rows indexed by I, columns
/// by J, expanded with the standard Leibniz signs.
inline QPoly det_dij(const std::vector<long>& I, const std::vector<long>& J) {
    if (I.size() != J.size()) throw std::invalid_argument("index lists of unequal length");
    auto check = [](const std::vector<long>& L) {
        for (std::size_t r = 0; r + 1 < L.size(); ++r)
            if (L[r] >= L[r + 1]) throw std::invalid_argument("index list not strictly increasing");
        if (!L.empty() && L[0] < 0) throw std::invalid_argument("negative index");
    };
    check(I);
    check(J);
    std::size_t s = I.size();
    std::vector<std::size_t> perm(s);
    for (std::size_t r = 0; r < s; ++r) perm[r] = r;
    QPoly out;
    do {
        int inv = 0;
        for (std::size_t r = 0; r < s; ++r)
            for (std::size_t t = r + 1; t < s; ++t)
                if (perm[r] > perm[t]) ++inv;
        QMono m;
        for (std::size_t r = 0; r < s; ++r) m.push_back({I[r], J[perm[r]]});
        std::sort(m.begin(), m.end());
        qpoly_add(out, std::move(m), (inv % 2) ? -1 : 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

/// Substitution homomorphism Q_{a,b} -> q_{a,b} into the classical ring.
inline CPoly subst_classical(const QPoly& p, long n) {
    CPoly out;
    for (auto& [m, c] : p) {
        CPoly acc;
        cpoly_add(acc, CMono{}, c);
        for (auto& [a, b] : m) acc = cpoly_mul(acc, q_gen(a, b, n));
        for (auto& [mono, coeff] : acc) cpoly_add(out, mono, coeff);
    }
    return out;
}

/// Associated-graded symbol of a betagamma state at filtration degree r
/// (word length r): beta^i(m) -> (1/k!) x_{i,k}, gamma^i(m) -> (1/k!) x'_{i,k}
/// with k = -m-1, so that symbol(omega_{a,b}) = q_{a,b}. Lower-degree words
/// are dropped; higher-degree words are a filtration mismatch.
inline CPoly symbol_classical(const FockState& v, long r) {
    if (v.system().kind != SystemKind::BetaGamma)
        throw std::invalid_argument("classical symbol needs a betagamma state");
    long n = v.system().n;
    CPoly out;
    for (auto& [w, c] : v.terms()) {
        if (static_cast<long>(w.size()) > r) throw std::logic_error("state above filtration degree");
        if (static_cast<long>(w.size()) < r) continue;
        Scalar coeff = c;
        CMono m;
        for (auto& mo : w) {
            long k = -mo.m - 1;
            coeff /= factorial(k);
            if (mo.gen < n) m.push_back(CVar{0, mo.gen + 1, k});
            else m.push_back(CVar{1, mo.gen - n + 1, k});
        }
        std::sort(m.begin(), m.end());
        cpoly_add(out, std::move(m), coeff);
    }
    return out;
}

/// Symbol of a current-algebra state at filtration degree r, expressed in
/// the commuting generators Q_{a,b}: the mode J^l(-k-1) contributes the
/// linear form (1/k!) sum_j C(k,j) Q_{l+j,k-j}, since Q_{l,0} is the symbol
/// of J^l and the gr derivation obeys dQ_{a,b} = Q_{a+1,b} + Q_{a,b+1}.
inline QPoly symbol_current(const FockState& v, long r) {
    if (v.system().kind != SystemKind::Current)
        throw std::invalid_argument("Q-symbol needs a current-algebra state");
    QPoly out;
    for (auto& [w, c] : v.terms()) {
        if (static_cast<long>(w.size()) > r) throw std::logic_error("state above filtration degree");
        if (static_cast<long>(w.size()) < r) continue;
        QPoly acc;
        qpoly_add(acc, QMono{}, c);
        for (auto& mo : w) {
            long l = mo.gen, k = -mo.m - 1;
            QPoly lin;
            for (long j = 0; j <= k; ++j)
                qpoly_add(lin, QMono{{l + j, k - j}}, binomial(k, j) / factorial(k));
            acc = qpoly_mul(acc, lin);
        }
        for (auto& [m, coeff] : acc) qpoly_add(out, m, coeff);
    }
    return out;
}

/// All Q-monomials with r factors and total weight w, each factor (a,b)
/// with a+b+1 <= w - r + 1.
inline std::vector<QMono> qmono_list(long w, long r) {
    std::vector<QMono> out;
    QMono cur;
    std::function<void(long, QPair)> rec = [&](long w_rem, QPair min_p) {
        long left = r - static_cast<long>(cur.size());
        if (left == 0) {
            if (w_rem == 0) out.push_back(cur);
            return;
        }
        // each remaining factor has weight >= 1
        for (long a = 0; a + left <= w_rem; ++a)
            for (long b = 0; a + b + left <= w_rem; ++b) {
                QPair p{a, b};
                if (p < min_p) continue;
                cur.push_back(p);
                rec(w_rem - (a + b + 1), p);
                cur.pop_back();
            }
    };
    rec(w, {0, 0});
    return out;
}

/// Expresses a weight-homogeneous classical invariant of x-degree 2r as a
/// polynomial in the q_{a,b} (guaranteed possible by Weyl's first
/// fundamental theorem); nullopt when s is outside the span.
inline std::optional<QPoly> classical_to_q(const CPoly& s, long n, long r) {
    if (s.empty()) return QPoly{};
    long w = 0;
    for (auto& v : s.begin()->first) w += v.primed ? v.k : v.k + 1;
    std::vector<QMono> cands = qmono_list(w, r);
    // columns: substituted candidates; rows: classical monomials
    std::map<CMono, std::size_t> rows;
    std::vector<CPoly> cols;
    for (auto& m : cands) {
        QPoly q;
        qpoly_add(q, m, 1);
        cols.push_back(subst_classical(q, n));
        for (auto& [mono, c] : cols.back()) rows.emplace(mono, 0);
    }
    for (auto& [mono, c] : s) rows.emplace(mono, 0);
    std::size_t idx = 0;
    for (auto& [mono, id] : rows) id = idx++;
    Matrix mat(rows.size(), Vec(cands.size(), Scalar(0)));
    Vec rhs(rows.size(), Scalar(0));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (auto& [mono, c] : cols[j]) mat[rows[mono]][j] = c;
    for (auto& [mono, c] : s) rhs[rows[mono]] = c;
    auto sol = solve(mat, rhs);
    if (!sol) return std::nullopt;
    QPoly out;
    for (std::size_t j = 0; j < cands.size(); ++j) qpoly_add(out, cands[j], (*sol)[j]);
    return out;
}

} // namespace voa

#endif
