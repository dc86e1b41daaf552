#ifndef VOA_ZHU_HPP
#define VOA_ZHU_HPP

#include "w1inf.hpp"

namespace voa {

/// Monomial in the Zhu generators a^l: variable indices sorted descending,
/// so that plain vector comparison realizes the degree-lexicographic order
/// with a^l < a^{l+1} once degrees are compared first.
using ZMono = std::vector<long>;

struct ZMonoLess {
    bool operator()(const ZMono& x, const ZMono& y) const {
        if (x.size() != y.size()) return x.size() < y.size();
        return x < y;
    }
};
using ZhuPoly = std::map<ZMono, Scalar, ZMonoLess>;

inline void zpoly_add(ZhuPoly& p, ZMono m, const Scalar& c) {
    if (is_zero(c)) return;
    auto it = p.find(m);
    if (it == p.end()) p.emplace(std::move(m), c);
    else {
        it->second += c;
        if (is_zero(it->second)) p.erase(it);
    }
}

inline ZhuPoly zpoly_scale(ZhuPoly p, const Scalar& s) {
    if (is_zero(s)) return {};
    for (auto& [m, c] : p) c *= s;
    return p;
}

inline ZhuPoly zpoly_mul(const ZhuPoly& a, const ZhuPoly& b) {
    ZhuPoly out;
    for (auto& [ma, ca] : a)
        for (auto& [mb, cb] : b) {
            ZMono m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            std::sort(m.begin(), m.end(), std::greater<long>());
            zpoly_add(out, std::move(m), ca * cb);
        }
    return out;
}

inline ZhuPoly operator+(ZhuPoly a, const ZhuPoly& b) {
    for (auto& [m, c] : b) zpoly_add(a, m, c);
    return a;
}
inline ZhuPoly operator-(ZhuPoly a, const ZhuPoly& b) {
    for (auto& [m, c] : b) zpoly_add(a, m, -c);
    return a;
}

inline std::string zpoly_str(const ZhuPoly& p) {
    if (p.empty()) return "0";
    std::string out;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        if (!out.empty()) out += " + ";
        out += "(" + to_string(it->second) + ")";
        for (long l : it->first) out += " a" + std::to_string(l);
    }
    return out;
}

/// Largest variable index occurring in p (-1 for a constant).
inline long zpoly_top_var(const ZhuPoly& p) {
    long top = -1;
    for (auto& [m, c] : p)
        if (!m.empty()) top = std::max(top, m.front());
    return top;
}

inline long zmono_weight(const ZMono& m) {
    long w = 0;
    for (long l : m) w += l + 1;
    return w;
}

/// Component of maximal weight (the symbol).
inline ZhuPoly zpoly_symbol(const ZhuPoly& p) {
    long top = 0;
    for (auto& [m, c] : p) top = std::max(top, zmono_weight(m));
    ZhuPoly out;
    for (auto& [m, c] : p)
        if (zmono_weight(m) == top) out.emplace(m, c);
    return out;
}

/// Leading term: degree-lex maximum of the maximal-weight component.
inline ZhuPoly zpoly_lt(const ZhuPoly& p) {
    ZhuPoly s = zpoly_symbol(p);
    ZhuPoly out;
    if (!s.empty()) out.insert(*s.rbegin());
    return out;
}

/// Eliminates the variable a^l from p using a relation rel that is linear
/// in a^l (the monomial {a^l} occurs, no other monomial contains a^l):
/// substitutes a^l = -(rel - c a^l)/c. Stays in any ideal containing rel.
inline ZhuPoly zpoly_eliminate(ZhuPoly p, long l, const ZhuPoly& rel) {
    Scalar c = 0;
    ZhuPoly repl;
    for (auto& [m, cc] : rel) {
        bool has = std::find(m.begin(), m.end(), l) != m.end();
        if (m == ZMono{l}) c = cc;
        else if (has) throw std::invalid_argument("relation not linear in the variable");
        else repl.emplace(m, cc);
    }
    if (is_zero(c)) throw std::invalid_argument("relation does not involve the variable");
    repl = zpoly_scale(std::move(repl), Scalar(-1) / c);
    for (;;) {
        ZhuPoly out;
        bool again = false;
        for (auto& [m, cc] : p) {
            auto it = std::find(m.begin(), m.end(), l);
            if (it == m.end()) { zpoly_add(out, m, cc); continue; }
            ZMono rest = m;
            rest.erase(rest.begin() + (it - m.begin()));
            again = again || std::find(rest.begin(), rest.end(), l) != rest.end();
            ZhuPoly factor;
            zpoly_add(factor, std::move(rest), cc);
            for (auto& [mm, c2] : zpoly_mul(factor, repl)) zpoly_add(out, mm, c2);
        }
        p = std::move(out);
        if (!again) return p;
    }
}

/// Splits a state into its weight-homogeneous components.
inline std::map<long, FockState> weight_components(const FockState& v) {
    std::map<long, FockState> out;
    for (auto& [w, c] : v.terms()) {
        long wt = word_weight(v.system(), w);
        auto it = out.find(wt);
        if (it == out.end()) it = out.emplace(wt, FockState(v.system())).first;
        it->second.add(w, c);
    }
    return out;
}

/// Zhu-mode product u * v = sum_{j>=0} C(m,j) u(j-1) v with m = wt(u),
/// extended by linearity over the weight components of u.
inline FockState zhu_star(Engine& eng, const FockState& u, const FockState& v) {
    FockState out(eng.system());
    for (auto& [m, uc] : weight_components(u)) {
        ExprPtr ue = expr_of_state(uc);
        for (long j = 0; j <= m + v.max_weight(); ++j) {
            Scalar c = binomial(m, j);
            if (is_zero(c)) continue;
            out += c * expr_apply(eng, ue, j - 1, v);
        }
    }
    return out;
}

/// u circ v = sum_{j>=0} C(m,j) u(j-2) v; spans O(V).
inline FockState zhu_circ(Engine& eng, const FockState& u, const FockState& v) {
    FockState out(eng.system());
    for (auto& [m, uc] : weight_components(u)) {
        ExprPtr ue = expr_of_state(uc);
        for (long j = 0; j <= m + v.max_weight() + 1; ++j) {
            Scalar c = binomial(m, j);
            if (is_zero(c)) continue;
            out += c * expr_apply(eng, ue, j - 2, v);
        }
    }
    return out;
}

/// Canonical image of states of M_c in A(M_c) = C[a^0, a^1, ...],
/// computed by the weight recursion
///   pi(a(-1)v) = pi(a) pi(v) - sum_{j>=1} C(wt a, j) pi(a(j-1)v),
/// where the word head J^l(-k) is read as a = (1/(k-1)!) d^{k-1} J^l and
/// pi(a) = (-1)^{k-1} C(l+k-1, k-1) a^l (from pi(d u) = -wt(u) pi(u)).
class ZhuReducer {
public:
    explicit ZhuReducer(Engine& eng) : eng_(eng) {
        if (eng.system().kind != SystemKind::Current)
            throw std::invalid_argument("Zhu reduction is over M_c");
    }

    ZhuPoly reduce(const FockState& v) {
        ZhuPoly out;
        for (auto& [w, c] : v.terms()) {
            for (auto& [m, cc] : reduce_word(w)) zpoly_add(out, m, c * cc);
        }
        return out;
    }

private:
    ZhuPoly reduce_word(const Word& w) {
        if (w.empty()) {
            ZhuPoly one;
            zpoly_add(one, ZMono{}, 1);
            return one;
        }
        auto it = memo_.find(w);
        if (it != memo_.end()) return it->second;

        long l = w.front().gen, k = -w.front().m; // head J^l(-k), k >= 1
        long der = k - 1;
        Scalar head = binomial(l + der, der);
        if (der % 2) head = -head;
        ExprPtr a = Expr::derivative(der, Expr::generator(l));
        long wt_a = l + k;

        Word rest(w.begin() + 1, w.end());
        FockState rest_state(eng_.system(), rest);
        ZhuPoly head_poly;
        zpoly_add(head_poly, ZMono{l}, head);
        ZhuPoly out = zpoly_mul(head_poly, reduce_word(rest));
        Scalar inv_der = Scalar(1) / factorial(der);
        for (long j = 1; j <= wt_a + word_weight(eng_.system(), rest); ++j) {
            Scalar c = binomial(wt_a, j);
            if (is_zero(c)) continue;
            FockState img = expr_apply(eng_, a, j - 1, rest_state);
            img *= c * inv_der;
            for (auto& [m, cc] : reduce(img)) zpoly_add(out, m, -cc);
        }
        memo_.emplace(w, out);
        return out;
    }

    Engine& eng_;
    std::map<Word, ZhuPoly> memo_;
};

/// Leading term through the C2 shortcut: words containing a mode g(-k) with
/// k >= 2 die in the C2 quotient; the survivors map multiplicatively via
/// J^l(-1) -> a^l, and the degree-lex maximum is the leading term.
inline ZhuPoly leading_term(const FockState& v) {
    if (v.system().kind != SystemKind::Current)
        throw std::invalid_argument("leading term is over M_c");
    ZhuPoly img;
    for (auto& [w, c] : v.terms()) {
        bool c2 = false;
        ZMono m;
        for (auto& mo : w) {
            if (mo.m <= -2) { c2 = true; break; }
            m.push_back(mo.gen);
        }
        if (c2) continue;
        std::sort(m.begin(), m.end(), std::greater<long>());
        zpoly_add(img, std::move(m), c);
    }
    ZhuPoly out;
    if (!img.empty()) out.insert(*img.rbegin());
    return out;
}

/// The final-theorem relation for n = 1: a nonzero element of I_{-1}
/// involving only a^0, a^1, a^2.
struct VarietyRelation {
    Scalar lambda1, lambda2;
    FockState eliminated; // E' in M_{-n}, depending only on J^0..J^{n^2+2n-1}
    ZhuPoly rel;          // pi_Zh(E')
};

inline VarietyRelation variety_relation(long n) {
    if (n != 1)
        throw std::invalid_argument("variety relation instantiated at n = 1 only");
    Engine ff(System::betagamma(1));
    Engine cur(System::current(scalar(-1)));

    DijElement dA = construct_dij(ff, {0, 1}, {0, 3}); // D_{(0,1),(0,3)}
    DijElement dB = construct_dij(ff, {0, 1}, {1, 2}); // D_{(0,1),(1,2)}
    Scalar rA = remainder(dA).first, rB = remainder(dB).first;
    if (is_zero(rA) || is_zero(rB))
        throw std::logic_error("degenerate remainders in variety relation");
    // choose lambdas so the J^5 coefficient of E^2 cancels
    Scalar l1 = rB, l2 = -rA;
    FockState E = l1 * dA.state(cur) + l2 * dB.state(cur);

    // relations j^4 (from D_{(0,1),(0,2)}) and j^3 (from D_0)
    DijElement dC = construct_dij(ff, {0, 1}, {0, 2});
    DijElement d0 = construct_dij(ff, {0, 1}, {0, 1});
    Relation rel4 = relation_from_dij(dC);
    Relation rel3 = relation_from_dij(d0);

    ExprPtr e = expr_of_state(E);
    e = substitute_gens(e, [&](long s) { return s == 4 ? rel4.P : Expr::generator(s); });
    e = substitute_gens(e, [&](long s) { return s == 3 ? rel3.P : Expr::generator(s); });
    FockState Ep = state_of(cur, e);
    if (!state_of(ff, realize(ff.system(), e)).zero())
        throw std::logic_error("eliminated element left the vertex ideal");

    ZhuReducer zr(cur);
    ZhuPoly rel = zr.reduce(Ep);
    // Brackets taken during reduction can reintroduce a^l, l >= 3, in the
    // lower-weight tail. Clear them with reductions of ideal elements of
    // weight l+1 (each is linear in a^l with coefficient the nonzero
    // remainder), which keeps the result inside I_{-n} and leaves the
    // top-weight symbol untouched.
    ZhuPoly red0 = zr.reduce(d0.state(cur)); // linear in a^3
    ZhuPoly redC = zr.reduce(dC.state(cur)); // linear in a^4
    ZhuPoly redA = zr.reduce(dA.state(cur)); // linear in a^5
    while (zpoly_top_var(rel) >= 3) {
        long l = zpoly_top_var(rel);
        const ZhuPoly* r = l == 3 ? &red0 : l == 4 ? &redC : l == 5 ? &redA : nullptr;
        if (!r) throw std::logic_error("unexpected high Zhu variable");
        rel = zpoly_eliminate(std::move(rel), l, *r);
    }

    VarietyRelation out{l1, l2, Ep, std::move(rel)};
    if (out.rel.empty()) throw std::logic_error("variety relation reduced to zero");
    if (zpoly_top_var(out.rel) > 2)
        throw std::logic_error("variety relation involves a^l with l > 2");
    return out;
}

} // namespace voa

#endif
