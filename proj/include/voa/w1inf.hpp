#ifndef VOA_W1INF_HPP
#define VOA_W1INF_HPP

#include <functional>
#include <optional>

#include "engine.hpp"
#include "invariant.hpp"

namespace voa {

/// The current j^l in a realization: the abstract generator J^l, or its
/// free-field image sum_i :gamma^i d^l beta^i: (resp. :c^i d^l b^i:).
inline ExprPtr build_j(const System& sys, long l) {
    if (sys.kind == SystemKind::Current) return Expr::generator(l);
    std::vector<std::pair<Scalar, ExprPtr>> parts;
    for (long i = 0; i < sys.n; ++i)
        parts.push_back({1, Expr::wick(Expr::generator(sys.n + i),
                                       Expr::derivative(l, Expr::generator(i)))});
    return Expr::combine(std::move(parts));
}

/// Coefficients (c_0,...,c_m) of omega_{a,b} = sum_i c_i d^i j^{m-i},
/// m = a+b, solved once in the rank-1 betagamma realization (the basis
/// change is independent of the rank).
inline const Vec& omega_in_j_coeffs(long a, long b) {
    static std::map<std::pair<long, long>, Vec> cache;
    auto it = cache.find({a, b});
    if (it != cache.end()) return it->second;

    System bg = System::betagamma(1);
    Engine eng(bg);
    long m = a + b;
    ExprPtr om = Expr::wick(Expr::derivative(a, Expr::generator(0)),
                            Expr::derivative(b, Expr::generator(1)));
    FockState target = state_of(eng, om);
    std::vector<FockState> cols;
    std::map<Word, std::size_t> rows;
    for (long i = 0; i <= m; ++i) {
        cols.push_back(state_of(eng, Expr::derivative(i, build_j(bg, m - i))));
        for (auto& [w, c] : cols.back().terms()) rows.emplace(w, 0);
    }
    for (auto& [w, c] : target.terms()) rows.emplace(w, 0);
    std::size_t idx = 0;
    for (auto& [w, id] : rows) id = idx++;
    Matrix mat(rows.size(), Vec(m + 1, Scalar(0)));
    Vec rhs(rows.size(), Scalar(0));
    for (long i = 0; i <= m; ++i)
        for (auto& [w, c] : cols[i].terms()) mat[rows[w]][i] = c;
    for (auto& [w, c] : target.terms()) rhs[rows[w]] = c;
    auto sol = solve(mat, rhs);
    if (!sol) throw std::logic_error("omega basis change solve failed");
    return cache.emplace(std::make_pair(a, b), std::move(*sol)).first->second;
}

/// Omega_{a,b} in a realization: the free-field quadratic, or the abstract
/// J-combination via the basis change above.
inline ExprPtr build_omega(const System& sys, long a, long b) {
    std::vector<std::pair<Scalar, ExprPtr>> parts;
    switch (sys.kind) {
    case SystemKind::BetaGamma:
        for (long i = 0; i < sys.n; ++i)
            parts.push_back({1, Expr::wick(Expr::derivative(a, Expr::generator(i)),
                                           Expr::derivative(b, Expr::generator(sys.n + i)))});
        break;
    case SystemKind::BC:
        // factor order chosen so that omega_{l,0} = j^l on the nose
        for (long i = 0; i < sys.n; ++i)
            parts.push_back({1, Expr::wick(Expr::derivative(b, Expr::generator(sys.n + i)),
                                           Expr::derivative(a, Expr::generator(i)))});
        break;
    case SystemKind::Current: {
        const Vec& c = omega_in_j_coeffs(a, b);
        long m = a + b;
        for (long i = 0; i <= m; ++i)
            parts.push_back({c[i], Expr::derivative(i, Expr::generator(m - i))});
        break;
    }
    }
    return Expr::combine(std::move(parts));
}

/// Replace every generator leaf by f(gen index).
inline ExprPtr substitute_gens(const ExprPtr& e, const std::function<ExprPtr(long)>& f) {
    switch (e->kind) {
    case Expr::Kind::One: return e;
    case Expr::Kind::Gen: return f(e->gen);
    case Expr::Kind::Der: return Expr::derivative(e->order, substitute_gens(e->a, f));
    case Expr::Kind::Wick:
        return Expr::wick(substitute_gens(e->a, f), substitute_gens(e->b, f));
    case Expr::Kind::Circle:
        return Expr::circle(substitute_gens(e->a, f), e->order, substitute_gens(e->b, f));
    case Expr::Kind::Lin: {
        std::vector<std::pair<Scalar, ExprPtr>> parts;
        for (auto& [c, x] : e->lin) parts.push_back({c, substitute_gens(x, f)});
        return Expr::combine(std::move(parts));
    }
    }
    return e;
}

/// Realize an expression over abstract J-generators in a free-field system.
inline ExprPtr realize(const System& sys, const ExprPtr& e) {
    if (sys.kind == SystemKind::Current) return e;
    return substitute_gens(e, [&](long l) { return build_j(sys, l); });
}

/// The parabolic element Omega_{a,b} circ_{a+b-w} applied to v (weight w
/// operator).
inline FockState parabolic_act(Engine& eng, long a, long b, long w, const FockState& v) {
    long idx = a + b - w;
    if (idx < 0) throw std::invalid_argument("parabolic index a+b-w must be nonnegative");
    return expr_apply(eng, build_omega(eng.system(), a, b), idx, v);
}

/// Closed forms for the weighted-derivation coefficients on Omega_{l,m}.
inline Scalar parabolic_lambda(long a, long b, long w, long l) {
    if (l + w - a < 0) return 0;
    Scalar c = factorial(b + l) / factorial(l + w - a);
    return (b % 2) ? c : -c;
}
inline Scalar parabolic_mu(long a, long b, long w, long m) {
    if (m + w - b < 0) return 0;
    Scalar c = factorial(a + m) / factorial(m + w - b);
    return (a % 2) ? -c : c;
}

/// Normally ordered polynomial in the symbols d^k Omega_{a,b}: a sparse map
/// from sorted factor lists to coefficients.
struct OmFactor {
    long a, b, k;
    friend auto operator<=>(const OmFactor&, const OmFactor&) = default;
};
using OmMono = std::vector<OmFactor>; // sorted
using NOPoly = std::map<OmMono, Scalar>;

inline void nopoly_add(NOPoly& p, OmMono m, const Scalar& c) {
    if (is_zero(c)) return;
    auto it = p.find(m);
    if (it == p.end()) p.emplace(std::move(m), c);
    else {
        it->second += c;
        if (is_zero(it->second)) p.erase(it);
    }
}

inline NOPoly nopoly_from_q(const QPoly& q) {
    NOPoly out;
    for (auto& [m, c] : q) {
        OmMono om;
        for (auto& [a, b] : m) om.push_back(OmFactor{a, b, 0});
        std::sort(om.begin(), om.end());
        nopoly_add(out, std::move(om), c);
    }
    return out;
}

inline ExprPtr nopoly_expr(const System& sys, const NOPoly& p) {
    std::vector<std::pair<Scalar, ExprPtr>> parts;
    for (auto& [m, c] : p) {
        std::vector<ExprPtr> factors;
        for (auto& f : m)
            factors.push_back(Expr::derivative(f.k, build_omega(sys, f.a, f.b)));
        parts.push_back({c, Expr::wick_all(factors)});
    }
    return Expr::combine(std::move(parts));
}

/// pi_{-n} image of an NOPoly, evaluated in the engine's free-field system.
inline FockState pi_project(Engine& ff_eng, const NOPoly& p) {
    return state_of(ff_eng, nopoly_expr(ff_eng.system(), p));
}

/// Basis of singular vectors of weight w: exact nullspace of the stacked
/// annihilation maps v -> J^l(k) v, l in {0,1,2}, l < k <= l+w (sufficient
/// because J^0, J^1, J^2 generate). The vacuum (w = 0) is excluded.
inline std::vector<FockState> find_singular(Engine& eng, long w) {
    const System& sys = eng.system();
    if (sys.kind != SystemKind::Current) throw std::invalid_argument("singular search is over M_c");
    if (w == 0) return {};
    std::vector<Word> basis = weight_basis(sys, w);
    std::vector<Vec> rows;
    for (long l = 0; l <= 2; ++l)
        for (long k = l + 1; k <= l + w; ++k) {
            std::vector<Word> tbasis = weight_basis(sys, w - k + l);
            std::map<Word, std::size_t> tindex;
            for (std::size_t i = 0; i < tbasis.size(); ++i) tindex.emplace(tbasis[i], i);
            std::size_t base = rows.size();
            rows.resize(base + tbasis.size(), Vec(basis.size(), Scalar(0)));
            for (std::size_t j = 0; j < basis.size(); ++j) {
                FockState img = eng.apply(Mode{l, k}, basis[j]);
                for (auto& [word, c] : img.terms()) rows[base + tindex.at(word)][j] = c;
            }
        }
    Matrix mat(std::move(rows));
    std::vector<Vec> null = nullspace(std::move(mat), basis.size());
    std::vector<FockState> out;
    for (auto& x : null) {
        FockState s(sys);
        for (std::size_t j = 0; j < basis.size(); ++j) s.add(basis[j], x[j]);
        out.push_back(std::move(s));
    }
    return out;
}

/// D_{I,J}: the ideal element with symbol d_{I,J} and zero free-field image,
/// carried as its recorded degree decomposition sum_k D^{2k}.
struct DijElement {
    long n = 0;
    std::vector<long> I, J;
    std::map<long, NOPoly> parts; // k -> D^{2k}

    long weight() const {
        long w = n + 1;
        for (long i : I) w += i;
        for (long j : J) w += j;
        return w;
    }
    NOPoly total() const {
        NOPoly out;
        for (auto& [k, p] : parts)
            for (auto& [m, c] : p) nopoly_add(out, m, c);
        return out;
    }
    FockState state(Engine& cur_eng) const {
        return state_of(cur_eng, nopoly_expr(cur_eng.system(), total()));
    }
};

/// Iterative correction: start from the canonical normal ordering of
/// d_{I,J}; while the free-field image is nonzero, express its top-degree
/// symbol in the q_{a,b} (Weyl FFT), subtract that canonical ordering. The
/// top degree strictly decreases, so this terminates.
inline DijElement construct_dij(Engine& ff_eng, const std::vector<long>& I,
                                const std::vector<long>& J) {
    const System& ff = ff_eng.system();
    long n = ff.n;
    if (static_cast<long>(I.size()) != n + 1 || static_cast<long>(J.size()) != n + 1)
        throw std::invalid_argument("index lists must have length n+1");
    DijElement out;
    out.n = n;
    out.I = I;
    out.J = J;
    NOPoly cur = nopoly_from_q(det_dij(I, J));
    out.parts[n + 1] = cur;
    long prev = 2 * (n + 1) + 1;
    while (true) {
        FockState v = pi_project(ff_eng, cur);
        if (v.zero()) break;
        long d = v.max_degree();
        if (d >= prev || d <= 0 || d % 2)
            throw std::logic_error("degree did not drop in D_{I,J} correction");
        prev = d;
        CPoly s = symbol_classical(v, d);
        auto q = classical_to_q(s, n, d / 2);
        if (!q) throw std::logic_error("top symbol not expressible in the q_{a,b}");
        NOPoly delta = nopoly_from_q(*q);
        NOPoly& slot = out.parts[d / 2];
        for (auto& [m, c] : delta) {
            nopoly_add(cur, m, -c);
            nopoly_add(slot, m, -c);
        }
        if (slot.empty()) out.parts.erase(d / 2);
    }
    return out;
}

/// The degree-2 part rewritten in the basis {d^i J^{m-i}}: returns the
/// coefficient vector (e_0,...,e_m), m = |I|+|J|+n.
inline Vec dij_degree2_jbasis(const DijElement& d) {
    long m = d.weight() - 1;
    Vec e(m + 1, Scalar(0));
    auto it = d.parts.find(1);
    if (it == d.parts.end()) return e;
    for (auto& [mono, coeff] : it->second) {
        const OmFactor& f = mono.at(0);
        const Vec& c = omega_in_j_coeffs(f.a, f.b);
        for (long i = 0; i <= f.a + f.b; ++i) e[f.k + i] += coeff * c[i];
    }
    return e;
}

/// Remainder R_{I,J}: the J^m coefficient of the degree-2 part.
inline std::pair<Scalar, long> remainder(const DijElement& d) {
    return {dij_degree2_jbasis(d)[0], d.weight() - 1};
}

/// A decoupling relation j^r = P(j^0,...,j^{r-1}): P is an expression over
/// abstract J-leaves, to be realized per system.
struct Relation {
    long r = 0;
    ExprPtr P;
};

/// Turns D_{I,J} with nonzero remainder into the relation
/// j^m = -(1/R)(sum_{i>=1} e_i d^i j^{m-i} + sum_{k>=2} pi(D^{2k})).
inline Relation relation_from_dij(const DijElement& d) {
    long m = d.weight() - 1;
    Vec e = dij_degree2_jbasis(d);
    Scalar lambda = e[0];
    if (is_zero(lambda)) throw std::logic_error("vanishing remainder, no decoupling relation");
    System cur = System::current(scalar(-d.n));
    std::vector<std::pair<Scalar, ExprPtr>> parts;
    for (long i = 1; i <= m; ++i)
        if (!is_zero(e[i])) parts.push_back({e[i], Expr::derivative(i, Expr::generator(m - i))});
    for (auto& [k, p] : d.parts)
        if (k >= 2) parts.push_back({1, nopoly_expr(cur, p)});
    return {m, Expr::scale(Scalar(-1) / lambda, Expr::combine(std::move(parts)))};
}

/// Exact verification of j^r = P in the given free-field realization.
inline bool verify_relation(Engine& ff_eng, const Relation& rel) {
    const System& sys = ff_eng.system();
    FockState lhs = state_of(ff_eng, realize(sys, Expr::generator(rel.r)));
    FockState rhs = state_of(ff_eng, realize(sys, rel.P));
    return lhs == rhs;
}

/// The base decoupling relation j^l = P(j^0,...,j^{l-1}), l = n^2+2n.
inline Relation decoupling(Engine& ff_eng) {
    long n = ff_eng.system().n;
    std::vector<long> idx(n + 1);
    for (long i = 0; i <= n; ++i) idx[i] = i;
    DijElement d0 = construct_dij(ff_eng, idx, idx);
    Relation rel = relation_from_dij(d0);
    if (!verify_relation(ff_eng, rel)) throw std::logic_error("decoupling relation failed verification");
    return rel;
}

/// Weight-raising step: apply Omega_{0,2} circ_1 to the ideal element
/// J^{r-1} - P_{r-1}, rescale by -1/(r+1), and rewrite as a relation for
/// j^r; generators at or above the base weight are replaced through the
/// known relations.
inline Relation raise_decoupling(Engine& cur_eng, Engine& ff_eng,
                                 const std::map<long, Relation>& known, long r) {
    const Relation& prevr = known.at(r - 1);
    long base = known.begin()->first;
    FockState S = state_of(cur_eng, Expr::sub(Expr::generator(r - 1), prevr.P));
    FockState T = scalar(-1, r + 1) * parabolic_act(cur_eng, 0, 2, 1, S);
    FockState pstate = state_of(cur_eng, Expr::generator(r)) - T;
    ExprPtr raw = expr_of_state(pstate);
    ExprPtr P = substitute_gens(raw, [&](long s) -> ExprPtr {
        if (s < base) return Expr::generator(s);
        return known.at(s).P;
    });
    Relation rel{r, P};
    if (!verify_relation(ff_eng, rel)) throw std::logic_error("raised relation failed verification");
    return rel;
}

/// Reads a relation j^r = P off a singular vector containing J^r(-1) with
/// nonzero coefficient: P = -(1/coeff) (rest of the vector).
inline Relation relation_from_state(const FockState& sv, long r) {
    Word top{Mode{r, -1}};
    auto it = sv.terms().find(top);
    if (it == sv.terms().end() || is_zero(it->second))
        throw std::logic_error("state has no J^r term, no relation");
    Scalar lambda = it->second;
    FockState rest = sv;
    rest.add(top, -lambda);
    return {r, Expr::scale(Scalar(-1) / lambda, expr_of_state(rest))};
}

/// Express an invariant free-field state of filtration degree <= d as a
/// normally ordered polynomial in the omega_{a,b} (possible by Weyl FFT);
/// nullopt when outside the span.
inline std::optional<NOPoly> express_as_nopoly(Engine& ff_eng, const FockState& v, long d) {
    if (v.zero()) return NOPoly{};
    long w = v.weight();
    std::vector<OmMono> cands;
    for (long r = 0; 2 * r <= d; ++r)
        for (auto& qm : qmono_list(w, r)) {
            OmMono om;
            for (auto& [a, b] : qm) om.push_back(OmFactor{a, b, 0});
            cands.push_back(std::move(om));
        }
    std::vector<FockState> cols;
    std::map<Word, std::size_t> rows;
    for (auto& m : cands) {
        NOPoly p;
        nopoly_add(p, m, 1);
        cols.push_back(pi_project(ff_eng, p));
        for (auto& [word, c] : cols.back().terms()) rows.emplace(word, 0);
    }
    for (auto& [word, c] : v.terms()) rows.emplace(word, 0);
    std::size_t idx = 0;
    for (auto& [word, id] : rows) id = idx++;
    Matrix mat(rows.size(), Vec(cands.size(), Scalar(0)));
    Vec rhs(rows.size(), Scalar(0));
    for (std::size_t j = 0; j < cands.size(); ++j)
        for (auto& [word, c] : cols[j].terms()) mat[rows[word]][j] = c;
    for (auto& [word, c] : v.terms()) rhs[rows[word]] = c;
    auto sol = solve(mat, rhs);
    if (!sol) return std::nullopt;
    NOPoly out;
    for (std::size_t j = 0; j < cands.size(); ++j) nopoly_add(out, cands[j], (*sol)[j]);
    return out;
}

/// The Virasoro element L and weight-3 primary W of the Heisenberg
/// commutant, plus the commutation/structure checks.
struct LWReport {
    ExprPtr L, W;
    Scalar central;       // from L circ_3 L = (central/2)|0>
    bool virasoro = false;  // L circ_k L for k = 0..3
    bool primary = false;   // L circ_1 W = 3W, L circ_k W = 0 for k = 2..5
    bool commute_j0 = false; // L circ_k j0 = W circ_k j0 = 0 for k = 0..4
    bool ok() const { return virasoro && primary && commute_j0; }
};

inline LWReport build_LW(Engine& ff_eng) {
    const System& sys = ff_eng.system();
    long n = sys.n;
    ExprPtr j0 = build_j(sys, 0), j1 = build_j(sys, 1), j2 = build_j(sys, 2);
    ExprPtr L = Expr::combine({{scalar(1, 2 * n), Expr::wick(j0, j0)},
                               {scalar(1, 2), Expr::derivative(1, j0)},
                               {-1, j1}});
    ExprPtr W = Expr::combine({
        {1, Expr::wick_all({j0, j0, j0})},
        {scalar(3 * n, 2), Expr::wick(j0, Expr::derivative(1, j0))},
        {scalar(-3 * n), Expr::wick(j0, j1)},
        {scalar(n * n, 4), Expr::derivative(2, j0)},
        {scalar(-3 * n * n, 2), Expr::derivative(1, j1)},
        {scalar(3 * n * n, 2), j2},
    });
    LWReport rep;
    rep.L = L;
    rep.W = W;
    FockState vL = state_of(ff_eng, L), vW = state_of(ff_eng, W);
    FockState vac = ff_eng.vacuum();

    FockState l3 = expr_apply(ff_eng, L, 3, vL);
    rep.central = l3.terms().count(Word{}) ? l3.terms().at(Word{}) * 2 : Scalar(0);
    bool v3 = (l3 == scalar(-(n + 1), 2) * vac);
    bool v2 = expr_apply(ff_eng, L, 2, vL).zero();
    bool v1 = (expr_apply(ff_eng, L, 1, vL) == scalar(2) * vL);
    bool v0 = (expr_apply(ff_eng, L, 0, vL) == state_of(ff_eng, Expr::derivative(1, L)));
    rep.virasoro = v3 && v2 && v1 && v0;

    bool p1 = (expr_apply(ff_eng, L, 1, vW) == scalar(3) * vW);
    bool phigh = true;
    for (long k = 2; k <= 5; ++k) phigh = phigh && expr_apply(ff_eng, L, k, vW).zero();
    rep.primary = p1 && phigh;

    FockState vj0 = state_of(ff_eng, j0);
    bool comm = true;
    for (long k = 0; k <= 4; ++k) {
        comm = comm && expr_apply(ff_eng, L, k, vj0).zero();
        comm = comm && expr_apply(ff_eng, W, k, vj0).zero();
    }
    rep.commute_j0 = comm;
    return rep;
}

} // namespace voa

#endif
