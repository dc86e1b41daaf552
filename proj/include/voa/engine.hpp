#ifndef VOA_ENGINE_HPP
#define VOA_ENGINE_HPP

#include <map>

#include "expr.hpp"
#include "state.hpp"

namespace voa {

/// Applies generator modes to states, rewriting into canonical PBW form.
/// Results are memoized per (mode, word); all sums are finite because every
/// PBW word has weight >= 0, so any term whose weight lands below zero dies.
class Engine {
public:
    explicit Engine(System sys) : sys_(std::move(sys)) {}

    const System& system() const { return sys_; }

    FockState vacuum() const { return FockState::vacuum(sys_); }

    FockState apply(const Mode& gm, const Word& w) {
        if (sys_.mode_weight(gm) + word_weight(sys_, w) < 0) return FockState(sys_);
        auto key = std::make_pair(gm, w);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        FockState out = compute(gm, w);
        memo_.emplace(std::move(key), out);
        return out;
    }

    FockState apply(const Mode& gm, const FockState& v) {
        FockState out(sys_);
        for (auto& [w, c] : v.terms()) {
            FockState part = apply(gm, w);
            part *= c;
            out += part;
        }
        return out;
    }

private:
    FockState compute(const Mode& gm, const Word& w) {
        if (w.empty()) {
            if (gm.m >= 0) return FockState(sys_);
            return FockState(sys_, Word{gm});
        }
        const Mode& h = w.front();
        if (gm.m <= -1 && !canon_less(h, gm)) {
            // creation mode already in canonical position
            if (sys_.odd(gm.gen) && gm == h) return FockState(sys_); // odd square
            Word out;
            out.reserve(w.size() + 1);
            out.push_back(gm);
            out.insert(out.end(), w.begin(), w.end());
            return FockState(sys_, std::move(out));
        }
        // move gm past the head: gm h = eps h gm + [gm, h]
        Word rest(w.begin() + 1, w.end());
        Scalar eps = (sys_.odd(gm.gen) && sys_.odd(h.gen)) ? -1 : 1;
        FockState out = apply(h, apply(gm, rest));
        out *= eps;
        BracketResult br = sys_.bracket(gm, h);
        if (!is_zero(br.id)) out += br.id * FockState(sys_, rest);
        for (auto& [coeff, mo] : br.modes) {
            FockState part = apply(mo, rest);
            part *= coeff;
            out += part;
        }
        return out;
    }

    System sys_;
    std::map<std::pair<Mode, Word>, FockState> memo_;
};

/// The m-th mode of the field of expression e, applied to state v.
/// Wick products expand by
///   (:ab:)(m) = sum_{j<=-1} a(j) b(m-j-1) + eps sum_{j>=0} b(m-j-1) a(j),
/// circle products with n >= 0 by the Borcherds expansion; n < 0 falls back
/// to (1/k!) :(d^k a) b: with k = -n-1.
inline FockState expr_apply(Engine& eng, const ExprPtr& e, long m, const FockState& v) {
    const System& sys = eng.system();
    switch (e->kind) {
    case Expr::Kind::One:
        return m == -1 ? v : FockState(sys);
    case Expr::Kind::Gen:
        return eng.apply(Mode{e->gen, m}, v);
    case Expr::Kind::Der: {
        // (d^k a)(m) = (-1)^k (m)_k a(m-k)
        long k = e->order;
        Scalar c = falling(m, k);
        if (k % 2) c = -c;
        if (is_zero(c)) return FockState(sys);
        FockState out = expr_apply(eng, e->a, m - k, v);
        out *= c;
        return out;
    }
    case Expr::Kind::Wick: {
        long wv = v.max_weight();
        long wa = expr_weight(sys, e->a);
        long wb = expr_weight(sys, e->b);
        Scalar eps = (expr_parity(sys, e->a) && expr_parity(sys, e->b)) ? -1 : 1;
        FockState out(sys);
        for (long j = -1; j >= m - wv - wb; --j) {
            FockState inner = expr_apply(eng, e->b, m - j - 1, v);
            if (inner.zero()) continue;
            out += expr_apply(eng, e->a, j, inner);
        }
        for (long j = 0; j <= wv + wa - 1; ++j) {
            FockState inner = expr_apply(eng, e->a, j, v);
            if (inner.zero()) continue;
            FockState part = expr_apply(eng, e->b, m - j - 1, inner);
            part *= eps;
            out += part;
        }
        return out;
    }
    case Expr::Kind::Circle: {
        long n = e->order;
        if (n < 0) {
            long k = -n - 1;
            ExprPtr rewritten = Expr::wick(Expr::derivative(k, e->a), e->b);
            FockState out = expr_apply(eng, rewritten, m, v);
            out *= Scalar(1) / factorial(k);
            return out;
        }
        Scalar eps = (expr_parity(sys, e->a) && expr_parity(sys, e->b)) ? -1 : 1;
        Scalar sign_n = (n % 2) ? -1 : 1;
        FockState out(sys);
        for (long j = 0; j <= n; ++j) {
            Scalar c = binomial(n, j);
            if (j % 2) c = -c;
            FockState t1 = expr_apply(eng, e->b, m + j, v);
            if (!t1.zero()) {
                t1 = expr_apply(eng, e->a, n - j, t1);
                t1 *= c;
                out += t1;
            }
            FockState t2 = expr_apply(eng, e->a, j, v);
            if (!t2.zero()) {
                t2 = expr_apply(eng, e->b, m + n - j, t2);
                t2 *= -c * eps * sign_n;
                out += t2;
            }
        }
        return out;
    }
    case Expr::Kind::Lin: {
        FockState out(sys);
        for (auto& [c, x] : e->lin) {
            FockState part = expr_apply(eng, x, m, v);
            part *= c;
            out += part;
        }
        return out;
    }
    }
    return FockState(sys);
}

/// State-field correspondence: the state e(-1)|0>.
inline FockState state_of(Engine& eng, const ExprPtr& e) {
    return expr_apply(eng, e, -1, eng.vacuum());
}

/// The circle product a o_n b as a state.
inline FockState circle(Engine& eng, const ExprPtr& a, long n, const ExprPtr& b) {
    return expr_apply(eng, a, n, state_of(eng, b));
}

/// Exact section of state_of: the PBW word g1(m1)...gr(mr)|0> maps to the
/// right-nested Wick word :A1 ... Ar: with A_i = (1/k_i!) d^{k_i} g_i and
/// k_i = -m_i - 1; then A_i(-1) = g_i(m_i) on the nose, so no correction
/// terms appear.
inline ExprPtr expr_of_state(const FockState& v) {
    std::vector<std::pair<Scalar, ExprPtr>> parts;
    for (auto& [w, c] : v.terms()) {
        Scalar coeff = c;
        std::vector<ExprPtr> factors;
        factors.reserve(w.size());
        for (auto& mo : w) {
            long k = -mo.m - 1;
            coeff /= factorial(k);
            factors.push_back(Expr::derivative(k, Expr::generator(mo.gen)));
        }
        parts.push_back({coeff, Expr::wick_all(factors)});
    }
    return Expr::combine(std::move(parts));
}

} // namespace voa

#endif
