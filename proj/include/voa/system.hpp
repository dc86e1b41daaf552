#ifndef VOA_SYSTEM_HPP
#define VOA_SYSTEM_HPP

#include <string>
#include <vector>

#include "diffop.hpp"
#include "scalar.hpp"

namespace voa {

enum class SystemKind { Current, BetaGamma, BC };

/// One creation/annihilation mode g(m) of a generator.
struct Mode {
    long gen;
    long m;

    friend bool operator==(const Mode& a, const Mode& b) {
        return a.gen == b.gen && a.m == b.m;
    }
    friend auto operator<=>(const Mode& a, const Mode& b) = default;
};

/// Canonical PBW order: generator index ascending, then mode m descending
/// (so g(-1) precedes g(-2)).
inline bool canon_less(const Mode& a, const Mode& b) {
    if (a.gen != b.gen) return a.gen < b.gen;
    return a.m > b.m;
}
inline bool canon_leq(const Mode& a, const Mode& b) { return !canon_less(b, a); }

struct BracketResult {
    Scalar id = 0;                              // multiple of the identity
    std::vector<std::pair<Scalar, Mode>> modes; // single-mode terms
};

/// A generator system: the current algebra M_c over the extended Lie algebra
/// of differential operators, or a rank-n betagamma / bc system.
///
/// Generator index encoding:
///   Current:   gen = l >= 0 is J^l, weight l+1, even.
///   BetaGamma: gen in [0,n) is beta^{i+1} (weight 1), gen in [n,2n) is
///              gamma^{i-n+1} (weight 0); all even.
///   BC:        gen in [0,n) is b^{i+1} (weight 1), gen in [n,2n) is
///              c^{i-n+1} (weight 0); all odd.
struct System {
    SystemKind kind = SystemKind::Current;
    long n = 0;   // rank, for BetaGamma / BC
    Scalar c = 0; // central charge, for Current

    static System current(Scalar central) { return {SystemKind::Current, 0, std::move(central)}; }
    static System betagamma(long rank) { return {SystemKind::BetaGamma, rank, 0}; }
    static System bc(long rank) { return {SystemKind::BC, rank, 0}; }

    friend bool operator==(const System& a, const System& b) {
        return a.kind == b.kind && a.n == b.n && a.c == b.c;
    }

    long weight(long gen) const {
        if (kind == SystemKind::Current) return gen + 1;
        return gen < n ? 1 : 0; // beta/b weight 1, gamma/c weight 0
    }

    bool odd(long gen) const {
        (void)gen;
        return kind == SystemKind::BC;
    }

    /// Weight of the state g(m)|...>: contribution weight(g) - m - 1.
    long mode_weight(const Mode& mo) const { return weight(mo.gen) - mo.m - 1; }

    std::string gen_name(long gen) const {
        switch (kind) {
        case SystemKind::Current: return "J" + std::to_string(gen);
        case SystemKind::BetaGamma:
            return (gen < n ? "beta" + std::to_string(gen + 1)
                            : "gamma" + std::to_string(gen - n + 1));
        case SystemKind::BC:
            return (gen < n ? "b" + std::to_string(gen + 1)
                            : "c" + std::to_string(gen - n + 1));
        }
        return "?";
    }

    /// Super-bracket [x(m1), y(m2)] of two generator modes, as a finite
    /// combination of single modes plus a multiple of the identity.
    BracketResult bracket(const Mode& x, const Mode& y) const {
        BracketResult out;
        switch (kind) {
        case SystemKind::Current: {
            // [J^a(m), J^b(k)] = [t^m d^a, t^k d^b] + c Psi(t^m d^a, t^k d^b),
            // reading t^a d^l back as J^l(a). The minus sign of the abstract
            // basis J^l_k = -t^{l+k} d^l cancels in the cocycle and is
            // absorbed here so that the modes reproduce the generator OPEs
            // (e.g. J^1 circ_0 J^l = -dJ^l), which the free-field
            // realizations pin down.
            DiffOp f = DiffOp::monomial(x.m, x.gen);
            DiffOp g = DiffOp::monomial(y.m, y.gen);
            auto [op, central] = bracket_central(f, g, c);
            out.id = central;
            for (auto& [key, coeff] : op.terms()) {
                auto [a, l] = key;
                out.modes.push_back({coeff, Mode{l, a}});
            }
            break;
        }
        case SystemKind::BetaGamma: {
            // [beta^i(m), gamma^j(k)] = delta_{ij} delta_{m+k+1,0}
            if (x.m + y.m + 1 != 0) break;
            if (x.gen < n && y.gen == x.gen + n) out.id = 1;
            else if (x.gen >= n && y.gen == x.gen - n) out.id = -1;
            break;
        }
        case SystemKind::BC: {
            // {b^i(m), c^j(k)} = delta_{ij} delta_{m+k+1,0}
            if (x.m + y.m + 1 != 0) break;
            if ((x.gen < n && y.gen == x.gen + n) || (x.gen >= n && y.gen == x.gen - n))
                out.id = 1;
            break;
        }
        }
        return out;
    }
};

} // namespace voa

#endif
