#ifndef VOA_SUITES_HPP
#define VOA_SUITES_HPP

#include "identities.hpp"
#include "invariant.hpp"
#include "w1inf.hpp"

namespace voa {

/// Strips the vacuum component; weight-0 parabolic actions may pick up a
/// central multiple of |0> on top of the lambda/mu statement.
inline FockState nonvacuum_part(const FockState& v) {
    FockState out(v.system());
    for (auto& [w, c] : v.terms())
        if (!w.empty()) out.add(w, c);
    return out;
}

/// One instance of the weighted-derivation law
/// Omega_{a,b} o_{a+b-w} Omega_{l,m} = lambda Omega_{l+w,m} + mu Omega_{l,m+w},
/// compared on the non-vacuum part in a rank-1 betagamma engine.
inline bool check_parabolic(Engine& eng, long a, long b, long w, long l, long m) {
    if (a + b - w < 0) return true;
    const System& sys = eng.system();
    FockState target = state_of(eng, build_omega(sys, l, m));
    FockState lhs = parabolic_act(eng, a, b, w, target);
    FockState rhs(sys);
    Scalar lam = parabolic_lambda(a, b, w, l);
    if (!is_zero(lam) && l + w >= 0)
        rhs += lam * state_of(eng, build_omega(sys, l + w, m));
    Scalar mu = parabolic_mu(a, b, w, m);
    if (!is_zero(mu) && m + w >= 0)
        rhs += mu * state_of(eng, build_omega(sys, l, m + w));
    return nonvacuum_part(lhs) == nonvacuum_part(rhs);
}

inline SuiteResult parabolic_suite(unsigned seed, long cases) {
    std::mt19937 rng(seed);
    Engine eng(System::betagamma(1));
    std::uniform_int_distribution<long> idx(0, 4), shift(-4, 4);
    SuiteResult out;
    for (long i = 0; i < cases; ++i) {
        long a = idx(rng), b = idx(rng), l = idx(rng), m = idx(rng), w = shift(rng);
        ++out.cases;
        if (!check_parabolic(eng, a, b, w, l, m)) {
            ++out.failures;
            if (out.witness.empty())
                out.witness = "a=" + std::to_string(a) + " b=" + std::to_string(b) +
                              " w=" + std::to_string(w) + " l=" + std::to_string(l) +
                              " m=" + std::to_string(m);
        }
    }
    return out;
}

/// Weyl second-fundamental-theorem desk checks: the classical substitution
/// q_{a,b} into det d_{I,J} vanishes for (n+1)x(n+1) index lists.
inline SuiteResult weyl_suite(unsigned seed, long cases) {
    std::mt19937 rng(seed);
    SuiteResult out;
    std::uniform_int_distribution<long> pick_n(1, 2);
    for (long i = 0; i < cases; ++i) {
        long n = pick_n(rng);
        // random strictly increasing lists of length n+1 with entries <= n+3
        auto pick_list = [&]() {
            std::vector<long> pool;
            for (long v = 0; v <= n + 3; ++v) pool.push_back(v);
            std::shuffle(pool.begin(), pool.end(), rng);
            std::vector<long> l(pool.begin(), pool.begin() + n + 1);
            std::sort(l.begin(), l.end());
            return l;
        };
        std::vector<long> I = pick_list(), J = pick_list();
        ++out.cases;
        if (!subst_classical(det_dij(I, J), n).empty()) {
            ++out.failures;
            if (out.witness.empty()) {
                out.witness = "n=" + std::to_string(n) + " I=";
                for (long v : I) out.witness += std::to_string(v) + ",";
                out.witness += " J=";
                for (long v : J) out.witness += std::to_string(v) + ",";
            }
        }
    }
    return out;
}

/// L/W structure checks for ranks 1..3 (seed and case count are ignored;
/// the checks are deterministic).
inline SuiteResult lw_suite(unsigned, long) {
    SuiteResult out;
    for (long n = 1; n <= 3; ++n) {
        Engine eng(System::betagamma(n));
        LWReport rep = build_LW(eng);
        ++out.cases;
        bool central_ok = (rep.central == scalar(-(n + 1)));
        if (!(rep.ok() && central_ok)) {
            ++out.failures;
            if (out.witness.empty())
                out.witness = "n=" + std::to_string(n) +
                              (rep.virasoro ? "" : " [virasoro]") +
                              (rep.primary ? "" : " [primary]") +
                              (rep.commute_j0 ? "" : " [commutant]") +
                              (central_ok ? "" : " [central charge]");
        }
    }
    return out;
}

} // namespace voa

#endif
