#ifndef VOA_IDENTITIES_HPP
#define VOA_IDENTITIES_HPP

#include <random>

#include "engine.hpp"

namespace voa {

/// Nonassociativity of the Wick product:
/// :(:ab:)c: - :abc: = sum_{k>=0} 1/(k+1)! ( :(d^{k+1}a)(b o_k c):
///                                 + (-1)^{|a||b|} :(d^{k+1}b)(a o_k c): ).
inline bool check_identity_i(Engine& eng, const ExprPtr& a, const ExprPtr& b,
                             const ExprPtr& c) {
    const System& sys = eng.system();
    ExprPtr lhs = Expr::sub(Expr::wick(Expr::wick(a, b), c),
                            Expr::wick(a, Expr::wick(b, c)));
    ExprPtr rhs = Expr::zero();
    long kmax = expr_weight(sys, b) + expr_weight(sys, c) +
                expr_weight(sys, a); // safe upper truncation
    Scalar sign = (expr_parity(sys, a) && expr_parity(sys, b)) ? -1 : 1;
    for (long k = 0; k <= kmax; ++k) {
        Scalar inv = Scalar(1) / factorial(k + 1);
        rhs = Expr::add(rhs, Expr::scale(inv,
            Expr::wick(Expr::derivative(k + 1, a), Expr::circle(b, k, c))));
        rhs = Expr::add(rhs, Expr::scale(sign * inv,
            Expr::wick(Expr::derivative(k + 1, b), Expr::circle(a, k, c))));
    }
    return state_of(eng, Expr::sub(lhs, rhs)).zero();
}

/// Noncommutativity of the Wick product:
/// :ab: - (-1)^{|a||b|} :ba: = sum_{k>=0} (-1)^k/(k+1)! d^{k+1}(a o_k b).
inline bool check_identity_ii(Engine& eng, const ExprPtr& a, const ExprPtr& b) {
    const System& sys = eng.system();
    Scalar sign = (expr_parity(sys, a) && expr_parity(sys, b)) ? -1 : 1;
    ExprPtr lhs = Expr::sub(Expr::wick(a, b), Expr::scale(sign, Expr::wick(b, a)));
    ExprPtr rhs = Expr::zero();
    long kmax = expr_weight(sys, a) + expr_weight(sys, b);
    for (long k = 0; k <= kmax; ++k) {
        Scalar c = Scalar(1) / factorial(k + 1);
        if (k % 2) c = -c;
        rhs = Expr::add(rhs, Expr::scale(c, Expr::derivative(k + 1, Expr::circle(a, k, b))));
    }
    return state_of(eng, Expr::sub(lhs, rhs)).zero();
}

/// Failure of o_n (n > 0) to be a derivation of the Wick product:
/// a o_n :bc: - :(a o_n b)c: - (-1)^{|a||b|} :b(a o_n c):
///   = sum_{k=1}^n C(n,k) (a o_{n-k} b) o_{k-1} c.
inline bool check_identity_iii(Engine& eng, const ExprPtr& a, const ExprPtr& b,
                               const ExprPtr& c, long n) {
    if (n <= 0) throw std::invalid_argument("identity needs n > 0");
    const System& sys = eng.system();
    Scalar sign = (expr_parity(sys, a) && expr_parity(sys, b)) ? -1 : 1;
    ExprPtr lhs = Expr::circle(a, n, Expr::wick(b, c));
    lhs = Expr::sub(lhs, Expr::wick(Expr::circle(a, n, b), c));
    lhs = Expr::sub(lhs, Expr::scale(sign, Expr::wick(b, Expr::circle(a, n, c))));
    ExprPtr rhs = Expr::zero();
    for (long k = 1; k <= n; ++k)
        rhs = Expr::add(rhs, Expr::scale(binomial(n, k),
            Expr::circle(Expr::circle(a, n - k, b), k - 1, c)));
    return state_of(eng, Expr::sub(lhs, rhs)).zero();
}

/// Seeded random expression over the system's generators, weight <= max_wt.
inline ExprPtr random_expr(std::mt19937& rng, const System& sys, long max_wt,
                           int depth = 2) {
    auto gen = [&]() {
        long hi = sys.kind == SystemKind::Current ? 3 : 2 * sys.n;
        std::uniform_int_distribution<long> pick(0, hi - 1);
        return Expr::generator(pick(rng));
    };
    if (depth == 0) return gen();
    std::uniform_int_distribution<int> kind(0, 3);
    ExprPtr e;
    switch (kind(rng)) {
    case 0:
    case 1: e = gen(); break;
    case 2: {
        std::uniform_int_distribution<long> dk(1, 2);
        e = Expr::derivative(dk(rng), random_expr(rng, sys, max_wt, depth - 1));
        break;
    }
    default:
        e = Expr::wick(random_expr(rng, sys, max_wt, depth - 1),
                       random_expr(rng, sys, max_wt, depth - 1));
        break;
    }
    if (expr_weight(sys, e) > max_wt) return gen();
    return e;
}

struct SuiteResult {
    long cases = 0;
    long failures = 0;
    std::string witness; // description of the first failure, if any
    bool ok() const { return failures == 0; }
};

/// Runs the three identities on `cases` seeded random triples.
inline SuiteResult identity_suite(Engine& eng, unsigned seed, long cases,
                                  long max_wt = 5) {
    std::mt19937 rng(seed);
    SuiteResult out;
    std::uniform_int_distribution<long> pick_n(1, 3);
    for (long i = 0; i < cases; ++i) {
        ExprPtr a = random_expr(rng, eng.system(), max_wt);
        ExprPtr b = random_expr(rng, eng.system(), max_wt);
        ExprPtr c = random_expr(rng, eng.system(), max_wt);
        long n = pick_n(rng);
        ++out.cases;
        bool i1 = check_identity_i(eng, a, b, c);
        bool i2 = check_identity_ii(eng, a, b);
        bool i3 = check_identity_iii(eng, a, b, c, n);
        if (!(i1 && i2 && i3)) {
            ++out.failures;
            if (out.witness.empty())
                out.witness = "case " + std::to_string(i) + ": a=" + expr_str(eng.system(), a) +
                              " b=" + expr_str(eng.system(), b) + " c=" + expr_str(eng.system(), c) +
                              " n=" + std::to_string(n) +
                              (i1 ? "" : " [nonassociativity]") +
                              (i2 ? "" : " [noncommutativity]") +
                              (i3 ? "" : " [derivation defect]");
        }
    }
    return out;
}

} // namespace voa

#endif
