#ifndef VOA_EXPR_HPP
#define VOA_EXPR_HPP

#include <memory>
#include <sstream>
#include <vector>

#include "system.hpp"

namespace voa {

/// Formal field expression over the generators of one system: derivatives,
/// right-nested Wick products, circle products and rational combinations.
/// Expressions are immutable trees shared by pointer.
class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
public:
    enum class Kind { One, Gen, Der, Wick, Circle, Lin };

    Kind kind;
    long gen = 0;                                 // Gen
    long order = 0;                               // Der: derivative order; Circle: product index
    ExprPtr a, b;                                 // children
    std::vector<std::pair<Scalar, ExprPtr>> lin;  // Lin

    static ExprPtr unit() {
        static ExprPtr e = std::make_shared<Expr>(Expr{Kind::One});
        return e;
    }
    static ExprPtr generator(long g) {
        Expr e{Kind::Gen};
        e.gen = g;
        return std::make_shared<Expr>(std::move(e));
    }
    static ExprPtr derivative(long k, ExprPtr child) {
        if (k == 0) return child;
        if (child->kind == Kind::Der) {
            k += child->order;
            child = child->a;
        }
        Expr e{Kind::Der};
        e.order = k;
        e.a = std::move(child);
        return std::make_shared<Expr>(std::move(e));
    }
    static ExprPtr wick(ExprPtr x, ExprPtr y) {
        Expr e{Kind::Wick};
        e.a = std::move(x);
        e.b = std::move(y);
        return std::make_shared<Expr>(std::move(e));
    }
    /// Right-nested iterated Wick product :e1 e2 ... ek:.
    static ExprPtr wick_all(const std::vector<ExprPtr>& es) {
        if (es.empty()) return unit();
        ExprPtr acc = es.back();
        for (auto it = es.rbegin() + 1; it != es.rend(); ++it) acc = wick(*it, acc);
        return acc;
    }
    static ExprPtr circle(ExprPtr x, long idx, ExprPtr y) {
        Expr e{Kind::Circle};
        e.order = idx;
        e.a = std::move(x);
        e.b = std::move(y);
        return std::make_shared<Expr>(std::move(e));
    }
    static ExprPtr combine(std::vector<std::pair<Scalar, ExprPtr>> parts) {
        Expr e{Kind::Lin};
        e.lin = std::move(parts);
        return std::make_shared<Expr>(std::move(e));
    }
    static ExprPtr scale(const Scalar& s, ExprPtr x) { return combine({{s, std::move(x)}}); }
    static ExprPtr add(ExprPtr x, ExprPtr y) {
        return combine({{1, std::move(x)}, {1, std::move(y)}});
    }
    static ExprPtr sub(ExprPtr x, ExprPtr y) {
        return combine({{1, std::move(x)}, {-1, std::move(y)}});
    }
    static ExprPtr zero() { return combine({}); }
};

/// Conformal weight of an expression (max over summands when inhomogeneous;
/// used for mode-sum truncation bounds, which only need an upper bound).
inline long expr_weight(const System& sys, const ExprPtr& e) {
    switch (e->kind) {
    case Expr::Kind::One: return 0;
    case Expr::Kind::Gen: return sys.weight(e->gen);
    case Expr::Kind::Der: return e->order + expr_weight(sys, e->a);
    case Expr::Kind::Wick: return expr_weight(sys, e->a) + expr_weight(sys, e->b);
    case Expr::Kind::Circle:
        return expr_weight(sys, e->a) + expr_weight(sys, e->b) - e->order - 1;
    case Expr::Kind::Lin: {
        long w = 0;
        for (auto& [c, x] : e->lin) w = std::max(w, expr_weight(sys, x));
        return w;
    }
    }
    return 0;
}

/// Parity (0 even, 1 odd); assumes parity-homogeneous sums.
inline int expr_parity(const System& sys, const ExprPtr& e) {
    switch (e->kind) {
    case Expr::Kind::One: return 0;
    case Expr::Kind::Gen: return sys.odd(e->gen) ? 1 : 0;
    case Expr::Kind::Der: return expr_parity(sys, e->a);
    case Expr::Kind::Wick:
    case Expr::Kind::Circle:
        return (expr_parity(sys, e->a) + expr_parity(sys, e->b)) % 2;
    case Expr::Kind::Lin:
        return e->lin.empty() ? 0 : expr_parity(sys, e->lin.front().second);
    }
    return 0;
}

inline std::string expr_str(const System& sys, const ExprPtr& e) {
    std::ostringstream os;
    switch (e->kind) {
    case Expr::Kind::One: os << "1"; break;
    case Expr::Kind::Gen: os << sys.gen_name(e->gen); break;
    case Expr::Kind::Der:
        os << "d^" << e->order << "(" << expr_str(sys, e->a) << ")";
        break;
    case Expr::Kind::Wick:
        os << ":" << expr_str(sys, e->a) << " " << expr_str(sys, e->b) << ":";
        break;
    case Expr::Kind::Circle:
        os << "(" << expr_str(sys, e->a) << " o_" << e->order << " "
           << expr_str(sys, e->b) << ")";
        break;
    case Expr::Kind::Lin: {
        os << "(";
        bool first = true;
        for (auto& [c, x] : e->lin) {
            if (!first) os << " + ";
            first = false;
            os << to_string(c) << "*" << expr_str(sys, x);
        }
        os << ")";
        break;
    }
    }
    return os.str();
}

} // namespace voa

#endif
