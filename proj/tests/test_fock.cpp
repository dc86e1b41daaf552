#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "voa/basis.hpp"
#include "voa/engine.hpp"
#include "voa/identities.hpp"
#include "voa/w1inf.hpp"

using namespace voa;

namespace {

long expr_leaves(const ExprPtr& e) {
    switch (e->kind) {
    case Expr::Kind::One: return 0;
    case Expr::Kind::Gen: return 1;
    case Expr::Kind::Der: return expr_leaves(e->a);
    case Expr::Kind::Wick:
    case Expr::Kind::Circle: return expr_leaves(e->a) + expr_leaves(e->b);
    case Expr::Kind::Lin: {
        long d = 0;
        for (auto& [c, x] : e->lin) d = std::max(d, expr_leaves(x));
        return d;
    }
    }
    return 0;
}

} // namespace

TEST_CASE("state_of basic examples") {
    Engine cur(System::current(scalar(-1)));
    CHECK(state_of(cur, Expr::generator(0)) ==
          FockState(cur.system(), Word{Mode{0, -1}}));

    Engine bg(System::betagamma(1));
    // d(beta) -> beta(-2)|0>
    CHECK(state_of(bg, Expr::derivative(1, Expr::generator(0))) ==
          FockState(bg.system(), Word{Mode{0, -2}}));
    // :beta gamma: -> beta(-1)gamma(-1)|0>
    CHECK(state_of(bg, Expr::wick(Expr::generator(0), Expr::generator(1))) ==
          FockState(bg.system(), Word{Mode{0, -1}, Mode{1, -1}}));
    // :J0 J0: -> J0(-1)J0(-1)|0>
    CHECK(state_of(cur, Expr::wick(Expr::generator(0), Expr::generator(0))) ==
          FockState(cur.system(), Word{Mode{0, -1}, Mode{0, -1}}));
}

TEST_CASE("mode action examples") {
    Engine bg(System::betagamma(1));
    CHECK(bg.apply(Mode{0, 0}, bg.vacuum()).zero());
    // beta(0) gamma(-1)|0> = |0>
    FockState g = FockState(bg.system(), Word{Mode{1, -1}});
    CHECK(bg.apply(Mode{0, 0}, g) == bg.vacuum());
    // gamma(0) beta(-1)|0> = -|0>
    FockState b = FockState(bg.system(), Word{Mode{0, -1}});
    CHECK(bg.apply(Mode{1, 0}, b) == scalar(-1) * bg.vacuum());

    // J0(1) J0(-1)|0> = c|0>
    Scalar c = scalar(-3);
    Engine cur(System::current(c));
    FockState j = FockState(cur.system(), Word{Mode{0, -1}});
    CHECK(cur.apply(Mode{0, 1}, j) == c * cur.vacuum());
}

TEST_CASE("unit laws") {
    std::mt19937 rng(31);
    Engine bg(System::betagamma(2));
    for (int i = 0; i < 20; ++i) {
        ExprPtr a = random_expr(rng, bg.system(), 4);
        FockState va = state_of(bg, a);
        CHECK(state_of(bg, Expr::wick(Expr::unit(), a)) == va);
        CHECK(state_of(bg, Expr::wick(a, Expr::unit())) == va);
        // 1 o_n a = delta_{n,-1} a
        for (long n = -3; n <= 2; ++n) {
            FockState lhs = circle(bg, Expr::unit(), n, a);
            CHECK(lhs == (n == -1 ? va : FockState(bg.system())));
        }
        // a o_{-k-1} 1 = (1/k!) d^k a
        for (long k = 0; k <= 2; ++k) {
            FockState lhs = circle(bg, a, -k - 1, Expr::unit());
            FockState rhs = state_of(bg, Expr::derivative(k, a));
            rhs *= Scalar(1) / factorial(k);
            CHECK(lhs == rhs);
        }
        for (long n = 0; n <= 2; ++n)
            CHECK(circle(bg, a, n, Expr::unit()).zero());
    }
}

TEST_CASE("circle products reproduce the free-field OPEs") {
    for (long n : {1L, 2L}) {
        Engine bg(System::betagamma(n));
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) {
                ExprPtr b = Expr::generator(i), g = Expr::generator(n + j);
                Scalar d = (i == j) ? 1 : 0;
                CHECK(circle(bg, b, 0, g) == d * bg.vacuum());
                CHECK(circle(bg, g, 0, b) == (-d) * bg.vacuum());
                CHECK(circle(bg, b, 0, Expr::generator(j)).zero());
                CHECK(circle(bg, g, 0, Expr::generator(n + i)).zero());
                for (long k = 1; k <= 3; ++k) CHECK(circle(bg, b, k, g).zero());
            }
        Engine bc(System::bc(n));
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) {
                ExprPtr b = Expr::generator(i), cgen = Expr::generator(n + j);
                Scalar d = (i == j) ? 1 : 0;
                CHECK(circle(bc, b, 0, cgen) == d * bc.vacuum());
                CHECK(circle(bc, cgen, 0, b) == d * bc.vacuum());
                for (long k = 1; k <= 3; ++k) CHECK(circle(bc, b, k, cgen).zero());
            }
    }
}

TEST_CASE("current circle examples") {
    Engine cur(System::current(scalar(-1)));
    // J^1 o_0 J^l = -d J^l
    for (long l = 0; l <= 4; ++l) {
        FockState lhs = circle(cur, Expr::generator(1), 0, Expr::generator(l));
        FockState rhs = state_of(cur, Expr::derivative(1, Expr::generator(l)));
        CHECK(lhs == scalar(-1) * rhs);
    }
    // J^0 o_1 J^0 = c|0>
    for (Scalar c : {scalar(-1), scalar(-2), scalar(5, 3)}) {
        Engine eng(System::current(c));
        CHECK(circle(eng, Expr::generator(0), 1, Expr::generator(0)) ==
              c * eng.vacuum());
    }
}

TEST_CASE("wick agrees with circle at index -1") {
    std::mt19937 rng(37);
    for (System sys : {System::current(scalar(-2)), System::betagamma(1), System::bc(2)}) {
        Engine eng(sys);
        for (int i = 0; i < 15; ++i) {
            ExprPtr a = random_expr(rng, sys, 4);
            ExprPtr b = random_expr(rng, sys, 4);
            CHECK(state_of(eng, Expr::wick(a, b)) == circle(eng, a, -1, b));
        }
    }
}

TEST_CASE("weight basis dimensions") {
    System cur = System::current(scalar(-1));
    CHECK(weight_basis(cur, 0).size() == 1);
    CHECK(weight_basis(cur, 1).size() == 1);
    CHECK(weight_basis(cur, 4).size() == 13);
    // generating function prod_s (1 - q^s)^{-s}
    CHECK(weight_basis(cur, 9).size() == 282);
    CHECK_THROWS_AS(weight_basis(System::betagamma(1), 2), std::invalid_argument);
    CHECK(weight_basis(System::betagamma(1), 0, 0).size() == 1);
}

TEST_CASE("quantum commutativity bound: a o_n b = 0 for n >= wt a + wt b") {
    std::mt19937 rng(41);
    for (System sys : {System::current(scalar(-1)), System::betagamma(2), System::bc(1)}) {
        Engine eng(sys);
        for (int i = 0; i < 15; ++i) {
            ExprPtr a = random_expr(rng, sys, 4);
            ExprPtr b = random_expr(rng, sys, 4);
            long bound = expr_weight(sys, a) + expr_weight(sys, b);
            for (long n = bound; n <= bound + 2; ++n)
                CHECK(circle(eng, a, n, b).zero());
        }
    }
}

TEST_CASE("weight homogeneity of the circle products") {
    std::mt19937 rng(43);
    for (System sys : {System::current(scalar(-1)), System::betagamma(1), System::bc(1)}) {
        Engine eng(sys);
        for (int i = 0; i < 15; ++i) {
            ExprPtr a = random_expr(rng, sys, 4);
            ExprPtr b = random_expr(rng, sys, 4);
            long wa = expr_weight(sys, a), wb = expr_weight(sys, b);
            for (long n = -3; n < wa + wb; ++n) {
                FockState v = circle(eng, a, n, b);
                if (v.zero()) continue;
                CHECK(v.weight() == wa + wb - n - 1);
            }
        }
    }
}

TEST_CASE("derivative shifts the circle index: (da) o_n b = -n (a o_{n-1} b)") {
    std::mt19937 rng(47);
    for (System sys : {System::current(scalar(-2)), System::betagamma(1), System::bc(2)}) {
        Engine eng(sys);
        for (int i = 0; i < 15; ++i) {
            ExprPtr a = random_expr(rng, sys, 4);
            ExprPtr b = random_expr(rng, sys, 4);
            long bound = expr_weight(sys, a) + expr_weight(sys, b) + 1;
            for (long n = -2; n <= bound; ++n) {
                FockState lhs = circle(eng, Expr::derivative(1, a), n, b);
                FockState rhs = circle(eng, a, n - 1, b);
                rhs *= scalar(-n);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("filtration degree bounds in the free-field systems") {
    std::mt19937 rng(53);
    for (System sys : {System::betagamma(1), System::betagamma(2), System::bc(1)}) {
        Engine eng(sys);
        for (int i = 0; i < 15; ++i) {
            ExprPtr a = random_expr(rng, sys, 4);
            ExprPtr b = random_expr(rng, sys, 4);
            long da = expr_leaves(a), db = expr_leaves(b);
            // n < 0: the Wick product stays within the sum filtration
            for (long n = -2; n <= -1; ++n)
                CHECK(circle(eng, a, n, b).max_degree() <= da + db);
            // n >= 0: a contraction consumes one conjugate pair
            long bound = expr_weight(sys, a) + expr_weight(sys, b);
            for (long n = 0; n < bound; ++n)
                CHECK(circle(eng, a, n, b).max_degree() <= da + db - 2);
        }
    }
}

TEST_CASE("nonassociativity identity on fixed examples") {
    Engine bg(System::betagamma(1));
    ExprPtr b0 = Expr::generator(0), g0 = Expr::generator(1);
    CHECK(check_identity_i(bg, b0, g0, b0));
    CHECK(check_identity_i(bg, Expr::derivative(1, b0), g0, Expr::wick(b0, g0)));
    Engine cur(System::current(scalar(-1)));
    ExprPtr j0 = Expr::generator(0), j1 = Expr::generator(1);
    CHECK(check_identity_i(cur, j0, j1, j0));
}

TEST_CASE("noncommutativity identity, including a = b") {
    Engine cur(System::current(scalar(-2)));
    ExprPtr j1 = Expr::generator(1);
    CHECK(check_identity_ii(cur, j1, j1));
    std::mt19937 rng(59);
    Engine bg(System::betagamma(1));
    for (int i = 0; i < 20; ++i) {
        ExprPtr a = random_expr(rng, bg.system(), 4);
        ExprPtr b = random_expr(rng, bg.system(), 4);
        CHECK(check_identity_ii(bg, a, b));
        CHECK(check_identity_ii(bg, a, a));
    }
}

TEST_CASE("derivation-defect identity on the documented example") {
    Engine cur(System::current(scalar(-2)));
    ExprPtr a = Expr::generator(2);
    ExprPtr om = build_omega(cur.system(), 0, 0);
    CHECK(check_identity_iii(cur, a, om, om, 2));
    Engine bg(System::betagamma(2));
    ExprPtr a2 = build_j(bg.system(), 2);
    ExprPtr om2 = build_omega(bg.system(), 0, 0);
    CHECK(check_identity_iii(bg, a2, om2, om2, 2));
}

TEST_CASE("identity suites on seeded random cases") {
    for (System sys : {System::current(scalar(-1)), System::betagamma(1), System::bc(1)}) {
        Engine eng(sys);
        SuiteResult r = identity_suite(eng, 2024, 25);
        INFO(r.witness);
        CHECK(r.ok());
        CHECK(r.cases == 25);
    }
}
