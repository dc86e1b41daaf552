#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "voa/zhu.hpp"

using namespace voa;

namespace {

ZMono zm(std::initializer_list<long> ls) {
    ZMono m(ls);
    std::sort(m.begin(), m.end(), std::greater<long>());
    return m;
}

ZhuPoly zp(std::initializer_list<std::pair<ZMono, Scalar>> ts) {
    ZhuPoly p;
    for (auto& [m, c] : ts) zpoly_add(p, m, c);
    return p;
}

FockState random_state(std::mt19937& rng, Engine& eng, long max_wt) {
    std::vector<Word> basis = weight_basis(eng.system(), 1 + (rng() % max_wt));
    std::uniform_int_distribution<long> c(-3, 3);
    FockState out(eng.system());
    for (int t = 0; t < 2; ++t) out.add(basis[rng() % basis.size()], scalar(c(rng)));
    return out;
}

} // namespace

TEST_CASE("zhu polynomial arithmetic and orders") {
    ZhuPoly p = zp({{zm({2, 0}), scalar(1)}, {zm({1, 1}), scalar(-2)}});
    CHECK(zpoly_top_var(p) == 2);
    CHECK(zmono_weight(zm({2, 0})) == 4);
    // deg-lex: a2 a0 beats a1 a1 at equal weight
    CHECK(zpoly_lt(p) == zp({{zm({2, 0}), scalar(1)}}));
    // the symbol keeps only the top weight component
    ZhuPoly q = p + zp({{zm({0}), scalar(7)}});
    CHECK(zpoly_symbol(q) == p);
    CHECK(zpoly_mul(zp({{zm({1}), scalar(2)}}), zp({{zm({0}), scalar(3)}})) ==
          zp({{zm({1, 0}), scalar(6)}}));
}

TEST_CASE("linear elimination stays exact") {
    // rel: a3 - a1 a0 - 2
    ZhuPoly rel = zp({{zm({3}), scalar(1)}, {zm({1, 0}), scalar(-1)}, {zm({}), scalar(-2)}});
    ZhuPoly p = zp({{zm({3, 3}), scalar(1)}, {zm({3}), scalar(4)}});
    ZhuPoly out = zpoly_eliminate(p, 3, rel);
    CHECK(zpoly_top_var(out) <= 2);
    // substitute a3 = a1 a0 + 2 by hand: (a1 a0 + 2)^2 + 4(a1 a0 + 2)
    ZhuPoly s = zp({{zm({1, 0}), scalar(1)}, {zm({}), scalar(2)}});
    CHECK(out == zpoly_mul(s, s) + zpoly_scale(s, scalar(4)));
    CHECK_THROWS_AS(zpoly_eliminate(p, 3, zp({{zm({3, 0}), scalar(1)}})),
                    std::invalid_argument);
}

TEST_CASE("star and circ products against the mode formula") {
    Engine cur(System::current(scalar(-1)));
    FockState vac = cur.vacuum();
    std::mt19937 rng(71);
    for (int i = 0; i < 10; ++i) {
        FockState v = random_state(rng, cur, 5);
        CHECK(zhu_star(cur, vac, v) == v);
        CHECK(zhu_star(cur, v, vac) == v);
    }
    // J0 * J0 = J0(-1)J0(-1)|0>
    FockState j0 = state_of(cur, Expr::generator(0));
    CHECK(zhu_star(cur, j0, j0) ==
          FockState(cur.system(), Word{Mode{0, -1}, Mode{0, -1}}));
    // J^l circ |0> = dJ^l + (l+1) J^l
    for (long l = 0; l <= 3; ++l) {
        FockState jl = state_of(cur, Expr::generator(l));
        FockState rhs = state_of(cur, Expr::derivative(1, Expr::generator(l))) +
                        scalar(l + 1) * jl;
        CHECK(zhu_circ(cur, jl, vac) == rhs);
    }
}

TEST_CASE("reduction of generators and derivatives") {
    Engine cur(System::current(scalar(-1)));
    ZhuReducer zr(cur);
    CHECK(zr.reduce(cur.vacuum()) == zp({{zm({}), scalar(1)}}));
    for (long l = 0; l <= 4; ++l) {
        CHECK(zr.reduce(state_of(cur, Expr::generator(l))) == zp({{zm({l}), scalar(1)}}));
        CHECK(zr.reduce(state_of(cur, Expr::derivative(1, Expr::generator(l)))) ==
              zp({{zm({l}), scalar(-(l + 1))}}));
    }
}

TEST_CASE("reduction is an algebra map killing O") {
    Engine cur(System::current(scalar(-1)));
    ZhuReducer zr(cur);
    std::mt19937 rng(73);
    for (int i = 0; i < 8; ++i) {
        FockState u = random_state(rng, cur, 4);
        FockState v = random_state(rng, cur, 4);
        FockState w = random_state(rng, cur, 3);
        ZhuPoly ru = zr.reduce(u), rv = zr.reduce(v);
        CHECK(zr.reduce(zhu_star(cur, u, v)) == zpoly_mul(ru, rv));
        CHECK(zr.reduce(zhu_star(cur, u, v)) == zr.reduce(zhu_star(cur, v, u)));
        FockState o = zhu_circ(cur, u, v);
        CHECK(zr.reduce(o).empty());
        CHECK(zr.reduce(zhu_star(cur, w, o)).empty());
        CHECK(zr.reduce(zhu_star(cur, o, w)).empty());
    }
}

TEST_CASE("star product is associative modulo O") {
    Engine cur(System::current(scalar(-1)));
    ZhuReducer zr(cur);
    std::mt19937 rng(79);
    for (int i = 0; i < 5; ++i) {
        FockState u = random_state(rng, cur, 4);
        FockState v = random_state(rng, cur, 3);
        FockState w = random_state(rng, cur, 3);
        CHECK(zr.reduce(zhu_star(cur, zhu_star(cur, u, v), w)) ==
              zr.reduce(zhu_star(cur, u, zhu_star(cur, v, w))));
    }
}

TEST_CASE("leading terms") {
    Engine cur(System::current(scalar(-1)));
    const System& sys = cur.system();
    for (long k = 0; k <= 4; ++k)
        for (long l = 0; l <= 4; ++l) {
            Scalar c = (l % 2) ? -1 : 1;
            CHECK(leading_term(state_of(cur, build_omega(sys, k, l))) ==
                  zp({{zm({k + l}), c}}));
        }
    // elements of C2 have no leading term
    CHECK(leading_term(state_of(cur, Expr::derivative(1, Expr::generator(0)))).empty());

    Engine ff(System::betagamma(1));
    FockState d0 = construct_dij(ff, {0, 1}, {0, 1}).state(cur);
    CHECK(leading_term(d0) == zp({{zm({2, 0}), scalar(-1)}}));
}

TEST_CASE("leading term is multiplicative without top cancellation") {
    Engine cur(System::current(scalar(-1)));
    const System& sys = cur.system();
    Engine ff(System::betagamma(1));
    std::vector<FockState> samples{
        state_of(cur, Expr::generator(2)),
        state_of(cur, build_omega(sys, 1, 1)),
        state_of(cur, build_omega(sys, 0, 2)),
        construct_dij(ff, {0, 1}, {0, 1}).state(cur),
    };
    for (auto& u : samples)
        for (auto& v : samples) {
            ZhuPoly lhs = leading_term(zhu_star(cur, u, v));
            ZhuPoly rhs = zpoly_lt(zpoly_mul(leading_term(u), leading_term(v)));
            CHECK(lhs == rhs);
        }
}

TEST_CASE("ideal reductions annihilate multiples of the decoupling element") {
    Engine ff(System::betagamma(1));
    Engine cur(System::current(scalar(-1)));
    ZhuReducer zr(cur);
    DijElement d0 = construct_dij(ff, {0, 1}, {0, 1});
    DijElement dC = construct_dij(ff, {0, 1}, {0, 2});
    DijElement dA = construct_dij(ff, {0, 1}, {0, 3});
    ZhuPoly red0 = zr.reduce(d0.state(cur));
    ZhuPoly redC = zr.reduce(dC.state(cur));
    ZhuPoly redA = zr.reduce(dA.state(cur));
    auto clear = [&](ZhuPoly p) {
        while (zpoly_top_var(p) >= 3) {
            long l = zpoly_top_var(p);
            const ZhuPoly* r = l == 3 ? &red0 : l == 4 ? &redC : l == 5 ? &redA : nullptr;
            REQUIRE(r != nullptr);
            p = zpoly_eliminate(std::move(p), l, *r);
        }
        return p;
    };
    FockState D = d0.state(cur);
    FockState j0 = state_of(cur, Expr::generator(0));
    FockState j1 = state_of(cur, Expr::generator(1));
    std::vector<FockState> elems{
        D,
        state_of(cur, Expr::derivative(1, expr_of_state(D))),
        zhu_star(cur, j0, D),
        zhu_star(cur, D, j0),
        zhu_star(cur, D, j1),
        dC.state(cur),
    };
    for (auto& x : elems) CHECK(clear(zr.reduce(x)).empty());
}

TEST_CASE("variety relation at rank 1") {
    VarietyRelation vr = variety_relation(1);
    CHECK(vr.lambda1 == scalar(1, 12));
    CHECK(vr.lambda2 == scalar(-9, 20));
    CHECK(!vr.rel.empty());
    CHECK(zpoly_top_var(vr.rel) <= 2);
    CHECK(vr.eliminated.weight() == 6);
    // leading term has the predicted shape (a^0)^2 prod_{k<=1} a^{2k}
    CHECK(zpoly_lt(vr.rel) == zp({{zm({2, 0, 0, 0}), scalar(-3, 5)}}));
    // the eliminated element still lies in the vertex ideal
    Engine ff(System::betagamma(1));
    CHECK(state_of(ff, realize(ff.system(), expr_of_state(vr.eliminated))).zero());
}
