#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "voa/diffop.hpp"

using namespace voa;

namespace {

DiffOp random_op(std::mt19937& rng) {
    std::uniform_int_distribution<long> a(-3, 3), l(0, 3), c(-4, 4), nterms(1, 3);
    DiffOp op;
    long t = nterms(rng);
    for (long i = 0; i < t; ++i) op.add(a(rng), l(rng), scalar(c(rng)));
    return op;
}

} // namespace

TEST_CASE("compose basic identities") {
    DiffOp d = DiffOp::monomial(0, 1);  // d/dt
    DiffOp t = DiffOp::monomial(1, 0);  // t
    DiffOp td = DiffOp::monomial(1, 1); // t d/dt

    DiffOp dt = compose(d, t);
    DiffOp expect = DiffOp::monomial(1, 1) + DiffOp::monomial(0, 0);
    CHECK(dt == expect);

    DiffOp euler2 = compose(td, td);
    CHECK(euler2 == DiffOp::monomial(2, 2) + DiffOp::monomial(1, 1));
}

TEST_CASE("compose agrees with the action on monomials") {
    DiffOp f = DiffOp::monomial(3, 2); // t^3 d^2
    DiffOp g = DiffOp::monomial(2, 1); // t^2 d
    DiffOp fg = compose(f, g);
    for (long k = -5; k <= 5; ++k)
        CHECK(apply_to_monomial(fg, k) ==
              [&] {
                  DiffOp gk = apply_to_monomial(g, k);
                  DiffOp out;
                  for (auto& [key, c] : gk.terms())
                      out += c * apply_to_monomial(f, key.first);
                  return out;
              }());
}

TEST_CASE("compose is associative on random triples") {
    std::mt19937 rng(11);
    for (int i = 0; i < 50; ++i) {
        DiffOp f = random_op(rng), g = random_op(rng), h = random_op(rng);
        CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
    }
}

TEST_CASE("cocycle values") {
    CHECK(cocycle(DiffOp::monomial(1, 1), DiffOp::monomial(2, 1)) == 0);
    for (long k = 1; k <= 5; ++k) {
        DiffOp f = DiffOp::monomial(k, 0, -1);
        DiffOp g = DiffOp::monomial(-k, 0, -1);
        CHECK(cocycle(f, g) == scalar(k));
    }
    // J^1_2 = -t^3 d, J^1_{-2} = -t^{-1} d; signs cancel and
    // Psi(t^3 d, t^{-1} d) = (1/3!) Res (t^3)'' (t^{-1})' = -1
    CHECK(cocycle(DiffOp::basis_j(1, 2), DiffOp::basis_j(1, -2)) == scalar(-1));
}

TEST_CASE("cocycle condition on random triples") {
    std::mt19937 rng(17);
    auto lie = [](const DiffOp& f, const DiffOp& g) { return compose(f, g) - compose(g, f); };
    for (int i = 0; i < 50; ++i) {
        DiffOp f = random_op(rng), g = random_op(rng), h = random_op(rng);
        Scalar s = cocycle(lie(f, g), h) + cocycle(lie(g, h), f) + cocycle(lie(h, f), g);
        CHECK(is_zero(s));
    }
}

TEST_CASE("bracket_central") {
    DiffOp td = DiffOp::monomial(1, 1);
    auto [op0, c0] = bracket_central(td, td, scalar(7));
    CHECK(op0.zero());
    CHECK(is_zero(c0));

    // rank-one Heisenberg: [J^0_k, J^0_m] = c k delta_{k+m,0}
    Scalar c = scalar(-3);
    for (long k = -3; k <= 3; ++k)
        for (long m = -3; m <= 3; ++m) {
            auto [op, cen] = bracket_central(DiffOp::basis_j(0, k), DiffOp::basis_j(0, m), c);
            CHECK(op.zero());
            CHECK(cen == (k + m == 0 ? c * scalar(k) : scalar(0)));
        }

    for (long m = -3; m <= 3; ++m) {
        auto [op, cen] = bracket_central(td, DiffOp::monomial(m, 0), scalar(5));
        CHECK(op == scalar(m) * DiffOp::monomial(m, 0));
        CHECK(is_zero(cen));
    }
}

TEST_CASE("bracket antisymmetry") {
    std::mt19937 rng(23);
    for (int i = 0; i < 50; ++i) {
        DiffOp f = random_op(rng), g = random_op(rng);
        auto [op1, c1] = bracket_central(f, g, scalar(2));
        auto [op2, c2] = bracket_central(g, f, scalar(2));
        CHECK(op1 == scalar(-1) * op2);
        CHECK(c1 == -c2);
    }
}
