#ifndef VOA_DIFFOP_HPP
#define VOA_DIFFOP_HPP

#include <map>
#include <utility>

#include "scalar.hpp"

namespace voa {

/// A regular differential operator on the punctured line: a finite rational
/// combination of monomials t^a d^l (a in Z, l >= 0). The basis element
/// J^l_k equals -t^{l+k} d^l; the sign lives in the conversion, composition
/// is done in the monomial basis.
class DiffOp {
public:
    // key = (a, l): exponent of t, order of d/dt
    using Key = std::pair<long, long>;
    using Terms = std::map<Key, Scalar>;

    DiffOp() = default;

    static DiffOp monomial(long a, long l, Scalar coeff = 1) {
        DiffOp op;
        op.add(a, l, std::move(coeff));
        return op;
    }

    /// J^l_k = -t^{l+k} d^l.
    static DiffOp basis_j(long l, long k) { return monomial(l + k, l, -1); }

    void add(long a, long l, const Scalar& coeff) {
        if (l < 0) throw std::domain_error("negative derivative order");
        auto it = terms_.find({a, l});
        if (it == terms_.end()) {
            if (!is_zero(coeff)) terms_.emplace(Key{a, l}, coeff);
        } else {
            it->second += coeff;
            if (is_zero(it->second)) terms_.erase(it);
        }
    }

    const Terms& terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }

    DiffOp& operator+=(const DiffOp& o) {
        for (auto& [k, c] : o.terms_) add(k.first, k.second, c);
        return *this;
    }
    DiffOp& operator*=(const Scalar& s) {
        if (is_zero(s)) { terms_.clear(); return *this; }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }
    friend DiffOp operator+(DiffOp a, const DiffOp& b) { a += b; return a; }
    friend DiffOp operator-(DiffOp a, DiffOp b) { b *= -1; a += b; return a; }
    friend DiffOp operator*(const Scalar& s, DiffOp a) { a *= s; return a; }
    friend bool operator==(const DiffOp& a, const DiffOp& b) { return a.terms_ == b.terms_; }

private:
    Terms terms_;
};

/// Associative composition f.g, by the Leibniz expansion
/// d^l t^b = sum_i C(l,i) (b)_i t^{b-i} d^{l-i}.
inline DiffOp compose(const DiffOp& f, const DiffOp& g) {
    DiffOp out;
    for (auto& [kf, cf] : f.terms()) {
        auto [a, l] = kf;
        for (auto& [kg, cg] : g.terms()) {
            auto [b, m] = kg;
            Scalar c = cf * cg;
            for (long i = 0; i <= l; ++i)
                out.add(a + b - i, l - i + m, c * binomial(l, i) * falling(b, i));
        }
    }
    return out;
}

/// Kac-Peterson 2-cocycle
/// Psi(f d^m, g d^n) = m! n! / (m+n+1)! Res_{t=0} f^{(n+1)} g^{(m)} dt,
/// evaluated symbolically on Laurent monomials.
inline Scalar cocycle(const DiffOp& f, const DiffOp& g) {
    Scalar out = 0;
    for (auto& [kf, cf] : f.terms()) {
        auto [a, m] = kf;
        for (auto& [kg, cg] : g.terms()) {
            auto [b, n] = kg;
            // residue is nonzero only when t-degrees cancel
            if (a + b != m + n) continue;
            Scalar c = factorial(m) * factorial(n) / factorial(m + n + 1);
            out += cf * cg * c * falling(a, n + 1) * falling(b, m);
        }
    }
    return out;
}

/// Bracket in the central extension: ([f,g], c * Psi(f,g)).
inline std::pair<DiffOp, Scalar> bracket_central(const DiffOp& f, const DiffOp& g,
                                                 const Scalar& c) {
    return {compose(f, g) - compose(g, f), c * cocycle(f, g)};
}

/// Apply the operator to the monomial t^k (Laurent polynomial result, as a
/// DiffOp of pure multiplication terms). Oracle for compose().
inline DiffOp apply_to_monomial(const DiffOp& f, long k) {
    DiffOp out;
    for (auto& [key, c] : f.terms()) {
        auto [a, l] = key;
        out.add(a + k - l, 0, c * falling(k, l));
    }
    return out;
}

} // namespace voa

#endif
