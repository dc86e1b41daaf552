#ifndef VOA_STATE_HPP
#define VOA_STATE_HPP

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "system.hpp"

namespace voa {

/// PBW word: list of creation modes in canonical order. The empty word is
/// the vacuum.
using Word = std::vector<Mode>;

inline long word_weight(const System& sys, const Word& w) {
    long wt = 0;
    for (auto& mo : w) wt += sys.mode_weight(mo);
    return wt;
}

/// Finite rational combination of PBW words over one generator system.
class FockState {
public:
    using Terms = std::map<Word, Scalar>;

    FockState() = default;
    explicit FockState(System sys) : sys_(std::move(sys)) {}
    FockState(System sys, Word w, Scalar coeff = 1) : sys_(std::move(sys)) {
        add(std::move(w), std::move(coeff));
    }

    static FockState vacuum(System sys) { return FockState(std::move(sys), Word{}); }

    const System& system() const { return sys_; }
    const Terms& terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }

    void add(Word w, const Scalar& coeff) {
        if (is_zero(coeff)) return;
        auto it = terms_.find(w);
        if (it == terms_.end()) terms_.emplace(std::move(w), coeff);
        else {
            it->second += coeff;
            if (is_zero(it->second)) terms_.erase(it);
        }
    }

    FockState& operator+=(const FockState& o) {
        for (auto& [w, c] : o.terms_) add(w, c);
        return *this;
    }
    FockState& operator-=(const FockState& o) {
        for (auto& [w, c] : o.terms_) add(w, -c);
        return *this;
    }
    FockState& operator*=(const Scalar& s) {
        if (is_zero(s)) { terms_.clear(); return *this; }
        for (auto& [w, c] : terms_) c *= s;
        return *this;
    }
    friend FockState operator+(FockState a, const FockState& b) { a += b; return a; }
    friend FockState operator-(FockState a, const FockState& b) { a -= b; return a; }
    friend FockState operator*(const Scalar& s, FockState a) { a *= s; return a; }
    friend bool operator==(const FockState& a, const FockState& b) {
        return a.terms_ == b.terms_;
    }

    /// Largest weight among the words (0 for the zero state).
    long max_weight() const {
        long w = 0;
        for (auto& [word, c] : terms_) w = std::max(w, word_weight(sys_, word));
        return w;
    }

    /// Weight of a homogeneous state; throws on mixed weights.
    long weight() const {
        bool first = true;
        long w = 0;
        for (auto& [word, c] : terms_) {
            long ww = word_weight(sys_, word);
            if (first) { w = ww; first = false; }
            else if (ww != w) throw std::logic_error("inhomogeneous state");
        }
        return w;
    }

    /// Largest word length (filtration degree is twice this).
    long max_degree() const {
        std::size_t d = 0;
        for (auto& [word, c] : terms_) d = std::max(d, word.size());
        return static_cast<long>(d);
    }

    /// Terms whose word length equals exactly d.
    FockState degree_slice(long d) const {
        FockState out(sys_);
        for (auto& [word, c] : terms_)
            if (static_cast<long>(word.size()) == d) out.add(word, c);
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [word, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << to_string(c) << ")";
            if (word.empty()) { os << "|0>"; continue; }
            for (auto& mo : word)
                os << " " << sys_.gen_name(mo.gen) << "(" << mo.m << ")";
            os << " |0>";
        }
        return os.str();
    }

private:
    System sys_;
    Terms terms_;
};

inline bool state_equal(const FockState& a, const FockState& b) { return a == b; }

} // namespace voa

#endif
