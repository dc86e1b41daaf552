#ifndef VOA_BASIS_HPP
#define VOA_BASIS_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "state.hpp"

namespace voa {

/// All canonical PBW words of the given total weight, in a deterministic
/// order. Free-field systems have weight-zero creation modes (gamma(-1),
/// c(-1)), so they need a word-length cap to stay finite; the current
/// algebra does not (every creation mode has weight >= 1).
inline std::vector<Word> weight_basis(const System& sys, long w, long max_len = -1) {
    if (w < 0) return {};
    if (sys.kind != SystemKind::Current && max_len < 0)
        throw std::invalid_argument("free-field weight basis needs a length cap");

    std::vector<Word> out;
    Word cur;
    bool odd = sys.kind == SystemKind::BC;

    std::function<void(long)> rec = [&](long w_rem) {
        if (w_rem == 0) out.push_back(cur);
        if (max_len >= 0 && static_cast<long>(cur.size()) >= max_len) return;
        long gen_count;
        if (sys.kind == SystemKind::Current) {
            // J^l contributes weight >= l+1
            gen_count = w_rem; // l <= w_rem - 1
        } else {
            gen_count = 2 * sys.n;
        }
        for (long g = 0; g < gen_count; ++g) {
            long wt = sys.weight(g);
            // mode_weight = wt - m - 1 in [max(wt, needed-zero..), w_rem]
            for (long m = -1; wt - m - 1 <= w_rem; --m) {
                Mode mo{g, m};
                long mw = sys.mode_weight(mo);
                if (!cur.empty()) {
                    const Mode& last = cur.back();
                    if (canon_less(mo, last)) continue;
                    if (odd && mo == last) continue;
                }
                cur.push_back(mo);
                rec(w_rem - mw);
                cur.pop_back();
            }
        }
    };
    rec(w);
    return out;
}

/// Coordinates of a state in an explicit word list; throws when a word of
/// the state is missing from the list.
inline std::vector<Scalar> coords_in(const FockState& v, const std::vector<Word>& basis) {
    std::map<Word, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
    std::vector<Scalar> out(basis.size(), Scalar(0));
    for (auto& [w, c] : v.terms()) {
        auto it = index.find(w);
        if (it == index.end()) throw std::logic_error("word outside basis");
        out[it->second] = c;
    }
    return out;
}

} // namespace voa

#endif
