#ifndef VOA_SERIALIZE_HPP
#define VOA_SERIALIZE_HPP

#include <json.hpp>

#include "state.hpp"
#include "w1inf.hpp"
#include "zhu.hpp"

namespace voa {

using nlohmann::json;

inline json system_to_json(const System& sys) {
    switch (sys.kind) {
    case SystemKind::Current: return {{"kind", "current"}, {"c", to_string(sys.c)}};
    case SystemKind::BetaGamma: return {{"kind", "betagamma"}, {"n", sys.n}};
    case SystemKind::BC: return {{"kind", "bc"}, {"n", sys.n}};
    }
    return {};
}

inline System system_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "current") return System::current(parse_scalar(j.at("c").get<std::string>()));
    if (kind == "betagamma") return System::betagamma(j.at("n").get<long>());
    if (kind == "bc") return System::bc(j.at("n").get<long>());
    throw std::invalid_argument("unknown system kind '" + kind + "'");
}

/// ["J", l, m] / ["beta", i, m] / ["gamma", i, m] / ["b", i, m] / ["c", i, m]
inline json mode_to_json(const System& sys, const Mode& mo) {
    switch (sys.kind) {
    case SystemKind::Current: return json::array({"J", mo.gen, mo.m});
    case SystemKind::BetaGamma:
        if (mo.gen < sys.n) return json::array({"beta", mo.gen + 1, mo.m});
        return json::array({"gamma", mo.gen - sys.n + 1, mo.m});
    case SystemKind::BC:
        if (mo.gen < sys.n) return json::array({"b", mo.gen + 1, mo.m});
        return json::array({"c", mo.gen - sys.n + 1, mo.m});
    }
    return {};
}

inline Mode mode_from_json(const System& sys, const json& j) {
    std::string name = j.at(0).get<std::string>();
    long idx = j.at(1).get<long>();
    long m = j.at(2).get<long>();
    if (sys.kind == SystemKind::Current) {
        if (name != "J" || idx < 0) throw std::invalid_argument("bad current mode");
        return {idx, m};
    }
    bool first = (name == "beta" || name == "b");
    bool second = (name == "gamma" || name == "c");
    if ((!first && !second) || idx < 1 || idx > sys.n)
        throw std::invalid_argument("bad free-field mode");
    return {first ? idx - 1 : sys.n + idx - 1, m};
}

inline json state_to_json(const FockState& v) {
    json terms = json::array();
    for (auto& [w, c] : v.terms()) {
        json word = json::array();
        for (auto& mo : w) word.push_back(mode_to_json(v.system(), mo));
        terms.push_back({{"coeff", to_string(c)}, {"word", word}});
    }
    return {{"system", system_to_json(v.system())},
            {"weight", v.max_weight()},
            {"terms", terms}};
}

inline FockState state_from_json(const json& j) {
    System sys = system_from_json(j.at("system"));
    FockState out(sys);
    for (auto& t : j.at("terms")) {
        Word w;
        for (auto& mj : t.at("word")) w.push_back(mode_from_json(sys, mj));
        out.add(std::move(w), parse_scalar(t.at("coeff").get<std::string>()));
    }
    return out;
}

/// {"vars": "a", "terms": [{"coeff": "p/q", "mono": [l, ...]}, ...]}
inline json zhupoly_to_json(const ZhuPoly& p) {
    json terms = json::array();
    for (auto& [m, c] : p) terms.push_back({{"coeff", to_string(c)}, {"mono", m}});
    return {{"vars", "a"}, {"terms", terms}};
}

inline ZhuPoly zhupoly_from_json(const json& j) {
    ZhuPoly out;
    for (auto& t : j.at("terms")) {
        ZMono m = t.at("mono").get<ZMono>();
        std::sort(m.begin(), m.end(), std::greater<long>());
        zpoly_add(out, std::move(m), parse_scalar(t.at("coeff").get<std::string>()));
    }
    return out;
}

/// {"vars": "Omega", "terms": [{"coeff": "p/q",
///   "mono": [[a, b, k], ...]}, ...]} with k the derivative order.
inline json nopoly_to_json(const NOPoly& p) {
    json terms = json::array();
    for (auto& [m, c] : p) {
        json mono = json::array();
        for (auto& f : m) mono.push_back(json::array({f.a, f.b, f.k}));
        terms.push_back({{"coeff", to_string(c)}, {"mono", mono}});
    }
    return {{"vars", "Omega"}, {"terms", terms}};
}

inline NOPoly nopoly_from_json(const json& j) {
    NOPoly out;
    for (auto& t : j.at("terms")) {
        OmMono m;
        for (auto& f : t.at("mono"))
            m.push_back({f.at(0).get<long>(), f.at(1).get<long>(), f.at(2).get<long>()});
        std::sort(m.begin(), m.end());
        nopoly_add(out, std::move(m), parse_scalar(t.at("coeff").get<std::string>()));
    }
    return out;
}

} // namespace voa

#endif
