#ifndef VOA_SEXPR_HPP
#define VOA_SEXPR_HPP

#include <cctype>

#include "w1inf.hpp"

namespace voa {

struct SexprError : std::runtime_error {
    std::size_t pos;
    SexprError(const std::string& msg, std::size_t p)
        : std::runtime_error(msg + " at position " + std::to_string(p)), pos(p) {}
};

/// Syntax tree of the expression mini-language:
///   (J l)            generator J^l (realized per system)
///   (Om a b)         quadratic generator omega_{a,b}
///   (d k e)          k-th derivative
///   (w [p/q] e1 ...) right-nested Wick product, optional rational scale
///   (circ n e1 e2)   circle product e1 o_n e2
///   (+ e1 e2 ...)    sum
///   p/q              rational multiple of the unit field
struct SExpr {
    enum class Kind { J, Om, D, W, Circ, Sum, Rat };
    Kind kind;
    long a = 0, b = 0;
    Scalar coeff = 1;
    std::vector<SExpr> kids;
};

namespace detail {

struct SToken {
    enum class Kind { LParen, RParen, Atom, End } kind;
    std::string text;
    std::size_t pos;
};

class SLexer {
public:
    explicit SLexer(const std::string& s) : s_(s) {}
    SToken next() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (i_ >= s_.size()) return {SToken::Kind::End, "", i_};
        std::size_t start = i_;
        char c = s_[i_];
        if (c == '(') { ++i_; return {SToken::Kind::LParen, "(", start}; }
        if (c == ')') { ++i_; return {SToken::Kind::RParen, ")", start}; }
        std::string text;
        while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) &&
               s_[i_] != '(' && s_[i_] != ')')
            text += s_[i_++];
        return {SToken::Kind::Atom, text, start};
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;
};

inline bool atom_is_rational(const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-') ? 1 : 0;
    if (i >= t.size()) return false;
    bool seen_slash = false;
    for (; i < t.size(); ++i) {
        if (t[i] == '/' && !seen_slash && i + 1 < t.size()) { seen_slash = true; continue; }
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    }
    return true;
}

inline long atom_long(const SToken& t) {
    try {
        std::size_t used = 0;
        long v = std::stol(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw SexprError("expected integer, got '" + t.text + "'", t.pos);
    }
}

inline SExpr parse_node(SLexer& lex, SToken tok);

inline SExpr parse_list(SLexer& lex, std::size_t open_pos) {
    SToken head = lex.next();
    if (head.kind != SToken::Kind::Atom)
        throw SexprError("expected operator after '('", head.pos);
    auto expect_int = [&]() { return atom_long(lex.next()); };
    auto expect_close = [&](SExpr e) {
        SToken t = lex.next();
        if (t.kind != SToken::Kind::RParen)
            throw SexprError("expected ')'", t.pos);
        return e;
    };
    if (head.text == "J") {
        SExpr e{SExpr::Kind::J};
        e.a = expect_int();
        if (e.a < 0) throw SexprError("negative generator index", head.pos);
        return expect_close(std::move(e));
    }
    if (head.text == "Om") {
        SExpr e{SExpr::Kind::Om};
        e.a = expect_int();
        e.b = expect_int();
        if (e.a < 0 || e.b < 0) throw SexprError("negative omega index", head.pos);
        return expect_close(std::move(e));
    }
    if (head.text == "d") {
        SExpr e{SExpr::Kind::D};
        e.a = expect_int();
        if (e.a < 0) throw SexprError("negative derivative order", head.pos);
        e.kids.push_back(parse_node(lex, lex.next()));
        return expect_close(std::move(e));
    }
    if (head.text == "circ") {
        SExpr e{SExpr::Kind::Circ};
        e.a = expect_int();
        e.kids.push_back(parse_node(lex, lex.next()));
        e.kids.push_back(parse_node(lex, lex.next()));
        return expect_close(std::move(e));
    }
    if (head.text == "w" || head.text == "+") {
        SExpr e{head.text == "w" ? SExpr::Kind::W : SExpr::Kind::Sum};
        bool first = true;
        for (;;) {
            SToken t = lex.next();
            if (t.kind == SToken::Kind::RParen) break;
            if (t.kind == SToken::Kind::End)
                throw SexprError("unexpected end of input in list", t.pos);
            if (first && e.kind == SExpr::Kind::W && t.kind == SToken::Kind::Atom &&
                atom_is_rational(t.text)) {
                e.coeff = parse_scalar(t.text);
                first = false;
                continue;
            }
            first = false;
            e.kids.push_back(parse_node(lex, t));
        }
        if (e.kids.empty() && e.kind == SExpr::Kind::W)
            throw SexprError("empty Wick product", open_pos);
        return e;
    }
    throw SexprError("unknown operator '" + head.text + "'", head.pos);
}

inline SExpr parse_node(SLexer& lex, SToken tok) {
    switch (tok.kind) {
    case SToken::Kind::LParen: return parse_list(lex, tok.pos);
    case SToken::Kind::Atom:
        if (atom_is_rational(tok.text)) {
            SExpr e{SExpr::Kind::Rat};
            e.coeff = parse_scalar(tok.text);
            return e;
        }
        throw SexprError("unexpected atom '" + tok.text + "'", tok.pos);
    default: throw SexprError("unexpected token", tok.pos);
    }
}

} // namespace detail

inline SExpr sexpr_parse(const std::string& text) {
    detail::SLexer lex(text);
    SExpr e = detail::parse_node(lex, lex.next());
    detail::SToken t = lex.next();
    if (t.kind != detail::SToken::Kind::End)
        throw SexprError("trailing input", t.pos);
    return e;
}

inline std::string sexpr_print(const SExpr& e) {
    switch (e.kind) {
    case SExpr::Kind::J: return "(J " + std::to_string(e.a) + ")";
    case SExpr::Kind::Om:
        return "(Om " + std::to_string(e.a) + " " + std::to_string(e.b) + ")";
    case SExpr::Kind::D:
        return "(d " + std::to_string(e.a) + " " + sexpr_print(e.kids[0]) + ")";
    case SExpr::Kind::Circ:
        return "(circ " + std::to_string(e.a) + " " + sexpr_print(e.kids[0]) + " " +
               sexpr_print(e.kids[1]) + ")";
    case SExpr::Kind::W: {
        std::string out = "(w";
        if (e.coeff != 1) out += " " + to_string(e.coeff);
        for (auto& k : e.kids) out += " " + sexpr_print(k);
        return out + ")";
    }
    case SExpr::Kind::Sum: {
        std::string out = "(+";
        for (auto& k : e.kids) out += " " + sexpr_print(k);
        return out + ")";
    }
    case SExpr::Kind::Rat: return to_string(e.coeff);
    }
    return "";
}

/// Elaborates syntax into a field expression over the given system:
/// J and Om leaves become the system's realization of j^l and omega_{a,b}.
inline ExprPtr sexpr_elaborate(const System& sys, const SExpr& e) {
    switch (e.kind) {
    case SExpr::Kind::J: return build_j(sys, e.a);
    case SExpr::Kind::Om: return build_omega(sys, e.a, e.b);
    case SExpr::Kind::D: return Expr::derivative(e.a, sexpr_elaborate(sys, e.kids[0]));
    case SExpr::Kind::Circ:
        return Expr::circle(sexpr_elaborate(sys, e.kids[0]), e.a,
                            sexpr_elaborate(sys, e.kids[1]));
    case SExpr::Kind::W: {
        std::vector<ExprPtr> kids;
        for (auto& k : e.kids) kids.push_back(sexpr_elaborate(sys, k));
        return Expr::scale(e.coeff, Expr::wick_all(kids));
    }
    case SExpr::Kind::Sum: {
        std::vector<std::pair<Scalar, ExprPtr>> parts;
        for (auto& k : e.kids) parts.push_back({1, sexpr_elaborate(sys, k)});
        return Expr::combine(std::move(parts));
    }
    case SExpr::Kind::Rat: return Expr::scale(e.coeff, Expr::unit());
    }
    return Expr::zero();
}

} // namespace voa

#endif
