#pragma once

#include "adp/adp.hpp"
#include "adp/parse.hpp"

#include <string>

namespace adp::testing {

struct Sys {
    ParsedSystem parsed;

    const Ptrs &R() const { return parsed.system; }
    const std::set<SymbolId> &defined() const { return parsed.system.defined(); }

    // plain term in the file's variable context
    Term t(const std::string &text) { return parse_term(text, parsed); }

    // annotated term: same grammar plus a '#' suffix on function symbols,
    // e.g. "g(G#(x))" is written "g(g#(x))"
    Term at(const std::string &text) {
        size_t pos = 0;
        Term result = parse_annotated(text, pos);
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos != text.size())
            throw std::runtime_error("trailing input in annotated term: " + text);
        return result;
    }

private:
    Term parse_annotated(const std::string &text, size_t &pos) {
        auto skip = [&] {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
                ++pos;
        };
        skip();
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                text[pos] == '\''))
            ++pos;
        std::string name = text.substr(start, pos - start);
        if (name.empty())
            throw std::runtime_error("expected identifier in: " + text);
        bool annotated = pos < text.size() && text[pos] == '#';
        if (annotated)
            ++pos;
        skip();
        std::vector<Term> args;
        if (pos < text.size() && text[pos] == '(') {
            ++pos;
            while (true) {
                args.push_back(parse_annotated(text, pos));
                skip();
                if (pos < text.size() && text[pos] == ',') {
                    ++pos;
                    continue;
                }
                break;
            }
            skip();
            if (pos >= text.size() || text[pos] != ')')
                throw std::runtime_error("expected ')' in: " + text);
            ++pos;
        }
        if (!annotated && args.empty() && parsed.variables.count(name))
            return Term::var(intern_var(name));
        uint32_t arity = static_cast<uint32_t>(args.size());
        return Term::app(intern_symbol(name, arity), annotated, std::move(args));
    }
};

inline Sys make(const std::string &text) {
    return Sys{parse_ptrs(text)};
}

// ---- systems used throughout the paper-derived tests ----

// symmetric random walk
inline Sys sys_rw() {
    return make("(VAR x) (RULES g(x) -> {1/2: g(g(x)), 1/2: x})");
}

// the four-rule system that defeats the dependency-tuple approach
inline Sys sys_incpl() {
    return make("(VAR x) (RULES"
                " a -> f(h(g), g)"
                " g -> {1/2: b1, 1/2: b2}"
                " h(b1) -> a"
                " f(x, b2) -> a)");
}

// g(x,x) -> f(x), f(a) -> f(b)
inline Sys sys_ex2() {
    return make("(VAR x) (RULES g(x,x) -> f(x) f(a) -> f(b))");
}

// classical non-probabilistic example: f(s(x)) -> c(f(g(x))), g(x) -> s(x)
inline Sys sys_ex_classic() {
    return make("(VAR x) (RULES f(s(x)) -> c(f(g(x))) g(x) -> s(x))");
}

// f(f(g(x))) -> f(g(f(g(f(x)))))
inline Sys sys_ffg() {
    return make("(VAR x) (RULES f(f(g(x))) -> f(g(f(g(f(x))))))");
}

// iAST branching: a -> {1/2: b, 1/2: c(a,a)}
inline Sys sys_branch2() {
    return make("(RULES a -> {1/2: b, 1/2: c(a,a)})");
}

// non-iAST branching: a -> {1/2: b, 1/2: c(a,a,a)}
inline Sys sys_branch3() {
    return make("(RULES a -> {1/2: b, 1/2: c(a,a,a)})");
}

// instantiation example: f(x,y,z) -> g(x,y,z), g(a,b,u) -> {1/2: f(u,u,u), 1/2: g(a,b,u)}
inline Sys sys_inst() {
    return make("(VAR x y z u) (RULES"
                " f(x,y,z) -> g(x,y,z)"
                " g(a,b,u) -> {1/2: f(u,u,u), 1/2: g(a,b,u)})");
}

// forward instantiation example
inline Sys sys_finst() {
    return make("(VAR x) (RULES"
                " f(x) -> {1/2: g(x), 1/2: h(x)}"
                " g(a) -> f(q(a))"
                " h(b) -> f(q(b))"
                " q(a) -> a"
                " q(b) -> b)");
}

// rule overlap instantiation example
inline Sys sys_roi() {
    return make("(VAR x) (RULES"
                " f(d(x)) -> {3/4: e(f(g(x)), f(h(x))), 1/4: a}"
                " g(a) -> d(a)"
                " h(b) -> d(b))");
}

// narrowing counterexample (not iAST)
inline Sys sys_narrowing_cex() {
    return make("(RULES"
                " f(b1, d1) -> f(a, e)"
                " f(b2, d2) -> f(a, e)"
                " a -> {1/2: b1, 1/2: b2}"
                " e -> d1"
                " e -> d2)");
}

// left-linearity counterexample, taken as a PTRS (not iAST)
inline Sys sys_ll_cex() {
    return make("(VAR x y) (RULES"
                " g(f(x,y)) -> d(g(f(a,a)), g(f(a,a)), g(f(a,a)))"
                " f(x,x) -> e(f(a,a))"
                " a -> {1/2: b1, 1/2: b2})");
}

// right-linearity counterexample, taken as a PTRS (not iAST)
inline Sys sys_rl_cex() {
    return make("(VAR x) (RULES"
                " f(e(b1,b1)) -> h(f(d(g)), f(d(g)), f(d(g)), f(d(g)))"
                " d(x) -> e(x,x)"
                " g -> {1/2: b1, 1/2: b2})");
}

// even/loop system that needs inductive reasoning (iAST, but out of reach)
inline Sys sys_even_loop() {
    return make("(VAR x) (RULES"
                " even(0) -> true"
                " even(s(0)) -> false"
                " even(s(s(x))) -> even(x)"
                " loop(x) -> if(even(x), x)"
                " if(false, x) -> stop"
                " if(true, x) -> {1/2: loop(x), 1/2: loop(s(x))})");
}

// random walk with conditions computed by gt/p
inline Sys sys_gt_loop() {
    return make("(VAR x y) (RULES"
                " gt(0,0) -> false"
                " gt(s(x),0) -> true"
                " gt(0,s(y)) -> false"
                " gt(s(x),s(y)) -> gt(x,y)"
                " p(0) -> 0"
                " p(s(x)) -> x"
                " loop(x) -> if(gt(x,0), x)"
                " if(false, x) -> stop"
                " if(true, x) -> {1/2: loop(p(x)), 1/2: loop(s(x))})");
}

// full probabilistic quicksort
inline Sys sys_qsrt() {
    return make("(VAR x xs y ys)"
                "(RULES"
                " rotate(nil) -> nil"
                " rotate(cons(x,xs)) -> {1/2: cons(x,xs), 1/2: rotate(app(xs, cons(x,nil)))}"
                " empty(nil) -> true"
                " empty(cons(x,xs)) -> false"
                " qsrt(xs) -> if(empty(xs), low(hd(xs), tl(xs)), hd(xs), high(hd(xs), tl(xs)))"
                " if(true, xs, x, ys) -> nil"
                " if(false, xs, x, ys) -> app(qsrt(rotate(xs)), cons(x, qsrt(rotate(ys))))"
                " hd(cons(x,xs)) -> x"
                " tl(cons(x,xs)) -> xs"
                " low(x,nil) -> nil"
                " low(x,cons(y,ys)) -> ifLow(leq(x,y), x, cons(y,ys))"
                " ifLow(true, x, cons(y,ys)) -> low(x,ys)"
                " ifLow(false, x, cons(y,ys)) -> cons(y, low(x,ys))"
                " high(x,nil) -> nil"
                " high(x,cons(y,ys)) -> ifHigh(leq(x,y), x, cons(y,ys))"
                " ifHigh(true, x, cons(y,ys)) -> cons(y, high(x,ys))"
                " ifHigh(false, x, cons(y,ys)) -> high(x,ys)"
                " leq(0, x) -> true"
                " leq(s(x), 0) -> false"
                " leq(s(x), s(y)) -> leq(x,y)"
                " app(nil, ys) -> ys"
                " app(cons(x,xs), ys) -> cons(x, app(xs,ys)))");
}

} // namespace adp::testing
