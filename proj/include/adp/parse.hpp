#pragma once

#include "adp/ptrs.hpp"

#include <map>
#include <set>
#include <string>

namespace adp {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string &message)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + message),
          line(line), col(col) {}
    int line;
    int col;
};

// Variable names and symbol arities of a parsed file; start terms for the
// simulator are parsed in this context.
struct ParsedSystem {
    Ptrs system;
    std::set<std::string> variables;
    std::map<std::string, uint32_t> arities;
};

// Grammar:
//   file     := decl*
//   decl     := "(VAR" ident* ")" | "(RULES" rule* ")"
//   rule     := term "->" rhs
//   rhs      := term | "{" weighted ("," weighted)* "}"
//   weighted := rational ":" term
//   term     := ident | ident "(" term ("," term)* ")"
// Identifiers are [A-Za-z0-9_']+; idents declared in (VAR ...) are
// variables, everything else is a function symbol with arity fixed by first
// use. A bare rhs term means {1 : term}.
ParsedSystem parse_ptrs(const std::string &text);

// Parses a term against an existing file context (used for --start).
// Unknown identifiers become fresh constructor symbols.
Term parse_term(const std::string &text, ParsedSystem &ctx);

} // namespace adp
