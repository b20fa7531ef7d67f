#include "adp/parse.hpp"

#include <cctype>

namespace adp {

namespace {

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

struct Lexer {
    const std::string &text;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    explicit Lexer(const std::string &text) : text(text) {}

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            advance();
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string &message) { throw ParseError(line, col, message); }

    void expect(char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c)
            fail(std::string("expected '") + c + "'");
        advance();
    }

    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            advance();
            return true;
        }
        return false;
    }

    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && ident_char(text[pos]))
            advance();
        if (pos == start)
            fail("expected identifier");
        return text.substr(start, pos - start);
    }

    bool consume_arrow() {
        skip_ws();
        if (pos + 1 < text.size() && text[pos] == '-' && text[pos + 1] == '>') {
            advance();
            advance();
            return true;
        }
        return false;
    }
};

struct Parser {
    Lexer lex;
    ParsedSystem &ctx;

    Parser(const std::string &text, ParsedSystem &ctx) : lex(text), ctx(ctx) {}

    SymbolId symbol_for(const std::string &name, uint32_t arity) {
        auto it = ctx.arities.find(name);
        if (it != ctx.arities.end()) {
            if (it->second != arity)
                lex.fail("arity-mismatch: '" + name + "' used with arity " +
                         std::to_string(arity) + " after arity " + std::to_string(it->second));
        } else {
            ctx.arities.emplace(name, arity);
        }
        return intern_symbol(name, arity);
    }

    Term term() {
        std::string name = lex.ident();
        if (lex.consume('(')) {
            if (ctx.variables.count(name))
                lex.fail("variable '" + name + "' used with arguments");
            std::vector<Term> args;
            args.push_back(term());
            while (lex.consume(','))
                args.push_back(term());
            lex.expect(')');
            uint32_t arity = static_cast<uint32_t>(args.size());
            return Term::app(symbol_for(name, arity), false, std::move(args));
        }
        if (ctx.variables.count(name))
            return Term::var(intern_var(name));
        return Term::constant(symbol_for(name, 0));
    }

    Rat rational() {
        lex.skip_ws();
        size_t start = lex.pos;
        while (lex.pos < lex.text.size() &&
               (std::isdigit(static_cast<unsigned char>(lex.text[lex.pos])) ||
                lex.text[lex.pos] == '/'))
            lex.advance();
        if (lex.pos == start)
            lex.fail("expected rational");
        try {
            return parse_rational(lex.text.substr(start, lex.pos - start));
        } catch (const std::invalid_argument &e) {
            lex.fail(e.what());
        }
    }

    Rule rule() {
        Term lhs = term();
        if (lhs.is_var())
            lex.fail("rule left-hand side is a variable");
        if (!lex.consume_arrow())
            lex.fail("expected '->'");
        std::vector<std::pair<Rat, Term>> entries;
        if (lex.consume('{')) {
            do {
                Rat p = rational();
                lex.expect(':');
                entries.emplace_back(p, term());
            } while (lex.consume(','));
            lex.expect('}');
        } else {
            entries.emplace_back(Rat(1), term());
        }
        Rat sum = 0;
        for (const auto &[p, t] : entries) {
            if (p <= 0 || p > 1)
                lex.fail("probability-sum-error: probability " + to_string(p) + " out of (0,1]");
            sum += p;
        }
        if (sum != 1)
            lex.fail("probability-sum-error: probabilities sum to " + to_string(sum));
        std::set<VarId> lhs_vars = vars_of(lhs);
        for (const auto &[p, t] : entries)
            for (VarId v : vars_of(t))
                if (!lhs_vars.count(v))
                    lex.fail("extra-variable-on-rhs: " + var_name(v));
        return {lhs, MultiDistribution(std::move(entries))};
    }

    void file(std::vector<Rule> &rules) {
        while (!lex.eof()) {
            lex.expect('(');
            std::string kind = lex.ident();
            if (kind == "VAR") {
                while (lex.peek() != ')') {
                    std::string name = lex.ident();
                    if (!name.empty() && name[0] == '_')
                        lex.fail("variable names starting with '_' are reserved");
                    ctx.variables.insert(name);
                }
                lex.expect(')');
            } else if (kind == "RULES") {
                while (lex.peek() != ')')
                    rules.push_back(rule());
                lex.expect(')');
            } else {
                lex.fail("unknown declaration '" + kind + "'");
            }
        }
    }
};

} // namespace

ParsedSystem parse_ptrs(const std::string &text) {
    ParsedSystem ctx;
    Parser parser(text, ctx);
    std::vector<Rule> rules;
    parser.file(rules);
    try {
        ctx.system = Ptrs(std::move(rules));
    } catch (const TermError &e) {
        throw ParseError(0, 0, e.what());
    }
    return ctx;
}

Term parse_term(const std::string &text, ParsedSystem &ctx) {
    Parser parser(text, ctx);
    Term t = parser.term();
    if (!parser.lex.eof())
        parser.lex.fail("trailing input after term");
    return t;
}

} // namespace adp
