#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace adp {

using SymbolId = uint32_t;
using VarId = uint32_t;

// Thrown by term operations whose preconditions are violated (invalid
// positions, annotating a non-defined symbol, ...).
class TermError : public std::runtime_error {
public:
    explicit TermError(const std::string &what) : std::runtime_error(what) {}
};

// Function symbols are interned globally by (name, arity); whether a symbol
// is defined or a constructor depends on the rule set at hand, so callers
// pass explicit defined-symbol sets where it matters.
struct SymbolInfo {
    std::string name;
    uint32_t arity;
};

SymbolId intern_symbol(const std::string &name, uint32_t arity);
const SymbolInfo &symbol_info(SymbolId id);
std::optional<SymbolId> lookup_symbol(const std::string &name, uint32_t arity);

// Variables are interned by name. Fresh variables draw from a monotone
// atomic counter and live in the reserved "_v<n>" namespace, so they can
// never collide with user variables (which must not start with '_').
VarId intern_var(const std::string &name);
const std::string &var_name(VarId v);
VarId fresh_var();

// A position is a path of 1-based argument indices; the empty path is the
// root. Printed as "1.2" / "eps".
using Position = std::vector<uint32_t>;

std::string to_string(const Position &pos);
bool strictly_above(const Position &a, const Position &b); // a proper prefix of b

// First-order term. Defined-symbol occurrences may carry an annotation bit
// (the f# marker). Terms are immutable values with structural sharing;
// copying is cheap and sharing across threads is safe.
class Term {
public:
    Term() = default;

    static Term var(VarId v);
    static Term app(SymbolId sym, bool annotated, std::vector<Term> args);
    static Term app(SymbolId sym, std::vector<Term> args) { return app(sym, false, std::move(args)); }
    static Term constant(SymbolId sym, bool annotated = false) { return app(sym, annotated, {}); }

    bool is_var() const { return node_->is_var; }
    VarId var() const { return node_->head; }
    SymbolId sym() const { return node_->head; }
    bool annotated() const { return node_->annotated; }
    const std::vector<Term> &args() const { return node_->args; }
    size_t hash() const { return node_->hash; }
    size_t node_count() const { return node_->size; }

    bool operator==(const Term &other) const;
    bool operator!=(const Term &other) const { return !(*this == other); }
    bool operator<(const Term &other) const; // structural order, for ordered containers

    std::string str() const;

private:
    struct Node {
        bool is_var;
        bool annotated;
        uint32_t head; // VarId or SymbolId
        std::vector<Term> args;
        size_t hash;
        size_t size;
    };
    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Finite mapping variable -> term.
class Substitution {
public:
    Substitution() = default;

    bool bind(VarId v, const Term &t); // false if already bound to a different term
    const Term *lookup(VarId v) const;
    bool empty() const { return map_.empty(); }
    size_t size() const { return map_.size(); }
    const std::map<VarId, Term> &entries() const { return map_; }

    Term apply(const Term &t) const;
    std::string str() const; // "{x/a, y/g(b)}"

private:
    std::map<VarId, Term> map_;
};

// -- positions and subterms --------------------------------------------------

Term subterm_at(const Term &t, const Position &pos); // throws TermError on invalid position
Term replace_at(const Term &t, const Position &pos, const Term &replacement);
bool valid_position(const Term &t, const Position &pos);

// -- annotations (Sigma# handling) -------------------------------------------

std::set<Position> annotated_positions(const Term &t);
bool has_annotation(const Term &t);

// anno_Phi: annotate exactly the given positions, clearing all others.
// Every position must root a symbol from `defined`.
Term annotate(const Term &t, const std::set<Position> &positions, const std::set<SymbolId> &defined);
Term annotate_all(const Term &t, const std::set<SymbolId> &defined); // anno_D
Term annotate_root(const Term &t);                                   // anno_eps; root must be an application
Term flatten(const Term &t);                                         // anno_empty, the b-flat operation

// Removes annotations strictly above pos (proper prefixes only).
Term strip_above(const Term &t, const Position &pos);

// All annotated occurrences, paired with their flattened subterm (rel. <=#).
std::vector<std::pair<Position, Term>> annotated_subterms(const Term &t);

// -- matching, unification, renaming ----------------------------------------

// Syntactic match: extends sigma so that pattern*sigma == subject, comparing
// annotation bits structurally. Returns nullopt on mismatch.
std::optional<Substitution> match(const Term &pattern, const Term &subject);
bool match_into(const Term &pattern, const Term &subject, Substitution &sigma);

// Most general unifier with occurs check; annotated roots unify only with
// equally annotated roots of the same symbol.
std::optional<Substitution> unify(const Term &a, const Term &b);

std::set<VarId> vars_of(const Term &t);
bool is_ground(const Term &t);
bool is_linear_term(const Term &t); // no variable occurs twice

// Consistent renaming of all variables to fresh ones (vr).
Substitution renaming_for(const std::set<VarId> &vars);
Term rename_fresh(const Term &t);

// True iff sigma, restricted to `domain`, maps variables injectively to
// variables (i.e. it only renames).
bool restricts_to_renaming(const Substitution &sigma, const std::set<VarId> &domain);

// -- the Cap abstraction ------------------------------------------------------

struct CapOptions {
    bool protect_root = false;  // never replace the root (used on anno_eps terms)
    bool freshen_vars = false;  // also replace variable occurrences by fresh variables
    bool cap_everything = false; // replace all proper subterms (degenerate rule sets)
};

// Replaces every maximal subterm whose root is in `defined` by a fresh
// variable; multiple occurrences of the same subterm get pairwise different
// variables.
Term cap(const Term &t, const std::set<SymbolId> &defined, const CapOptions &opts = {});

} // namespace adp
