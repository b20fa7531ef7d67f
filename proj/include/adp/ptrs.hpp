#pragma once

#include "adp/rational.hpp"
#include "adp/term.hpp"

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace adp {

// Nonempty finite sequence of (probability, term) pairs summing to exactly 1.
// Duplicates are allowed (multiset semantics) and entry order is preserved.
class MultiDistribution {
public:
    MultiDistribution() = default;
    explicit MultiDistribution(std::vector<std::pair<Rat, Term>> entries);

    const std::vector<std::pair<Rat, Term>> &entries() const { return entries_; }
    size_t size() const { return entries_.size(); }
    const Rat &prob(size_t j) const { return entries_[j].first; }
    const Term &term(size_t j) const { return entries_[j].second; }
    bool singleton() const { return entries_.size() == 1; }

    MultiDistribution map(const std::function<Term(const Term &)> &f) const;
    std::string str() const;
    bool operator==(const MultiDistribution &other) const { return entries_ == other.entries_; }

private:
    std::vector<std::pair<Rat, Term>> entries_;
};

struct Rule {
    Term lhs; // annotation-free, not a variable
    MultiDistribution rhs;

    bool operator==(const Rule &other) const { return lhs == other.lhs && rhs == other.rhs; }
    std::string str() const;
};

// A probabilistic term rewrite system. The defined symbols are exactly the
// root symbols of left-hand sides.
class Ptrs {
public:
    Ptrs() = default;
    explicit Ptrs(std::vector<Rule> rules);

    const std::vector<Rule> &rules() const { return rules_; }
    const std::set<SymbolId> &defined() const { return defined_; }
    bool empty() const { return rules_.empty(); }
    std::string str() const;

private:
    std::vector<Rule> rules_;
    std::set<SymbolId> defined_;
};

std::set<SymbolId> defined_symbols(const Ptrs &system);

// Normal form / argument normal form. Annotations on t are ignored.
bool is_nf(const Term &t, const Ptrs &system);
bool is_anf(const Term &t, const Ptrs &system);

struct Redex {
    Position pos;
    size_t rule_index;
    Substitution sigma;
};

// All innermost redexes of t, in leftmost-outermost position order and rule
// declaration order. Annotations of t are ignored.
std::vector<Redex> innermost_redexes(const Term &t, const Ptrs &system);

// One innermost step at the given redex. Throws TermError if (pos, rule) is
// not an innermost redex of t.
MultiDistribution rewrite_innermost(const Term &t, const Position &pos, size_t rule_index,
                                    const Ptrs &system);

// Reachability helper used by test oracles and the dependency-graph
// brute-force check: all terms reachable from t in at most `steps` innermost
// steps, optionally forbidding the root position.
std::set<Term> innermost_reachable(const Term &t, const Ptrs &system, unsigned steps,
                                   bool forbid_root = false);

} // namespace adp
